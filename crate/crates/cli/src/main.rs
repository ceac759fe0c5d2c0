mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};

use config::Settings;

/// Failure reported as one `error kind=... message="..."` line on stderr.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: "config",
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError {
            kind: "io",
            message: format!("{}: {e}", path.display()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            "numeric" => 3,
            _ => 2,
        }
    }

    fn line(&self) -> String {
        let message = serde_json::to_string(&self.message).unwrap_or_else(|_| "\"?\"".into());
        format!("error kind={} message={message}", self.kind)
    }
}

impl From<rggbc::Error> for CliError {
    fn from(e: rggbc::Error) -> Self {
        use rggbc::Error::*;
        let kind = match e {
            InvalidDomain(_) | NonConvexDomain | InvalidParameter(_) => "config",
            OriginOutside { .. }
            | OutOfDomain { .. }
            | TooLarge { .. }
            | DegenerateN { .. }
            | DegenerateDistance
            | InsufficientData { .. } => "numeric",
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

const DOMAIN: &[(&str, &str)] = &[
    ("domain", "disk, square, triangle or holed-square [disk]"),
    ("radius", "disk radius, centred at the origin [1]"),
    ("side", "square side or triangle leg, lower-left corner at the origin [1]"),
    ("holes", "circular holes for holed-square as cx,cy,r;cx,cy,r [0.3,0.3,0.15;0.7,0.7,0.15]"),
];
const EXPERIMENT: &[(&str, &str)] = &[
    ("realizations", "graphs per density [500]"),
    ("bins", "radial bins on [0, 1] [50]"),
    ("eta", "path-loss exponent [2]"),
    ("beta_mode", "threshold (per-realization connectivity threshold) or fixed [threshold]"),
    ("beta", "link decay rate for --beta-mode fixed"),
    ("seed", "master seed [0]"),
    ("min_bin_count", "bins with fewer samples are left out of the comparison [50]"),
    ("workers", "worker threads, 0 for all cores; never changes results [0]"),
];
const GRAPH_INPUT: &[(&str, &str)] = &[
    ("points", "points.csv to read [<out>/points.csv]"),
    ("edges", "edges.csv to read [<out>/edges.csv]"),
];
const OUT: (&str, &str) = ("out", "output directory [.]");

struct Spec {
    name: &'static str,
    about: &'static str,
    keys: Vec<(&'static str, &'static str)>,
}

fn specs() -> Vec<Spec> {
    let with = |parts: &[&[(&'static str, &'static str)]]| {
        let mut keys: Vec<_> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        keys.push(OUT);
        keys
    };
    vec![
        Spec {
            name: "sample",
            about: "Scatter round(rho * area) uniform points -> points.csv",
            keys: with(&[DOMAIN, &[("rho", "node density (required)"), ("seed", "seed [0]")]]),
        },
        Spec {
            name: "graph",
            about: "Link points with a connection model -> edges.csv",
            keys: with(&[
                &[
                    ("points", "points.csv to read [<out>/points.csv]"),
                    ("seed", "seed; links use the same stream as sample_graph [0]"),
                    ("model", "soft or hard [soft]"),
                    ("beta_mode", "fixed or threshold [fixed]"),
                    ("beta", "link decay rate for the fixed soft model"),
                    ("eta", "path-loss exponent [2]"),
                    ("range", "link range for the hard model"),
                ],
            ]),
        },
        Spec {
            name: "bc",
            about: "Exact betweenness of a graph -> betweenness.csv",
            keys: with(&[GRAPH_INPUT]),
        },
        Spec {
            name: "analytic",
            about: "Closed-form disk betweenness on an eps grid -> analytic.csv",
            keys: with(&[&[
                ("eps", "start:step:stop or a comma list, units of R [0:0.001:1]"),
                ("radius", "disk radius for g_disk [1]"),
            ]]),
        },
        Spec {
            name: "field",
            about: "Continuum betweenness on a lattice over a convex domain -> field.csv",
            keys: with(&[
                DOMAIN,
                &[
                    ("grid_step", "lattice spacing [0.05]"),
                    ("quadrature_points", "angular samples, even, >= 64 [8192]"),
                ],
            ]),
        },
        Spec {
            name: "profile",
            about: "Monte Carlo radial profile at one density -> profile.csv, run.json",
            keys: with(&[DOMAIN, &[("rho", "node density (required)")], EXPERIMENT]),
        },
        Spec {
            name: "converge",
            about: "Radial profiles along a density ladder -> convergence.csv, profile_<k>.csv, run.json",
            keys: with(&[DOMAIN, &[("densities", "comma list [10,50,500]")], EXPERIMENT]),
        },
        Spec {
            name: "boundary",
            about: "Boundary detection by position and by measured betweenness -> boundary.csv",
            keys: with(&[
                GRAPH_INPUT,
                &[
                    ("radius", "disk radius, centred at the origin [1]"),
                    ("threshold", "g* level separating boundary nodes [0.1]"),
                ],
            ]),
        },
        Spec {
            name: "heads",
            about: "Cluster-head election by betweenness -> heads.csv",
            keys: with(&[GRAPH_INPUT, &[("k", "number of heads [5]"), ("mode", "max or min [max]")]]),
        },
    ]
}

fn cli() -> Command {
    let mut cmd = Command::new("rggbc")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Betweenness centrality in random geometric networks")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in specs() {
        let mut sub = Command::new(spec.name).about(spec.about).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value settings; flags override")
                .action(ArgAction::Set),
        );
        for (key, help) in spec.keys {
            sub = sub.arg(
                Arg::new(key)
                    .long(key.replace('_', "-"))
                    .help(help)
                    .allow_hyphen_values(true)
                    .action(ArgAction::Set),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn settings_for(name: &str, m: &ArgMatches) -> Result<Settings, CliError> {
    let spec = specs().into_iter().find(|s| s.name == name).expect("known subcommand");
    let keys: Vec<&str> = spec.keys.iter().map(|(k, _)| *k).collect();
    let mut s = match m.get_one::<String>("config") {
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            Settings::parse(&text, &keys)?
        }
        None => Settings::default(),
    };
    for key in keys {
        if m.value_source(key) == Some(ValueSource::CommandLine) {
            if let Some(v) = m.get_one::<String>(key) {
                s.set(key, v.clone());
            }
        }
    }
    Ok(s)
}

fn run(args: Vec<String>) -> Result<(), CliError> {
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand) {
                e.print().map_err(|io| CliError::io("stdout".as_ref(), io))?;
                return Ok(());
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return Err(CliError::config(first.trim_start_matches("error: ").to_string()));
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let settings = settings_for(name, sub)?;
    commands::dispatch(name, settings)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}
