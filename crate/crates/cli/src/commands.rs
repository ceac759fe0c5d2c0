use std::path::{Path, PathBuf};
use std::time::Instant;

use rggbc::analytic::{g_disk, g_star};
use rggbc::apps::{
    detect_boundary, elect_cluster_heads, heads_table, ElectionMode, DEFAULT_BOUNDARY_THRESHOLD,
};
use rggbc::centrality::{betweenness_brandes_par, normalize, Normalization};
use rggbc::experiment::{
    compare_to_continuum, convergence_study, run_density, BetaMode, ExperimentConfig, DEFAULT_BINS,
    DEFAULT_ETA, DEFAULT_MIN_BIN_COUNT, DEFAULT_REALIZATIONS,
};
use rggbc::io::{edges_table, points_table, read_graph, read_points, Table};
use rggbc::quadrature::{field, lattice_grid, DEFAULT_QUADRATURE_POINTS};
use rggbc::rgg::{self, beta_connectivity_threshold, Graph};
use rggbc::{Circle, ConnectionModel, DomainSpec, Point, RngStream};
use serde_json::{json, Value};

use crate::config::{parse_list, Settings};
use crate::CliError;

type Res<T> = Result<T, CliError>;

const DEFAULT_HOLES: &str = "0.3,0.3,0.15;0.7,0.7,0.15";
const DEFAULT_EPS_GRID: &str = "0:0.001:1";
const MAX_GRID_POINTS: usize = 10_000_000;

pub fn dispatch(name: &str, mut s: Settings) -> Res<()> {
    let started = Instant::now();
    let out = out_dir(&mut s)?;
    let extra = match name {
        "sample" => sample(&mut s, &out)?,
        "graph" => graph(&mut s, &out)?,
        "bc" => bc(&mut s, &out)?,
        "analytic" => analytic(&mut s, &out)?,
        "field" => field_cmd(&mut s, &out)?,
        "profile" => profile(&mut s, &out)?,
        "converge" => converge(&mut s, &out)?,
        "boundary" => boundary(&mut s, &out)?,
        "heads" => heads(&mut s, &out)?,
        other => return Err(CliError::config(format!("unknown command {other}"))),
    };
    let manifest = match name {
        "profile" | "converge" => "run.json".to_string(),
        _ => format!("{name}.json"),
    };
    write_manifest(&out.join(manifest), name, &s, extra, started)
}

fn out_dir(s: &mut Settings) -> Res<PathBuf> {
    let out = PathBuf::from(s.get_or("out", ".".to_string())?);
    std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn read_file(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_manifest(path: &Path, command: &str, s: &Settings, extra: Value, started: Instant) -> Res<()> {
    let settings: serde_json::Map<String, Value> = s.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut m = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": s.raw("seed").and_then(|v| v.parse::<u64>().ok()),
        "settings": settings,
        "config_text": s.to_text(),
    });
    if let (Value::Object(m), Value::Object(extra)) = (&mut m, extra) {
        m.extend(extra);
        m.insert("wall_time_s".into(), json!(started.elapsed().as_secs_f64()));
    }
    let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::config(e.to_string()))?;
    write_file(path, &(text + "\n"))
}

fn positive(key: &str, x: f64) -> Res<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::config(format!("{key} must be positive, got {x}")))
    }
}

fn parse_holes(text: &str) -> Res<Vec<Circle>> {
    text.split(';')
        .filter(|h| !h.trim().is_empty())
        .map(|h| {
            let v = parse_list("holes", h)?;
            let [cx, cy, r] = v[..] else {
                return Err(CliError::config(format!("hole {h:?} is not a cx,cy,r triple")));
            };
            Ok(Circle::new(Point::new(cx, cy), r)?)
        })
        .collect()
}

fn domain(s: &mut Settings) -> Res<DomainSpec> {
    let kind = s.get_or("domain", "disk".to_string())?;
    Ok(match kind.as_str() {
        "disk" => DomainSpec::disk(Point::ORIGIN, s.get_or("radius", 1.0)?)?,
        "square" => DomainSpec::square(s.get_or("side", 1.0)?)?,
        "triangle" => DomainSpec::right_triangle(s.get_or("side", 1.0)?)?,
        "holed-square" | "holed_square" => {
            let side = s.get_or("side", 1.0)?;
            let holes = parse_holes(&s.get_or("holes", DEFAULT_HOLES.to_string())?)?;
            DomainSpec::holed(DomainSpec::square(side)?, holes)?
        }
        other => {
            return Err(CliError::config(format!(
                "unknown domain {other:?}; expected disk, square, triangle or holed-square"
            )))
        }
    })
}

fn input_path(s: &mut Settings, key: &str, out: &Path, file: &str) -> Res<PathBuf> {
    Ok(PathBuf::from(s.get_or(key, out.join(file).display().to_string())?))
}

fn load_graph(s: &mut Settings, out: &Path) -> Res<Graph> {
    let points = input_path(s, "points", out, "points.csv")?;
    let edges = input_path(s, "edges", out, "edges.csv")?;
    let positions = read_points(&read_file(&points)?)?;
    Ok(read_graph(positions, &read_file(&edges)?)?)
}

fn sample(s: &mut Settings, out: &Path) -> Res<Value> {
    let domain = domain(s)?;
    let rho = positive("rho", s.require("rho")?)?;
    let seed: u64 = s.get_or("seed", 0)?;
    let n = rgg::node_count_for(rho, domain.area());
    let positions = domain.sample_uniform(n, &mut RngStream::new(seed).substream(rgg::POSITIONS_STREAM));
    write_file(&out.join("points.csv"), &points_table(&positions).to_string())?;
    Ok(json!({ "nodes": n, "domain": domain }))
}

fn graph(s: &mut Settings, out: &Path) -> Res<Value> {
    let points = input_path(s, "points", out, "points.csv")?;
    let positions = read_points(&read_file(&points)?)?;
    let seed: u64 = s.get_or("seed", 0)?;
    let model = s.get_or("model", "soft".to_string())?;
    let mode = s.get_or("beta_mode", "fixed".to_string())?;
    let mut links = RngStream::new(seed).substream(rgg::LINKS_STREAM);
    let (g, beta) = match (model.as_str(), mode.as_str()) {
        ("soft", "fixed") => {
            let beta: f64 = s.require("beta")?;
            let eta = s.get_or("eta", DEFAULT_ETA)?;
            let m = ConnectionModel::soft(beta, eta)?;
            (rgg::realize(positions, m, &mut links), Some(beta))
        }
        ("soft", "threshold") => {
            let eta = s.get_or("eta", DEFAULT_ETA)?;
            let (beta, g) = beta_connectivity_threshold(positions, eta, &mut links)?;
            (g, Some(beta))
        }
        ("hard", "fixed") => {
            let m = ConnectionModel::hard(s.require("range")?)?;
            (rgg::realize(positions, m, &mut links), None)
        }
        ("hard", _) => return Err(CliError::config("the hard model takes a fixed range")),
        (m, b) => return Err(CliError::config(format!("unknown model {m:?} or beta mode {b:?}"))),
    };
    write_file(&out.join("edges.csv"), &edges_table(&g).to_string())?;
    Ok(json!({
        "beta": beta,
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "connected": g.is_connected(),
    }))
}

fn bc(s: &mut Settings, out: &Path) -> Res<Value> {
    let g = load_graph(s, out)?;
    let raw = betweenness_brandes_par(&g);
    let norm = normalize(&raw, Normalization::PairNormalized).ok();
    let mut t = Table::new(&["id", "gamma_raw", "gamma_pair_normalized"]);
    for (i, &v) in raw.values.iter().enumerate() {
        let n = norm.as_ref().map_or(f64::NAN, |n| n.values[i]);
        t.push_numbers(&[i as f64, v, n]);
    }
    write_file(&out.join("betweenness.csv"), &t.to_string())?;
    Ok(json!({ "nodes": g.node_count(), "edges": g.edge_count() }))
}

/// `start:step:stop` (both ends included) or a comma list.
fn eps_grid(text: &str) -> Res<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [_] => parse_list("eps", text),
        [a, step, b] => {
            let num = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::config(format!("eps: {x:?}: {e}")))
            };
            let (a, step, b) = (num(a)?, num(step)?, num(b)?);
            if !(step.is_finite() && step > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
                return Err(CliError::config(format!("eps grid {text:?} is empty or malformed")));
            }
            let intervals = ((b - a) / step).round();
            if intervals as usize >= MAX_GRID_POINTS {
                return Err(CliError::config(format!("eps grid {text:?} is too fine")));
            }
            let n = intervals as usize;
            if n == 0 {
                return Ok(vec![a]);
            }
            Ok((0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect())
        }
        _ => Err(CliError::config(format!("eps grid {text:?}: expected start:step:stop or a list"))),
    }
}

fn analytic(s: &mut Settings, out: &Path) -> Res<Value> {
    let grid = eps_grid(&s.get_or("eps", DEFAULT_EPS_GRID.to_string())?)?;
    let radius = positive("radius", s.get_or("radius", 1.0)?)?;
    let mut t = Table::new(&["eps", "g_star", "g_disk"]);
    for &e in &grid {
        t.push_numbers(&[e, g_star(e)?, g_disk(radius, (e * radius).min(radius))?]);
    }
    write_file(&out.join("analytic.csv"), &t.to_string())?;
    Ok(json!({ "rows": grid.len() }))
}

fn field_cmd(s: &mut Settings, out: &Path) -> Res<Value> {
    let domain = domain(s)?;
    let step = s.get_or("grid_step", 0.05)?;
    let m = s.get_or("quadrature_points", DEFAULT_QUADRATURE_POINTS)?;
    let points = lattice_grid(&domain, step)?;
    let f = field(&domain, &points, m)?;
    let mut t = Table::new(&["x", "y", "g", "g_star"]);
    for (i, p) in f.points.iter().enumerate() {
        t.push_numbers(&[p.x, p.y, f.g_values[i], f.g_star_values[i]]);
    }
    write_file(&out.join("field.csv"), &t.to_string())?;
    let at = |i: Option<usize>| i.map(|i| json!({ "x": f.points[i].x, "y": f.points[i].y, "g": f.g_values[i] }));
    Ok(json!({
        "points": f.points.len(),
        "max": at(f.argmax()),
        "min": at(f.argmin()),
    }))
}

fn experiment(s: &mut Settings, densities: Vec<f64>) -> Res<ExperimentConfig> {
    let domain = domain(s)?;
    let beta_mode = match s.get_or("beta_mode", "threshold".to_string())?.as_str() {
        "threshold" => BetaMode::ConnectivityThreshold,
        "fixed" => BetaMode::Fixed {
            beta: s.require("beta")?,
        },
        other => return Err(CliError::config(format!("unknown beta mode {other:?}"))),
    };
    Ok(ExperimentConfig {
        domain,
        densities,
        realizations: s.get_or("realizations", DEFAULT_REALIZATIONS)?,
        bins: s.get_or("bins", DEFAULT_BINS)?,
        eta: s.get_or("eta", DEFAULT_ETA)?,
        beta_mode,
        master_seed: s.get_or("seed", 0)?,
        min_bin_count: s.get_or("min_bin_count", DEFAULT_MIN_BIN_COUNT)?,
        workers: s.get_or("workers", 0)?,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn profile(s: &mut Settings, out: &Path) -> Res<Value> {
    let rho = positive("rho", s.require("rho")?)?;
    let cfg = experiment(s, vec![rho])?;
    let p = run_density(&cfg, rho, 0)?;
    write_file(&out.join("profile.csv"), &p.to_table().to_string())?;
    let cmp = compare_to_continuum(&p, cfg.min_bin_count).ok();
    Ok(json!({
        "experiment": cfg,
        "nodes_per_realization": p.nodes_per_realization,
        "all_connected": p.all_connected,
        "mean_beta": mean(&p.betas),
        "linf": cmp.as_ref().map(|c| c.linf),
        "l2": cmp.as_ref().map(|c| c.l2),
    }))
}

fn converge(s: &mut Settings, out: &Path) -> Res<Value> {
    let densities = parse_list("densities", &s.get_or("densities", "10,50,500".to_string())?)?;
    let cfg = experiment(s, densities)?;
    let study = convergence_study(&cfg)?;
    write_file(&out.join("convergence.csv"), &study.to_table().to_string())?;
    for (k, p) in study.profiles.iter().enumerate() {
        write_file(&out.join(format!("profile_{k}.csv")), &p.to_table().to_string())?;
    }
    let decreasing = study.linf_strictly_decreasing();
    if decreasing == Some(false) {
        eprintln!("warning kind=numeric message=\"linf does not strictly decrease along the density ladder\"");
    }
    Ok(json!({
        "experiment": cfg,
        "linf_strictly_decreasing": decreasing,
        "all_connected": study.profiles.iter().all(|p| p.all_connected),
        "mean_beta": study.profiles.iter().map(|p| mean(&p.betas)).collect::<Vec<_>>(),
    }))
}

fn boundary(s: &mut Settings, out: &Path) -> Res<Value> {
    let g = load_graph(s, out)?;
    let radius = positive("radius", s.get_or("radius", 1.0)?)?;
    let threshold = s.get_or("threshold", DEFAULT_BOUNDARY_THRESHOLD)?;
    let report = detect_boundary(&g, &Circle::new(Point::ORIGIN, radius)?, threshold)?;
    write_file(&out.join("boundary.csv"), &report.to_table().to_string())?;
    let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
    Ok(json!({
        "nodes": g.node_count(),
        "boundary_by_position": count(&report.boundary_by_position),
        "boundary_by_measurement": count(&report.boundary_by_measurement),
        "agreement": report.agreement(),
    }))
}

fn heads(s: &mut Settings, out: &Path) -> Res<Value> {
    let g = load_graph(s, out)?;
    let k = s.get_or("k", 5usize)?;
    let mode = match s.get_or("mode", "max".to_string())?.as_str() {
        "max" => ElectionMode::MaxBetweenness,
        "min" => ElectionMode::MinBetweenness,
        other => return Err(CliError::config(format!("unknown election mode {other:?}; expected max or min"))),
    };
    let gamma = betweenness_brandes_par(&g);
    let heads = elect_cluster_heads(&gamma, k, mode)?;
    write_file(&out.join("heads.csv"), &heads_table(&heads, &gamma).to_string())?;
    Ok(json!({ "heads": heads, "mode": mode }))
}
