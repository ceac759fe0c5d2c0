//! Monte Carlo density-convergence study on a disk.
//!
//! Each realization samples `N = round(rho * pi R^2)` nodes, links them, runs
//! Brandes, and drops every node's betweenness into a radial bin by its
//! distance from the center. Averaging over realizations gives the expected
//! betweenness profile, which is normalized by its largest bin mean and
//! compared with the continuum limit `g*`.
//!
//! Realization `r` of ladder entry `k` draws from the stream
//! `derive_seed(derive_seed(master_seed, k), r)`, realizations run in
//! parallel, and bin accumulators are merged in realization order, so
//! profiles are bit-identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::g_star;
use crate::centrality::betweenness_brandes;
use crate::error::{Error, Result};
use crate::geometry::{Circle, DomainSpec};
use crate::io::Table;
use crate::rgg::{self, CoupledLinks, ConnectionModel};
use crate::rng::{derive_seed, RngStream};

pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_REALIZATIONS: usize = 500;
pub const DEFAULT_ETA: f64 = 2.0;
/// Bins with fewer samples are left out of error norms.
pub const DEFAULT_MIN_BIN_COUNT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaMode {
    /// Per realization, the largest `beta` keeping the coupled graph connected.
    ConnectivityThreshold,
    Fixed { beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub densities: Vec<f64>,
    pub realizations: usize,
    pub bins: usize,
    pub eta: f64,
    pub beta_mode: BetaMode,
    pub master_seed: u64,
    pub min_bin_count: usize,
    /// Worker threads; 0 uses the global rayon pool. Never affects results.
    pub workers: usize,
}

impl ExperimentConfig {
    /// Unit disk, densities 10/50/500 and the desk-scale defaults.
    pub fn unit_disk_ladder(master_seed: u64) -> Self {
        ExperimentConfig {
            domain: DomainSpec::unit_disk(),
            densities: vec![10.0, 50.0, 500.0],
            realizations: DEFAULT_REALIZATIONS,
            bins: DEFAULT_BINS,
            eta: DEFAULT_ETA,
            beta_mode: BetaMode::ConnectivityThreshold,
            master_seed,
            min_bin_count: DEFAULT_MIN_BIN_COUNT,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<Circle> {
        if self.realizations < 1 {
            return Err(Error::InvalidParameter("realizations must be at least 1".into()));
        }
        if self.bins < 4 {
            return Err(Error::InvalidParameter(format!("bins must be at least 4, got {}", self.bins)));
        }
        if let Some(&rho) = self.densities.iter().find(|&&r| !(r.is_finite() && r > 0.0)) {
            return Err(Error::InvalidParameter(format!("densities must be positive, got {rho}")));
        }
        if !(self.eta.is_finite() && self.eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be >= 1, got {}", self.eta)));
        }
        if let BetaMode::Fixed { beta } = self.beta_mode {
            ConnectionModel::soft(beta, self.eta)?;
        }
        self.domain
            .as_disk()
            .ok_or_else(|| Error::InvalidParameter("radial profiles need a disk domain".into()))
    }

    fn with_pool<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        if self.workers == 0 {
            return Ok(job());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {} workers: {e}", self.workers)))?;
        Ok(pool.install(job))
    }
}

/// Running sums for one radial bin.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct BinSums {
    count: usize,
    sum: f64,
    sum_sq: f64,
}

#[derive(Debug, Clone)]
struct RealizationOutcome {
    beta: f64,
    connected: bool,
    bins: Vec<BinSums>,
}

/// Radial bin index of `eps` (units of R) on `[0, 1]`; `eps = 1` goes to the last bin.
pub fn bin_index(eps: f64, bins: usize) -> usize {
    ((eps * bins as f64).floor() as usize).min(bins - 1)
}

/// Binned mean betweenness against distance from the disk center.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub rho: f64,
    pub realizations: usize,
    pub nodes_per_realization: usize,
    /// Bin centers in units of R.
    pub bin_centers: Vec<f64>,
    /// Raw mean betweenness per bin; NaN for empty bins.
    pub mean_gamma: Vec<f64>,
    /// `mean_gamma / max(mean_gamma)`; NaN for empty bins.
    pub normalized: Vec<f64>,
    pub counts: Vec<usize>,
    /// Standard error of the bin mean; NaN below two samples.
    pub stderr: Vec<f64>,
    /// `beta` used by each realization, in realization order.
    pub betas: Vec<f64>,
    pub all_connected: bool,
}

impl RadialProfile {
    fn from_sums(rho: f64, nodes: usize, bins: &[BinSums], betas: Vec<f64>, all_connected: bool) -> Self {
        let nb = bins.len();
        let bin_centers = (0..nb).map(|i| (i as f64 + 0.5) / nb as f64).collect();
        let mean_gamma: Vec<f64> = bins
            .iter()
            .map(|b| if b.count == 0 { f64::NAN } else { b.sum / b.count as f64 })
            .collect();
        let stderr = bins
            .iter()
            .zip(&mean_gamma)
            .map(|(b, &mean)| {
                if b.count < 2 {
                    return f64::NAN;
                }
                let n = b.count as f64;
                let var = ((b.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
                (var / n).sqrt()
            })
            .collect();
        let max = mean_gamma.iter().copied().filter(|m| !m.is_nan()).fold(f64::NEG_INFINITY, f64::max);
        let normalized = mean_gamma
            .iter()
            .map(|&m| {
                if m.is_nan() {
                    f64::NAN
                } else if max > 0.0 {
                    m / max
                } else {
                    0.0
                }
            })
            .collect();
        RadialProfile {
            rho,
            realizations: betas.len(),
            nodes_per_realization: nodes,
            bin_centers,
            mean_gamma,
            normalized,
            counts: bins.iter().map(|b| b.count).collect(),
            stderr,
            betas,
            all_connected,
        }
    }

    /// `profile.csv`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&PROFILE_HEADER);
        for i in 0..self.bin_centers.len() {
            t.push_numbers(&[
                self.bin_centers[i],
                self.mean_gamma[i],
                self.normalized[i],
                self.counts[i] as f64,
                self.stderr[i],
            ]);
        }
        t
    }

    /// Standard error of the normalized value in bin `i`.
    pub fn normalized_stderr(&self, i: usize) -> f64 {
        let max = self.mean_gamma.iter().copied().filter(|m| !m.is_nan()).fold(f64::NEG_INFINITY, f64::max);
        self.stderr[i] / max
    }
}

pub const PROFILE_HEADER: [&str; 5] = ["eps", "mean_gamma", "normalized", "count", "stderr"];
pub const CONVERGENCE_HEADER: [&str; 4] = ["rho", "realizations", "linf", "l2"];

fn run_realization(
    cfg: &ExperimentConfig,
    disk: Circle,
    n: usize,
    stream: RngStream,
) -> Result<RealizationOutcome> {
    let positions = cfg
        .domain
        .sample_uniform(n, &mut stream.substream(rgg::POSITIONS_STREAM));
    let mut links = stream.substream(rgg::LINKS_STREAM);
    let (beta, graph) = match cfg.beta_mode {
        BetaMode::ConnectivityThreshold => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!(
                    "connectivity threshold needs at least 2 nodes per realization, got {n}"
                )));
            }
            let coupled = CoupledLinks::draw(&positions, cfg.eta, &mut links)?;
            let beta = coupled.connectivity_threshold()?;
            (beta, coupled.realize(positions, beta))
        }
        BetaMode::Fixed { beta } => {
            let model = ConnectionModel::soft(beta, cfg.eta)?;
            (beta, rgg::realize(positions, model, &mut links))
        }
    };
    let gamma = betweenness_brandes(&graph);
    let mut bins = vec![BinSums::default(); cfg.bins];
    for (p, &g) in graph.positions().iter().zip(&gamma.values) {
        let eps = (p.distance(disk.center) / disk.radius).min(1.0);
        let b = &mut bins[bin_index(eps, cfg.bins)];
        b.count += 1;
        b.sum += g;
        b.sum_sq += g * g;
    }
    Ok(RealizationOutcome {
        beta,
        connected: graph.is_connected(),
        bins,
    })
}

/// Radial profile at density `rho`. `stream` distinguishes entries of a
/// density ladder, so repeated densities get independent samples.
pub fn run_density(cfg: &ExperimentConfig, rho: f64, stream: u64) -> Result<RadialProfile> {
    let disk = cfg.validate()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("density must be positive, got {rho}")));
    }
    let n = rgg::node_count_for(rho, cfg.domain.area());
    let density_seed = derive_seed(cfg.master_seed, stream);
    let outcomes = cfg.with_pool(|| {
        (0..cfg.realizations as u64)
            .into_par_iter()
            .map(|r| run_realization(cfg, disk, n, RngStream::new(derive_seed(density_seed, r))))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut totals = vec![BinSums::default(); cfg.bins];
    let mut betas = Vec::with_capacity(outcomes.len());
    let mut all_connected = true;
    for o in &outcomes {
        for (t, b) in totals.iter_mut().zip(&o.bins) {
            t.count += b.count;
            t.sum += b.sum;
            t.sum_sq += b.sum_sq;
        }
        betas.push(o.beta);
        all_connected &= o.connected;
    }
    Ok(RadialProfile::from_sums(rho, n, &totals, betas, all_connected))
}

/// Residuals of a normalized profile against `g*` at the bin centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuumComparison {
    /// `normalized - g*(center)` for qualifying bins, `None` otherwise.
    pub residuals: Vec<Option<f64>>,
    pub linf: f64,
    /// Root mean square over qualifying bins.
    pub l2: f64,
    pub bins_used: usize,
}

pub fn compare_to_continuum(p: &RadialProfile, min_count: usize) -> Result<ContinuumComparison> {
    let residuals: Vec<Option<f64>> = (0..p.bin_centers.len())
        .map(|i| {
            if p.counts[i] >= min_count && p.counts[i] > 0 {
                Some(g_star(p.bin_centers[i]).map(|g| p.normalized[i] - g))
            } else {
                None
            }
        })
        .map(Option::transpose)
        .collect::<Result<_>>()?;
    let used: Vec<f64> = residuals.iter().flatten().copied().collect();
    if used.is_empty() {
        return Err(Error::InsufficientData { min_count });
    }
    let linf = used.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let l2 = (used.iter().map(|r| r * r).sum::<f64>() / used.len() as f64).sqrt();
    Ok(ContinuumComparison {
        residuals,
        linf,
        l2,
        bins_used: used.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub rho: f64,
    pub realizations: usize,
    pub linf: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub profiles: Vec<RadialProfile>,
}

impl ConvergenceStudy {
    /// Whether `linf` strictly decreases along the ladder; `None` for a
    /// single density, where there is nothing to compare.
    pub fn linf_strictly_decreasing(&self) -> Option<bool> {
        if self.rows.len() < 2 {
            return None;
        }
        Some(self.rows.windows(2).all(|w| w[1].linf < w[0].linf))
    }

    /// `convergence.csv`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&CONVERGENCE_HEADER);
        for r in &self.rows {
            t.push_numbers(&[r.rho, r.realizations as f64, r.linf, r.l2]);
        }
        t
    }
}

/// Runs every density of the ladder (entry `k` on stream `k`) and tabulates
/// the distance to `g*`.
pub fn convergence_study(cfg: &ExperimentConfig) -> Result<ConvergenceStudy> {
    cfg.validate()?;
    if cfg.densities.is_empty() {
        return Err(Error::InvalidParameter("density ladder is empty".into()));
    }
    let mut rows = Vec::new();
    let mut profiles = Vec::new();
    for (k, &rho) in cfg.densities.iter().enumerate() {
        let profile = run_density(cfg, rho, k as u64)?;
        let cmp = compare_to_continuum(&profile, cfg.min_bin_count)?;
        rows.push(ConvergenceRow {
            rho,
            realizations: profile.realizations,
            linf: cmp.linf,
            l2: cmp.l2,
        });
        profiles.push(profile);
    }
    Ok(ConvergenceStudy { rows, profiles })
}
