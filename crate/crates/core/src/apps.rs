//! Reference policies built on betweenness: boundary detection, cluster-head
//! election and a betweenness-driven connection range.

use std::cmp::Ordering;

use serde::Serialize;

use crate::analytic::{g_star, g_star_inverse};
use crate::centrality::{betweenness_brandes_par, BetweennessVector};
use crate::error::{Error, Result};
use crate::geometry::Circle;
use crate::io::Table;
use crate::rgg::Graph;

pub const DEFAULT_BOUNDARY_THRESHOLD: f64 = 0.1;
pub const DEFAULT_RANGE_FLOOR: f64 = 0.01;

/// Per-node boundary classification by position and by measured betweenness.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport {
    pub threshold: f64,
    /// Distance from the disk center, units of R (clamped to 1).
    pub eps: Vec<f64>,
    /// `g*(eps)`, the positional betweenness estimate.
    pub g_star_est: Vec<f64>,
    /// Measured betweenness divided by the largest value in the graph.
    pub gamma_norm: Vec<f64>,
    pub boundary_by_position: Vec<bool>,
    pub boundary_by_measurement: Vec<bool>,
}

impl BoundaryReport {
    /// Fraction of nodes on which both modes agree.
    pub fn agreement(&self) -> f64 {
        let n = self.eps.len();
        if n == 0 {
            return 1.0;
        }
        let same = self
            .boundary_by_position
            .iter()
            .zip(&self.boundary_by_measurement)
            .filter(|(a, b)| a == b)
            .count();
        same as f64 / n as f64
    }

    /// `boundary.csv`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&BOUNDARY_HEADER);
        for i in 0..self.eps.len() {
            t.push_numbers(&[
                i as f64,
                self.eps[i],
                self.g_star_est[i],
                self.gamma_norm[i],
                f64::from(u8::from(self.boundary_by_position[i])),
                f64::from(u8::from(self.boundary_by_measurement[i])),
            ]);
        }
        t
    }
}

pub const BOUNDARY_HEADER: [&str; 6] = ["id", "eps", "g_star_est", "gamma_norm", "is_boundary_pos", "is_boundary_meas"];
pub const HEADS_HEADER: [&str; 3] = ["rank", "id", "gamma_raw"];

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::out_of_domain("threshold", threshold))
    }
}

/// Classifies nodes of a disk network, computing betweenness with Brandes.
pub fn detect_boundary(g: &Graph, disk: &Circle, threshold: f64) -> Result<BoundaryReport> {
    check_threshold(threshold)?;
    if g.node_count() < 3 {
        return Err(Error::DegenerateN { n: g.node_count() });
    }
    detect_boundary_with(g, disk, threshold, &betweenness_brandes_par(g))
}

/// As [`detect_boundary`] with precomputed betweenness. A node is a boundary
/// node by position iff `g*(eps) < threshold`, and by measurement iff its
/// betweenness over the graph maximum is below `threshold`. Pair
/// normalization cancels in that ratio, so raw values are used directly.
pub fn detect_boundary_with(g: &Graph, disk: &Circle, threshold: f64, gamma: &BetweennessVector) -> Result<BoundaryReport> {
    check_threshold(threshold)?;
    let n = g.node_count();
    if n < 3 {
        return Err(Error::DegenerateN { n });
    }
    if gamma.len() != n {
        return Err(Error::InvalidParameter(format!(
            "betweenness has {} entries for {n} nodes",
            gamma.len()
        )));
    }
    let eps: Vec<f64> = g
        .positions()
        .iter()
        .map(|p| (p.distance(disk.center) / disk.radius).min(1.0))
        .collect();
    let g_star_est = eps.iter().map(|&e| g_star(e)).collect::<Result<Vec<_>>>()?;
    let max = gamma.max();
    let gamma_norm: Vec<f64> = gamma
        .values
        .iter()
        .map(|&x| if max > 0.0 { x / max } else { 0.0 })
        .collect();
    Ok(BoundaryReport {
        threshold,
        boundary_by_position: g_star_est.iter().map(|&x| x < threshold).collect(),
        boundary_by_measurement: gamma_norm.iter().map(|&x| x < threshold).collect(),
        eps,
        g_star_est,
        gamma_norm,
    })
}

/// Radius (units of R) beyond which position mode flags a node:
/// `boundary <=> eps > boundary_radius(threshold)`.
pub fn boundary_radius(threshold: f64) -> Result<f64> {
    check_threshold(threshold)?;
    g_star_inverse(threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElectionMode {
    /// Busy central nodes.
    MaxBetweenness,
    /// Idle peripheral nodes.
    MinBetweenness,
}

/// Top-`k` or bottom-`k` nodes by betweenness, ties to the lower index.
pub fn elect_cluster_heads(gamma: &BetweennessVector, k: usize, mode: ElectionMode) -> Result<Vec<usize>> {
    let n = gamma.len();
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k must be in 1..={n}, got {k}")));
    }
    let v = &gamma.values;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let by_value = match mode {
            ElectionMode::MaxBetweenness => v[b].total_cmp(&v[a]),
            ElectionMode::MinBetweenness => v[a].total_cmp(&v[b]),
        };
        match by_value {
            Ordering::Equal => a.cmp(&b),
            other => other,
        }
    });
    order.truncate(k);
    Ok(order)
}

/// Elects heads on a graph, computing betweenness with Brandes.
pub fn elect_cluster_heads_in(g: &Graph, k: usize, mode: ElectionMode) -> Result<Vec<usize>> {
    elect_cluster_heads(&betweenness_brandes_par(g), k, mode)
}

/// `heads.csv`.
pub fn heads_table(heads: &[usize], gamma: &BetweennessVector) -> Table {
    let mut t = Table::new(&HEADS_HEADER);
    for (rank, &id) in heads.iter().enumerate() {
        t.push_numbers(&[(rank + 1) as f64, id as f64, gamma.values[id]]);
    }
    t
}

/// Map from `g*` to the multiplier of the base `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RangeMap {
    Identity,
    /// `max(x, floor)`: keeps the boundary range finite where `g*` vanishes.
    Floor { floor: f64 },
}

impl Default for RangeMap {
    fn default() -> Self {
        RangeMap::Floor {
            floor: DEFAULT_RANGE_FLOOR,
        }
    }
}

impl RangeMap {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            RangeMap::Identity => x,
            RangeMap::Floor { floor } => x.max(floor),
        }
    }
}

/// Connection range `r0 = 1 / sqrt(beta0 * f(g*(eps)))` at `eps` (units of R).
pub fn adaptive_range_with(eps: f64, f: impl Fn(f64) -> f64, beta0: f64) -> Result<f64> {
    if !(beta0.is_finite() && beta0 > 0.0) {
        return Err(Error::InvalidParameter(format!("beta0 must be positive, got {beta0}")));
    }
    let scale = f(g_star(eps)?);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("range map must be positive, got {scale} at eps = {eps}")));
    }
    Ok(1.0 / (beta0 * scale).sqrt())
}

pub fn adaptive_range(eps: f64, map: RangeMap, beta0: f64) -> Result<f64> {
    adaptive_range_with(eps, |x| map.apply(x), beta0)
}
