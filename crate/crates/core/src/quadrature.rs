//! Continuum betweenness for arbitrary convex domains.
//!
//! In the dense limit geodesics are straight segments, and the expected
//! betweenness of a point `kappa` in a convex domain of area `V` reduces to a
//! single angular integral over boundary ray distances `r(theta)` measured
//! from `kappa`:
//!
//! ```text
//! g(kappa) = 1/(4 V^2) int_0^{2 pi} r(t) r(t + pi) [r(t) + r(t + pi)] dt
//! ```
//!
//! The integrand is `2 pi`-periodic, so a uniform trapezoidal rule converges
//! spectrally for smooth boundaries (the disk) and algebraically where the
//! ray hits a polygon corner.

use rayon::prelude::*;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};

/// Fewest angular samples accepted by [`g_convex`].
pub const MIN_QUADRATURE_POINTS: usize = 64;
/// Default angular resolution.
pub const DEFAULT_QUADRATURE_POINTS: usize = 8192;

fn check_points(m: usize) -> Result<()> {
    if m < MIN_QUADRATURE_POINTS || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "quadrature points must be even and at least {MIN_QUADRATURE_POINTS}, got {m}"
        )));
    }
    Ok(())
}

/// Boundary distances from one origin on a uniform angular grid of even size,
/// so that `theta` and `theta + pi` are both grid angles.
#[derive(Debug, Clone, PartialEq)]
pub struct RayDistanceProfile {
    pub origin: Point,
    pub thetas: Vec<f64>,
    pub distances: Vec<f64>,
}

impl RayDistanceProfile {
    pub fn sample(domain: &DomainSpec, origin: Point, m: usize) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("angular grid size must be even, got {m}")));
        }
        let step = TAU / m as f64;
        let thetas: Vec<f64> = (0..m).map(|i| i as f64 * step).collect();
        let distances = thetas
            .iter()
            .map(|&t| domain.ray_distance(origin, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(RayDistanceProfile {
            origin,
            thetas,
            distances,
        })
    }

    /// `r(theta_i + pi)`.
    pub fn opposite(&self, i: usize) -> f64 {
        let m = self.distances.len();
        self.distances[(i + m / 2) % m]
    }

    /// Trapezoidal value of `int_0^{2 pi} r(t) r(t+pi) (r(t) + r(t+pi)) dt`.
    /// The integrand is `pi`-periodic, so half the grid suffices.
    pub fn chord_integral(&self) -> f64 {
        let m = self.distances.len();
        let half = m / 2;
        let sum: f64 = (0..half)
            .map(|i| {
                let a = self.distances[i];
                let b = self.distances[i + half];
                a * b * (a + b)
            })
            .sum();
        2.0 * sum * TAU / m as f64
    }
}

/// Continuum betweenness `g(kappa)` (units 1/length) with `m` angular samples.
pub fn g_convex(domain: &DomainSpec, kappa: Point, m: usize) -> Result<f64> {
    check_points(m)?;
    if !domain.is_convex() {
        return Err(Error::NonConvexDomain);
    }
    let profile = RayDistanceProfile::sample(domain, kappa, m)?;
    let v = domain.area();
    Ok(profile.chord_integral() / (4.0 * v * v))
}

/// `g` over a set of evaluation points, with `g*` normalized by the field maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumField {
    pub domain: DomainSpec,
    pub points: Vec<Point>,
    pub g_values: Vec<f64>,
    pub g_star_values: Vec<f64>,
}

impl ContinuumField {
    pub fn argmax(&self) -> Option<usize> {
        extremum(&self.g_values, |a, b| a > b)
    }

    pub fn argmin(&self) -> Option<usize> {
        extremum(&self.g_values, |a, b| a < b)
    }
}

fn extremum(values: &[f64], better: impl Fn(f64, f64) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| better(v, values[b])) {
            best = Some(i);
        }
    }
    best
}

/// Evaluates [`g_convex`] at every point (in parallel; output order follows `points`).
pub fn field(domain: &DomainSpec, points: &[Point], m: usize) -> Result<ContinuumField> {
    let g_values = points
        .par_iter()
        .map(|&p| g_convex(domain, p, m))
        .collect::<Result<Vec<f64>>>()?;
    let max = g_values.iter().copied().fold(0.0, f64::max);
    let g_star_values = g_values
        .iter()
        .map(|&g| if max > 0.0 { g / max } else { 0.0 })
        .collect();
    Ok(ContinuumField {
        domain: domain.clone(),
        points: points.to_vec(),
        g_values,
        g_star_values,
    })
}

/// Square lattice of spacing `step` through the domain anchor, restricted to
/// strictly interior points. Row-major from the bottom-left.
pub fn lattice_grid(domain: &DomainSpec, step: f64) -> Result<Vec<Point>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter(format!("grid step must be positive, got {step}")));
    }
    let anchor = domain.anchor();
    let (lo, hi) = domain.bounding_box();
    let i_lo = ((lo.x - anchor.x) / step).floor() as i64;
    let i_hi = ((hi.x - anchor.x) / step).ceil() as i64;
    let j_lo = ((lo.y - anchor.y) / step).floor() as i64;
    let j_hi = ((hi.y - anchor.y) / step).ceil() as i64;
    let mut points = Vec::new();
    for j in j_lo..=j_hi {
        for i in i_lo..=i_hi {
            let p = Point::new(anchor.x + i as f64 * step, anchor.y + j as f64 * step);
            if domain.contains_strictly(p) {
                points.push(p);
            }
        }
    }
    Ok(points)
}

/// Values at `m`, `2m` and `4m` samples with a Richardson estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub points: [usize; 3],
    pub values: [f64; 3],
    /// `values[1] - values[0]`, `values[2] - values[1]`.
    pub differences: [f64; 2],
    /// `log2(|d0 / d1|)` when both differences are nonzero and shrinking.
    pub observed_order: Option<f64>,
    pub extrapolated: f64,
    /// Estimated error of `values[2]`.
    pub error_estimate: f64,
}

impl ConvergenceReport {
    pub fn certifies(&self, tolerance: f64) -> bool {
        self.error_estimate < tolerance
    }
}

pub fn richardson_check(domain: &DomainSpec, kappa: Point, m: usize) -> Result<ConvergenceReport> {
    let points = [m, 2 * m, 4 * m];
    let values = [
        g_convex(domain, kappa, points[0])?,
        g_convex(domain, kappa, points[1])?,
        g_convex(domain, kappa, points[2])?,
    ];
    let differences = [values[1] - values[0], values[2] - values[1]];
    let (d0, d1) = (differences[0].abs(), differences[1].abs());
    let observed_order = if d0 > 0.0 && d1 > 0.0 && d1 < d0 {
        Some((d0 / d1).log2())
    } else {
        None
    };
    let (extrapolated, error_estimate) = match observed_order {
        Some(p) => {
            let correction = differences[1] / (p.exp2() - 1.0);
            (values[2] + correction, correction.abs())
        }
        None => (values[2], d1),
    };
    Ok(ConvergenceReport {
        points,
        values,
        differences,
        observed_order,
        extrapolated,
        error_estimate,
    })
}
