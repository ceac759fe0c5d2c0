//! Closed-form continuum betweenness for a disk.
//!
//! For a disk of radius `R` and a point at distance `eps` from its center,
//!
//! ```text
//! g(eps)  = 2 (R^2 - eps^2) / (pi^2 R^3) * E(eps / R)
//! g*(eps) = (2 / pi) (1 - eps^2) E(eps)        (eps in units of R)
//! ```
//!
//! with `E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt`, so that
//! `g*(eps) g(0) = g(eps)`.
//!
//! Near the center, `g*(eps) = 1 - (5/4) eps^2 + (13/64) eps^4 + O(eps^6)`.
//! The quadratic coefficient is `5/4`: `E(k) = (pi/2)(1 - k^2/4 - 3k^4/64 - ...)`
//! times `(1 - eps^2)` gives `-(1 + 1/4)`. Near the rim,
//! `g*(eps) = 4 (1 - eps) / pi` to leading order; the remainder carries a
//! logarithm, `O((1 - eps)^2 ln(1 - eps))`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Largest `eps` (units of R) for which the center series is offered.
pub const CENTER_EXPANSION_MAX: f64 = 0.3;
/// Smallest `eps` (units of R) for which the rim series is offered.
pub const BOUNDARY_EXPANSION_MIN: f64 = 0.9;

fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::out_of_domain(what, x))
    }
}

/// Complete elliptic integral of the second kind, modulus convention:
/// `E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt` for `0 <= k <= 1`.
///
/// Arithmetic-geometric mean: with `a0 = 1`, `b0 = sqrt(1 - k^2)`, `c0 = k`,
/// `E = K (1 - sum_n 2^(n-1) c_n^2)` and `K = pi / (2 a_inf)`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    check_unit("k", k)?;
    if k == 1.0 {
        return Ok(1.0);
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut c = k;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..64 {
        let a_next = 0.5 * (a + b);
        // c_{n+1} = (a_n - b_n)/2 without the cancellation
        c = c * c / (4.0 * a_next);
        b = (a * b).sqrt();
        a = a_next;
        weight *= 2.0;
        let term = weight * c * c;
        sum += term;
        if term <= f64::EPSILON * 1e-3 * sum {
            break;
        }
    }
    Ok(PI / (2.0 * a) * (1.0 - sum))
}

/// Disk continuum model of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskContinuum {
    radius: f64,
}

impl DiskContinuum {
    pub fn new(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(DiskContinuum { radius })
        } else {
            Err(Error::out_of_domain("radius", radius))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `g` at absolute distance `eps` from the center (units 1/length).
    pub fn g(&self, eps: f64) -> Result<f64> {
        let r = self.radius;
        if !(0.0..=r).contains(&eps) {
            return Err(Error::out_of_domain("eps", eps));
        }
        let k = (eps / r).min(1.0);
        Ok(2.0 * (r - eps) * (r + eps) / (PI * PI * r * r * r) * elliptic_e(k)?)
    }

    /// `g*` at absolute distance `eps`; converts to units of R.
    pub fn g_star_at(&self, eps: f64) -> Result<f64> {
        if !(0.0..=self.radius).contains(&eps) {
            return Err(Error::out_of_domain("eps", eps));
        }
        g_star((eps / self.radius).min(1.0))
    }
}

/// Shorthand for `DiskContinuum::new(radius)?.g(eps)`.
pub fn g_disk(radius: f64, eps: f64) -> Result<f64> {
    DiskContinuum::new(radius)?.g(eps)
}

/// Normalized continuum betweenness, `eps` in units of R.
pub fn g_star(eps: f64) -> Result<f64> {
    check_unit("eps", eps)?;
    Ok(2.0 / PI * (1.0 - eps) * (1.0 + eps) * elliptic_e(eps)?)
}

/// `1 - (5/4) eps^2 + (13/64) eps^4`, valid for `eps <= 0.3`.
pub fn g_star_center_expansion(eps: f64) -> Result<f64> {
    if !(0.0..=CENTER_EXPANSION_MAX).contains(&eps) {
        return Err(Error::out_of_domain("eps", eps));
    }
    let e2 = eps * eps;
    Ok(1.0 - 1.25 * e2 + 13.0 / 64.0 * e2 * e2)
}

/// `4 (1 - eps) / pi`, valid for `0.9 <= eps <= 1`.
pub fn g_star_boundary_expansion(eps: f64) -> Result<f64> {
    if !(BOUNDARY_EXPANSION_MIN..=1.0).contains(&eps) {
        return Err(Error::out_of_domain("eps", eps));
    }
    Ok(4.0 * (1.0 - eps) / PI)
}

/// Inverse of `g*` on `[0, 1]` by bisection: the `eps` with `g*(eps) = level`.
pub fn g_star_inverse(level: f64) -> Result<f64> {
    check_unit("level", level)?;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_star(mid)? > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_endpoints() {
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        // mpmath: ellipe(0.25) with parameter m = k^2
        assert!((elliptic_e(0.5).unwrap() - 1.4674622093394272).abs() < 1e-15);
        assert!(elliptic_e(-0.1).is_err());
        assert!(elliptic_e(1.0 + 1e-12).is_err());
        assert!(elliptic_e(f64::NAN).is_err());
    }

    #[test]
    fn elliptic_near_one_is_continuous() {
        let e = elliptic_e(1.0 - 1e-15).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert!(e > 1.0);
    }

    #[test]
    fn g_disk_examples() {
        assert!((g_disk(1.0, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        assert_eq!(g_disk(1.0, 1.0).unwrap(), 0.0);
        assert!((g_disk(2.0, 0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert!(g_disk(1.0, 1.5).is_err());
        assert!(g_disk(1.0, -0.1).is_err());
        assert!(g_disk(0.0, 0.0).is_err());
    }

    #[test]
    fn g_star_examples() {
        assert!((g_star(0.0).unwrap() - 1.0).abs() < 1e-16);
        assert_eq!(g_star(1.0).unwrap(), 0.0);
        // (2/pi)(0.75) E(0.5), E(0.5) from mpmath
        assert!((g_star(0.5).unwrap() - 0.7006615932507706).abs() < 1e-15);
        assert!(g_star(1.01).is_err());
    }

    #[test]
    fn expansions() {
        assert_eq!(g_star_center_expansion(0.0).unwrap(), 1.0);
        assert!((g_star_center_expansion(0.1).unwrap() - 0.9875203125).abs() < 1e-15);
        assert!(g_star_center_expansion(0.31).is_err());
        assert_eq!(g_star_boundary_expansion(1.0).unwrap(), 0.0);
        assert!((g_star_boundary_expansion(0.99).unwrap() - 0.04 / PI).abs() < 1e-16);
        assert!(g_star_boundary_expansion(0.5).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        for &eps in &[0.0, 0.2, 0.5, 0.9, 0.99] {
            let level = g_star(eps).unwrap();
            assert!((g_star_inverse(level).unwrap() - eps).abs() < 1e-9);
        }
    }
}
