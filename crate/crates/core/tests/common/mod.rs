//! Independent reference computations shared by the integration tests.
//! Nothing here calls the code paths it is used to check.

#![allow(dead_code)]

use rggbc::rgg::{CoupledLinks, Graph};
use rggbc::{Point, RngStream};

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let x = h * XGK[k];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (h * kronrod, (h * (kronrod - gauss)).abs())
}

/// Adaptive Gauss-Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth >= 50 || (b - a) < 1e-14 {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, tol / 2.0, depth + 1) + recurse(f, m, b, tol / 2.0, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// `E(k)` straight from its defining integral.
pub fn elliptic_e_oracle(k: f64) -> f64 {
    let f = move |t: f64| {
        let s = t.sin();
        (1.0 - k * k * s * s).max(0.0).sqrt()
    };
    integrate(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-15)
}

/// Exit distance of a ray from a point inside a circle, by intersecting the
/// segment `origin + t u`, `t in [0, L]` (L beyond the far side) with the circle
/// through the textbook quadratic.
pub fn ray_circle_exit(origin: Point, theta: f64, center: Point, radius: f64) -> f64 {
    let (ux, uy) = (theta.cos(), theta.sin());
    let (wx, wy) = (origin.x - center.x, origin.y - center.y);
    let reach = 2.0 * radius + wx.hypot(wy);
    // |w + s L u|^2 = R^2 for s in [0, 1]
    let a = reach * reach;
    let b = 2.0 * reach * (wx * ux + wy * uy);
    let c = wx * wx + wy * wy - radius * radius;
    let s = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    s * reach
}

/// The disk's polar boundary equation in the frame centred on the node with
/// the disk centre at `(-eps, 0)`: `r(t) = sqrt(R^2 - eps^2 sin^2 t) - eps cos t`.
pub fn disk_polar_distance(radius: f64, eps: f64, t: f64) -> f64 {
    (radius * radius - eps * eps * t.sin().powi(2)).sqrt() - eps * t.cos()
}

/// Connectivity threshold by bisection on the coupled realization.
pub fn bisection_threshold(links: &CoupledLinks, positions: &[Point]) -> f64 {
    let connected = |beta: f64| links.realize(positions.to_vec(), beta).is_connected();
    let mut lo = 0.0;
    let mut hi = 1.0;
    while connected(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if connected(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Erdos-Renyi graph over uniformly scattered points of the unit square.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut RngStream) -> Graph {
    let positions: Vec<Point> = (0..n).map(|_| Point::new(rng.uniform(), rng.uniform())).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.uniform() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(positions, &edges).unwrap()
}

/// Sum over connected unordered pairs of `(hop distance - 1)`.
pub fn interior_hop_total(g: &Graph) -> f64 {
    let n = g.node_count();
    let mut total = 0usize;
    for i in 0..n {
        let d = g.hop_distances(i);
        for dj in d.iter().skip(i + 1).flatten() {
            total += dj - 1;
        }
    }
    total as f64
}

/// Relabels node `i` as `perm[i]`.
pub fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    let mut positions = vec![Point::ORIGIN; g.node_count()];
    for (i, p) in g.positions().iter().enumerate() {
        positions[perm[i]] = *p;
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(i, j)| (perm[i], perm[j])).collect();
    Graph::new(positions, &edges).unwrap()
}
