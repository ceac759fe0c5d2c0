//! Bounded planar domains: disks, rectangles and convex polygons, optionally
//! punctured by circular holes.
//!
//! Regions are closed: a point exactly on the outer boundary is contained,
//! and a point on a hole's rim is contained too (holes are open disks).

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Rejects NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::InvalidParameter(format!("non-finite point ({x}, {y})")))
        }
    }

    pub fn from_polar(center: Point, r: f64, theta: f64) -> Self {
        Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    fn sub(self, other: Point) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Circle { center, radius })
    }

    fn contains_open(&self, p: Point) -> bool {
        p.distance_sq(self.center) < self.radius * self.radius
    }

    fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Axis-aligned rectangle given by its center and side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub center: Point,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    fn min(&self) -> Point {
        Point::new(self.center.x - self.width / 2.0, self.center.y - self.height / 2.0)
    }

    fn max(&self) -> Point {
        Point::new(self.center.x + self.width / 2.0, self.center.y + self.height / 2.0)
    }
}

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {n}")));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::InvalidDomain("non-finite polygon vertex".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(Error::InvalidDomain(format!("repeated vertex at index {j}")));
                }
            }
        }
        let mut turning = 0.0;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e1 = b.sub(a);
            let e2 = c.sub(b);
            let turn = cross(e1, e2);
            if turn <= 0.0 {
                return Err(Error::InvalidDomain(
                    "polygon must be strictly convex and counterclockwise".into(),
                ));
            }
            turning += turn.atan2(e1.0 * e2.0 + e1.1 * e2.1);
        }
        // A star-shaped winding also has only left turns.
        if (turning - TAU).abs() > 1e-9 {
            return Err(Error::InvalidDomain("polygon winds more than once".into()));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace formula.
    pub fn area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>()
    }

    pub fn centroid(&self) -> Point {
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (a, b) in self.edges() {
            let w = a.x * b.y - b.x * a.y;
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        let six_a = 6.0 * self.area();
        Point::new(cx / six_a, cy / six_a)
    }

    /// Minimum over edges of the signed distance to the edge line; positive inside.
    fn signed_boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b.sub(a);
                cross(e, p.sub(a)) / e.0.hypot(e.1)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// The convex part of a domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexShape {
    Disk(Circle),
    Rectangle(Rect),
    Polygon(ConvexPolygon),
}

impl ConvexShape {
    fn area(&self) -> f64 {
        match self {
            ConvexShape::Disk(c) => c.area(),
            ConvexShape::Rectangle(r) => r.width * r.height,
            ConvexShape::Polygon(p) => p.area(),
        }
    }

    fn anchor(&self) -> Point {
        match self {
            ConvexShape::Disk(c) => c.center,
            ConvexShape::Rectangle(r) => r.center,
            ConvexShape::Polygon(p) => p.centroid(),
        }
    }

    /// Signed distance to the boundary, positive inside. Exact for the disk
    /// and rectangle interior; for polygons the distance to the nearest edge line.
    fn signed_boundary_distance(&self, p: Point) -> f64 {
        match self {
            ConvexShape::Disk(c) => c.radius - p.distance(c.center),
            ConvexShape::Rectangle(r) => {
                let (lo, hi) = (r.min(), r.max());
                (p.x - lo.x).min(hi.x - p.x).min(p.y - lo.y).min(hi.y - p.y)
            }
            ConvexShape::Polygon(poly) => poly.signed_boundary_distance(p),
        }
    }

    fn contains(&self, p: Point) -> bool {
        match self {
            ConvexShape::Disk(c) => p.distance_sq(c.center) <= c.radius * c.radius,
            ConvexShape::Rectangle(r) => {
                let (lo, hi) = (r.min(), r.max());
                p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y
            }
            ConvexShape::Polygon(poly) => poly.edges().all(|(a, b)| cross(b.sub(a), p.sub(a)) >= 0.0),
        }
    }

    fn contains_strictly(&self, p: Point) -> bool {
        match self {
            ConvexShape::Disk(c) => p.distance_sq(c.center) < c.radius * c.radius,
            ConvexShape::Rectangle(r) => {
                let (lo, hi) = (r.min(), r.max());
                p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y
            }
            ConvexShape::Polygon(poly) => poly.edges().all(|(a, b)| cross(b.sub(a), p.sub(a)) > 0.0),
        }
    }

    fn bounding_box(&self) -> (Point, Point) {
        match self {
            ConvexShape::Disk(c) => (
                Point::new(c.center.x - c.radius, c.center.y - c.radius),
                Point::new(c.center.x + c.radius, c.center.y + c.radius),
            ),
            ConvexShape::Rectangle(r) => (r.min(), r.max()),
            ConvexShape::Polygon(poly) => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in poly.vertices() {
                    lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
        }
    }

    /// Exit distance along the unit direction `(ux, uy)` from a strictly
    /// interior `origin`.
    fn exit_distance(&self, origin: Point, ux: f64, uy: f64) -> f64 {
        match self {
            ConvexShape::Disk(c) => {
                // |w + t u|^2 = R^2 with w = origin - center.
                let (wx, wy) = origin.sub(c.center);
                let b = wx * ux + wy * uy;
                let q = (c.radius - wx.hypot(wy)) * (c.radius + wx.hypot(wy));
                let disc = (b * b + q).sqrt();
                if b <= 0.0 {
                    disc - b
                } else {
                    q / (disc + b)
                }
            }
            ConvexShape::Rectangle(r) => {
                let (lo, hi) = (r.min(), r.max());
                let mut t = f64::INFINITY;
                if ux > 0.0 {
                    t = t.min((hi.x - origin.x) / ux);
                } else if ux < 0.0 {
                    t = t.min((lo.x - origin.x) / ux);
                }
                if uy > 0.0 {
                    t = t.min((hi.y - origin.y) / uy);
                } else if uy < 0.0 {
                    t = t.min((lo.y - origin.y) / uy);
                }
                t
            }
            ConvexShape::Polygon(poly) => {
                // Half-plane form: only edges whose outward normal faces the
                // ray can stop it, and the nearest such edge does.
                let mut t = f64::INFINITY;
                for (a, b) in poly.edges() {
                    let (ex, ey) = b.sub(a);
                    let (nx, ny) = (ey, -ex);
                    let facing = nx * ux + ny * uy;
                    if facing > 0.0 {
                        let (ax, ay) = a.sub(origin);
                        t = t.min((nx * ax + ny * ay) / facing);
                    }
                }
                t
            }
        }
    }
}

/// A bounded planar domain. Convex unless it carries holes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSpec {
    base: ConvexShape,
    holes: Vec<Circle>,
}

impl DomainSpec {
    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        Ok(DomainSpec {
            base: ConvexShape::Disk(Circle::new(center, radius)?),
            holes: Vec::new(),
        })
    }

    pub fn unit_disk() -> Self {
        DomainSpec::disk(Point::ORIGIN, 1.0).expect("unit disk is valid")
    }

    pub fn rectangle(center: Point, width: f64, height: f64) -> Result<Self> {
        for (name, v) in [("width", width), ("height", height)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidDomain(format!("rectangle {name} must be positive, got {v}")));
            }
        }
        Ok(DomainSpec {
            base: ConvexShape::Rectangle(Rect { center, width, height }),
            holes: Vec::new(),
        })
    }

    /// The square `[0, side]^2`.
    pub fn square(side: f64) -> Result<Self> {
        DomainSpec::rectangle(Point::new(side / 2.0, side / 2.0), side, side)
    }

    pub fn convex_polygon(vertices: Vec<Point>) -> Result<Self> {
        Ok(DomainSpec {
            base: ConvexShape::Polygon(ConvexPolygon::new(vertices)?),
            holes: Vec::new(),
        })
    }

    /// Right triangle with the right angle at the origin and both legs of length `leg`.
    pub fn right_triangle(leg: f64) -> Result<Self> {
        DomainSpec::convex_polygon(vec![Point::new(0.0, 0.0), Point::new(leg, 0.0), Point::new(0.0, leg)])
    }

    /// Punches open circular holes into a convex `base`. Holes must lie
    /// strictly inside the base and be pairwise disjoint.
    pub fn holed(base: DomainSpec, holes: Vec<Circle>) -> Result<Self> {
        if !base.is_convex() {
            return Err(Error::InvalidDomain("base of a holed domain must be convex".into()));
        }
        for (i, h) in holes.iter().enumerate() {
            if base.base.signed_boundary_distance(h.center) <= h.radius
                || !base.base.contains_strictly(h.center)
            {
                return Err(Error::InvalidDomain(format!("hole {i} is not strictly inside the base")));
            }
            for (j, other) in holes.iter().enumerate().take(i) {
                if h.center.distance(other.center) <= h.radius + other.radius {
                    return Err(Error::InvalidDomain(format!("holes {j} and {i} overlap")));
                }
            }
        }
        Ok(DomainSpec { base: base.base, holes })
    }

    /// Unit square with two obstacles of radius 0.15 on its main diagonal.
    pub fn holed_square_default() -> Self {
        let holes = vec![
            Circle::new(Point::new(0.3, 0.3), 0.15).unwrap(),
            Circle::new(Point::new(0.7, 0.7), 0.15).unwrap(),
        ];
        DomainSpec::holed(DomainSpec::square(1.0).unwrap(), holes).expect("default holed square is valid")
    }

    pub fn base(&self) -> &ConvexShape {
        &self.base
    }

    pub fn holes(&self) -> &[Circle] {
        &self.holes
    }

    pub fn is_convex(&self) -> bool {
        self.holes.is_empty()
    }

    /// The disk, if this domain is a hole-free disk.
    pub fn as_disk(&self) -> Option<Circle> {
        match (&self.base, self.holes.is_empty()) {
            (ConvexShape::Disk(c), true) => Some(*c),
            _ => None,
        }
    }

    /// Reference center used to measure displacement: disk or rectangle
    /// center, polygon centroid.
    pub fn anchor(&self) -> Point {
        self.base.anchor()
    }

    pub fn area(&self) -> f64 {
        self.base.area() - self.holes.iter().map(Circle::area).sum::<f64>()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.base.contains(p) && !self.holes.iter().any(|h| h.contains_open(p))
    }

    /// Interior of a convex domain (boundary excluded).
    pub fn contains_strictly(&self, p: Point) -> bool {
        self.base.contains_strictly(p)
            && !self.holes.iter().any(|h| p.distance_sq(h.center) <= h.radius * h.radius)
    }

    /// Distance from an interior point to the outer boundary (hole rims ignored).
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.base.signed_boundary_distance(p)
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        self.base.bounding_box()
    }

    /// Distance from `origin` to the boundary along direction `theta`
    /// (radians, reduced mod 2π).
    pub fn ray_distance(&self, origin: Point, theta: f64) -> Result<f64> {
        if !self.is_convex() {
            return Err(Error::NonConvexDomain);
        }
        if !self.base.contains_strictly(origin) {
            return Err(Error::OriginOutside { x: origin.x, y: origin.y });
        }
        let theta = theta.rem_euclid(TAU);
        Ok(self.base.exit_distance(origin, theta.cos(), theta.sin()))
    }

    /// `count` i.i.d. uniform points, by rejection from the bounding box.
    pub fn sample_uniform(&self, count: usize, rng: &mut RngStream) -> Vec<Point> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p = Point::new(rng.uniform_in(lo.x, hi.x), rng.uniform_in(lo.y, hi.y));
            if self.contains(p) {
                out.push(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_with_hole() -> DomainSpec {
        let hole = Circle::new(Point::new(0.5, 0.5), 0.1).unwrap();
        DomainSpec::holed(DomainSpec::square(1.0).unwrap(), vec![hole]).unwrap()
    }

    #[test]
    fn areas() {
        assert!((DomainSpec::unit_disk().area() - PI).abs() < 1e-15);
        let r = DomainSpec::rectangle(Point::ORIGIN, 2.0, 3.0).unwrap();
        assert_eq!(r.area(), 6.0);
        assert!((unit_square_with_hole().area() - (1.0 - 0.01 * PI)).abs() < 1e-15);
        assert!((DomainSpec::right_triangle(1.0).unwrap().area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn containment() {
        let d = DomainSpec::unit_disk();
        assert!(d.contains(Point::ORIGIN));
        assert!(!d.contains(Point::new(1.5, 0.0)));
        assert!(d.contains(Point::new(1.0, 0.0)));
        assert!(!d.contains_strictly(Point::new(1.0, 0.0)));

        let h = unit_square_with_hole();
        assert!(!h.contains(Point::new(0.5, 0.5)));
        assert!(h.contains(Point::new(0.65, 0.5)));
        assert!(h.contains(Point::new(0.0, 0.0)));
        assert!(!h.is_convex());
    }

    #[test]
    fn invalid_domains_rejected() {
        assert!(DomainSpec::disk(Point::ORIGIN, 0.0).is_err());
        assert!(DomainSpec::convex_polygon(vec![Point::ORIGIN, Point::new(1.0, 0.0)]).is_err());
        // clockwise
        let cw = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        assert!(DomainSpec::convex_polygon(cw).is_err());
        // collinear vertex breaks strict convexity
        let flat = vec![
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(DomainSpec::convex_polygon(flat).is_err());
        // pentagram: five left turns, winds twice
        let star: Vec<Point> = (0..5).map(|k| Point::from_polar(Point::ORIGIN, 1.0, k as f64 * 2.0 * TAU / 5.0)).collect();
        assert!(DomainSpec::convex_polygon(star).is_err());

        let sq = DomainSpec::square(1.0).unwrap();
        let poking_out = Circle::new(Point::new(0.05, 0.5), 0.1).unwrap();
        assert!(DomainSpec::holed(sq.clone(), vec![poking_out]).is_err());
        let a = Circle::new(Point::new(0.4, 0.5), 0.1).unwrap();
        let b = Circle::new(Point::new(0.55, 0.5), 0.1).unwrap();
        assert!(DomainSpec::holed(sq.clone(), vec![a, b]).is_err());
        assert!(DomainSpec::holed(unit_square_with_hole(), vec![]).is_err());
    }

    #[test]
    fn ray_distance_examples() {
        let d = DomainSpec::unit_disk();
        for k in 0..16 {
            let r = d.ray_distance(Point::ORIGIN, k as f64 * 0.4).unwrap();
            assert!((r - 1.0).abs() < 1e-15);
        }
        // Node half-way out: distance 0.5 continuing outward, 1.5 back through the center.
        let p = Point::new(0.5, 0.0);
        assert!((d.ray_distance(p, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((d.ray_distance(p, PI).unwrap() - 1.5).abs() < 1e-15);

        let sq = DomainSpec::rectangle(Point::ORIGIN, 2.0, 2.0).unwrap();
        assert!((sq.ray_distance(Point::ORIGIN, PI / 4.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        // angle reduction
        let a = sq.ray_distance(Point::new(0.3, -0.2), 1.0).unwrap();
        let b = sq.ray_distance(Point::new(0.3, -0.2), 1.0 + 3.0 * TAU).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn ray_distance_errors() {
        let d = DomainSpec::unit_disk();
        assert!(matches!(d.ray_distance(Point::new(1.0, 0.0), 0.0), Err(Error::OriginOutside { .. })));
        assert_eq!(
            DomainSpec::holed_square_default().ray_distance(Point::new(0.5, 0.5), 0.0),
            Err(Error::NonConvexDomain)
        );
    }

    #[test]
    fn sampling() {
        let mut rng = RngStream::new(3);
        assert!(DomainSpec::unit_disk().sample_uniform(0, &mut rng).is_empty());

        let h = DomainSpec::holed_square_default();
        let pts = h.sample_uniform(10_000, &mut rng);
        assert_eq!(pts.len(), 10_000);
        for p in &pts {
            assert!(h.contains(*p));
            for hole in h.holes() {
                assert!(p.distance(hole.center) >= hole.radius);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = DomainSpec::right_triangle(1.0).unwrap();
        let a = d.sample_uniform(50, &mut RngStream::new(11));
        let b = d.sample_uniform(50, &mut RngStream::new(11));
        assert_eq!(a, b);
    }

    #[test]
    fn polygon_centroid() {
        let t = DomainSpec::right_triangle(3.0).unwrap();
        let c = t.anchor();
        assert!((c.x - 1.0).abs() < 1e-15 && (c.y - 1.0).abs() < 1e-15);
    }
}
