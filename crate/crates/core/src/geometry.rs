//! Planar convex geometry: points, hulls, convex regions and their set operations.
//!
//! Regions are compact convex sets stored by their extreme points. All predicates take
//! an absolute distance tolerance; callers derive it from the data scale via
//! [`tolerance`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{DepthError, Result};

/// Relative tolerance applied to coordinates scaled to the data's bounding box.
pub const REL_TOL: f64 = 1e-9;

/// Absolute tolerance for data of the given scale.
pub fn tolerance(scale: f64) -> f64 {
    REL_TOL * scale.max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_slice(p: &[f64]) -> Self {
        Self { x: p[0], y: p[1] }
    }

    pub fn dot(self, o: Pt) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Pt) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counterclockwise rotation by a right angle.
    pub fn perp(self) -> Pt {
        Pt::new(-self.y, self.x)
    }

    pub fn to_vec(self) -> Vec<f64> {
        vec![self.x, self.y]
    }
}

impl Add for Pt {
    type Output = Pt;
    fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Pt {
    type Output = Pt;
    fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Pt {
    type Output = Pt;
    fn mul(self, s: f64) -> Pt {
        Pt::new(self.x * s, self.y * s)
    }
}

impl Neg for Pt {
    type Output = Pt;
    fn neg(self) -> Pt {
        Pt::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `abc`; positive when counterclockwise.
pub fn orient(a: Pt, b: Pt, c: Pt) -> f64 {
    (b - a).cross(c - a)
}

fn segment_distance(p: Pt, a: Pt, b: Pt) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Convex hull in counterclockwise order, starting from the lexicographically smallest
/// vertex. Points within `tol` of the line through their neighbours are dropped, so the
/// result has one vertex (all points coincide), two (collinear data) or is strictly
/// convex.
pub fn convex_hull(points: &[Pt], tol: f64) -> Vec<Pt> {
    let mut pts: Vec<Pt> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= tol);
    if pts.len() <= 2 {
        return pts;
    }
    // A point is kept only if it lies more than `tol` to the left of the chord.
    let keeps_turn = |a: Pt, b: Pt, c: Pt| {
        let len = (c - a).norm();
        orient(a, b, c) > tol * len
    };
    let mut hull: Vec<Pt> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && !keeps_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && !keeps_turn(hull[hull.len() - 2], hull[hull.len() - 1], p)
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    cleanup_ring(hull, tol)
}

/// Removes vertices closer than `tol` to their successor and vertices within `tol` of
/// the chord of their neighbours, until the ring is stable.
fn cleanup_ring(mut ring: Vec<Pt>, tol: f64) -> Vec<Pt> {
    loop {
        let m = ring.len();
        if m <= 2 {
            if m == 2 && (ring[0] - ring[1]).norm() <= tol {
                ring.truncate(1);
            }
            return ring;
        }
        let mut removed = false;
        for i in 0..m {
            let prev = ring[(i + m - 1) % m];
            let cur = ring[i];
            let next = ring[(i + 1) % m];
            let chord = (next - prev).norm();
            if (cur - next).norm() <= tol || orient(prev, cur, next) <= tol * chord {
                ring.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return ring;
        }
    }
}

/// A compact convex set: empty, an interval (d = 1) or a planar polygon given by its
/// counterclockwise extreme points (one vertex for a point, two for a segment).
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexRegion {
    Empty,
    Interval { lo: f64, hi: f64 },
    Polygon(Vec<Pt>),
}

impl ConvexRegion {
    pub fn interval(lo: f64, hi: f64) -> Self {
        if lo > hi {
            ConvexRegion::Empty
        } else {
            ConvexRegion::Interval { lo, hi }
        }
    }

    /// Convex hull of a planar point set.
    pub fn hull_of(points: &[Pt], tol: f64) -> Self {
        if points.is_empty() {
            ConvexRegion::Empty
        } else {
            ConvexRegion::Polygon(convex_hull(points, tol))
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexRegion::Empty)
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexRegion::Empty => None,
            ConvexRegion::Interval { .. } => Some(1),
            ConvexRegion::Polygon(_) => Some(2),
        }
    }

    pub fn vertices(&self) -> &[Pt] {
        match self {
            ConvexRegion::Polygon(v) => v,
            _ => &[],
        }
    }

    /// Extreme points as coordinate vectors, in either dimension.
    pub fn extreme_points(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexRegion::Empty => vec![],
            ConvexRegion::Interval { lo, hi } => {
                if lo == hi {
                    vec![vec![*lo]]
                } else {
                    vec![vec![*lo], vec![*hi]]
                }
            }
            ConvexRegion::Polygon(v) => v.iter().map(|p| p.to_vec()).collect(),
        }
    }

    /// Euclidean distance from `z` to the region; zero inside. Infinite for the empty
    /// region.
    pub fn distance(&self, z: &[f64]) -> f64 {
        match self {
            ConvexRegion::Empty => f64::INFINITY,
            ConvexRegion::Interval { lo, hi } => {
                let t = z[0];
                if t < *lo {
                    lo - t
                } else if t > *hi {
                    t - hi
                } else {
                    0.0
                }
            }
            ConvexRegion::Polygon(v) => polygon_distance(v, Pt::from_slice(z)),
        }
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        self.distance(z) <= tol
    }

    /// Whether `inner` lies inside `self`, up to `tol`.
    pub fn contains_region(&self, inner: &ConvexRegion, tol: f64) -> bool {
        match (self, inner) {
            (_, ConvexRegion::Empty) => true,
            (ConvexRegion::Empty, _) => false,
            (ConvexRegion::Interval { lo, hi }, ConvexRegion::Interval { lo: a, hi: b }) => {
                *a >= lo - tol && *b <= hi + tol
            }
            (ConvexRegion::Polygon(outer), ConvexRegion::Polygon(pts)) => pts
                .iter()
                .all(|&p| polygon_distance(outer, p) <= tol),
            _ => false,
        }
    }

    /// Image under `x -> s * x`.
    pub fn scaled(&self, s: f64) -> ConvexRegion {
        match self {
            ConvexRegion::Empty => ConvexRegion::Empty,
            ConvexRegion::Interval { lo, hi } => {
                let (a, b) = (lo * s, hi * s);
                ConvexRegion::Interval {
                    lo: a.min(b),
                    hi: a.max(b),
                }
            }
            // a negative factor is a half-turn in the plane, orientation is kept
            ConvexRegion::Polygon(v) => ConvexRegion::Polygon(v.iter().map(|&p| p * s).collect()),
        }
    }

    /// Image under an affine map of the plane, `x -> m x + b`.
    pub fn affine_image(&self, m: [[f64; 2]; 2], b: Pt, tol: f64) -> ConvexRegion {
        match self {
            ConvexRegion::Polygon(v) => {
                let w: Vec<Pt> = v
                    .iter()
                    .map(|p| {
                        Pt::new(
                            m[0][0] * p.x + m[0][1] * p.y + b.x,
                            m[1][0] * p.x + m[1][1] * p.y + b.y,
                        )
                    })
                    .collect();
                ConvexRegion::hull_of(&w, tol)
            }
            other => other.clone(),
        }
    }

    /// Strict convexity of the vertex ring: every turn is a left turn by more than
    /// `tol` (distance of each vertex from the chord of its neighbours). Points,
    /// segments and intervals are trivially convex.
    pub fn is_strictly_convex(&self, tol: f64) -> bool {
        match self {
            ConvexRegion::Polygon(v) if v.len() >= 3 => {
                let m = v.len();
                (0..m).all(|i| {
                    let prev = v[(i + m - 1) % m];
                    let next = v[(i + 1) % m];
                    orient(prev, v[i], next) > tol * (next - prev).norm()
                })
            }
            _ => true,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ConvexRegion::Polygon(v) if v.len() >= 3 => {
                let m = v.len();
                0.5 * (0..m).map(|i| v[i].cross(v[(i + 1) % m])).sum::<f64>()
            }
            _ => 0.0,
        }
    }

    /// Vertex average; inside the region for any convex polygon.
    pub fn vertex_centroid(&self) -> Option<Vec<f64>> {
        match self {
            ConvexRegion::Empty => None,
            ConvexRegion::Interval { lo, hi } => Some(vec![0.5 * (lo + hi)]),
            ConvexRegion::Polygon(v) => {
                let s = v.iter().fold(Pt::default(), |acc, &p| acc + p);
                Some((s * (1.0 / v.len() as f64)).to_vec())
            }
        }
    }

    /// Support function `max { p.x : x in region }`.
    pub fn support(&self, p: &[f64]) -> f64 {
        match self {
            ConvexRegion::Empty => f64::NEG_INFINITY,
            ConvexRegion::Interval { lo, hi } => (lo * p[0]).max(hi * p[0]),
            ConvexRegion::Polygon(v) => {
                let d = Pt::from_slice(p);
                v.iter().map(|q| q.dot(d)).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// Keeps the part of the region where `normal . x <= offset`.
    pub fn clip(&self, normal: Pt, offset: f64, tol: f64) -> ConvexRegion {
        match self {
            ConvexRegion::Polygon(v) => {
                let clipped = clip_ring(v, normal, offset, tol);
                if clipped.is_empty() {
                    ConvexRegion::Empty
                } else {
                    ConvexRegion::Polygon(cleanup_ring(clipped, tol))
                }
            }
            ConvexRegion::Interval { lo, hi } => {
                let (a, b) = (normal.x * lo - offset, normal.x * hi - offset);
                if a <= tol && b <= tol {
                    self.clone()
                } else if a > tol && b > tol {
                    ConvexRegion::Empty
                } else {
                    let cut = offset / normal.x;
                    if a <= tol {
                        ConvexRegion::interval(*lo, cut.max(*lo))
                    } else {
                        ConvexRegion::interval(cut.min(*hi), *hi)
                    }
                }
            }
            ConvexRegion::Empty => ConvexRegion::Empty,
        }
    }
}

fn polygon_distance(v: &[Pt], p: Pt) -> f64 {
    match v.len() {
        0 => f64::INFINITY,
        1 => (p - v[0]).norm(),
        2 => segment_distance(p, v[0], v[1]),
        m => {
            let inside = (0..m).all(|i| orient(v[i], v[(i + 1) % m], p) >= 0.0);
            if inside {
                0.0
            } else {
                (0..m)
                    .map(|i| segment_distance(p, v[i], v[(i + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Sutherland-Hodgman step against a single halfplane `normal . x <= offset + tol`.
fn clip_ring(v: &[Pt], normal: Pt, offset: f64, tol: f64) -> Vec<Pt> {
    let scale = normal.norm();
    let side = |p: Pt| (normal.dot(p) - offset) / scale;
    let m = v.len();
    if m == 1 {
        return if side(v[0]) <= tol { v.to_vec() } else { vec![] };
    }
    let mut out = Vec::with_capacity(m + 2);
    for i in 0..m {
        let a = v[i];
        let b = v[(i + 1) % m];
        let (sa, sb) = (side(a), side(b));
        let a_in = sa <= tol;
        let b_in = sb <= tol;
        if a_in {
            out.push(a);
        }
        if a_in != b_in && (sa - sb).abs() > 0.0 {
            let t = sa / (sa - sb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Exact Hausdorff distance between two convex regions of the same dimension.
///
/// For convex sets the distance function to one set is convex, so the maximal distance
/// from the other set is attained at one of its extreme points.
pub fn hausdorff_distance(a: &ConvexRegion, b: &ConvexRegion) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(DepthError::EmptyRegion);
    }
    if a.dim() != b.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: a.dim().unwrap_or(0),
            got: b.dim().unwrap_or(0),
        });
    }
    let one_way = |from: &ConvexRegion, to: &ConvexRegion| {
        from.extreme_points()
            .iter()
            .map(|p| to.distance(p))
            .fold(0.0_f64, f64::max)
    };
    Ok(one_way(a, b).max(one_way(b, a)))
}

/// Minkowski sum of two regions of the same dimension.
pub fn minkowski_sum(a: &ConvexRegion, b: &ConvexRegion, tol: f64) -> ConvexRegion {
    match (a, b) {
        (ConvexRegion::Interval { lo: a0, hi: a1 }, ConvexRegion::Interval { lo: b0, hi: b1 }) => {
            ConvexRegion::interval(a0 + b0, a1 + b1)
        }
        (ConvexRegion::Polygon(u), ConvexRegion::Polygon(v)) => {
            let sums: Vec<Pt> = u
                .iter()
                .flat_map(|&p| v.iter().map(move |&q| p + q))
                .collect();
            ConvexRegion::hull_of(&sums, tol)
        }
        _ => ConvexRegion::Empty,
    }
}

/// Whether `point` lies in `region ⊕ R^2_+` (`sign = 1`) or `region ⊕ R^2_-`
/// (`sign = -1`), i.e. some region point is componentwise below (above) it.
pub fn in_orthant_sum(region: &ConvexRegion, point: Pt, sign: f64, tol: f64) -> bool {
    let clipped = region
        .clip(Pt::new(sign, 0.0), sign * point.x, tol)
        .clip(Pt::new(0.0, sign), sign * point.y, tol);
    !clipped.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn square(x0: f64, y0: f64) -> ConvexRegion {
        ConvexRegion::hull_of(
            &[
                Pt::new(x0, y0),
                Pt::new(x0 + 1.0, y0),
                Pt::new(x0 + 1.0, y0 + 1.0),
                Pt::new(x0, y0 + 1.0),
            ],
            1e-12,
        )
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            Pt::new(0.0, 0.0),
            Pt::new(1.0, 0.0),
            Pt::new(2.0, 0.0),
            Pt::new(2.0, 2.0),
            Pt::new(0.0, 2.0),
            Pt::new(1.0, 1.0),
            Pt::new(0.0, 1.0),
        ];
        let h = convex_hull(&pts, 1e-12);
        assert_eq!(
            h,
            vec![
                Pt::new(0.0, 0.0),
                Pt::new(2.0, 0.0),
                Pt::new(2.0, 2.0),
                Pt::new(0.0, 2.0)
            ]
        );
        assert!(ConvexRegion::Polygon(h).is_strictly_convex(1e-12));
    }

    #[test]
    fn hull_of_collinear_and_coincident_points() {
        let seg = convex_hull(
            &[Pt::new(0.0, 0.0), Pt::new(1.0, 1.0), Pt::new(3.0, 3.0)],
            1e-12,
        );
        assert_eq!(seg, vec![Pt::new(0.0, 0.0), Pt::new(3.0, 3.0)]);
        let one = convex_hull(&[Pt::new(2.0, 1.0); 4], 1e-12);
        assert_eq!(one, vec![Pt::new(2.0, 1.0)]);
    }

    #[test]
    fn hausdorff_examples() {
        let a = square(0.0, 0.0);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let b = square(3.0, 4.0);
        assert_abs_diff_eq!(hausdorff_distance(&a, &b).unwrap(), 5.0, epsilon = 1e-12);
        let i1 = ConvexRegion::interval(0.0, 1.0);
        let i2 = ConvexRegion::interval(0.0, 2.0);
        assert_eq!(hausdorff_distance(&i1, &i2).unwrap(), 1.0);
        assert_eq!(
            hausdorff_distance(&ConvexRegion::Empty, &i1),
            Err(DepthError::EmptyRegion)
        );
    }

    #[test]
    fn hausdorff_point_to_polygon_uses_edges() {
        let a = square(0.0, 0.0);
        let p = ConvexRegion::Polygon(vec![Pt::new(0.5, 3.0)]);
        assert_abs_diff_eq!(hausdorff_distance(&a, &p).unwrap(), 3.0_f64.hypot(0.5), epsilon = 1e-12);
    }

    #[test]
    fn clipping_square() {
        let a = square(0.0, 0.0);
        let half = a.clip(Pt::new(1.0, 0.0), 0.5, 1e-12);
        assert_abs_diff_eq!(half.area(), 0.5, epsilon = 1e-12);
        assert!(a.clip(Pt::new(1.0, 0.0), -0.5, 1e-12).is_empty());
        let corner = a.clip(Pt::new(1.0, 1.0), 0.0, 1e-12);
        assert_eq!(corner.vertices(), &[Pt::new(0.0, 0.0)]);
    }

    #[test]
    fn minkowski_of_squares() {
        let s = minkowski_sum(&square(0.0, 0.0), &square(1.0, 1.0), 1e-12);
        assert_abs_diff_eq!(s.area(), 4.0, epsilon = 1e-12);
        assert_eq!(s.vertices().len(), 4);
    }

    #[test]
    fn orthant_sums() {
        let a = square(0.0, 0.0);
        assert!(in_orthant_sum(&a, Pt::new(5.0, 0.5), 1.0, 1e-12));
        assert!(!in_orthant_sum(&a, Pt::new(-0.1, 5.0), 1.0, 1e-12));
        assert!(in_orthant_sum(&a, Pt::new(-3.0, 0.2), -1.0, 1e-12));
    }

    #[test]
    fn containment() {
        let a = square(0.0, 0.0);
        let inner = ConvexRegion::Polygon(vec![Pt::new(0.2, 0.2), Pt::new(0.8, 0.5)]);
        assert!(a.contains_region(&inner, 0.0));
        assert!(!inner.contains_region(&a, 1e-9));
        assert!(a.contains(&[1.0, 1.0], 0.0));
        assert!(!a.contains(&[1.0 + 1e-6, 1.0], 1e-9));
    }
}
