//! Central regions `{z : D(z) >= alpha}` for every registered depth.
//!
//! WM, Tukey, Mahalanobis and projection regions are computed exactly (the ellipse as an
//! inscribed 128-gon, projection regions as intersections of the slabs of the direction
//! set). The remaining depths are evaluated on a regular grid over the padded bounding
//! box of the data: convex ones are returned as the convex hull of the grid points at
//! or above the level, simplicial regions as the pixel set with its boundary rings.

use rayon::prelude::*;

use crate::cloud::DataCloud;
use crate::combinatorial::tukey_region_2d;
use crate::error::{check_alpha, DepthError, Result};
use crate::geometry::{tolerance, ConvexRegion, Pt};
use crate::metric::{mahalanobis_region, ProjectionDepth};
use crate::registry::{DepthFunction, DepthKind, DepthOptions};
use crate::scatter::{MomentEstimator, ScatterEstimator};
use crate::wm::WmRegions;

/// Vertices of the polygonized Mahalanobis ellipse.
pub const ELLIPSE_VERTICES: usize = 128;

/// A regular grid of nodes over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Nodes per axis.
    pub nodes: usize,
}

impl GridSpec {
    /// `nodes` per axis over the bounding box padded by `padding` of its side lengths.
    pub fn around(cloud: &DataCloud, nodes: usize, padding: f64) -> Self {
        let (mut lo, mut hi) = cloud.bounding_box();
        let scale = cloud.scale();
        for (l, h) in lo.iter_mut().zip(hi.iter_mut()) {
            let w = if *h > *l { *h - *l } else { scale };
            *l -= padding * w;
            *h += padding * w;
        }
        Self {
            lo,
            hi,
            nodes: nodes.max(2),
        }
    }

    /// The default 256 nodes per axis with 10 % padding.
    pub fn default_for(cloud: &DataCloud) -> Self {
        Self::around(cloud, 256, 0.1)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn step(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.nodes - 1) as f64
    }

    fn coord(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + self.step(axis) * i as f64
    }

    /// Node `k` in row-major order (x fastest).
    pub fn node(&self, k: usize) -> Vec<f64> {
        match self.dim() {
            1 => vec![self.coord(0, k)],
            _ => vec![self.coord(0, k % self.nodes), self.coord(1, k / self.nodes)],
        }
    }
}

/// Depth values on the nodes of a grid.
#[derive(Debug, Clone)]
pub struct DepthGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl DepthGrid {
    /// Evaluates `depth` at every node, in parallel.
    pub fn evaluate(depth: &dyn DepthFunction, spec: GridSpec) -> Result<Self> {
        if !(1..=2).contains(&spec.dim()) {
            return Err(DepthError::DimensionMismatch {
                expected: 2,
                got: spec.dim(),
            });
        }
        let values = (0..spec.len())
            .into_par_iter()
            .map(|k| depth.depth(&spec.node(k)).map(|v| v.get()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { spec, values })
    }

    pub fn mask(&self, alpha: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v >= alpha).collect()
    }

    /// Convex hull of the nodes at or above `alpha`.
    pub fn hull(&self, alpha: f64) -> ConvexRegion {
        let inside: Vec<Vec<f64>> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= alpha)
            .map(|(k, _)| self.spec.node(k))
            .collect();
        if inside.is_empty() {
            return ConvexRegion::Empty;
        }
        if self.spec.dim() == 1 {
            let lo = inside.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = inside.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            return ConvexRegion::interval(lo, hi);
        }
        let pts: Vec<Pt> = inside.iter().map(|p| Pt::from_slice(p)).collect();
        ConvexRegion::hull_of(&pts, tolerance(self.spec.step(0).max(self.spec.step(1))))
    }

    /// Index of the deepest node, the first one on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = k;
            }
        }
        best
    }
}

/// A region given as a set of grid pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRegion {
    pub spec: GridSpec,
    pub mask: Vec<bool>,
    /// Node of maximal depth, the reference point for starshapedness.
    pub center: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GridRegion {
    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn contains_node(&self, k: usize) -> bool {
        self.mask[k]
    }

    /// Every lattice point on the segment from the center node to a region node is in
    /// the region.
    pub fn is_starshaped(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let w = self.spec.nodes;
        if !self.mask[self.center] {
            return false;
        }
        let (cx, cy) = ((self.center % w) as i64, (self.center / w) as i64);
        self.mask.iter().enumerate().filter(|(_, &m)| m).all(|(k, _)| {
            let (px, py) = ((k % w) as i64, (k / w) as i64);
            let (dx, dy) = (px - cx, py - cy);
            let g = gcd(dx.unsigned_abs() as usize, dy.unsigned_abs() as usize).max(1) as i64;
            (1..g).all(|s| {
                let x = cx + dx / g * s;
                let y = cy + dy / g * s;
                self.mask[(y * w as i64 + x) as usize]
            })
        })
    }

    /// Boundary rings of the pixel set, each closed ring counterclockwise for outer
    /// boundaries. Pixels are the squares of one grid step centred on the nodes.
    pub fn rings(&self) -> Vec<Vec<Pt>> {
        let w = self.spec.nodes;
        if self.spec.dim() != 2 {
            return Vec::new();
        }
        let inside = |x: i64, y: i64| {
            x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < w && self.mask[y as usize * w + x as usize]
        };
        // directed boundary edges between pixel corners, interior on the left
        let mut next: std::collections::HashMap<(i64, i64), Vec<(i64, i64)>> = Default::default();
        for k in 0..self.mask.len() {
            if !self.mask[k] {
                continue;
            }
            let (x, y) = ((k % w) as i64, (k / w) as i64);
            // corner (i, j) is the lower-left corner of pixel (i, j)
            if !inside(x, y - 1) {
                next.entry((x, y)).or_default().push((x + 1, y));
            }
            if !inside(x + 1, y) {
                next.entry((x + 1, y)).or_default().push((x + 1, y + 1));
            }
            if !inside(x, y + 1) {
                next.entry((x + 1, y + 1)).or_default().push((x, y + 1));
            }
            if !inside(x - 1, y) {
                next.entry((x, y + 1)).or_default().push((x, y));
            }
        }
        let (sx, sy) = (self.spec.step(0), self.spec.step(1));
        let to_pt = |(i, j): (i64, i64)| {
            Pt::new(
                self.spec.lo[0] + (i as f64 - 0.5) * sx,
                self.spec.lo[1] + (j as f64 - 0.5) * sy,
            )
        };
        let mut starts: Vec<(i64, i64)> = next.keys().copied().collect();
        starts.sort_unstable();
        let mut rings = Vec::new();
        for s in starts {
            while next.get(&s).is_some_and(|v| !v.is_empty()) {
                let mut ring = vec![s];
                let mut prev = s;
                let mut cur = next.get_mut(&s).unwrap().pop().unwrap();
                while cur != s {
                    let outs = next.get_mut(&cur).expect("boundary edges form cycles");
                    // at a pinch corner prefer the left turn so rings stay simple
                    let din = (cur.0 - prev.0, cur.1 - prev.1);
                    let pick = outs
                        .iter()
                        .position(|&o| din.0 * (o.1 - cur.1) - din.1 * (o.0 - cur.0) > 0)
                        .unwrap_or(0);
                    let nxt = outs.swap_remove(pick);
                    // drop collinear corners
                    let dout = (nxt.0 - cur.0, nxt.1 - cur.1);
                    if din != dout {
                        ring.push(cur);
                    }
                    prev = cur;
                    cur = nxt;
                }
                // the start corner may itself be collinear
                if ring.len() > 2 {
                    let first_out = (ring[1].0 - s.0, ring[1].1 - s.1);
                    let last_in = (s.0 - prev.0, s.1 - prev.1);
                    let same = first_out.0 * last_in.1 == first_out.1 * last_in.0
                        && first_out.0 * last_in.0 + first_out.1 * last_in.1 > 0;
                    if same {
                        ring.remove(0);
                    }
                }
                rings.push(ring.into_iter().map(to_pt).collect());
            }
        }
        rings
    }
}

/// A central region as produced by [`region_contour`].
#[derive(Debug, Clone, PartialEq)]
pub enum CentralRegion {
    Convex(ConvexRegion),
    Grid(GridRegion),
}

impl CentralRegion {
    pub fn is_empty(&self) -> bool {
        match self {
            CentralRegion::Convex(r) => r.is_empty(),
            CentralRegion::Grid(g) => g.is_empty(),
        }
    }

    pub fn as_convex(&self) -> Option<&ConvexRegion> {
        match self {
            CentralRegion::Convex(r) => Some(r),
            CentralRegion::Grid(_) => None,
        }
    }

    /// Closed outline rings, for drawing.
    pub fn rings(&self) -> Vec<Vec<Pt>> {
        match self {
            CentralRegion::Convex(ConvexRegion::Polygon(v)) => vec![v.clone()],
            CentralRegion::Convex(_) => Vec::new(),
            CentralRegion::Grid(g) => g.rings(),
        }
    }

    /// Whether `inner` is contained in `self`, with slack `tol` for convex regions.
    pub fn contains_region(&self, inner: &CentralRegion, tol: f64) -> bool {
        if inner.is_empty() {
            return true;
        }
        match (self, inner) {
            (CentralRegion::Convex(a), CentralRegion::Convex(b)) => a.contains_region(b, tol),
            (CentralRegion::Grid(a), CentralRegion::Grid(b)) if a.spec == b.spec => {
                a.mask.iter().zip(&b.mask).all(|(&o, &i)| o || !i)
            }
            _ => false,
        }
    }
}

fn bounding_square(cloud: &DataCloud, half: f64) -> ConvexRegion {
    let c = cloud.mean();
    if cloud.dim() == 1 {
        return ConvexRegion::interval(c[0] - half, c[0] + half);
    }
    ConvexRegion::Polygon(vec![
        Pt::new(c[0] - half, c[1] - half),
        Pt::new(c[0] + half, c[1] - half),
        Pt::new(c[0] + half, c[1] + half),
        Pt::new(c[0] - half, c[1] + half),
    ])
}

/// Univariate Tukey region: the interval between the `k`-th smallest and largest points.
fn tukey_interval(cloud: &DataCloud, alpha: f64) -> ConvexRegion {
    let n = cloud.len();
    let k = crate::wm::snapped_ceil(n, alpha).max(1);
    if 2 * k > n + 1 {
        return ConvexRegion::Empty;
    }
    let mut v = cloud.coords().to_vec();
    v.sort_by(f64::total_cmp);
    ConvexRegion::interval(v[k - 1], v[n - k])
}

/// Central regions of `kind` at every level in `alphas`, sharing per-cloud work.
pub fn region_contours(
    cloud: &DataCloud,
    kind: DepthKind,
    alphas: &[f64],
    options: &DepthOptions,
    grid: Option<GridSpec>,
) -> Result<Vec<(f64, CentralRegion)>> {
    for &a in alphas {
        check_alpha(a)?;
    }
    let d = cloud.dim();
    if d > 2 {
        return Err(DepthError::DimensionMismatch {
            expected: 2,
            got: d,
        });
    }
    let tol = tolerance(cloud.scale());
    let convex = |f: &(dyn Fn(f64) -> Result<ConvexRegion> + Sync)| -> Result<Vec<(f64, CentralRegion)>> {
        alphas
            .par_iter()
            .map(|&a| Ok((a, CentralRegion::Convex(f(a)?))))
            .collect()
    };
    match kind {
        DepthKind::Zonoid | DepthKind::EchStar | DepthKind::Geometric => {
            let wm = WmRegions::new(cloud, &kind.weight_scheme().unwrap())?;
            convex(&|a| wm.region(a))
        }
        DepthKind::Mahalanobis => {
            let s = MomentEstimator.estimate(cloud)?;
            convex(&|a| mahalanobis_region(&s, a, ELLIPSE_VERTICES))
        }
        DepthKind::Halfspace if d == 1 => convex(&|a| Ok(tukey_interval(cloud, a))),
        DepthKind::Halfspace => convex(&|a| tukey_region_2d(cloud, a)),
        DepthKind::Projection => {
            let p = ProjectionDepth::new(cloud, options.directions, options.seed)?;
            let bounds = bounding_square(cloud, 1e6 * cloud.scale());
            convex(&|a| p.region(a, bounds.clone(), tol))
        }
        _ => {
            let spec = grid.unwrap_or_else(|| GridSpec::default_for(cloud));
            let depth = kind.bind(cloud, options)?;
            let values = DepthGrid::evaluate(depth.as_ref(), spec)?;
            let center = values.argmax();
            Ok(alphas
                .iter()
                .map(|&a| {
                    let region = if kind.convex_regions() || d == 1 {
                        CentralRegion::Convex(values.hull(a))
                    } else {
                        CentralRegion::Grid(GridRegion {
                            spec: values.spec.clone(),
                            mask: values.mask(a),
                            center,
                        })
                    };
                    (a, region)
                })
                .collect())
        }
    }
}

/// The central region of `kind` at level `alpha`.
pub fn region_contour(
    cloud: &DataCloud,
    kind: DepthKind,
    alpha: f64,
    options: &DepthOptions,
) -> Result<CentralRegion> {
    let mut v = region_contours(cloud, kind, &[alpha], options, None)?;
    Ok(v.pop().expect("one level").1)
}

/// [`region_contour`] with the depth given by name.
pub fn region_contour_by_name(
    cloud: &DataCloud,
    depth_name: &str,
    alpha: f64,
    options: &DepthOptions,
) -> Result<CentralRegion> {
    region_contour(cloud, depth_name.parse()?, alpha, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small() -> DataCloud {
        DataCloud::new(vec![
            vec![0.0, 0.0],
            vec![4.0, 1.0],
            vec![1.0, 3.0],
            vec![2.5, 2.0],
            vec![-1.0, 1.5],
            vec![3.0, -1.0],
        ])
        .unwrap()
    }

    #[test]
    fn mahalanobis_at_one_is_the_mean() {
        let c = small();
        let r = region_contour(&c, DepthKind::Mahalanobis, 1.0, &DepthOptions::default()).unwrap();
        let v = r.as_convex().unwrap().vertices().to_vec();
        assert_eq!(v.len(), 1);
        let m = c.mean();
        assert_abs_diff_eq!(v[0].x, m[0], epsilon = 1e-12);
        assert_abs_diff_eq!(v[0].y, m[1], epsilon = 1e-12);
    }

    #[test]
    fn unknown_and_invalid() {
        let c = small();
        let o = DepthOptions::default();
        assert!(matches!(
            region_contour_by_name(&c, "band", 0.5, &o),
            Err(DepthError::UnknownDepth(_))
        ));
        assert_eq!(
            region_contour(&c, DepthKind::Zonoid, 1.5, &o),
            Err(DepthError::InvalidAlpha(1.5))
        );
    }

    #[test]
    fn pixel_rings_of_a_square_and_a_pinch() {
        let spec = GridSpec {
            lo: vec![0.0, 0.0],
            hi: vec![3.0, 3.0],
            nodes: 4,
        };
        let mut mask = vec![false; 16];
        for k in [5, 6, 9, 10] {
            mask[k] = true;
        }
        let g = GridRegion {
            spec: spec.clone(),
            mask,
            center: 5,
        };
        let rings = g.rings();
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].len(), 4);
        assert!(g.is_starshaped());
        // two pixels touching at a corner
        let mut mask = vec![false; 16];
        mask[5] = true;
        mask[10] = true;
        let g = GridRegion {
            spec,
            mask,
            center: 5,
        };
        assert_eq!(g.rings().len(), 2);
        assert!(g.rings().iter().all(|r| r.len() == 4));
    }

    #[test]
    fn starshapedness_detects_a_gap() {
        let spec = GridSpec {
            lo: vec![0.0, 0.0],
            hi: vec![4.0, 4.0],
            nodes: 5,
        };
        let mut mask = vec![false; 25];
        mask[0] = true;
        mask[2] = true;
        let g = GridRegion {
            spec,
            mask,
            center: 0,
        };
        assert!(!g.is_starshaped());
    }

    #[test]
    fn univariate_tukey_interval() {
        let c = DataCloud::univariate(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(tukey_interval(&c, 0.5), ConvexRegion::interval(1.0, 2.0));
        assert_eq!(tukey_interval(&c, 0.75), ConvexRegion::Empty);
        assert_eq!(tukey_interval(&c, 0.25), ConvexRegion::interval(0.0, 3.0));
    }
}
