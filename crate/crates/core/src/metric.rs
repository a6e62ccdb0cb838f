//! Depths based on distances and volumes: L2, affine invariant L2, generalized
//! Mahalanobis, projection and Oja depth.

use itertools::Itertools;

use crate::cloud::{dot, DataCloud, DepthValue};
use crate::directions::gaussian_vectors;
use crate::error::{DepthError, Result};
use crate::geometry::{ConvexRegion, Pt};
use crate::scatter::{Scatter, ScatterEstimator};

/// Largest number of subsets an enumeration-based depth will visit.
pub const ENUMERATION_CAP: u128 = 2_000_000;

fn inverse_one_plus(x: f64) -> DepthValue {
    DepthValue::clamped(1.0 / (1.0 + x))
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `(1 + mean_i |z - x_i|)^{-1}` with the Euclidean norm.
pub fn l2_depth(z: &[f64], cloud: &DataCloud) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let mean_dist = cloud.points().map(|x| euclid(z, x)).sum::<f64>() / cloud.len() as f64;
    Ok(inverse_one_plus(mean_dist))
}

/// L2 depth with distances measured in the norm of the estimated scatter matrix.
pub fn affine_invariant_l2_depth(
    z: &[f64],
    cloud: &DataCloud,
    est: &dyn ScatterEstimator,
) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let s = est.estimate(cloud)?;
    let wz = s.whiten(z);
    let mean_dist = cloud
        .points()
        .map(|x| euclid(&wz, &s.whiten(x)))
        .sum::<f64>()
        / cloud.len() as f64;
    Ok(inverse_one_plus(mean_dist))
}

/// `(1 + |z - c|_S^2)^{-1}` for the estimated center `c` and scatter `S`.
pub fn mahalanobis_depth(
    z: &[f64],
    cloud: &DataCloud,
    est: &dyn ScatterEstimator,
) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let s = est.estimate(cloud)?;
    Ok(mahalanobis_from_scatter(z, &s))
}

pub(crate) fn mahalanobis_from_scatter(z: &[f64], s: &Scatter) -> DepthValue {
    let w = s.whiten(z);
    inverse_one_plus(w.iter().map(|v| v * v).sum())
}

/// Mahalanobis central region `{z : |z - c|_S^2 <= 1/alpha - 1}`. In the plane the
/// ellipse is replaced by the inscribed polygon with `vertices` equally spaced
/// parameter angles.
pub fn mahalanobis_region(s: &Scatter, alpha: f64, vertices: usize) -> Result<ConvexRegion> {
    crate::error::check_alpha(alpha)?;
    let r = (1.0 / alpha - 1.0).max(0.0).sqrt();
    let c = s.center();
    match c.len() {
        1 => {
            let half = r * s.matrix()[(0, 0)].sqrt();
            Ok(ConvexRegion::interval(c[0] - half, c[0] + half))
        }
        2 => {
            let centre = Pt::new(c[0], c[1]);
            if r == 0.0 {
                return Ok(ConvexRegion::Polygon(vec![centre]));
            }
            let l = s.cholesky_factor();
            let pts: Vec<Pt> = (0..vertices)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / vertices as f64;
                    let (u, v) = (r * t.cos(), r * t.sin());
                    Pt::new(
                        c[0] + l[(0, 0)] * u,
                        c[1] + l[(1, 0)] * u + l[(1, 1)] * v,
                    )
                })
                .collect();
            // the map u -> L u preserves orientation because L has a positive diagonal
            Ok(ConvexRegion::Polygon(pts))
        }
        d => Err(DepthError::DimensionMismatch {
            expected: 2,
            got: d,
        }),
    }
}

/// Median with the midpoint convention for even sizes. Reorders `v`.
pub fn median(v: &mut [f64]) -> f64 {
    let n = v.len();
    assert!(n > 0, "median of empty slice");
    let (_, hi, _) = v.select_nth_unstable_by(n / 2, f64::total_cmp);
    let hi = *hi;
    if n % 2 == 1 {
        hi
    } else {
        let lo = v[..n / 2].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

/// Median and median absolute deviation from the median.
pub fn median_mad(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    let med = median(&mut v);
    let mut dev: Vec<f64> = values.iter().map(|x| (x - med).abs()).collect();
    (med, median(&mut dev))
}

/// One projection used by [`ProjectionDepth`]: the functional `x -> normal . x` with the
/// median and MAD of the projected data.
#[derive(Debug, Clone)]
pub struct ProjectionSlab {
    pub normal: Vec<f64>,
    pub median: f64,
    pub mad: f64,
}

/// Projection depth of a fixed cloud.
///
/// In one dimension the single projection is exact. In higher dimension the supremum
/// over the sphere is replaced by a maximum over a finite direction set built in
/// moment-whitened coordinates: all normalized pairwise differences of the whitened
/// points, plus `budget` random directions `sum_i g_i y_i` with standard normal `g`.
/// Whitened data have identity covariance, so the random directions are isotropic;
/// both parts transform with the data under affine maps, which keeps the approximation
/// exactly affine invariant. The value is an upper bound on the true depth and does not
/// increase with the budget.
#[derive(Debug, Clone)]
pub struct ProjectionDepth {
    slabs: Vec<ProjectionSlab>,
}

impl ProjectionDepth {
    pub fn new(cloud: &DataCloud, budget: usize, seed: u64) -> Result<Self> {
        let d = cloud.dim();
        if d == 1 {
            let (median, mad) = median_mad(cloud.coords());
            if mad <= 0.0 {
                return Err(DepthError::ZeroMad);
            }
            return Ok(Self {
                slabs: vec![ProjectionSlab {
                    normal: vec![1.0],
                    median,
                    mad,
                }],
            });
        }
        let s = crate::scatter::MomentEstimator.estimate(cloud)?;
        let white: Vec<Vec<f64>> = cloud.points().map(|x| s.whiten(x)).collect();
        let n = white.len();

        let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(n * (n - 1) / 2 + budget);
        for (a, b) in white.iter().tuple_combinations() {
            let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if let Some(u) = normalized(diff) {
                dirs.push(u);
            }
        }
        for g in gaussian_vectors(n, budget.max(1), seed) {
            let mut p = vec![0.0; d];
            for (gi, y) in g.iter().zip(&white) {
                for k in 0..d {
                    p[k] += gi * y[k];
                }
            }
            if let Some(u) = normalized(p) {
                dirs.push(u);
            }
        }

        // a whitened direction p acts on original points as a = L^{-T} p
        let l = s.cholesky_factor();
        let centre = s.center();
        let mut slabs = Vec::with_capacity(dirs.len());
        let mut proj = vec![0.0; n];
        for p in dirs {
            for (v, y) in proj.iter_mut().zip(&white) {
                *v = dot(&p, y);
            }
            let (med, mad) = median_mad(&proj);
            let spread = proj.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if mad <= 1e-12 * spread.max(1e-300) {
                return Err(DepthError::ZeroMad);
            }
            let mut a = vec![0.0; d];
            for i in (0..d).rev() {
                let mut acc = p[i];
                for k in i + 1..d {
                    acc -= l[(k, i)] * a[k];
                }
                a[i] = acc / l[(i, i)];
            }
            let shift = dot(&a, centre);
            slabs.push(ProjectionSlab {
                normal: a,
                median: med + shift,
                mad,
            });
        }
        Ok(Self { slabs })
    }

    pub fn slabs(&self) -> &[ProjectionSlab] {
        &self.slabs
    }

    pub fn outlyingness(&self, z: &[f64]) -> f64 {
        self.slabs
            .iter()
            .map(|s| (dot(&s.normal, z) - s.median).abs() / s.mad)
            .fold(0.0, f64::max)
    }

    pub fn depth(&self, z: &[f64]) -> DepthValue {
        inverse_one_plus(self.outlyingness(z))
    }

    /// `{z : depth(z) >= alpha}` as an intersection of slabs, starting from `bounds`.
    pub fn region(&self, alpha: f64, bounds: ConvexRegion, tol: f64) -> Result<ConvexRegion> {
        crate::error::check_alpha(alpha)?;
        let r = 1.0 / alpha - 1.0;
        let mut region = bounds;
        for s in &self.slabs {
            let width = s.mad * r;
            let normal = match s.normal.len() {
                1 => Pt::new(s.normal[0], 0.0),
                _ => Pt::new(s.normal[0], s.normal[1]),
            };
            region = region.clip(normal, s.median + width, tol);
            region = region.clip(-normal, -(s.median - width), tol);
            if region.is_empty() {
                break;
            }
        }
        Ok(region)
    }
}

fn normalized(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 1e-300 {
        v.iter_mut().for_each(|x| *x /= n);
        Some(v)
    } else {
        None
    }
}

/// Projection depth `(1 + sup_p |p'z - med(p'X)| / MAD(p'X))^{-1}`; see
/// [`ProjectionDepth`] for the direction set used when `d >= 2`.
pub fn projection_depth(
    z: &[f64],
    cloud: &DataCloud,
    direction_budget: usize,
    seed: u64,
) -> Result<DepthValue> {
    cloud.check_point(z)?;
    Ok(ProjectionDepth::new(cloud, direction_budget, seed)?.depth(z))
}

/// Number of `k`-subsets of an `n`-set.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn abs_det(rows: &[&[f64]], z: &[f64]) -> f64 {
    let d = z.len();
    match d {
        1 => (rows[0][0] - z[0]).abs(),
        2 => {
            let (a, b) = (rows[0], rows[1]);
            ((a[0] - z[0]) * (b[1] - z[1]) - (a[1] - z[1]) * (b[0] - z[0])).abs()
        }
        _ => {
            let m = nalgebra::DMatrix::from_fn(d, d, |i, j| rows[i][j] - z[j]);
            m.determinant().abs()
        }
    }
}

/// Oja depth `(1 + E V_d(co{z, X_1..X_d}) / sqrt(det S))^{-1}` where `X_1..X_d` are
/// independent draws from the empirical distribution. Tuples with a repeated index
/// span no volume, so the expectation is the sum over `d`-subsets of
/// `|det(x_i1 - z, .., x_id - z)|` divided by `n^d`.
pub fn oja_depth(z: &[f64], cloud: &DataCloud, est: &dyn ScatterEstimator) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let (n, d) = (cloud.len(), cloud.dim());
    if n < d {
        return Err(DepthError::InvalidData(format!(
            "Oja depth needs at least {d} points"
        )));
    }
    let count = binomial(n, d);
    if count > ENUMERATION_CAP {
        return Err(DepthError::TooLarge {
            count,
            cap: ENUMERATION_CAP,
        });
    }
    let s = est.estimate(cloud)?;
    let total: f64 = (0..n)
        .combinations(d)
        .map(|idx| {
            let rows: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i)).collect();
            abs_det(&rows, z)
        })
        .sum();
    let mean_volume = total / (n as f64).powi(d as i32);
    Ok(inverse_one_plus(mean_volume / s.determinant().sqrt()))
}

/// Spatial median by Weiszfeld iteration: the maximizer of the L2 depth.
pub fn spatial_median(cloud: &DataCloud) -> Vec<f64> {
    let d = cloud.dim();
    let mut m = cloud.mean();
    let tol = 1e-14 * cloud.scale();
    for _ in 0..10_000 {
        let mut num = vec![0.0; d];
        let mut den = 0.0;
        let mut at_point = false;
        for x in cloud.points() {
            let dist = euclid(&m, x);
            if dist <= tol {
                at_point = true;
                continue;
            }
            for k in 0..d {
                num[k] += x[k] / dist;
            }
            den += 1.0 / dist;
        }
        if den == 0.0 {
            break;
        }
        let next: Vec<f64> = num.iter().map(|v| v / den).collect();
        let step = euclid(&next, &m);
        if at_point {
            // stay on the data point when it is optimal
            let cand_val: f64 = cloud.points().map(|x| euclid(&next, x)).sum();
            let cur_val: f64 = cloud.points().map(|x| euclid(&m, x)).sum();
            if cand_val >= cur_val {
                break;
            }
        }
        m = next;
        if step <= tol {
            break;
        }
    }
    m
}
