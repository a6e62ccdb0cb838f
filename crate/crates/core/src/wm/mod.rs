//! Weighted-mean (WM) depths and central regions.
//!
//! The WM region at level `alpha` is the convex body whose support function in
//! direction `p` is `sum_j w(j, alpha) p'x_(j)`, where `x_(1), .., x_(n)` are the data
//! ordered by their projections on `p`. Zonoid, ECH* and geometric depth differ only in
//! the weights, see [`WeightScheme`].

mod sequence;
mod weights;
mod zonoid;

pub use sequence::CircularSequence;
pub use weights::{validate_weight_scheme, CustomWeights, Restriction, WeightCheck, WeightScheme};
pub use zonoid::zonoid_depth;

use crate::cloud::{dot, DataCloud, DepthValue};
use crate::error::{check_alpha, DepthError, Result};
use crate::geometry::{tolerance, ConvexRegion, Pt};

/// `ceil(n alpha)` with round-off next to an integer removed.
pub(crate) fn snapped_ceil(n: usize, alpha: f64) -> usize {
    weights::snapped_product(n, alpha).ceil() as usize
}

/// Bisection tolerance on alpha for [`wm_depth`].
pub const BISECTION_TOL: f64 = 1e-6;

/// Indices of the cloud sorted by projection on `p`, ties by index.
pub(crate) fn projection_order(cloud: &DataCloud, p: &[f64]) -> Vec<usize> {
    let proj = cloud.project(p);
    let mut order: Vec<usize> = (0..cloud.len()).collect();
    order.sort_by(|&a, &b| proj[a].total_cmp(&proj[b]).then(a.cmp(&b)));
    order
}

/// Support function `h(p) = sum_j w(j, alpha) p'x_(pi_p(j))` of the WM region.
pub fn wm_support_function(
    cloud: &DataCloud,
    scheme: &WeightScheme,
    alpha: f64,
    p: &[f64],
) -> Result<f64> {
    cloud.check_point(p)?;
    let norm = dot(p, p).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(DepthError::InvalidData(format!(
            "direction must have unit length, has {norm}"
        )));
    }
    let w = scheme.weights(cloud.len(), alpha)?;
    let proj = cloud.project(p);
    let order = projection_order(cloud, p);
    Ok(order.iter().zip(&w).map(|(&i, wj)| wj * proj[i]).sum())
}

/// WM region of a univariate cloud: `[-h(-1), h(1)]`.
fn wm_interval(cloud: &DataCloud, w: &[f64]) -> ConvexRegion {
    let mut v = cloud.coords().to_vec();
    v.sort_by(f64::total_cmp);
    let hi: f64 = v.iter().zip(w).map(|(x, wj)| x * wj).sum();
    let lo: f64 = v.iter().rev().zip(w).map(|(x, wj)| x * wj).sum();
    ConvexRegion::interval(lo.min(hi), hi.max(lo))
}

/// Exact WM region of a bivariate cloud at level `alpha`.
pub fn wm_region_2d(cloud: &DataCloud, scheme: &WeightScheme, alpha: f64) -> Result<ConvexRegion> {
    cloud.require_dim(2)?;
    check_alpha(alpha)?;
    CircularSequence::new(cloud).region(scheme, alpha)
}

/// WM region for `d = 1` (interval) or `d = 2` (polygon).
pub fn wm_region(cloud: &DataCloud, scheme: &WeightScheme, alpha: f64) -> Result<ConvexRegion> {
    match cloud.dim() {
        1 => Ok(wm_interval(cloud, &scheme.weights(cloud.len(), alpha)?)),
        2 => wm_region_2d(cloud, scheme, alpha),
        d => Err(DepthError::DimensionMismatch {
            expected: 2,
            got: d,
        }),
    }
}

/// Region evaluator for a fixed cloud; the circular sequence is built once.
#[derive(Debug, Clone)]
pub struct WmRegions {
    cloud: DataCloud,
    scheme: WeightScheme,
    sequence: Option<CircularSequence>,
}

impl WmRegions {
    pub fn new(cloud: &DataCloud, scheme: &WeightScheme) -> Result<Self> {
        let sequence = match cloud.dim() {
            1 => None,
            2 => Some(CircularSequence::new(cloud)),
            d => {
                return Err(DepthError::DimensionMismatch {
                    expected: 2,
                    got: d,
                })
            }
        };
        Ok(Self {
            cloud: cloud.clone(),
            scheme: scheme.clone(),
            sequence,
        })
    }

    pub fn region(&self, alpha: f64) -> Result<ConvexRegion> {
        match &self.sequence {
            None => Ok(wm_interval(&self.cloud, &self.scheme.weights(self.cloud.len(), alpha)?)),
            Some(seq) => seq.region(&self.scheme, alpha),
        }
    }

    /// WM depth by bisection on alpha with exact region membership.
    pub fn depth(&self, z: &[f64]) -> Result<DepthValue> {
        self.cloud.check_point(z)?;
        let tol = tolerance(self.cloud.scale());
        let hull = data_hull(&self.cloud);
        if !hull.contains(z, tol) {
            return Ok(DepthValue::ZERO);
        }
        if self.region(1.0)?.contains(z, tol) {
            return Ok(DepthValue::ONE);
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.region(mid)?.contains(z, tol) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(DepthValue::clamped(0.5 * (lo + hi)))
    }
}

/// Convex hull of the data, in `d = 1` or `d = 2`.
pub fn data_hull(cloud: &DataCloud) -> ConvexRegion {
    let tol = tolerance(cloud.scale());
    match cloud.dim() {
        1 => {
            let (lo, hi) = cloud.bounding_box();
            ConvexRegion::interval(lo[0], hi[0])
        }
        _ => {
            let pts: Vec<Pt> = cloud.points().map(Pt::from_slice).collect();
            ConvexRegion::hull_of(&pts, tol)
        }
    }
}

/// WM depth `sup { alpha : z in D_alpha }` for `d <= 2`, by bisection to
/// [`BISECTION_TOL`]. Zero outside the convex hull of the data.
pub fn wm_depth(z: &[f64], cloud: &DataCloud, scheme: &WeightScheme) -> Result<DepthValue> {
    WmRegions::new(cloud, scheme)?.depth(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_point() -> DataCloud {
        DataCloud::univariate(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn support_function_examples() {
        let c = two_point();
        let h = |p: f64| wm_support_function(&c, &WeightScheme::EchStar, 0.5, &[p]).unwrap();
        assert_abs_diff_eq!(h(1.0), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(h(-1.0), -0.25, epsilon = 1e-15);
        assert_eq!(
            wm_region(&c, &WeightScheme::EchStar, 0.5).unwrap(),
            ConvexRegion::interval(0.25, 0.75)
        );
        let c2 = DataCloud::new(vec![vec![0.0, 0.0], vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let m = c2.mean();
        let p = [0.6, 0.8];
        assert_abs_diff_eq!(
            wm_support_function(&c2, &WeightScheme::Zonoid, 1.0, &p).unwrap(),
            dot(&p, &m),
            epsilon = 1e-14
        );
        assert!(wm_support_function(&c2, &WeightScheme::Zonoid, 1.0, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn support_function_ignores_tie_breaking() {
        // points 0 and 1 tie on p = (0, 1); swapping their storage order changes pi_p
        let a = DataCloud::new(vec![vec![0.0, 1.0], vec![3.0, 1.0], vec![1.0, -2.0]]).unwrap();
        let b = DataCloud::new(vec![vec![3.0, 1.0], vec![0.0, 1.0], vec![1.0, -2.0]]).unwrap();
        for scheme in [WeightScheme::Zonoid, WeightScheme::EchStar, WeightScheme::Geometric] {
            let ha = wm_support_function(&a, &scheme, 0.4, &[0.0, 1.0]).unwrap();
            let hb = wm_support_function(&b, &scheme, 0.4, &[0.0, 1.0]).unwrap();
            assert_abs_diff_eq!(ha, hb, epsilon = 1e-15);
        }
    }

    #[test]
    fn univariate_zonoid_depth_by_bisection() {
        let c = two_point();
        let d = wm_depth(&[0.75], &c, &WeightScheme::Zonoid).unwrap().get();
        assert_abs_diff_eq!(d, 2.0 / 3.0, epsilon = 1e-6);
        assert_eq!(wm_depth(&[0.5], &c, &WeightScheme::Zonoid).unwrap().get(), 1.0);
        assert_eq!(wm_depth(&[1.5], &c, &WeightScheme::Zonoid).unwrap().get(), 0.0);
    }

    #[test]
    fn wm_depth_rejects_high_dimension() {
        let c = DataCloud::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            wm_depth(&[0.0, 0.0, 0.0], &c, &WeightScheme::Zonoid),
            Err(DepthError::DimensionMismatch { .. })
        ));
    }
}
