//! Outlyingness and depth from a nested family of central regions.

use crate::cloud::DepthValue;
use crate::error::{DepthError, Result};
use crate::geometry::{ConvexRegion, REL_TOL};

/// `1/D - 1`: zero at a point of depth one, infinite at depth zero.
pub fn outlyingness(depth: DepthValue) -> f64 {
    let d = depth.get();
    if d == 0.0 {
        f64::INFINITY
    } else {
        1.0 / d - 1.0
    }
}

/// Inverse of [`outlyingness`]: `(1 + out)^-1`.
pub fn depth_from_outlyingness(out: f64) -> DepthValue {
    DepthValue::clamped(1.0 / (1.0 + out))
}

/// The default level grid `{0.01 k : k = 1..100}`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=100).map(|k| k as f64 / 100.0).collect()
}

fn region_scale(r: &ConvexRegion) -> f64 {
    r.extreme_points()
        .iter()
        .flatten()
        .fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// Depth of `z` as the largest grid level whose region contains it, 0 if none does.
///
/// `regions` must be sorted by ascending level and nested; consecutive regions are
/// checked for containment and a violation is reported rather than ignored.
pub fn depth_from_regions(z: &[f64], regions: &[(f64, ConvexRegion)]) -> Result<DepthValue> {
    for pair in regions.windows(2) {
        let ((a, outer), (b, inner)) = (&pair[0], &pair[1]);
        if a > b {
            return Err(DepthError::InvalidData("level grid is not ascending".into()));
        }
        let tol = REL_TOL * region_scale(outer).max(region_scale(inner));
        if !inner.is_empty() && !outer.contains_region(inner, tol) {
            return Err(DepthError::NestingViolation {
                lower: *a,
                upper: *b,
            });
        }
    }
    let mut best = 0.0;
    for (alpha, region) in regions {
        let tol = REL_TOL * region_scale(region);
        if region.contains(z, tol) {
            best = *alpha;
        } else {
            break;
        }
    }
    Ok(DepthValue::clamped(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::DataCloud;
    use crate::wm::{wm_region, WeightScheme};

    #[test]
    fn outlyingness_values() {
        assert_eq!(outlyingness(DepthValue::ONE), 0.0);
        assert_eq!(outlyingness(DepthValue::clamped(0.5)), 1.0);
        assert_eq!(outlyingness(DepthValue::ZERO), f64::INFINITY);
        assert_eq!(depth_from_outlyingness(f64::INFINITY).get(), 0.0);
    }

    #[test]
    fn zonoid_ladder() {
        let c = DataCloud::univariate(&[0.0, 1.0]).unwrap();
        let regions: Vec<_> = [0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&a| (a, wm_region(&c, &WeightScheme::Zonoid, a).unwrap()))
            .collect();
        assert_eq!(depth_from_regions(&[0.75], &regions).unwrap().get(), 0.5);
        assert_eq!(depth_from_regions(&[0.5], &regions).unwrap().get(), 1.0);
        assert_eq!(depth_from_regions(&[2.0], &regions).unwrap().get(), 0.0);
    }

    #[test]
    fn nesting_violation() {
        let regions = vec![
            (0.3, ConvexRegion::interval(0.0, 1.0)),
            (0.6, ConvexRegion::interval(0.5, 2.0)),
        ];
        assert_eq!(
            depth_from_regions(&[0.7], &regions),
            Err(DepthError::NestingViolation {
                lower: 0.3,
                upper: 0.6
            })
        );
    }
}
