//! Depth lifts, the dispersion order they induce, and the lift distance.
//!
//! The lift of a distribution stacks its central regions, the region at level `alpha`
//! scaled by `alpha`. It is stored on a finite level grid. One distribution is less
//! dispersed than another when each of its central regions is contained in the
//! other's; the distance of two lifts is the largest Hausdorff distance between
//! corresponding slices.

use crate::cloud::DataCloud;
use crate::error::{check_alpha, DepthError, Result};
use crate::geometry::{hausdorff_distance, tolerance, ConvexRegion};
use crate::registry::{DepthKind, DepthOptions};
use crate::regions::region_contours;

#[derive(Debug, Clone, PartialEq)]
pub struct DepthLift {
    pub kind: DepthKind,
    /// Content hash of the source cloud.
    pub cloud_hash: u64,
    pub alphas: Vec<f64>,
    /// `alpha * D_alpha` for each level.
    pub slices: Vec<ConvexRegion>,
    /// Coordinate scale of the source cloud, for tolerances.
    scale: f64,
}

impl DepthLift {
    pub fn slice(&self, alpha: f64) -> Option<&ConvexRegion> {
        self.alphas
            .iter()
            .position(|&a| a == alpha)
            .map(|k| &self.slices[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &ConvexRegion)> {
        self.alphas.iter().copied().zip(&self.slices)
    }
}

/// The lift of `cloud` under a depth whose maximal value is 1.
///
/// Depths with a smaller maximal value (halfspace, simplicial, the distance based
/// depths) are rejected instead of being silently renormalized.
pub fn depth_lift(
    cloud: &DataCloud,
    kind: DepthKind,
    alphas: &[f64],
    options: &DepthOptions,
) -> Result<DepthLift> {
    if !kind.reaches_one() {
        return Err(DepthError::Unsupported(format!(
            "the {kind} depth does not attain 1; lifts need regions at every level up to 1"
        )));
    }
    if alphas.is_empty() {
        return Err(DepthError::InvalidData("empty level grid".into()));
    }
    for w in alphas.windows(2) {
        if w[0] >= w[1] {
            return Err(DepthError::InvalidData(
                "level grid must be strictly ascending".into(),
            ));
        }
    }
    for &a in alphas {
        check_alpha(a)?;
    }
    let regions = region_contours(cloud, kind, alphas, options, None)?;
    let tol = tolerance(cloud.scale());
    let mut slices = Vec::with_capacity(regions.len());
    for (k, (alpha, region)) in regions.iter().enumerate() {
        let region = region
            .as_convex()
            .ok_or_else(|| DepthError::Unsupported(format!("{kind} regions are not convex")))?;
        if k > 0 {
            let (lower, outer) = &regions[k - 1];
            let outer = outer.as_convex().expect("checked above");
            if !outer.contains_region(region, tol) {
                return Err(DepthError::NestingViolation {
                    lower: *lower,
                    upper: *alpha,
                });
            }
        }
        slices.push(region.scaled(*alpha));
    }
    Ok(DepthLift {
        kind,
        cloud_hash: cloud.content_hash(),
        alphas: alphas.to_vec(),
        slices,
        scale: cloud.scale(),
    })
}

fn same_grid(p: &DepthLift, q: &DepthLift) -> Result<()> {
    if p.kind != q.kind || p.alphas != q.alphas {
        return Err(DepthError::GridMismatch);
    }
    Ok(())
}

/// Whether `p` is less dispersed than `q`: every slice of `p` lies in the slice of `q`.
pub fn depth_order_leq(p: &DepthLift, q: &DepthLift) -> Result<bool> {
    same_grid(p, q)?;
    let tol = tolerance(p.scale.max(q.scale));
    Ok(p.slices
        .iter()
        .zip(&q.slices)
        .all(|(a, b)| b.contains_region(a, tol)))
}

/// Largest Hausdorff distance between corresponding slices.
pub fn depth_semimetric(p: &DepthLift, q: &DepthLift) -> Result<f64> {
    same_grid(p, q)?;
    let mut worst = 0.0_f64;
    for (a, b) in p.slices.iter().zip(&q.slices) {
        worst = worst.max(hausdorff_distance(a, b)?);
    }
    Ok(worst)
}
