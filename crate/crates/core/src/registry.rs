//! Named access to every implemented multivariate depth.

use std::fmt;
use std::str::FromStr;

use crate::cloud::{DataCloud, DepthValue};
use crate::combinatorial::{halfspace_depth, random_tukey_depth, simplicial_depth};
use crate::directions::DirectionBudget;
use crate::error::{DepthError, Result};
use crate::metric::{
    affine_invariant_l2_depth, l2_depth, mahalanobis_from_scatter, oja_depth, ProjectionDepth,
};
use crate::scatter::{MomentEstimator, Scatter, ScatterEstimator};
use crate::wm::{zonoid_depth, WeightScheme, WmRegions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthKind {
    Mahalanobis,
    L2,
    AffineL2,
    Projection,
    Oja,
    Zonoid,
    EchStar,
    Geometric,
    Halfspace,
    RandomTukey,
    Simplicial,
}

/// The transformation group a depth is invariant under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    /// Invertible affine maps.
    Affine,
    /// Rigid motions.
    Isometric,
    /// Translations and positive scalings.
    Scale,
}

impl DepthKind {
    pub const ALL: [DepthKind; 11] = [
        DepthKind::Mahalanobis,
        DepthKind::L2,
        DepthKind::AffineL2,
        DepthKind::Projection,
        DepthKind::Oja,
        DepthKind::Zonoid,
        DepthKind::EchStar,
        DepthKind::Geometric,
        DepthKind::Halfspace,
        DepthKind::RandomTukey,
        DepthKind::Simplicial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DepthKind::Mahalanobis => "mahalanobis",
            DepthKind::L2 => "l2",
            DepthKind::AffineL2 => "affine-l2",
            DepthKind::Projection => "projection",
            DepthKind::Oja => "oja",
            DepthKind::Zonoid => "zonoid",
            DepthKind::EchStar => "echstar",
            DepthKind::Geometric => "geometric",
            DepthKind::Halfspace => "halfspace",
            DepthKind::RandomTukey => "random-tukey",
            DepthKind::Simplicial => "simplicial",
        }
    }

    /// The invariance the depth is declared to have.
    pub fn invariance(self) -> Invariance {
        match self {
            DepthKind::L2 => Invariance::Isometric,
            // projections on fixed random directions do not follow a rotation
            DepthKind::RandomTukey => Invariance::Scale,
            _ => Invariance::Affine,
        }
    }

    /// Whether the depth is a proper depth function (D1-D5 in its invariance variant).
    /// The random Tukey depth is only a randomized upper bound of one.
    pub fn satisfies_postulates(self) -> bool {
        self != DepthKind::RandomTukey
    }

    /// Whether the upper level sets are convex. Simplicial regions are only starshaped.
    pub fn convex_regions(self) -> bool {
        self != DepthKind::Simplicial
    }

    /// Whether the depth attains 1 on every cloud, so its regions at level 1 are
    /// nonempty.
    pub fn reaches_one(self) -> bool {
        matches!(
            self,
            DepthKind::Mahalanobis | DepthKind::Zonoid | DepthKind::EchStar | DepthKind::Geometric
        )
    }

    pub fn weight_scheme(self) -> Option<WeightScheme> {
        match self {
            DepthKind::Zonoid => Some(WeightScheme::Zonoid),
            DepthKind::EchStar => Some(WeightScheme::EchStar),
            DepthKind::Geometric => Some(WeightScheme::Geometric),
            _ => None,
        }
    }

    /// Prepares an evaluator for `cloud`, doing per-cloud work once.
    pub fn bind(self, cloud: &DataCloud, options: &DepthOptions) -> Result<Box<dyn DepthFunction>> {
        let cloud = cloud.clone();
        Ok(match self {
            DepthKind::Mahalanobis => {
                let s = MomentEstimator.estimate(&cloud)?;
                Box::new(move |z: &[f64]| -> Result<DepthValue> {
                    check_len(z, s.center().len())?;
                    Ok(mahalanobis_from_scatter(z, &s))
                })
            }
            DepthKind::L2 => Box::new(move |z: &[f64]| l2_depth(z, &cloud)),
            DepthKind::AffineL2 => {
                MomentEstimator.estimate(&cloud)?;
                Box::new(move |z: &[f64]| affine_invariant_l2_depth(z, &cloud, &MomentEstimator))
            }
            DepthKind::Projection => {
                let p = ProjectionDepth::new(&cloud, options.directions, options.seed)?;
                let d = cloud.dim();
                Box::new(move |z: &[f64]| -> Result<DepthValue> {
                    check_len(z, d)?;
                    Ok(p.depth(z))
                })
            }
            DepthKind::Oja => {
                let s: Scatter = MomentEstimator.estimate(&cloud)?;
                let fixed = FixedScatter(s);
                Box::new(move |z: &[f64]| oja_depth(z, &cloud, &fixed))
            }
            DepthKind::Zonoid => Box::new(move |z: &[f64]| zonoid_depth(z, &cloud)),
            DepthKind::EchStar | DepthKind::Geometric => {
                let regions = WmRegions::new(&cloud, &self.weight_scheme().unwrap())?;
                Box::new(move |z: &[f64]| regions.depth(z))
            }
            DepthKind::Halfspace => {
                if cloud.dim() > 2 {
                    return Err(DepthError::DimensionMismatch {
                        expected: 2,
                        got: cloud.dim(),
                    });
                }
                Box::new(move |z: &[f64]| halfspace_depth(z, &cloud))
            }
            DepthKind::RandomTukey => {
                let budget = DirectionBudget::new(options.directions, options.seed);
                Box::new(move |z: &[f64]| random_tukey_depth(z, &cloud, budget))
            }
            DepthKind::Simplicial => Box::new(move |z: &[f64]| simplicial_depth(z, &cloud)),
        })
    }

    /// One-shot evaluation; prefer [`DepthKind::bind`] for many points.
    pub fn evaluate(self, z: &[f64], cloud: &DataCloud, options: &DepthOptions) -> Result<DepthValue> {
        self.bind(cloud, options)?.depth(z)
    }
}

fn check_len(z: &[f64], d: usize) -> Result<()> {
    if z.len() != d {
        return Err(DepthError::DimensionMismatch {
            expected: d,
            got: z.len(),
        });
    }
    Ok(())
}

/// Reuses a scatter computed once for the bound cloud.
struct FixedScatter(Scatter);

impl ScatterEstimator for FixedScatter {
    fn name(&self) -> &str {
        "fixed"
    }

    fn estimate(&self, _: &DataCloud) -> Result<Scatter> {
        Ok(self.0.clone())
    }
}

impl fmt::Display for DepthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DepthKind {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "tukey" | "location" => "halfspace",
            "affine-invariant-l2" | "affinel2" => "affine-l2",
            "ech*" | "ech-star" => "echstar",
            other => other,
        };
        DepthKind::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| DepthError::UnknownDepth(s.to_string()))
    }
}

/// Knobs of the approximate depths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthOptions {
    pub seed: u64,
    /// Number of random directions for projection and random Tukey depth.
    pub directions: usize,
}

impl Default for DepthOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            directions: 1000,
        }
    }
}

/// A depth bound to a data cloud.
pub trait DepthFunction: Send + Sync {
    fn depth(&self, z: &[f64]) -> Result<DepthValue>;
}

impl<F> DepthFunction for F
where
    F: Fn(&[f64]) -> Result<DepthValue> + Send + Sync,
{
    fn depth(&self, z: &[f64]) -> Result<DepthValue> {
        self(z)
    }
}
