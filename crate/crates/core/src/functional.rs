//! Depths of curves built from a multivariate base depth.
//!
//! A curve is represented by its values on a common grid `t_1 < .. < t_k` in `[0, 1]`.
//! A Φ-depth maps the curves through a family of linear functionals into `R^d`,
//! evaluates the base depth there, and takes the minimum over the family. Graph depth
//! uses point evaluations, grid depth the projections of the curve values at selected
//! grid points on directions of the sphere.

use rayon::prelude::*;

use crate::cloud::{DataCloud, DepthValue};
use crate::directions::{gaussian_vectors, sphere_directions, DirectionBudget};
use crate::error::{DepthError, Result};
use crate::registry::{DepthKind, DepthOptions};

/// A `d`-variate curve sampled on `k` grid points, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    values: Vec<f64>,
}

impl Curve {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || dim == 0 {
            return Err(DepthError::InvalidData("curve without values".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(DepthError::InvalidData("curve rows differ in length".into()));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::InvalidData("non-finite curve value".into()));
        }
        Ok(Self { dim, values })
    }

    /// A univariate curve.
    pub fn scalar(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    /// The constant curve `value` on `k` grid points.
    pub fn constant(k: usize, value: &[f64]) -> Result<Self> {
        Self::new(vec![value.to_vec(); k])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at grid index `t`.
    pub fn at(&self, t: usize) -> &[f64] {
        &self.values[t * self.dim..(t + 1) * self.dim]
    }

    /// `a * self + b * other`, pointwise.
    pub fn combine(&self, a: f64, other: &Curve, b: f64) -> Curve {
        Curve {
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// Largest absolute value, the sampled sup norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Curves sharing one grid of argument values.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    grid: Vec<f64>,
    curves: Vec<Curve>,
}

impl FunctionalSample {
    pub fn new(grid: Vec<f64>, curves: Vec<Curve>) -> Result<Self> {
        if grid.is_empty() || curves.is_empty() {
            return Err(DepthError::InvalidData("empty functional sample".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] < 0.0 || grid[grid.len() - 1] > 1.0 {
            return Err(DepthError::InvalidData(
                "grid must be strictly increasing in [0, 1]".into(),
            ));
        }
        let dim = curves[0].dim();
        for c in &curves {
            if c.len() != grid.len() || c.dim() != dim {
                return Err(DepthError::DimensionMismatch {
                    expected: grid.len() * dim,
                    got: c.len() * c.dim(),
                });
            }
        }
        Ok(Self { grid, curves })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn dim(&self) -> usize {
        self.curves[0].dim()
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    fn check_query(&self, z: &Curve) -> Result<()> {
        if z.len() != self.grid.len() || z.dim() != self.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: self.grid.len() * self.dim(),
                got: z.len() * z.dim(),
            });
        }
        Ok(())
    }

    /// Applies `f` to every curve, keeping the grid.
    pub fn map_curves(&self, f: impl Fn(&Curve) -> Curve) -> Result<Self> {
        Self::new(self.grid.clone(), self.curves.iter().map(f).collect())
    }
}

/// A linear map from curves to `R^d`.
pub trait CurveFunctional: Send + Sync {
    fn name(&self) -> String;
    fn apply(&self, curve: &Curve) -> Vec<f64>;
}

/// Evaluation at grid index `t`.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation(pub usize);

impl CurveFunctional for Evaluation {
    fn name(&self) -> String {
        format!("eval[{}]", self.0)
    }

    fn apply(&self, curve: &Curve) -> Vec<f64> {
        curve.at(self.0).to_vec()
    }
}

/// `sum_s r_s x(t_s)` over selected grid indices.
#[derive(Debug, Clone)]
pub struct GridProjection {
    pub t_indices: Vec<usize>,
    pub direction: Vec<f64>,
}

impl CurveFunctional for GridProjection {
    fn name(&self) -> String {
        format!("proj{:?}", self.t_indices)
    }

    fn apply(&self, curve: &Curve) -> Vec<f64> {
        let mut out = vec![0.0; curve.dim()];
        for (&t, &r) in self.t_indices.iter().zip(&self.direction) {
            for (o, v) in out.iter_mut().zip(curve.at(t)) {
                *o += r * v;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDepthResult {
    pub depth: DepthValue,
    /// Whether every functional maps the query into the level-one region of the base
    /// depth, i.e. the query is a deepest curve.
    pub attains_maximum: bool,
}

fn require_base(base: DepthKind) -> Result<()> {
    if !base.satisfies_postulates() {
        return Err(DepthError::Unsupported(format!(
            "{base} is not a proper depth and cannot serve as base depth"
        )));
    }
    Ok(())
}

fn check_indices(sample: &FunctionalSample, t: &[usize]) -> Result<()> {
    if t.is_empty() {
        return Err(DepthError::EmptyT);
    }
    if let Some(&bad) = t.iter().find(|&&i| i >= sample.grid.len()) {
        return Err(DepthError::InvalidData(format!("grid index {bad} out of range")));
    }
    Ok(())
}

/// Base depth of `phi(z)` among `phi(x^1), .., phi(x^n)`.
fn mapped_depth(
    phi: &dyn CurveFunctional,
    z: &Curve,
    sample: &FunctionalSample,
    base: DepthKind,
    options: &DepthOptions,
) -> Result<f64> {
    let cloud = DataCloud::new(sample.curves.iter().map(|c| phi.apply(c)).collect())?;
    Ok(base.evaluate(&phi.apply(z), &cloud, options)?.get())
}

fn min_over(
    functionals: &[&dyn CurveFunctional],
    z: &Curve,
    sample: &FunctionalSample,
    base: DepthKind,
    options: &DepthOptions,
) -> Result<Vec<f64>> {
    functionals
        .par_iter()
        .map(|phi| mapped_depth(*phi, z, sample, base, options))
        .collect()
}

fn minimum(values: &[f64]) -> f64 {
    values.iter().copied().fold(1.0, f64::min)
}

/// Graph depth: the minimum over `t` in `t_set` of the base depth of `z(t)` among the
/// sample values at `t`. With a univariate halfspace base this is the halfgraph depth.
pub fn graph_depth(
    z: &Curve,
    sample: &FunctionalSample,
    base: DepthKind,
    t_set: &[usize],
    options: &DepthOptions,
) -> Result<DepthValue> {
    require_base(base)?;
    sample.check_query(z)?;
    check_indices(sample, t_set)?;
    let evals: Vec<Evaluation> = t_set.iter().map(|&t| Evaluation(t)).collect();
    let refs: Vec<&dyn CurveFunctional> = evals.iter().map(|e| e as &dyn CurveFunctional).collect();
    Ok(DepthValue::clamped(minimum(&min_over(&refs, z, sample, base, options)?)))
}

/// Grid depth: the minimum over unit directions `r` in `R^k'` of the base depth of
/// `sum_s r_s z(t_s)`. The infimum over the sphere is approximated by the `k'` axes and
/// `budget.count` seeded directions; the value is an upper bound, nonincreasing in the
/// budget.
pub fn grid_depth(
    z: &Curve,
    sample: &FunctionalSample,
    t_indices: &[usize],
    base: DepthKind,
    budget: DirectionBudget,
    options: &DepthOptions,
) -> Result<DepthValue> {
    require_base(base)?;
    sample.check_query(z)?;
    check_indices(sample, t_indices)?;
    let k = t_indices.len();
    let mut dirs: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    dirs.extend(sphere_directions(k, budget.count, budget.seed));
    let projections: Vec<GridProjection> = dirs
        .into_iter()
        .map(|direction| GridProjection {
            t_indices: t_indices.to_vec(),
            direction,
        })
        .collect();
    let refs: Vec<&dyn CurveFunctional> =
        projections.iter().map(|p| p as &dyn CurveFunctional).collect();
    Ok(DepthValue::clamped(minimum(&min_over(&refs, z, sample, base, options)?)))
}

/// Relative tolerance of the linearity check.
const LINEARITY_TOL: f64 = 1e-9;

fn check_linear(phi: &dyn CurveFunctional, sample: &FunctionalSample, seed: u64) -> Result<()> {
    let k = sample.grid.len();
    let d = sample.dim();
    let random: Vec<Curve> = gaussian_vectors(k * d, 6, seed)
        .into_iter()
        .map(|values| Curve { dim: d, values })
        .collect();
    let mut probes: Vec<&Curve> = random.iter().collect();
    probes.extend(sample.curves.iter().take(4));
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for pair in probes.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        let (fu, fv) = (phi.apply(u), phi.apply(v));
        let sum = phi.apply(&u.combine(1.0, v, 1.0));
        let scaled = phi.apply(&u.combine(-2.5, v, 0.0));
        if fu.len() != sum.len() || fu.len() != fv.len() {
            return Err(DepthError::NonlinearFunctional(phi.name()));
        }
        let bound = LINEARITY_TOL * (1.0 + norm(&fu) + norm(&fv));
        let additive: Vec<f64> = (0..fu.len()).map(|i| sum[i] - fu[i] - fv[i]).collect();
        let homogeneous: Vec<f64> = (0..fu.len()).map(|i| scaled[i] + 2.5 * fu[i]).collect();
        if norm(&additive) > bound || norm(&homogeneous) > 2.5 * bound {
            return Err(DepthError::NonlinearFunctional(phi.name()));
        }
    }
    Ok(())
}

/// Φ-depth over an explicit family of functionals, each checked for linearity.
pub fn phi_depth(
    z: &Curve,
    sample: &FunctionalSample,
    functionals: &[&dyn CurveFunctional],
    base: DepthKind,
    options: &DepthOptions,
) -> Result<PhiDepthResult> {
    require_base(base)?;
    sample.check_query(z)?;
    if functionals.is_empty() {
        return Err(DepthError::EmptyT);
    }
    for phi in functionals {
        check_linear(*phi, sample, options.seed)?;
    }
    let values = min_over(functionals, z, sample, base, options)?;
    Ok(PhiDepthResult {
        depth: DepthValue::clamped(minimum(&values)),
        attains_maximum: values.iter().all(|&v| v >= 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn constants(values: &[f64], k: usize) -> FunctionalSample {
        let grid: Vec<f64> = (0..k).map(|i| i as f64 / (k - 1).max(1) as f64).collect();
        let curves = values
            .iter()
            .map(|&v| Curve::constant(k, &[v]).unwrap())
            .collect();
        FunctionalSample::new(grid, curves).unwrap()
    }

    fn opts() -> DepthOptions {
        DepthOptions::default()
    }

    #[test]
    fn graph_depth_of_constants() {
        let s = constants(&[0.0, 1.0, 2.0], 5);
        let z = Curve::constant(5, &[1.0]).unwrap();
        let all: Vec<usize> = (0..5).collect();
        let v = graph_depth(&z, &s, DepthKind::Halfspace, &all, &opts()).unwrap();
        assert_abs_diff_eq!(v.get(), 2.0 / 3.0);
        assert_eq!(
            graph_depth(&z, &s, DepthKind::Halfspace, &[], &opts()),
            Err(DepthError::EmptyT)
        );
        assert!(matches!(
            graph_depth(&z, &s, DepthKind::RandomTukey, &all, &opts()),
            Err(DepthError::Unsupported(_))
        ));
    }

    #[test]
    fn graph_depth_vanishes_outside_the_band() {
        let s = FunctionalSample::new(
            vec![0.0, 0.5, 1.0],
            vec![
                Curve::scalar(&[0.0, 0.0, 0.0]).unwrap(),
                Curve::scalar(&[1.0, 2.0, 1.0]).unwrap(),
                Curve::scalar(&[2.0, 1.0, 3.0]).unwrap(),
            ],
        )
        .unwrap();
        let z = Curve::scalar(&[1.0, 5.0, 1.0]).unwrap();
        let v = graph_depth(&z, &s, DepthKind::Zonoid, &[0, 1, 2], &opts()).unwrap();
        assert_eq!(v.get(), 0.0);
        // a sample curve has positive halfspace graph depth
        let x = s.curves()[1].clone();
        let v = graph_depth(&x, &s, DepthKind::Halfspace, &[0, 1, 2], &opts()).unwrap();
        assert_abs_diff_eq!(v.get(), 1.0 / 3.0);
    }

    #[test]
    fn grid_depth_single_point_is_pointwise() {
        let s = FunctionalSample::new(
            vec![0.0, 1.0],
            vec![
                Curve::scalar(&[0.0, 4.0]).unwrap(),
                Curve::scalar(&[1.0, -1.0]).unwrap(),
                Curve::scalar(&[3.0, 2.0]).unwrap(),
                Curve::scalar(&[2.0, 0.5]).unwrap(),
            ],
        )
        .unwrap();
        let z = Curve::scalar(&[1.5, 0.0]).unwrap();
        let budget = DirectionBudget::new(20, 3);
        let g = grid_depth(&z, &s, &[1], DepthKind::Halfspace, budget, &opts()).unwrap();
        let p = graph_depth(&z, &s, DepthKind::Halfspace, &[1], &opts()).unwrap();
        assert_eq!(g, p);
    }

    #[test]
    fn phi_depth_matches_graph_depth_and_detects_nonlinearity() {
        let s = constants(&[0.0, 1.0, 2.0, 5.0], 4);
        let z = Curve::constant(4, &[1.5]).unwrap();
        let evals: Vec<Evaluation> = (0..4).map(Evaluation).collect();
        let refs: Vec<&dyn CurveFunctional> = evals.iter().map(|e| e as _).collect();
        let phi = phi_depth(&z, &s, &refs, DepthKind::Halfspace, &opts()).unwrap();
        let graph = graph_depth(&z, &s, DepthKind::Halfspace, &[0, 1, 2, 3], &opts()).unwrap();
        assert_eq!(phi.depth, graph);
        assert!(!phi.attains_maximum);

        struct Squared;
        impl CurveFunctional for Squared {
            fn name(&self) -> String {
                "squared".into()
            }
            fn apply(&self, c: &Curve) -> Vec<f64> {
                vec![c.at(0)[0] * c.at(0)[0]]
            }
        }
        assert_eq!(
            phi_depth(&z, &s, &[&Squared], DepthKind::Halfspace, &opts()),
            Err(DepthError::NonlinearFunctional("squared".into()))
        );
    }

    #[test]
    fn deepest_curve_attains_maximum() {
        let s = constants(&[0.0, 2.0], 3);
        let z = Curve::constant(3, &[1.0]).unwrap();
        let e = Evaluation(1);
        let r = phi_depth(&z, &s, &[&e], DepthKind::Zonoid, &opts()).unwrap();
        assert!(r.attains_maximum);
        assert_eq!(r.depth.get(), 1.0);
    }

    #[test]
    fn depth_vanishes_as_the_sup_norm_grows() {
        let s = constants(&[0.0, 1.0, 2.0, 4.0], 3);
        let bump = Curve::scalar(&[0.0, 1.0, 0.0]).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let z = bump.combine(10f64.powi(k), &bump, 0.0);
            let v = graph_depth(&z, &s, DepthKind::L2, &[0, 1, 2], &opts()).unwrap().get();
            assert!(v <= last);
            last = v;
        }
        assert!(last < 1e-6);
    }
}
