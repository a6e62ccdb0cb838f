//! Location/scatter estimators and the matrix norm they induce.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::cloud::DataCloud;
use crate::error::{DepthError, Result};

/// Center and positive definite scatter of a cloud, with its Cholesky factor cached.
#[derive(Debug, Clone)]
pub struct Scatter {
    center: DVector<f64>,
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl Scatter {
    pub fn new(center: Vec<f64>, matrix: DMatrix<f64>) -> Result<Self> {
        let d = center.len();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(DepthError::DimensionMismatch {
                expected: d,
                got: matrix.nrows(),
            });
        }
        let chol = Cholesky::new(matrix.clone()).ok_or(DepthError::SingularScatter)?;
        // Cholesky succeeds on numerically rank-deficient matrices with tiny pivots
        let diag = chol.l_dirty().diagonal();
        let max_diag = matrix.diagonal().amax().sqrt();
        if diag.iter().any(|&l| !(l > 1e-12 * max_diag)) {
            return Err(DepthError::SingularScatter);
        }
        Ok(Self {
            center: DVector::from_vec(center),
            matrix,
            chol,
        })
    }

    pub fn center(&self) -> &[f64] {
        self.center.as_slice()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn determinant(&self) -> f64 {
        self.chol.determinant()
    }

    /// Maps `x` to `L^{-1} (x - center)` where `S = L L'`.
    pub fn whiten(&self, x: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(x) - &self.center;
        self.solve_lower(v)
    }

    fn solve_lower(&self, v: DVector<f64>) -> Vec<f64> {
        let l = self.chol.l_dirty();
        let d = v.len();
        let mut out = vec![0.0; d];
        for i in 0..d {
            let mut s = v[i];
            for k in 0..i {
                s -= l[(i, k)] * out[k];
            }
            out[i] = s / l[(i, i)];
        }
        out
    }

    /// The norm `sqrt(v' S^{-1} v)`.
    pub fn norm(&self, v: &[f64]) -> f64 {
        self.solve_lower(DVector::from_column_slice(v))
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Lower Cholesky factor `L` with `S = L L'`.
    pub fn cholesky_factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }
}

/// A rule assigning a center and a positive definite scatter matrix to a cloud. The
/// rule must be affine equivariant: `S(AX + b) = A S(X) A'`.
pub trait ScatterEstimator: Send + Sync {
    fn name(&self) -> &str;
    fn estimate(&self, cloud: &DataCloud) -> Result<Scatter>;
}

/// Sample mean and covariance with divisor `n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentEstimator;

impl ScatterEstimator for MomentEstimator {
    fn name(&self) -> &str {
        "moment"
    }

    fn estimate(&self, cloud: &DataCloud) -> Result<Scatter> {
        let d = cloud.dim();
        let n = cloud.len() as f64;
        let mean = cloud.mean();
        let mut cov = DMatrix::<f64>::zeros(d, d);
        for p in cloud.points() {
            for i in 0..d {
                let di = p[i] - mean[i];
                for j in 0..=i {
                    cov[(i, j)] += di * (p[j] - mean[j]);
                }
            }
        }
        for i in 0..d {
            for j in 0..=i {
                let v = cov[(i, j)] / n;
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
        Scatter::new(mean, cov)
    }
}

/// The norm `z -> sqrt(z' M^{-1} z)` of a positive definite matrix `M`.
#[derive(Debug, Clone)]
pub struct MNorm {
    scatter: Scatter,
}

impl MNorm {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let d = m.nrows();
        if !m.is_square() {
            return Err(DepthError::InvalidData("M-norm matrix must be square".into()));
        }
        let sym = (&m - m.transpose()).amax() <= 1e-12 * m.amax().max(1.0);
        if !sym {
            return Err(DepthError::InvalidData("M-norm matrix must be symmetric".into()));
        }
        Ok(Self {
            scatter: Scatter::new(vec![0.0; d], m)?,
        })
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.scatter.norm(z)
    }
}

impl From<Scatter> for MNorm {
    fn from(s: Scatter) -> Self {
        Self { scatter: s }
    }
}
