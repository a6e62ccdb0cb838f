//! The empirical distribution on a finite list of points.

use std::hash::{DefaultHasher, Hash, Hasher};

use crate::error::{DepthError, Result};

/// `n` points in `R^d`, each carrying probability `1/n`.
///
/// Points are stored row-major. Duplicate points are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct DataCloud {
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl DataCloud {
    /// Builds a cloud from point rows. All rows must have the same nonzero length
    /// and contain only finite values.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        if dim == 0 {
            return Err(DepthError::InvalidData(
                "cloud needs at least one point of dimension >= 1".into(),
            ));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(DepthError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if let Some(v) = p.iter().find(|v| !v.is_finite()) {
                return Err(DepthError::InvalidData(format!(
                    "point {i} has non-finite coordinate {v}"
                )));
            }
            coords.extend_from_slice(p);
        }
        Ok(Self {
            dim,
            coords,
            labels: None,
        })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(DepthError::InvalidData(format!(
                "{} values cannot be split into points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::InvalidData("non-finite coordinate".into()));
        }
        Ok(Self {
            dim,
            coords,
            labels: None,
        })
    }

    /// A one-dimensional cloud.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(DepthError::InvalidData(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    pub fn mean(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut m = vec![0.0; self.dim];
        for p in self.points() {
            for (acc, v) in m.iter_mut().zip(p) {
                *acc += v;
            }
        }
        m.iter_mut().for_each(|v| *v /= n);
        m
    }

    /// Componentwise minimum and maximum.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// Largest side of the bounding box, or 1 for a one-point cloud.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        let s = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| b - a)
            .fold(0.0_f64, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Applies `f` to every point, keeping labels.
    pub fn map_points<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let points: Vec<Vec<f64>> = self.points().map(&mut f).collect();
        let mut out = Self::new(points)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Coordinates projected on `direction`.
    pub fn project(&self, direction: &[f64]) -> Vec<f64> {
        self.points().map(|p| dot(p, direction)).collect()
    }

    pub(crate) fn check_point(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(DepthError::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(DepthError::DimensionMismatch {
                expected: dim,
                got: self.dim,
            });
        }
        Ok(())
    }

    /// Stable content hash, used to tag derived objects with their source cloud.
    pub fn content_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dim.hash(&mut h);
        for v in &self.coords {
            v.to_bits().hash(&mut h);
        }
        h.finish()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A depth value, guaranteed to lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DepthValue(f64);

impl DepthValue {
    pub const ZERO: DepthValue = DepthValue(0.0);
    pub const ONE: DepthValue = DepthValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(DepthError::InvalidData(format!(
                "depth value {value} outside [0, 1]"
            )))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn clamped(value: f64) -> Self {
        if value.is_nan() {
            Self(0.0)
        } else {
            Self(value.clamp(0.0, 1.0))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<DepthValue> for f64 {
    fn from(d: DepthValue) -> f64 {
        d.0
    }
}
