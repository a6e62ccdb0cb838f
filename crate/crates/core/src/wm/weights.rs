use std::fmt;

use crate::error::{check_alpha, DepthError, Result};

/// A rule producing, for `n` points and a level `alpha`, the weights applied to the
/// ascending projection order statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightScheme {
    Zonoid,
    EchStar,
    Geometric,
    Custom(CustomWeights),
}

/// An explicit weight table: entries `(alpha_k, w)` sorted by `alpha_k`. A level
/// `alpha` uses the first entry with `alpha_k >= alpha` (the last one beyond the table).
#[derive(Debug, Clone, PartialEq)]
pub struct CustomWeights {
    entries: Vec<(f64, Vec<f64>)>,
}

impl CustomWeights {
    pub fn new(mut entries: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(DepthError::InvalidData("empty weight table".into()));
        }
        let n = entries[0].1.len();
        if entries.iter().any(|(_, w)| w.len() != n) {
            return Err(DepthError::InvalidData("weight rows differ in length".into()));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { entries })
    }

    /// The same weights at every level.
    pub fn constant(w: Vec<f64>) -> Self {
        Self {
            entries: vec![(1.0, w)],
        }
    }

    fn lookup(&self, alpha: f64) -> &[f64] {
        self.entries
            .iter()
            .find(|(a, _)| *a >= alpha)
            .unwrap_or_else(|| self.entries.last().expect("nonempty table"))
            .1
            .as_slice()
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            WeightScheme::Zonoid => "zonoid",
            WeightScheme::EchStar => "echstar",
            WeightScheme::Geometric => "geometric",
            WeightScheme::Custom(_) => "custom",
        };
        f.write_str(name)
    }
}

/// `n * alpha` with round-off next to an integer removed, so that `alpha = k/n`
/// lands exactly on `k`.
pub(crate) fn snapped_product(n: usize, alpha: f64) -> f64 {
    let x = n as f64 * alpha;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x
    }
}

impl WeightScheme {
    /// Weights `w(1, alpha) .. w(n, alpha)`.
    pub fn weights(&self, n: usize, alpha: f64) -> Result<Vec<f64>> {
        check_alpha(alpha)?;
        if n == 0 {
            return Err(DepthError::InvalidData("no points".into()));
        }
        Ok(match self {
            WeightScheme::Zonoid => {
                let na = snapped_product(n, alpha);
                let k = na.floor() as usize;
                // 1-based index j compared with n - k
                (1..=n)
                    .map(|j| {
                        if j + k < n {
                            0.0
                        } else if j + k == n {
                            (na - k as f64) / na
                        } else {
                            1.0 / na
                        }
                    })
                    .collect()
            }
            WeightScheme::EchStar => {
                let e = 1.0 / alpha;
                let nf = n as f64;
                (1..=n)
                    .map(|j| (j as f64 / nf).powf(e) - ((j - 1) as f64 / nf).powf(e))
                    .collect()
            }
            WeightScheme::Geometric => {
                if alpha >= 1.0 {
                    // limit of the weights as alpha -> 1
                    vec![1.0 / n as f64; n]
                } else {
                    // alpha^{n-j} (1 - alpha) / (1 - alpha^n), normalized directly
                    let raw: Vec<f64> = (1..=n).map(|j| alpha.powi((n - j) as i32)).collect();
                    let total: f64 = raw.iter().sum();
                    raw.into_iter().map(|w| w / total).collect()
                }
            }
            WeightScheme::Custom(table) => {
                let w = table.lookup(alpha);
                if w.len() != n {
                    return Err(DepthError::DimensionMismatch {
                        expected: n,
                        got: w.len(),
                    });
                }
                w.to_vec()
            }
        })
    }
}

/// The three weight restrictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// Weights are nonnegative and sum to one.
    SumToOne,
    /// Weights are nondecreasing in the order index.
    Increasing,
    /// Partial sums are nondecreasing in alpha.
    Nested,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightCheck {
    Pass,
    Fail {
        restriction: Restriction,
        alpha: f64,
        /// The larger level, for `Nested` failures.
        beta: Option<f64>,
    },
}

impl WeightCheck {
    pub fn passed(&self) -> bool {
        matches!(self, WeightCheck::Pass)
    }
}

const WEIGHT_TOL: f64 = 1e-12;

/// Checks the weight restrictions on every grid level and every consecutive pair.
pub fn validate_weight_scheme(
    scheme: &WeightScheme,
    n: usize,
    alpha_grid: &[f64],
) -> Result<WeightCheck> {
    let mut grid = alpha_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let tables: Vec<Vec<f64>> = grid
        .iter()
        .map(|&a| scheme.weights(n, a))
        .collect::<Result<_>>()?;
    for (&alpha, w) in grid.iter().zip(&tables) {
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL * n as f64 || w.iter().any(|&x| x < -WEIGHT_TOL) {
            return Ok(WeightCheck::Fail {
                restriction: Restriction::SumToOne,
                alpha,
                beta: None,
            });
        }
        if w.windows(2).any(|p| p[0] > p[1] + WEIGHT_TOL) {
            return Ok(WeightCheck::Fail {
                restriction: Restriction::Increasing,
                alpha,
                beta: None,
            });
        }
    }
    for k in 1..grid.len() {
        let (lo, hi) = (&tables[k - 1], &tables[k]);
        let (mut s_lo, mut s_hi) = (0.0, 0.0);
        for j in 0..n {
            s_lo += lo[j];
            s_hi += hi[j];
            if s_lo > s_hi + WEIGHT_TOL * n as f64 {
                return Ok(WeightCheck::Fail {
                    restriction: Restriction::Nested,
                    alpha: grid[k - 1],
                    beta: Some(grid[k]),
                });
            }
        }
    }
    Ok(WeightCheck::Pass)
}
