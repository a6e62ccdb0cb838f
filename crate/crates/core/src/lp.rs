//! Dense bounded-variable primal simplex for small linear programs.
//!
//! Solves `maximize c'x subject to A x = b, l <= x <= u` with finite lower bounds and
//! possibly infinite upper bounds. Nonbasic variables sit at one of their bounds, so box
//! constraints never enter the tableau. Phase one drives artificial variables to zero;
//! phase two pins them to `[0, 0]`. Bland's rule is used throughout, which keeps the
//! method finite on the heavily degenerate problems that depth computations produce.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("problem is infeasible")]
    Infeasible,
    #[error("objective is unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
    #[error("malformed problem: {0}")]
    Malformed(String),
}

/// `maximize c'x  s.t.  A x = b,  lower <= x <= upper`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// Constraint rows, each of length `objective.len()`.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

const COST_EPS: f64 = 1e-10;
const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    xb: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Tableau {
    fn value(&self, j: usize) -> f64 {
        match self.status[j] {
            Status::AtLower => self.lower[j],
            Status::AtUpper => self.upper[j],
            Status::Basic => {
                let r = self.basis.iter().position(|&b| b == j).expect("basic var");
                self.xb[r]
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let p = self.t[r][q];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[q] = 0.0;
            }
        }
    }

    /// Runs simplex iterations maximizing `cost'x` from the current basic feasible
    /// solution.
    fn optimize(&mut self, cost: &[f64], max_iter: usize) -> Result<(), LpError> {
        let m = self.t.len();
        let ncols = cost.len();
        for _ in 0..max_iter {
            // reduced costs
            let mut entering = None;
            for j in 0..ncols {
                let st = self.status[j];
                if st == Status::Basic || self.upper[j] <= self.lower[j] {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..m {
                    d -= cost[self.basis[i]] * self.t[i][j];
                }
                let improving = match st {
                    Status::AtLower => d > COST_EPS,
                    Status::AtUpper => d < -COST_EPS,
                    Status::Basic => false,
                };
                if improving {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            let s = if self.status[q] == Status::AtLower { 1.0 } else { -1.0 };

            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let rate = -s * self.t[i][q];
                let b = self.basis[i];
                let limit = if rate < -PIVOT_EPS {
                    ((self.xb[i] - self.lower[b]) / -rate).max(0.0)
                } else if rate > PIVOT_EPS && self.upper[b].is_finite() {
                    ((self.upper[b] - self.xb[i]) / rate).max(0.0)
                } else {
                    continue;
                };
                let better = if limit < theta - 1e-13 {
                    true
                } else if limit <= theta + 1e-13 {
                    // ties go to the smallest basic index (Bland)
                    leave.is_none_or(|(r, _)| b < self.basis[r])
                } else {
                    false
                };
                if better {
                    theta = limit.min(theta);
                    leave = Some((i, rate));
                }
            }
            if !theta.is_finite() {
                return Err(LpError::Unbounded);
            }
            for i in 0..m {
                self.xb[i] += -s * self.t[i][q] * theta;
            }
            match leave {
                None => {
                    self.status[q] = if s > 0.0 {
                        Status::AtUpper
                    } else {
                        Status::AtLower
                    };
                }
                Some((r, rate)) => {
                    let out = self.basis[r];
                    self.status[out] = if rate < 0.0 {
                        Status::AtLower
                    } else {
                        Status::AtUpper
                    };
                    let entering_value = if s > 0.0 {
                        self.lower[q] + theta
                    } else {
                        self.upper[q] - theta
                    };
                    self.pivot(r, q);
                    self.basis[r] = q;
                    self.status[q] = Status::Basic;
                    self.xb[r] = entering_value;
                }
            }
        }
        Err(LpError::IterationLimit)
    }
}

impl LinearProgram {
    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.rows.len() != self.rhs.len() {
            return Err(LpError::Malformed("row count differs from rhs length".into()));
        }
        if self.rows.iter().any(|r| r.len() != n) || self.lower.len() != n || self.upper.len() != n
        {
            return Err(LpError::Malformed("inconsistent column count".into()));
        }
        if self.lower.iter().any(|l| !l.is_finite()) {
            return Err(LpError::Malformed("lower bounds must be finite".into()));
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| l > u) {
            return Err(LpError::Infeasible);
        }
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        self.validate()?;
        let n = self.objective.len();
        let m = self.rows.len();
        let ncols = n + m;
        let max_iter = 200 * (ncols + m + 10);

        // residual with every structural variable at its lower bound
        let mut t = Vec::with_capacity(m);
        let mut xb = Vec::with_capacity(m);
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            let resid = b - row.iter().zip(&self.lower).map(|(a, l)| a * l).sum::<f64>();
            let sign = if resid < 0.0 { -1.0 } else { 1.0 };
            let mut trow: Vec<f64> = row.iter().map(|a| a * sign).collect();
            trow.extend(std::iter::repeat_n(0.0, m));
            t.push(trow);
            xb.push(resid * sign);
        }
        for (i, row) in t.iter_mut().enumerate() {
            row[n + i] = 1.0;
        }
        let mut lower = self.lower.clone();
        lower.extend(std::iter::repeat_n(0.0, m));
        let mut upper = self.upper.clone();
        upper.extend(std::iter::repeat_n(f64::INFINITY, m));
        let mut status = vec![Status::AtLower; n];
        status.extend(std::iter::repeat_n(Status::Basic, m));

        let mut tab = Tableau {
            t,
            xb,
            basis: (n..ncols).collect(),
            status,
            lower,
            upper,
        };

        let mut phase1 = vec![0.0; ncols];
        phase1[n..].iter_mut().for_each(|c| *c = -1.0);
        tab.optimize(&phase1, max_iter)?;
        let infeas: f64 = (n..ncols).map(|j| tab.value(j)).sum();
        let scale = 1.0 + self.rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
        if infeas > FEAS_EPS * scale {
            return Err(LpError::Infeasible);
        }
        for j in n..ncols {
            tab.upper[j] = 0.0;
            if tab.status[j] != Status::Basic {
                tab.status[j] = Status::AtLower;
            }
        }
        for (i, &b) in tab.basis.iter().enumerate() {
            if b >= n {
                tab.xb[i] = 0.0;
            }
        }

        let mut cost = self.objective.clone();
        cost.extend(std::iter::repeat_n(0.0, m));
        tab.optimize(&cost, max_iter)?;

        let x: Vec<f64> = (0..n)
            .map(|j| tab.value(j).clamp(self.lower[j], self.upper[j]))
            .collect();
        let objective = x.iter().zip(&self.objective).map(|(a, c)| a * c).sum();
        Ok(LpSolution { x, objective })
    }
}
