use crate::cloud::{DataCloud, DepthValue};
use crate::error::{DepthError, Result};
use crate::lp::LinearProgram;

/// Zonoid depth in any dimension.
///
/// `z` lies in the zonoid region at level `alpha` iff `z = sum lambda_i x_i` with
/// `sum lambda_i = 1` and `0 <= lambda_i <= 1/(n alpha)`. With `mu_i = lambda_i / t`,
/// `t = max lambda_i`, the largest feasible level solves the linear program
///
/// ```text
/// maximize sum mu_i  s.t.  sum mu_i (x_i - z) = 0,  0 <= mu_i <= 1
/// ```
///
/// and the depth is `sum mu_i / n`. The optimum is zero exactly when `z` is outside the
/// convex hull of the data.
pub fn zonoid_depth(z: &[f64], cloud: &DataCloud) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let n = cloud.len();
    let d = cloud.dim();
    let scale = cloud.scale();
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|k| cloud.points().map(|x| (x[k] - z[k]) / scale).collect())
        .collect();
    let lp = LinearProgram {
        objective: vec![1.0; n],
        rows,
        rhs: vec![0.0; d],
        lower: vec![0.0; n],
        upper: vec![1.0; n],
    };
    let sol = lp.solve().map_err(|e| DepthError::Solver(e.to_string()))?;
    Ok(DepthValue::clamped(sol.objective / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn univariate_examples() {
        let c = DataCloud::univariate(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(zonoid_depth(&[1.0], &c).unwrap().get(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(zonoid_depth(&[0.75], &c).unwrap().get(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(zonoid_depth(&[0.5], &c).unwrap().get(), 1.0, epsilon = 1e-12);
        assert_eq!(zonoid_depth(&[1.2], &c).unwrap().get(), 0.0);
    }

    #[test]
    fn mean_has_depth_one_in_three_dimensions() {
        let c = DataCloud::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.5],
            vec![0.0, 2.0, 1.0],
            vec![0.3, 0.4, 3.0],
            vec![-1.0, 1.0, -1.0],
        ])
        .unwrap();
        assert_abs_diff_eq!(zonoid_depth(&c.mean(), &c).unwrap().get(), 1.0, epsilon = 1e-12);
        // a vertex of the hull has depth 1/n
        assert_abs_diff_eq!(zonoid_depth(c.point(3), &c).unwrap().get(), 0.2, epsilon = 1e-12);
        assert_eq!(zonoid_depth(&[5.0, 5.0, 5.0], &c).unwrap().get(), 0.0);
    }
}
