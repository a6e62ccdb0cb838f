//! Halfspace (Tukey, location) depth and simplicial depth.
//!
//! Both depths only see the combinatorial structure of the data: they stay constant as
//! long as no point crosses a line through other points, and vanish outside the convex
//! hull. Halfspaces and simplices are closed throughout.

use std::cmp::Ordering;

use itertools::Itertools;

use crate::cloud::{dot, DataCloud, DepthValue};
use crate::directions::{sphere_directions, DirectionBudget};
use crate::error::{check_alpha, DepthError, Result};
use crate::geometry::{orient, tolerance, ConvexRegion, Pt};
use crate::metric::{binomial, ENUMERATION_CAP};
use crate::wm::data_hull;

/// Univariate depth of `z` among `values`: `min(#{x <= z}, #{x >= z}) / n`.
pub fn univariate_halfspace(z: f64, values: &[f64]) -> f64 {
    let below = values.iter().filter(|&&x| x <= z).count();
    let above = values.iter().filter(|&&x| x >= z).count();
    below.min(above) as f64 / values.len() as f64
}

pub fn halfspace_depth_1d(z: f64, cloud: &DataCloud) -> Result<DepthValue> {
    cloud.require_dim(1)?;
    Ok(DepthValue::clamped(univariate_halfspace(z, cloud.coords())))
}

/// Angular comparison of nonzero vectors, starting at the positive x axis.
fn angle_cmp(a: Pt, b: Pt) -> Ordering {
    let upper = |p: Pt| p.y > 0.0 || (p.y == 0.0 && p.x > 0.0);
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => {
            let c = a.cross(b);
            if c > 0.0 {
                Ordering::Less
            } else if c < 0.0 {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
    }
}

/// Exact bivariate halfspace depth by an angular sweep around `z`.
///
/// The data are sorted by angle around `z`, equal directions grouped. The minimal closed
/// halfplane through `z` is attained at a normal direction in general position; its data
/// count is the number of points coinciding with `z` plus the count of a half-open
/// semicircle `(c, c + pi]` of angles starting at a data angle `c` or its antipode.
pub fn halfspace_depth_2d(z: &[f64], cloud: &DataCloud) -> Result<DepthValue> {
    cloud.require_dim(2)?;
    cloud.check_point(z)?;
    let zp = Pt::from_slice(z);
    let n = cloud.len();
    let mut coincident = 0usize;
    let mut dirs: Vec<Pt> = Vec::with_capacity(n);
    for x in cloud.points() {
        let v = Pt::from_slice(x) - zp;
        if v.x == 0.0 && v.y == 0.0 {
            coincident += 1;
        } else {
            dirs.push(v);
        }
    }
    if dirs.is_empty() {
        return Ok(DepthValue::ONE);
    }
    dirs.sort_by(|a, b| angle_cmp(*a, *b));

    let mut groups: Vec<(Pt, usize)> = Vec::new();
    for v in dirs {
        match groups.last_mut() {
            Some((g, c)) if g.cross(v) == 0.0 && g.dot(v) > 0.0 => *c += 1,
            _ => groups.push((v, 1)),
        }
    }
    // the first and last group can share a direction only if sorting put them apart,
    // which the half-plane split rules out
    let m = groups.len();
    let total: usize = groups.iter().map(|g| g.1).sum();
    // group h is in (theta_i, theta_i + pi] unless it is strictly clockwise of i
    let in_half = |i: usize, h: usize| groups[i].0.cross(groups[h].0) >= 0.0;

    let mut best = total;
    let (mut j, mut sum) = (0usize, 0usize);
    for i in 0..m {
        if j < i + 1 {
            j = i + 1;
            sum = 0;
        }
        while j < i + m && in_half(i, j % m) {
            sum += groups[j % m].1;
            j += 1;
        }
        best = best.min(sum).min(total - sum);
        if j > i + 1 {
            sum -= groups[(i + 1) % m].1;
        }
    }
    Ok(DepthValue::clamped((coincident + best) as f64 / n as f64))
}

/// Halfspace depth in dimension 1 or 2.
pub fn halfspace_depth(z: &[f64], cloud: &DataCloud) -> Result<DepthValue> {
    match cloud.dim() {
        1 => {
            cloud.check_point(z)?;
            halfspace_depth_1d(z[0], cloud)
        }
        2 => halfspace_depth_2d(z, cloud),
        d => Err(DepthError::DimensionMismatch {
            expected: 2,
            got: d,
        }),
    }
}

/// Minimum univariate halfspace depth over the given projection directions.
pub fn projected_halfspace_depth(
    z: &[f64],
    cloud: &DataCloud,
    directions: &[Vec<f64>],
) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let mut best = 1.0_f64;
    for p in directions {
        let proj = cloud.project(p);
        best = best.min(univariate_halfspace(dot(p, z), &proj));
        if best == 0.0 {
            break;
        }
    }
    Ok(DepthValue::clamped(best))
}

/// Random Tukey depth: the minimal univariate depth over `budget.count` seeded uniform
/// directions. An upper bound on the halfspace depth, nonincreasing in the budget.
pub fn random_tukey_depth(
    z: &[f64],
    cloud: &DataCloud,
    budget: DirectionBudget,
) -> Result<DepthValue> {
    let dirs = sphere_directions(cloud.dim(), budget.count, budget.seed);
    projected_halfspace_depth(z, cloud, &dirs)
}

/// Tukey region `{z : halfspace depth >= alpha}` of a bivariate cloud.
///
/// With `k = ceil(n alpha)`, the region is the intersection of all closed halfplanes
/// holding at least `n - k + 1` points. Between consecutive critical directions the
/// boundary of the tightest such halfplane pivots about one data point, so the
/// halfplanes at critical directions (normals of point differences) suffice.
pub fn tukey_region_2d(cloud: &DataCloud, alpha: f64) -> Result<ConvexRegion> {
    cloud.require_dim(2)?;
    check_alpha(alpha)?;
    let n = cloud.len();
    let k = crate::wm::snapped_ceil(n, alpha).max(1);
    let need = n - k + 1;
    let pts: Vec<Pt> = cloud.points().map(Pt::from_slice).collect();
    let tol = tolerance(cloud.scale());

    let mut normals: Vec<Pt> = vec![
        Pt::new(1.0, 0.0),
        Pt::new(-1.0, 0.0),
        Pt::new(0.0, 1.0),
        Pt::new(0.0, -1.0),
    ];
    for (i, j) in (0..n).tuple_combinations() {
        let d = pts[j] - pts[i];
        let len = d.norm();
        if len > 0.0 {
            let u = d.perp() * (1.0 / len);
            normals.push(u);
            normals.push(-u);
        }
    }

    let mut region = data_hull(cloud);
    let mut proj = vec![0.0; n];
    for u in normals {
        for (v, p) in proj.iter_mut().zip(&pts) {
            *v = u.dot(*p);
        }
        // need-th largest projection
        let (_, c, _) = proj.select_nth_unstable_by(n - need, f64::total_cmp);
        let c = *c;
        // keep u.x >= c
        region = region.clip(-u, -c, tol);
        if region.is_empty() {
            return Ok(ConvexRegion::Empty);
        }
    }
    Ok(region)
}

/// Closed containment of `z` in the triangle `abc`, including degenerate triangles.
pub(crate) fn triangle_contains(a: Pt, b: Pt, c: Pt, z: Pt) -> bool {
    let area = orient(a, b, c);
    if area != 0.0 {
        let o1 = orient(a, b, z);
        let o2 = orient(b, c, z);
        let o3 = orient(c, a, z);
        return (o1 >= 0.0 && o2 >= 0.0 && o3 >= 0.0) || (o1 <= 0.0 && o2 <= 0.0 && o3 <= 0.0);
    }
    // collinear: hull is the segment between the two farthest points
    let pairs = [(a, b), (b, c), (a, c)];
    let (p, q) = pairs
        .into_iter()
        .max_by(|x, y| (x.0 - x.1).norm().total_cmp(&(y.0 - y.1).norm()))
        .unwrap();
    if p == q {
        return z == p;
    }
    orient(p, q, z) == 0.0
        && z.x >= p.x.min(q.x)
        && z.x <= p.x.max(q.x)
        && z.y >= p.y.min(q.y)
        && z.y <= p.y.max(q.y)
}

fn simplex_contains(vertices: &[&[f64]], z: &[f64]) -> bool {
    let d = z.len();
    let m = nalgebra::DMatrix::from_fn(d, d, |r, c| vertices[c + 1][r] - vertices[0][r]);
    let rhs = nalgebra::DVector::from_fn(d, |r, _| z[r] - vertices[0][r]);
    let scale = m.amax().max(1e-300);
    let lu = m.clone().lu();
    let det = lu.determinant();
    if det.abs() > 1e-10 * scale.powi(d as i32) {
        if let Some(lam) = lu.solve(&rhs) {
            let first = 1.0 - lam.sum();
            return first >= -1e-12 && lam.iter().all(|&l| l >= -1e-12);
        }
    }
    // degenerate simplex: membership in the hull through the zonoid program
    let pts: Vec<Vec<f64>> = vertices.iter().map(|v| v.to_vec()).collect();
    DataCloud::new(pts)
        .and_then(|c| crate::wm::zonoid_depth(z, &c))
        .map(|v| v.get() > 1e-9)
        .unwrap_or(false)
}

/// Sample simplicial depth: the fraction of `(d+1)`-subsets of the data whose closed
/// convex hull contains `z`, by direct enumeration.
pub fn simplicial_depth(z: &[f64], cloud: &DataCloud) -> Result<DepthValue> {
    cloud.check_point(z)?;
    let (n, d) = (cloud.len(), cloud.dim());
    if n < d + 1 {
        return Err(DepthError::InvalidData(format!(
            "simplicial depth needs at least {} points",
            d + 1
        )));
    }
    let count = binomial(n, d + 1);
    if d > 4 || (d > 2 && n > 25) || count > ENUMERATION_CAP {
        return Err(DepthError::TooLarge {
            count,
            cap: ENUMERATION_CAP,
        });
    }
    let hits: usize = match d {
        1 => {
            let zz = z[0];
            let v = cloud.coords();
            let below = v.iter().filter(|&&x| x <= zz).count();
            let above = v.iter().filter(|&&x| x >= zz).count();
            let equal = v.iter().filter(|&&x| x == zz).count();
            // pairs with one point on each side, or touching z
            let strictly_below = below - equal;
            let strictly_above = above - equal;
            strictly_below * strictly_above
                + equal * (n - equal)
                + equal * equal.saturating_sub(1) / 2
        }
        2 => {
            let pts: Vec<Pt> = cloud.points().map(Pt::from_slice).collect();
            let zp = Pt::from_slice(z);
            (0..n)
                .tuple_combinations()
                .filter(|&(i, j, k)| triangle_contains(pts[i], pts[j], pts[k], zp))
                .count()
        }
        _ => (0..n)
            .combinations(d + 1)
            .filter(|idx| {
                let verts: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i)).collect();
                simplex_contains(&verts, z)
            })
            .count(),
    };
    Ok(DepthValue::clamped(hits as f64 / count as f64))
}
