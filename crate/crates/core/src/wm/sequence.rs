use std::f64::consts::{PI, TAU};

use super::projection_order;
use super::WeightScheme;
use crate::cloud::DataCloud;
use crate::error::Result;
use crate::geometry::{tolerance, ConvexRegion, Pt};

/// Angles closer than this are treated as one event.
const ANGLE_EPS: f64 = 1e-12;

/// How often the running vertex is recomputed from scratch while walking the sequence.
const REFRESH_EVERY: usize = 256;

/// The circular sequence of a bivariate cloud: the orderings of the data by projection
/// on a direction rotating once around the circle.
///
/// The ordering only changes at critical directions normal to a difference of two data
/// points. The sequence stores the ordering on the first open arc and, for every later
/// arc, the positions whose occupant changes. Walking it yields one weighted mean per
/// arc; these are exactly the extreme-point candidates of a WM region.
#[derive(Debug, Clone)]
pub struct CircularSequence {
    points: Vec<Pt>,
    initial: Vec<usize>,
    /// For each arc after the first: `(position, new occupant)` pairs.
    updates: Vec<Vec<(usize, usize)>>,
    scale: f64,
}

fn dir(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

impl CircularSequence {
    pub fn new(cloud: &DataCloud) -> Self {
        assert_eq!(cloud.dim(), 2, "circular sequence needs bivariate data");
        let points: Vec<Pt> = cloud.points().map(Pt::from_slice).collect();
        let n = points.len();

        // (angle, i, j) for each pair and both normals of x_i - x_j
        let mut events: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in i + 1..n {
                let d = points[j] - points[i];
                if d.x == 0.0 && d.y == 0.0 {
                    continue;
                }
                let a = (d.y.atan2(d.x) + 0.5 * PI).rem_euclid(TAU);
                events.push((a, i, j));
                events.push(((a + PI).rem_euclid(TAU), i, j));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));

        // group near-equal angles
        let mut groups: Vec<(f64, Vec<(usize, usize)>)> = Vec::new();
        for (a, i, j) in events {
            match groups.last_mut() {
                Some((g, pairs)) if a - *g <= ANGLE_EPS => pairs.push((i, j)),
                _ => groups.push((a, vec![(i, j)])),
            }
        }
        if groups.len() > 1 {
            let first = groups[0].0;
            let last = groups.last().unwrap().0;
            if first + TAU - last <= ANGLE_EPS {
                let (_, pairs) = groups.pop().unwrap();
                groups[0].1.extend(pairs);
            }
        }

        if groups.len() <= 1 {
            // all points coincide, or every difference is parallel: the order flips once
            let initial = match groups.first() {
                None => (0..n).collect(),
                Some((a, _)) => projection_order(cloud, &dir(a + 0.5 * PI)),
            };
            let mut updates = Vec::new();
            if let Some((a, _)) = groups.first() {
                let flipped = projection_order(cloud, &dir(a + 1.5 * PI));
                updates.push(
                    flipped
                        .iter()
                        .enumerate()
                        .filter(|(k, &idx)| initial[*k] != idx)
                        .map(|(k, &idx)| (k, idx))
                        .collect(),
                );
            }
            return Self {
                points,
                initial,
                updates,
                scale: cloud.scale(),
            };
        }

        let m = groups.len();
        let mid = |k: usize| {
            let a = groups[k].0;
            let b = if k + 1 < m {
                groups[k + 1].0
            } else {
                groups[0].0 + TAU
            };
            0.5 * (a + b)
        };

        let mut order = projection_order(cloud, &dir(mid(0)));
        let initial = order.clone();
        let mut rank = vec![0usize; n];
        for (pos, &i) in order.iter().enumerate() {
            rank[i] = pos;
        }
        let mut updates = Vec::with_capacity(m - 1);
        for k in 1..m {
            let p = dir(mid(k));
            let (mut lo, mut hi) = (usize::MAX, 0usize);
            for &(i, j) in &groups[k].1 {
                lo = lo.min(rank[i]).min(rank[j]);
                hi = hi.max(rank[i]).max(rank[j]);
            }
            let proj = |i: usize| points[i].x * p[0] + points[i].y * p[1];
            let mut block: Vec<usize> = order[lo..=hi].to_vec();
            block.sort_by(|&a, &b| proj(a).total_cmp(&proj(b)).then(a.cmp(&b)));
            let mut changes = Vec::new();
            for (off, &idx) in block.iter().enumerate() {
                let pos = lo + off;
                if order[pos] != idx {
                    changes.push((pos, idx));
                    order[pos] = idx;
                    rank[idx] = pos;
                }
            }
            updates.push(changes);
        }
        Self {
            points,
            initial,
            updates,
            scale: cloud.scale(),
        }
    }

    /// Number of arcs with a distinct ordering.
    pub fn arcs(&self) -> usize {
        self.updates.len() + 1
    }

    /// Weighted means `sum_j w_j x_(pi(j))`, one per arc.
    pub fn weighted_means(&self, w: &[f64]) -> Vec<Pt> {
        let mut order = self.initial.clone();
        let full = |order: &[usize]| {
            order
                .iter()
                .zip(w)
                .fold(Pt::default(), |acc, (&i, &wj)| acc + self.points[i] * wj)
        };
        let mut v = full(&order);
        let mut out = Vec::with_capacity(self.arcs());
        out.push(v);
        for (k, changes) in self.updates.iter().enumerate() {
            for &(pos, idx) in changes {
                v = v + (self.points[idx] - self.points[order[pos]]) * w[pos];
                order[pos] = idx;
            }
            if (k + 1) % REFRESH_EVERY == 0 {
                v = full(&order);
            }
            out.push(v);
        }
        out
    }

    /// The WM region for `scheme` at level `alpha`.
    pub fn region(&self, scheme: &WeightScheme, alpha: f64) -> Result<ConvexRegion> {
        let w = scheme.weights(self.points.len(), alpha)?;
        let means = self.weighted_means(&w);
        Ok(ConvexRegion::hull_of(&means, tolerance(self.scale)))
    }
}
