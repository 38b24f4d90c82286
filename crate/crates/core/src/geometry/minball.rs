//! Smallest enclosing ball in fixed dimension.
//!
//! Move-to-front variant of Welzl's incremental algorithm. Points are first
//! put in a canonical (lexicographic) order and every candidate ball is
//! computed from its support set in that order, so the result is bitwise
//! independent of the order in which the caller lists the points.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative slack used when testing whether a point lies inside a ball.
const CONTAINS_RTOL: f64 = 1e-12;
/// Pseudo-inverse cutoff, relative to the squared support-set diameter.
const PINV_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn empty(dim: usize) -> Self {
        Ball {
            center: vec![0.0; dim],
            radius: -1.0,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        if self.radius < 0.0 {
            return false;
        }
        let dist = euclid(&self.center, p);
        dist <= self.radius * (1.0 + CONTAINS_RTOL)
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Smallest ball containing all `points`. All points must share one dimension.
pub fn smallest_enclosing_ball(points: &[&[f64]]) -> Result<Ball> {
    let Some(first) = points.first() else {
        return Err(Error::input("smallest enclosing ball of an empty set"));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::input("points of mixed dimension"));
    }

    let mut pts: Vec<&[f64]> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    pts.dedup_by(|a, b| lex_cmp(a, b) == Ordering::Equal);

    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut support = Vec::with_capacity(dim + 1);
    let end = pts.len();
    let ball = move_to_front(&pts, &mut order, end, &mut support, dim);

    // The recursion always terminates; what can fail on degenerate input is
    // containment, which we check with a looser tolerance than the inner loop.
    let slack = 1e-9 * ball.radius.max(f64::MIN_POSITIVE);
    if pts
        .iter()
        .any(|p| euclid(&ball.center, p) > ball.radius + slack)
    {
        return Err(Error::Internal(format!(
            "enclosing-ball solver failed to cover {} points in dimension {dim}",
            pts.len()
        )));
    }
    Ok(ball)
}

fn move_to_front(
    pts: &[&[f64]],
    order: &mut [usize],
    end: usize,
    support: &mut Vec<usize>,
    dim: usize,
) -> Ball {
    let mut ball = circumball(pts, support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = order[i];
        if !ball.contains(pts[p]) {
            support.push(p);
            ball = move_to_front(pts, order, i, support, dim);
            support.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

/// Smallest ball with every support point on its boundary, centred in the
/// affine hull of the support. Affinely dependent supports fall back to the
/// least-norm solution of the circumcentre system.
fn circumball(pts: &[&[f64]], support: &[usize], dim: usize) -> Ball {
    let mut idx: Vec<usize> = support.to_vec();
    // indices into canonically sorted points, so this fixes the evaluation order
    idx.sort_unstable();
    match idx.len() {
        0 => Ball::empty(dim),
        1 => Ball {
            center: pts[idx[0]].to_vec(),
            radius: 0.0,
        },
        2 => {
            let (a, b) = (pts[idx[0]], pts[idx[1]]);
            Ball {
                center: a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect(),
                // same expression as the Rips edge length, so a two-point
                // Čech value is exactly half the Rips value
                radius: euclid(a, b) / 2.0,
            }
        }
        k => {
            let origin = pts[idx[0]];
            let m = k - 1;
            let mut v = DMatrix::<f64>::zeros(dim, m);
            let mut diam2: f64 = 0.0;
            for (col, &pi) in idx[1..].iter().enumerate() {
                for r in 0..dim {
                    v[(r, col)] = pts[pi][r] - origin[r];
                }
            }
            for a in &idx {
                for b in &idx {
                    let d = euclid(pts[*a], pts[*b]);
                    diam2 = diam2.max(d * d);
                }
            }
            let gram = v.transpose() * &v;
            let rhs = DVector::from_iterator(m, (0..m).map(|c| 0.5 * v.column(c).norm_squared()));
            let lambda = match gram.clone().pseudo_inverse(PINV_RTOL * diam2) {
                Ok(pinv) => pinv * rhs,
                Err(_) => DVector::zeros(m),
            };
            let offset = v * lambda;
            let center: Vec<f64> = origin.iter().zip(offset.iter()).map(|(o, d)| o + d).collect();
            let radius = idx
                .iter()
                .map(|&i| euclid(&center, pts[i]))
                .fold(0.0, f64::max);
            Ball { center, radius }
        }
    }
}
