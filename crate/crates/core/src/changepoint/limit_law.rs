//! Null limits `Λ(ℓ) = sup_t Σ B_i(t)²` and `Ω(ℓ) = ∫ Σ B_i(t)² dt` for
//! independent standard Brownian bridges `B_i`.
//!
//! A grid of `G = b·2^j` intervals (`b` odd) is built by summing `b` Gaussian
//! increments and then halving the spacing `j` times with Lévy midpoint
//! draws. Each bridge has its own stream, and the draws of the coarser levels
//! come first, so the path on grid `G` is exactly the restriction of the path
//! on grid `2G`. Doubling the grid therefore compares like with like.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng::Streams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Lambda,
    Omega,
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Lambda => "lambda",
            Statistic::Omega => "omega",
        }
    }

    /// Mean and variance used by the normal approximation.
    pub fn normal_moments(&self, ell: usize) -> (f64, f64) {
        let l = ell as f64;
        match self {
            Statistic::Lambda => (l / 4.0, l / 8.0),
            Statistic::Omega => (l / 6.0, l / 45.0),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(Statistic::Lambda),
            "omega" => Ok(Statistic::Omega),
            _ => Err(Error::input(format!("unknown statistic `{s}`; expected lambda or omega"))),
        }
    }
}

/// Quantile levels reported in every table.
pub const TABLE_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawTable {
    pub statistic: Statistic,
    pub ell: usize,
    pub grid: usize,
    pub n_rep: usize,
    pub seed: u64,
    /// Simulated draws, ascending.
    pub samples: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

impl LimitLawTable {
    /// Type-7 empirical quantile.
    pub fn quantile(&self, level: f64) -> f64 {
        quantile_type7(&self.samples, level)
    }

    /// Fraction of draws at or above `value`.
    pub fn p_value(&self, value: f64) -> f64 {
        let above = self.samples.len() - self.samples.partition_point(|s| *s < value);
        above as f64 / self.samples.len() as f64
    }

    pub fn levels(&self) -> Vec<(f64, f64)> {
        TABLE_LEVELS.iter().map(|l| (*l, self.quantile(*l))).collect()
    }
}

/// Linear interpolation between order statistics at `h = (n−1)·level`.
pub fn quantile_type7(sorted: &[f64], level: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * level;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

type CacheKey = (Statistic, usize, usize, usize, u64);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<LimitLawTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<LimitLawTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Minimum grid size and replication count.
pub const MIN_GRID: usize = 1000;
pub const MIN_REPS: usize = 1000;

/// Simulated table for `statistic`, cached per `(statistic, ℓ, grid, n_rep, seed)`.
///
/// Both statistics come from the same bridges, so the table for the other
/// statistic is cached alongside.
pub fn simulate_limit_law(statistic: Statistic, ell: usize, grid: usize, n_rep: usize, seed: u64) -> Result<Arc<LimitLawTable>> {
    if ell < 1 {
        return Err(Error::input("ell must be at least 1"));
    }
    if grid < MIN_GRID || n_rep < MIN_REPS {
        return Err(Error::input(format!(
            "limit-law simulation needs grid >= {MIN_GRID} and n_rep >= {MIN_REPS}, got grid {grid}, n_rep {n_rep}"
        )));
    }
    let key = (statistic, ell, grid, n_rep, seed);
    if let Some(t) = cache().read().expect("cache lock").get(&key) {
        return Ok(t.clone());
    }

    let streams = Streams::new(seed);
    let draws: Vec<(f64, f64)> = (0..n_rep as u64)
        .into_par_iter()
        .map(|rep| sup_and_integral(&streams, rep, ell, grid))
        .collect();
    let make = |stat: Statistic| {
        let mut samples: Vec<f64> = draws
            .iter()
            .map(|(l, o)| if stat == Statistic::Lambda { *l } else { *o })
            .collect();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let variance = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
        samples.sort_by(f64::total_cmp);
        Arc::new(LimitLawTable {
            statistic: stat,
            ell,
            grid,
            n_rep,
            seed,
            samples,
            mean,
            variance,
        })
    };
    let lambda = make(Statistic::Lambda);
    let omega = make(Statistic::Omega);
    let mut guard = cache().write().expect("cache lock");
    guard.entry((Statistic::Lambda, ell, grid, n_rep, seed)).or_insert(lambda);
    guard.entry((Statistic::Omega, ell, grid, n_rep, seed)).or_insert(omega);
    Ok(guard[&key].clone())
}

/// Brownian motion on `grid` equal intervals of `[0, 1]`, written to `w`.
fn brownian_path(rng: &mut crate::rng::StreamRng, grid: usize, w: &mut Vec<f64>) {
    let levels = grid.trailing_zeros();
    let base = grid >> levels;
    w.clear();
    w.push(0.0);
    let sd = (1.0 / base as f64).sqrt();
    for _ in 0..base {
        let z: f64 = StandardNormal.sample(rng);
        w.push(w.last().unwrap() + sd * z);
    }
    let mut h = 1.0 / base as f64;
    for _ in 0..levels {
        let sd = (h / 4.0).sqrt();
        let mut refined = Vec::with_capacity(2 * w.len() - 1);
        for pair in w.windows(2) {
            let z: f64 = StandardNormal.sample(rng);
            refined.push(pair[0]);
            refined.push(0.5 * (pair[0] + pair[1]) + sd * z);
        }
        refined.push(*w.last().unwrap());
        *w = refined;
        h /= 2.0;
    }
}

fn sup_and_integral(streams: &Streams, rep: u64, ell: usize, grid: usize) -> (f64, f64) {
    let mut acc = vec![0.0; grid + 1];
    let mut w = Vec::with_capacity(grid + 1);
    for i in 0..ell as u64 {
        let mut rng = streams.stream("limit_law", &[rep, i]);
        brownian_path(&mut rng, grid, &mut w);
        let w1 = w[grid];
        for (j, a) in acc.iter_mut().enumerate() {
            let b = w[j] - (j as f64 / grid as f64) * w1;
            *a += b * b;
        }
    }
    let sup = acc.iter().copied().fold(0.0, f64::max);
    let inner: f64 = acc[1..grid].iter().sum();
    let integral = (inner + 0.5 * (acc[0] + acc[grid])) / grid as f64;
    (sup, integral)
}

/// `ℓ/4 + z·√(ℓ/8)` for Λ and `ℓ/6 + z·√(ℓ/45)` for Ω, `z` the standard
/// normal quantile at `level`.
pub fn normal_approx_cv(statistic: Statistic, ell: usize, level: f64) -> Result<f64> {
    if ell < 1 || !(level > 0.0 && level < 1.0) {
        return Err(Error::input(format!("need ell >= 1 and level in (0, 1), got {ell}, {level}")));
    }
    let z = Normal::standard().inverse_cdf(level);
    let (mean, var) = statistic.normal_moments(ell);
    Ok(mean + z * var.sqrt())
}
