//! CUSUM change-point test for vector-valued series.
//!
//! The pipeline is `cusum` → `long_run_cov` → `lambda_stat` / `omega_stat`
//! → critical value from the Brownian-bridge limit law, bundled by
//! [`run_test`]. [`estimate_changepoint`] locates the break.

mod estimator;
mod limit_law;
mod lrc;

pub use estimator::{
    drift_sup_distance, estimate_changepoint, estimate_changepoint_with, theoretical_drift, ChangePointEstimate,
    Weighting,
};
pub use limit_law::{
    normal_approx_cv, quantile_type7, simulate_limit_law, LimitLawTable, Statistic, TABLE_LEVELS,
};
pub use lrc::{long_run_cov, LrcEstimate, COND_LIMIT, RIDGE_FACTOR};
pub use test::{lambda_stat, omega_stat, run_test, CvMethod, TestOptions, TestResult};

use crate::error::{Error, Result};

/// `n` observations of an `ℓ`-vector, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StatSeries {
    n: usize,
    ell: usize,
    values: Vec<f64>,
}

impl StatSeries {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let ell = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ell) {
            return Err(Error::input("all observations must have the same length"));
        }
        Self::from_flat(ell, rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect())
    }

    pub fn from_flat(ell: usize, values: Vec<f64>) -> Result<Self> {
        if ell == 0 || values.len() % ell != 0 {
            return Err(Error::input("observation length must be positive and divide the data"));
        }
        let n = values.len() / ell;
        if n < 2 {
            return Err(Error::input(format!("need at least 2 observations, got {n}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("series contains non-finite entries"));
        }
        Ok(Self { n, ell, values })
    }

    pub fn scalar(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Observation `j`, 0-based.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.ell..(j + 1) * self.ell]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.ell)
    }

    /// Coordinates whose values are not all bitwise equal.
    pub fn varying_coordinates(&self) -> Vec<usize> {
        (0..self.ell)
            .filter(|&c| self.rows().any(|r| r[c].to_bits() != self.values[c].to_bits()))
            .collect()
    }

    /// Sub-series keeping only `coords`; `None` if `coords` is empty.
    pub fn select(&self, coords: &[usize]) -> Option<Self> {
        if coords.is_empty() {
            return None;
        }
        Some(Self {
            n: self.n,
            ell: coords.len(),
            values: self.rows().flat_map(|r| coords.iter().map(move |&c| r[c])).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_flat(self.ell, self.values.iter().map(|v| f(*v)).collect())
    }
}

/// `S_1, …, S_n`, each an `ℓ`-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumSeries {
    n: usize,
    ell: usize,
    s: Vec<f64>,
}

impl CusumSeries {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `S_v` for `v` in `1..=n`.
    pub fn at(&self, v: usize) -> &[f64] {
        &self.s[(v - 1) * self.ell..v * self.ell]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.s.chunks(self.ell)
    }

    pub fn is_zero(&self) -> bool {
        self.s.iter().all(|v| *v == 0.0)
    }
}

/// `S_v = n^{-1/2} (Σ_{j≤v} y_j − (v/n) Σ_{j≤n} y_j)`.
///
/// Partial sums are taken of `y_j − y_1`, and the result is evaluated as
/// `(n D_v − v D_n) / (n √n)`, so `S_n` is exactly zero, a constant series
/// gives exactly zero, and adding a constant that is exactly representable
/// in every observation leaves `S` unchanged bit for bit.
pub fn cusum(series: &StatSeries) -> CusumSeries {
    let (n, ell) = (series.n, series.ell);
    let first = series.row(0);
    let mut d = vec![0.0; n * ell];
    let mut acc = vec![0.0; ell];
    for (j, row) in series.rows().enumerate() {
        for c in 0..ell {
            acc[c] += row[c] - first[c];
            d[j * ell + c] = acc[c];
        }
    }
    let nf = n as f64;
    let denom = nf * nf.sqrt();
    let total = &acc;
    let s = d
        .chunks(ell)
        .enumerate()
        .flat_map(|(j, dv)| {
            let v = (j + 1) as f64;
            (0..ell).map(move |c| (nf * dv[c] - v * total[c]) / denom)
        })
        .collect();
    CusumSeries { n, ell, s }
}
