use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use serde::Serialize;

use super::{CusumSeries, StatSeries};
use crate::error::{Error, Result};

/// Condition number above which a ridge is added before inversion.
pub const COND_LIMIT: f64 = 1e10;
/// Ridge size relative to `trace(Γ̂)/ℓ`.
pub const RIDGE_FACTOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrcEstimate {
    #[serde(serialize_with = "ser_matrix")]
    pub gamma_hat: DMatrix<f64>,
    pub bandwidth: usize,
    pub kernel: &'static str,
    /// Added to the diagonal before inversion; zero when well conditioned.
    pub ridge: f64,
}

fn ser_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        seq.serialize_element(&m.row(i).iter().copied().collect::<Vec<f64>>())?;
    }
    seq.end()
}

/// Bartlett-kernel long-run covariance of the demeaned series.
///
/// `bandwidth = None` selects `⌊n^{1/3}⌋`. Weights are `1 − h/b` for lags
/// `h = 1..b`; `b = 0` gives the lag-0 sample covariance.
pub fn long_run_cov(series: &StatSeries, bandwidth: Option<usize>) -> Result<LrcEstimate> {
    let (n, ell) = (series.n(), series.ell());
    let b = bandwidth.unwrap_or_else(|| auto_bandwidth(n));
    if n <= 2 * b {
        return Err(Error::input(format!("n = {n} is too small for bandwidth {b}; need n > 2b")));
    }
    let mut mean = vec![0.0; ell];
    for row in series.rows() {
        mean.iter_mut().zip(row).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let x: Vec<f64> = series
        .rows()
        .flat_map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect::<Vec<_>>())
        .collect();
    let row = |j: usize| &x[j * ell..(j + 1) * ell];

    let autocov = |h: usize| {
        let mut c = DMatrix::zeros(ell, ell);
        for j in 0..n - h {
            let (a, bb) = (row(j + h), row(j));
            for p in 0..ell {
                for q in 0..ell {
                    c[(p, q)] += a[p] * bb[q];
                }
            }
        }
        c / n as f64
    };

    let mut gamma = autocov(0);
    for h in 1..=b {
        let w = 1.0 - h as f64 / b as f64;
        if w == 0.0 {
            continue;
        }
        let c = autocov(h);
        gamma += (&c + c.transpose()) * w;
    }

    let ridge = ridge_for(&gamma);
    Ok(LrcEstimate {
        gamma_hat: gamma,
        bandwidth: b,
        kernel: "bartlett",
        ridge,
    })
}

pub(crate) fn auto_bandwidth(n: usize) -> usize {
    let mut b = (n as f64).cbrt().floor() as usize;
    // guard against cbrt rounding just below an exact cube
    if (b + 1).pow(3) <= n {
        b += 1;
    }
    b
}

fn ridge_for(gamma: &DMatrix<f64>) -> f64 {
    let ell = gamma.nrows();
    let eig = SymmetricEigen::new(gamma.clone()).eigenvalues;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if lo > 0.0 && hi / lo <= COND_LIMIT {
        0.0
    } else {
        RIDGE_FACTOR * gamma.trace() / ell as f64
    }
}

impl LrcEstimate {
    pub fn ell(&self) -> usize {
        self.gamma_hat.nrows()
    }

    pub fn ridge_applied(&self) -> bool {
        self.ridge > 0.0
    }

    /// Cholesky factor of `Γ̂ + ridge·I`.
    pub(crate) fn factor(&self) -> Result<Cholesky<f64, Dyn>> {
        let mut m = self.gamma_hat.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += self.ridge;
        }
        Cholesky::new(m).ok_or_else(|| {
            Error::numeric(format!(
                "long-run covariance is singular after ridge {:e} (trace {:e}, bandwidth {})",
                self.ridge,
                self.gamma_hat.trace(),
                self.bandwidth
            ))
        })
    }
}

/// `S_v^T (Γ̂ + ridge I)^{-1} S_v` for every `v`, or all zeros without
/// touching `Γ̂` when `S` vanishes identically.
pub(crate) fn quadratic_forms(s: &CusumSeries, lrc: &LrcEstimate) -> Result<Vec<f64>> {
    if lrc.ell() != s.ell() {
        return Err(Error::input(format!(
            "covariance is {0}x{0} but the CUSUM has dimension {1}",
            lrc.ell(),
            s.ell()
        )));
    }
    if s.is_zero() {
        return Ok(vec![0.0; s.n()]);
    }
    let chol = lrc.factor()?;
    let l = chol.l();
    Ok(s
        .iter()
        .map(|sv| {
            let z = l
                .solve_lower_triangular(&DVector::from_column_slice(sv))
                .expect("Cholesky factor has a positive diagonal");
            z.dot(&z)
        })
        .collect())
}
