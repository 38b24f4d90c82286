use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lrc::long_run_cov;
use super::{cusum, StatSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    InverseLrc,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChangePointEstimate {
    pub v_hat: usize,
    pub theta_hat: f64,
    pub objective: f64,
}

/// Smallest maximiser of `S_v^T Σ̃ S_v` over `v = 1..=n`.
///
/// Constant coordinates are dropped first, as in [`super::run_test`].
/// `InverseLrc` uses `(Γ̂ + ridge·I)^{-1}` with the given bandwidth.
pub fn estimate_changepoint(series: &StatSeries, weighting: Weighting, bandwidth: Option<usize>) -> Result<ChangePointEstimate> {
    let Some(reduced) = series.select(&series.varying_coordinates()) else {
        return Ok(ChangePointEstimate {
            v_hat: 1,
            theta_hat: 1.0 / series.n() as f64,
            objective: 0.0,
        });
    };
    let sigma = match weighting {
        Weighting::Identity => DMatrix::identity(reduced.ell(), reduced.ell()),
        Weighting::InverseLrc => {
            let lrc = long_run_cov(&reduced, bandwidth)?;
            let chol = lrc.factor()?;
            chol.inverse()
        }
    };
    estimate_changepoint_with(&reduced, &sigma)
}

/// Argmax with an explicit positive-definite weight matrix.
pub fn estimate_changepoint_with(series: &StatSeries, sigma: &DMatrix<f64>) -> Result<ChangePointEstimate> {
    let ell = series.ell();
    if sigma.nrows() != ell || sigma.ncols() != ell {
        return Err(Error::input(format!("weight matrix must be {ell}x{ell}")));
    }
    let s = cusum(series);
    let mut best = (1, f64::NEG_INFINITY);
    for v in 1..=s.n() {
        let sv = DVector::from_column_slice(s.at(v));
        let q = sv.dot(&(sigma * &sv));
        if q > best.1 {
            best = (v, q);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::numeric("change-point objective is not finite"));
    }
    Ok(ChangePointEstimate {
        v_hat: best.0,
        theta_hat: best.0 as f64 / s.n() as f64,
        objective: best.1,
    })
}

/// `t(1−θ)Δ` for `t ≤ θ` and `(1−t)θΔ` for `t > θ`.
pub fn theoretical_drift(theta: f64, delta_mean: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(theta > 0.0 && theta < 1.0) || !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("need theta in (0, 1) and t in [0, 1], got {theta}, {t}")));
    }
    let w = if t <= theta { t * (1.0 - theta) } else { (1.0 - t) * theta };
    Ok(delta_mean.iter().map(|d| w * d).collect())
}

/// `sup_{t∈[0,1]} ‖n^{-1/2} S_{⌊nt⌋} − S*(t)‖` with `S_0 = 0`.
///
/// On each interval `[v/n, (v+1)/n)` the CUSUM is constant and the drift is
/// affine except for the kink at `θ`, so the supremum is attained at the
/// interval ends or at `θ`.
pub fn drift_sup_distance(series: &StatSeries, theta: f64, delta_mean: &[f64]) -> Result<f64> {
    if delta_mean.len() != series.ell() {
        return Err(Error::input("drift vector length differs from the series dimension"));
    }
    let s = cusum(series);
    let n = s.n();
    let scale = 1.0 / (n as f64).sqrt();
    let zero = vec![0.0; series.ell()];
    let dist = |v: usize, t: f64| -> Result<f64> {
        let sv = if v == 0 { &zero[..] } else { s.at(v) };
        let d = theoretical_drift(theta, delta_mean, t)?;
        Ok(sv.iter().zip(&d).map(|(a, b)| (a * scale - b).powi(2)).sum::<f64>().sqrt())
    };
    let mut sup = dist(n, 1.0)?;
    for v in 0..n {
        let (a, b) = (v as f64 / n as f64, (v + 1) as f64 / n as f64);
        sup = sup.max(dist(v, a)?).max(dist(v, b)?);
        if a < theta && theta < b {
            sup = sup.max(dist(v, theta)?);
        }
    }
    Ok(sup)
}
