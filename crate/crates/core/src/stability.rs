//! Perturbation radius of a filtration and its sublevel-set exponent.
//!
//! The radius `ρ(x)` is the largest ε such that moving every point by at
//! most ε keeps the strict order of the distinct filtration values. It is not
//! computable exactly; two proxies are provided:
//!
//! - [`rho_lower`]: the smallest gap between consecutive distinct values
//!   divided by `2 c* √r`, a lower bound for any filtration with gradient
//!   bound `c*`.
//! - [`rho_vr_gap`]: for Vietoris–Rips, the smallest gap between distinct
//!   pairwise distances divided by 4.
//!
//! [`estimate_sublevel`] samples uniform clouds and tabulates
//! `P(proxy ≤ t)`; [`fit_alpha`] regresses its log on `log t`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, FiltrationKind, PointCloud};
use crate::persistence::simplex_values;
use crate::rng::Streams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoKind {
    LowerBoundGeneric,
    ExactGapVr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoEstimate {
    pub value: f64,
    pub kind: RhoKind,
}

/// Smallest gap between consecutive entries of the sorted distinct values.
fn min_gap(mut values: Vec<f64>) -> Option<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    values.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
}

/// Generic lower bound on ρ from the distinct values of simplices with at
/// least two vertices (vertex values are identically zero and excluded).
/// Capped at the filtration cap `T`.
pub fn rho_lower(x: &PointCloud, kind: FiltrationKind, dim_cap: usize, domain: &Domain) -> Result<RhoEstimate> {
    if dim_cap < 1 || dim_cap > x.len() - 1 {
        return Err(Error::input(format!(
            "dim_cap must lie in 1..={} for {} points, got {dim_cap}",
            x.len() - 1,
            x.len()
        )));
    }
    let cap = kind.cap(domain);
    let values: Vec<f64> = simplex_values(x, kind, dim_cap)?
        .into_iter()
        .filter(|s| s.dim >= 1)
        .map(|s| s.value)
        .collect();
    let scale = 2.0 * kind.gradient_bound() * (x.len() as f64).sqrt();
    let value = min_gap(values).map_or(cap, |g| (g / scale).min(cap));
    Ok(RhoEstimate {
        value,
        kind: RhoKind::LowerBoundGeneric,
    })
}

/// Vietoris–Rips proxy: smallest gap between distinct pairwise distances over 4.
pub fn rho_vr_gap(x: &PointCloud, domain: &Domain) -> RhoEstimate {
    let r = x.len();
    let mut dists = Vec::with_capacity(r * (r - 1) / 2);
    for i in 0..r {
        for j in i + 1..r {
            dists.push(crate::geometry::euclid(x.point(i), x.point(j)));
        }
    }
    let cap = FiltrationKind::VietorisRips.cap(domain);
    RhoEstimate {
        value: min_gap(dists).map_or(cap, |g| (g / 4.0).min(cap)),
        kind: RhoKind::ExactGapVr,
    }
}

/// Empirical CDF of the ρ proxy under uniform sampling on `M^r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SublevelCurve {
    pub t_grid: Vec<f64>,
    pub p_hat: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_samples: usize,
    pub kind: FiltrationKind,
    pub r: usize,
    pub d: usize,
}

/// 24 log-spaced points per decade across `[1e-4, 1e-1] · diam(M)`.
pub fn default_t_grid(domain: &Domain) -> Vec<f64> {
    let diam = domain.diameter();
    (0..=72).map(|i| diam * 10f64.powf(-4.0 + i as f64 / 24.0)).collect()
}

/// Default fit window `[1e-4, 1e-2] · diam(M)`.
pub fn default_fit_window(domain: &Domain) -> (f64, f64) {
    let diam = domain.diameter();
    (1e-4 * diam, 1e-2 * diam)
}

/// Minimum Monte Carlo sample size accepted by [`estimate_sublevel`].
pub const MIN_SAMPLES: usize = 1000;

fn uniform_cloud(domain: &Domain, r: usize, rng: &mut impl Rng) -> Result<PointCloud> {
    let d = domain.dim();
    let coords = (0..r * d)
        .map(|c| {
            let i = c % d;
            rng.random_range(domain.lo()[i]..=domain.hi()[i])
        })
        .collect();
    PointCloud::from_flat(d, coords)
}

/// Rips uses [`rho_vr_gap`], Čech uses [`rho_lower`].
pub fn stability_proxy(x: &PointCloud, kind: FiltrationKind, dim_cap: usize, domain: &Domain) -> Result<f64> {
    match kind {
        FiltrationKind::VietorisRips => Ok(rho_vr_gap(x, domain).value),
        FiltrationKind::Cech => Ok(rho_lower(x, kind, dim_cap, domain)?.value),
    }
}

pub fn estimate_sublevel(
    kind: FiltrationKind,
    domain: &Domain,
    r: usize,
    dim_cap: usize,
    t_grid: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<SublevelCurve> {
    if t_grid.is_empty() {
        return Err(Error::input("empty t grid"));
    }
    if t_grid.iter().any(|t| !(*t > 0.0)) || t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("t grid must be positive and strictly increasing"));
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::input(format!(
            "need at least {MIN_SAMPLES} Monte Carlo samples, got {n_samples}"
        )));
    }
    if r < 2 || dim_cap < 1 || dim_cap > r - 1 {
        return Err(Error::input(format!("invalid r = {r} / dim_cap = {dim_cap}")));
    }

    let streams = Streams::new(seed);
    let proxies: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.stream("stability", &[i]);
            let x = uniform_cloud(domain, r, &mut rng)?;
            stability_proxy(&x, kind, dim_cap, domain)
        })
        .collect::<Result<_>>()?;

    let mut sorted = proxies;
    sorted.sort_by(f64::total_cmp);
    let n = n_samples as f64;
    let p_hat: Vec<f64> = t_grid
        .iter()
        .map(|t| sorted.partition_point(|v| v <= t) as f64 / n)
        .collect();
    let stderr = p_hat.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect();
    Ok(SublevelCurve {
        t_grid: t_grid.to_vec(),
        p_hat,
        stderr,
        n_samples,
        kind,
        r,
        d: domain.dim(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaFit {
    pub alpha_hat: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n_points: usize,
}

/// OLS of `log p_hat` on `log t` over grid points in `[t_lo, t_hi]` with
/// `0 < p_hat < 1`. Needs at least 5 usable points.
pub fn fit_alpha(curve: &SublevelCurve, t_lo: f64, t_hi: f64) -> Result<AlphaFit> {
    // tolerate rounding in window ends computed as multiples of the diameter
    let (lo, hi) = (t_lo * (1.0 - 1e-12), t_hi * (1.0 + 1e-12));
    let pts: Vec<(f64, f64)> = curve
        .t_grid
        .iter()
        .zip(&curve.p_hat)
        .filter(|(t, p)| (lo..=hi).contains(*t) && **p > 0.0 && **p < 1.0)
        .map(|(t, p)| (t.ln(), p.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::Estimation(format!(
            "only {} grid points in [{t_lo}, {t_hi}] have 0 < p_hat < 1; need 5",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = if pts.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    Ok(AlphaFit {
        alpha_hat: slope,
        intercept,
        stderr,
        n_points: pts.len(),
    })
}

/// Largest ratio `p_hat(t) / (Ĉ t^α)` over the window, with `Ĉ` calibrated so
/// the envelope passes through the curve at the window's geometric midpoint
/// (log-log interpolation between grid points).
pub fn envelope_ratio(curve: &SublevelCurve, t_lo: f64, t_hi: f64, alpha: f64) -> Result<f64> {
    let (lo, hi) = (t_lo * (1.0 - 1e-12), t_hi * (1.0 + 1e-12));
    let mid = (t_lo * t_hi).sqrt();
    let pts: Vec<(f64, f64)> = curve
        .t_grid
        .iter()
        .zip(&curve.p_hat)
        .filter(|(t, p)| (lo..=hi).contains(*t) && **p > 0.0)
        .map(|(t, p)| (*t, *p))
        .collect();
    let j = pts
        .windows(2)
        .position(|w| w[0].0 <= mid && mid <= w[1].0)
        .ok_or_else(|| Error::Estimation("window midpoint is not bracketed by usable grid points".into()))?;
    let ((t0, p0), (t1, p1)) = (pts[j], pts[j + 1]);
    let w = (mid.ln() - t0.ln()) / (t1.ln() - t0.ln());
    let p_mid = (p0.ln() * (1.0 - w) + p1.ln() * w).exp();
    let c_hat = p_mid / mid.powf(alpha);
    Ok(pts
        .iter()
        .map(|(t, p)| p / (c_hat * t.powf(alpha)))
        .fold(0.0, f64::max))
}

/// Exponent `α` guaranteed for each filtration: 1 for Rips, 1/2 for Čech.
pub fn target_alpha(kind: FiltrationKind) -> f64 {
    match kind {
        FiltrationKind::VietorisRips => 1.0,
        FiltrationKind::Cech => 0.5,
    }
}
