//! Weakly dependent point-cloud series, their m-dependent couplings and
//! break injection.
//!
//! Two generators are available. `IidClouds` draws every point of every cloud
//! independently from the innovation law. `DelayEmbedding` runs the truncated
//! linear process `Y_t = clip(Σ_{k=0}^{K} a_k ε_{t−k})` with
//! `a_k = scale·(k+1)^{−β}` and uses `(Y_t, Y_{t−1}, …, Y_{t−r+1})` as cloud
//! `t`. Clipping onto the domain box is the metric projection, so it is
//! 1-Lipschitz.
//!
//! Innovations are indexed by lag relative to the cloud being built. Cloud
//! `t` of a delay embedding touches lags `0..K+r`, so `K + r` innovations
//! are drawn as burn-in before the first cloud.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, PointCloud};
use crate::rng::{StreamRng, Streams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case", deny_unknown_fields)]
pub enum InnovationSpec {
    UniformBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Isotropic Gaussian conditioned on the box `[lo, hi]`.
    TruncatedGaussian {
        mean: Vec<f64>,
        sd: f64,
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
}

impl InnovationSpec {
    pub fn dim(&self) -> usize {
        match self {
            InnovationSpec::UniformBox { lo, .. } | InnovationSpec::TruncatedGaussian { lo, .. } => lo.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = match self {
            InnovationSpec::UniformBox { lo, hi } => (lo, hi),
            InnovationSpec::TruncatedGaussian { mean, sd, lo, hi } => {
                if !(sd.is_finite() && *sd > 0.0) {
                    return Err(Error::config(format!("innovation sd must be positive and finite, got {sd}")));
                }
                if mean.len() != lo.len() || mean.iter().any(|m| !m.is_finite()) {
                    return Err(Error::config("innovation mean must be finite and match the box dimension"));
                }
                (lo, hi)
            }
        };
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::config("innovation box bounds must be non-empty and of equal length"));
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(Error::config("innovation box bounds must be finite with lo < hi"));
        }
        Ok(())
    }

    /// One innovation vector, written into `out`.
    pub fn sample(&self, rng: &mut StreamRng, out: &mut [f64]) {
        match self {
            InnovationSpec::UniformBox { lo, hi } => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = rng.random_range(lo[i]..=hi[i]);
                }
            }
            InnovationSpec::TruncatedGaussian { mean, sd, lo, hi } => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = loop {
                        let z: f64 = StandardNormal.sample(rng);
                        let v = mean[i] + sd * z;
                        if (lo[i]..=hi[i]).contains(&v) {
                            break v;
                        }
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearProcessSpec {
    pub decay_exponent: f64,
    pub scale: f64,
    pub truncation_lag: usize,
}

impl LinearProcessSpec {
    /// `a_k` for `k = 0..=K`.
    pub fn coefficients(&self) -> Vec<f64> {
        (0..=self.truncation_lag)
            .map(|k| self.scale * ((k + 1) as f64).powf(-self.decay_exponent))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.decay_exponent > 1.0 && self.decay_exponent.is_finite()) {
            return Err(Error::config(format!(
                "decay_exponent must exceed 1, got {}",
                self.decay_exponent
            )));
        }
        if !self.scale.is_finite() {
            return Err(Error::config("scale must be finite"));
        }
        if self.truncation_lag < 1 {
            return Err(Error::config("truncation_lag must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    IidClouds {},
    DelayEmbedding {
        decay_exponent: f64,
        scale: f64,
        truncation_lag: usize,
    },
}

impl GeneratorSpec {
    pub fn linear_process(&self) -> Option<LinearProcessSpec> {
        match *self {
            GeneratorSpec::IidClouds {} => None,
            GeneratorSpec::DelayEmbedding {
                decay_exponent,
                scale,
                truncation_lag,
            } => Some(LinearProcessSpec {
                decay_exponent,
                scale,
                truncation_lag,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudSeriesSpec {
    pub generator: GeneratorSpec,
    pub innovation: InnovationSpec,
    pub domain: Domain,
    pub n: usize,
    pub r: usize,
}

impl CloudSeriesSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::config(format!("series length n must be at least 2, got {}", self.n)));
        }
        if self.r < 2 || self.r > crate::geometry::MAX_POINTS {
            return Err(Error::config(format!(
                "cloud size r must lie in 2..={}, got {}",
                crate::geometry::MAX_POINTS,
                self.r
            )));
        }
        self.innovation.validate()?;
        if self.innovation.dim() != self.domain.dim() {
            return Err(Error::config(format!(
                "innovation dimension {} differs from domain dimension {}",
                self.innovation.dim(),
                self.domain.dim()
            )));
        }
        if let Some(lp) = self.generator.linear_process() {
            lp.validate()?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Number of innovation lags a single cloud depends on.
    fn lags(&self) -> usize {
        match self.generator.linear_process() {
            None => 1,
            Some(lp) => lp.truncation_lag + self.r,
        }
    }
}

/// Innovation history: row `j` holds `ε` at lag `j` relative to some time.
struct Lagged<'a> {
    eps: &'a [f64],
    d: usize,
}

impl Lagged<'_> {
    fn at(&self, lag: usize) -> &[f64] {
        &self.eps[lag * self.d..(lag + 1) * self.d]
    }
}

/// Cloud from lag-indexed innovations; lags `>= m` come from `copy` when given.
fn build_cloud(
    spec: &CloudSeriesSpec,
    coeffs: &[f64],
    base: Lagged,
    copy: Option<(Lagged, usize)>,
) -> Result<PointCloud> {
    let d = spec.dim();
    let eps_at = |lag: usize| match &copy {
        Some((c, m)) if lag >= *m => c.at(lag),
        _ => base.at(lag),
    };
    let mut coords = Vec::with_capacity(spec.r * d);
    match spec.generator {
        GeneratorSpec::IidClouds {} => {
            // the cloud at time t is itself the lag-0 innovation
            coords.extend_from_slice(eps_at(0));
        }
        GeneratorSpec::DelayEmbedding { .. } => {
            let mut y = vec![0.0; d];
            for i in 0..spec.r {
                y.iter_mut().for_each(|v| *v = 0.0);
                for (k, a) in coeffs.iter().enumerate() {
                    for (yc, e) in y.iter_mut().zip(eps_at(i + k)) {
                        *yc += a * e;
                    }
                }
                coords.extend_from_slice(&y);
            }
        }
    }
    let mut cloud = PointCloud::from_flat(d, coords)?;
    cloud = cloud.map_points(|p| spec.domain.clip(p));
    Ok(cloud)
}

/// Width of one innovation draw: a full cloud for `IidClouds`, one point otherwise.
fn innovation_width(spec: &CloudSeriesSpec) -> usize {
    match spec.generator {
        GeneratorSpec::IidClouds {} => spec.r * spec.dim(),
        GeneratorSpec::DelayEmbedding { .. } => spec.dim(),
    }
}

fn draw_innovations(spec: &CloudSeriesSpec, rng: &mut StreamRng, count: usize) -> Vec<f64> {
    let d = spec.dim();
    let w = innovation_width(spec);
    let mut out = vec![0.0; count * w];
    for chunk in out.chunks_mut(d) {
        spec.innovation.sample(rng, chunk);
    }
    out
}

/// Forward-time innovations `ε_{1−B}, …, ε_n` with `B = lags − 1` burn-in draws.
fn series_innovations(spec: &CloudSeriesSpec, seed: u64) -> Vec<f64> {
    let mut rng = Streams::new(seed).stream("innovations", &[]);
    draw_innovations(spec, &mut rng, spec.lags() - 1 + spec.n)
}

/// Reverses the forward history ending at cloud `t` (0-based) into lag order.
fn lag_view(spec: &CloudSeriesSpec, forward: &[f64], t: usize) -> Vec<f64> {
    let w = innovation_width(spec);
    let end = spec.lags() + t;
    (0..spec.lags())
        .flat_map(|lag| forward[(end - 1 - lag) * w..(end - lag) * w].iter().copied())
        .collect()
}

pub fn gen_series(spec: &CloudSeriesSpec, seed: u64) -> Result<Vec<PointCloud>> {
    spec.validate()?;
    let coeffs = spec.generator.linear_process().map(|l| l.coefficients()).unwrap_or_default();
    let forward = series_innovations(spec, seed);
    let w = innovation_width(spec);
    (0..spec.n)
        .map(|t| {
            let lagged = lag_view(spec, &forward, t);
            build_cloud(spec, &coeffs, Lagged { eps: &lagged, d: w }, None)
        })
        .collect()
}

/// Pairs `(X_t, X_t^{(m)})`. The second coordinate swaps every innovation at
/// lag `>= m` for an independent copy drawn freshly for each `t`.
pub fn gen_m_coupled(spec: &CloudSeriesSpec, m: usize, seed: u64) -> Result<Vec<(PointCloud, PointCloud)>> {
    if m < 1 {
        return Err(Error::input("coupling lag m must be at least 1"));
    }
    spec.validate()?;
    let coeffs = spec.generator.linear_process().map(|l| l.coefficients()).unwrap_or_default();
    let forward = series_innovations(spec, seed);
    let streams = Streams::new(seed);
    let w = innovation_width(spec);
    (0..spec.n)
        .map(|t| {
            let lagged = lag_view(spec, &forward, t);
            let copy = draw_innovations(spec, &mut streams.stream("coupling", &[t as u64]), spec.lags());
            let x = build_cloud(spec, &coeffs, Lagged { eps: &lagged, d: w }, None)?;
            let xm = build_cloud(
                spec,
                &coeffs,
                Lagged { eps: &lagged, d: w },
                Some((Lagged { eps: &copy, d: w }, m)),
            )?;
            Ok((x, xm))
        })
        .collect()
}

/// `‖X_i − X_i^{(m)}‖^p` for each `m` in `m_list` and point `i`, from one
/// draw of base and copy innovations.
///
/// Point `i` of the delay embedding is `Y_{t−i} = Σ_k a_k ε` at lags `i + k`,
/// and the coupled point keeps lags `< m`, i.e. `k < m − i`. Prefix sums over
/// `k` give every `m` in `O(r d)`. Once `m − i > K` both prefixes are complete
/// and the coupled point equals the original exactly.
fn coupling_moments(
    spec: &CloudSeriesSpec,
    coeffs: &[f64],
    base: &[f64],
    copy: &[f64],
    m_list: &[usize],
    p: f64,
) -> Vec<f64> {
    let r = spec.r;
    if coeffs.is_empty() {
        // iid clouds depend on the lag-0 innovation only
        return vec![0.0; m_list.len() * r];
    }
    let d = spec.dim();
    let terms = coeffs.len();
    let prefix = |eps: &[f64], i: usize| {
        let mut out = vec![0.0; (terms + 1) * d];
        for (k, a) in coeffs.iter().enumerate() {
            for c in 0..d {
                out[(k + 1) * d + c] = out[k * d + c] + a * eps[(i + k) * d + c];
            }
        }
        out
    };
    let pre: Vec<(Vec<f64>, Vec<f64>)> = (0..r).map(|i| (prefix(base, i), prefix(copy, i))).collect();
    let full: Vec<Vec<f64>> = pre
        .iter()
        .map(|(pb, _)| {
            let mut y = pb[terms * d..].to_vec();
            spec.domain.clip(&mut y);
            y
        })
        .collect();
    let mut row = Vec::with_capacity(m_list.len() * r);
    let mut ym = vec![0.0; d];
    for &m in m_list {
        for (i, (pb, pc)) in pre.iter().enumerate() {
            let cut = m.saturating_sub(i).min(terms);
            for c in 0..d {
                ym[c] = pb[cut * d + c] + (pc[terms * d + c] - pc[cut * d + c]);
            }
            spec.domain.clip(&mut ym);
            row.push(crate::geometry::euclid(&full[i], &ym).powf(p));
        }
    }
    row
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxProfile {
    pub m: Vec<usize>,
    pub nu_hat: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `Σ_{m' ≤ m} m'^{(1+δ)p/α} ν̂_{m'}` over the supplied `m` values.
    pub weighted_partial_sum: Vec<f64>,
    /// Relative growth of the partial sum from the last `m <= m_max/10` to `m_max`.
    pub final_decade_increment: Option<f64>,
    pub p: f64,
    pub alpha: f64,
    pub delta: f64,
    pub n_mc: usize,
}

/// Default exponent slack in the weights `m^{(1+δ)p/α}`.
pub const DEFAULT_DELTA: f64 = 0.1;

/// Monte Carlo estimates of `ν_m = max_i E[‖X_{0,i} − X^{(m)}_{0,i}‖^p]^{1/p}`.
///
/// All `m` share the same base and copy innovations, so `ν̂_m` is computed
/// with common random numbers. Standard errors use the delta method.
pub fn approx_profile(
    spec: &CloudSeriesSpec,
    p: f64,
    alpha: f64,
    delta: f64,
    m_list: &[usize],
    n_mc: usize,
    seed: u64,
) -> Result<ApproxProfile> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::input(format!("moment order p must be at least 1, got {p}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::input("alpha must be positive and delta non-negative"));
    }
    if m_list.is_empty() || m_list.contains(&0) || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("m_list must be non-empty, strictly increasing and start at 1 or above"));
    }
    if n_mc < 2 {
        return Err(Error::input("need at least 2 Monte Carlo samples"));
    }
    spec.validate()?;
    let coeffs = spec.generator.linear_process().map(|l| l.coefficients()).unwrap_or_default();
    let r = spec.r;
    let streams = Streams::new(seed);

    // per sample: ‖X_i − X_i^{(m)}‖^p for every (m, i)
    let moments: Vec<Vec<f64>> = (0..n_mc as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = streams.stream("approx", &[j]);
            let base = draw_innovations(spec, &mut rng, spec.lags());
            let copy = draw_innovations(spec, &mut rng, spec.lags());
            coupling_moments(spec, &coeffs, &base, &copy, m_list, p)
        })
        .collect();

    let n = n_mc as f64;
    let mut nu_hat = Vec::with_capacity(m_list.len());
    let mut stderr = Vec::with_capacity(m_list.len());
    for (mi, _) in m_list.iter().enumerate() {
        let mut best = (0.0, 0.0);
        for i in 0..r {
            let col = moments.iter().map(|row| row[mi * r + i]);
            let mean = col.clone().sum::<f64>() / n;
            let var = col.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            if mean >= best.0 {
                best = (mean, var);
            }
        }
        let (mean, var) = best;
        let nu = mean.powf(1.0 / p);
        nu_hat.push(nu);
        stderr.push(if mean > 0.0 {
            nu / (p * mean) * (var / n).sqrt()
        } else {
            0.0
        });
    }

    let expo = (1.0 + delta) * p / alpha;
    let weighted_partial_sum: Vec<f64> = m_list
        .iter()
        .zip(&nu_hat)
        .scan(0.0, |acc, (&m, nu)| {
            *acc += (m as f64).powf(expo) * nu;
            Some(*acc)
        })
        .collect();
    let m_max = *m_list.last().expect("non-empty");
    let final_decade_increment = m_list.iter().rposition(|&m| m * 10 <= m_max).and_then(|j| {
        let start = weighted_partial_sum[j];
        (start > 0.0).then(|| (weighted_partial_sum.last().unwrap() - start) / start)
    });

    Ok(ApproxProfile {
        m: m_list.to_vec(),
        nu_hat,
        stderr,
        weighted_partial_sum,
        final_decade_increment,
        p,
        alpha,
        delta,
        n_mc,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PostChange {
    /// Translate every point by `shift`, then clip to the domain.
    MeanShift { shift: Vec<f64> },
    /// Scale every point about the domain centre by `factor`, then clip.
    ScaleChange { factor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakSpec {
    pub theta: f64,
    pub post_change: PostChange,
}

impl BreakSpec {
    /// `v* = ⌊nθ⌋`; clouds with 0-based index `>= v*` are post-change.
    pub fn change_index(&self, n: usize) -> Result<usize> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::config(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        let v = (n as f64 * self.theta).floor() as usize;
        if v < 1 || v >= n {
            return Err(Error::config(format!(
                "change index floor(n*theta) = {v} must lie in 1..{n}"
            )));
        }
        Ok(v)
    }

    pub fn validate(&self, spec: &CloudSeriesSpec) -> Result<()> {
        self.change_index(spec.n)?;
        let dom = &spec.domain;
        match &self.post_change {
            PostChange::MeanShift { shift } => {
                if shift.len() != dom.dim() || shift.iter().any(|s| !s.is_finite()) {
                    return Err(Error::config(format!(
                        "shift must be a finite vector of length {}",
                        dom.dim()
                    )));
                }
                if let Some(i) = (0..dom.dim()).find(|&i| shift[i].abs() >= dom.hi()[i] - dom.lo()[i]) {
                    return Err(Error::config(format!(
                        "shift {} in coordinate {i} moves the whole domain outside itself",
                        shift[i]
                    )));
                }
            }
            PostChange::ScaleChange { factor } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::config(format!("scale factor must be positive, got {factor}")));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, x: &PointCloud, domain: &Domain) -> PointCloud {
        match &self.post_change {
            PostChange::MeanShift { shift } => {
                if shift.iter().all(|s| *s == 0.0) {
                    return x.clone();
                }
                x.map_points(|p| {
                    p.iter_mut().zip(shift).for_each(|(c, s)| *c += s);
                    domain.clip(p);
                })
            }
            PostChange::ScaleChange { factor } => {
                let centre = domain.center();
                x.map_points(|p| {
                    p.iter_mut()
                        .zip(&centre)
                        .for_each(|(c, m)| *c = m + factor * (*c - m));
                    domain.clip(p);
                })
            }
        }
    }
}

/// The base series of [`gen_series`] with clouds from `v*` on transformed.
pub fn inject_break(spec: &CloudSeriesSpec, brk: &BreakSpec, seed: u64) -> Result<Vec<PointCloud>> {
    brk.validate(spec)?;
    let v = brk.change_index(spec.n)?;
    let mut series = gen_series(spec, seed)?;
    for x in &mut series[v..] {
        *x = brk.apply(x, &spec.domain);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iid(n: usize, r: usize) -> CloudSeriesSpec {
        CloudSeriesSpec {
            generator: GeneratorSpec::IidClouds {},
            innovation: InnovationSpec::UniformBox {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            domain: Domain::unit_cube(2).unwrap(),
            n,
            r,
        }
    }

    fn delay(n: usize, r: usize, scale: f64, k: usize) -> CloudSeriesSpec {
        CloudSeriesSpec {
            generator: GeneratorSpec::DelayEmbedding {
                decay_exponent: 4.5,
                scale,
                truncation_lag: k,
            },
            innovation: InnovationSpec::TruncatedGaussian {
                mean: vec![0.0, 0.0],
                sd: 0.1,
                lo: vec![-0.5, -0.5],
                hi: vec![0.5, 0.5],
            },
            domain: Domain::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
            n,
            r,
        }
    }

    #[test]
    fn iid_clouds_are_contained_and_deterministic() {
        let s = gen_series(&iid(3, 2), 11).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|x| x.len() == 2 && x.within(&Domain::unit_cube(2).unwrap())));
        assert_eq!(s, gen_series(&iid(3, 2), 11).unwrap());
        assert_ne!(s, gen_series(&iid(3, 2), 12).unwrap());
    }

    #[test]
    fn zero_scale_gives_constant_clouds() {
        let s = gen_series(&delay(5, 3, 0.0, 4), 1).unwrap();
        assert!(s.iter().all(|x| x.coords().iter().all(|c| *c == 0.0)));
    }

    #[test]
    fn delay_embedding_shifts_points_along_the_series() {
        let s = gen_series(&delay(10, 3, 1.0, 5), 2).unwrap();
        for t in 1..10 {
            assert_eq!(s[t].point(1), s[t - 1].point(0));
            assert_eq!(s[t].point(2), s[t - 1].point(1));
        }
    }

    #[test]
    fn coupling_beyond_the_kernel_is_exact() {
        let spec = delay(20, 3, 1.0, 5);
        for (x, xm) in gen_m_coupled(&spec, 8, 3).unwrap() {
            assert_eq!(x, xm);
        }
        let pairs = gen_m_coupled(&spec, 2, 3).unwrap();
        assert!(pairs.iter().all(|(x, xm)| x != xm));
        // first coordinate is the plain series
        let plain = gen_series(&spec, 3).unwrap();
        assert!(pairs.iter().zip(&plain).all(|((x, _), p)| x == p));
        // zero scale: identical pairs
        assert!(gen_m_coupled(&delay(5, 3, 0.0, 5), 1, 3).unwrap().iter().all(|(a, b)| a == b));
        assert!(gen_m_coupled(&spec, 0, 3).is_err());
    }

    #[test]
    fn coupling_keeps_recent_lags() {
        // with m = 2, point 0 of the coupled cloud shares lags 0 and 1
        let spec = delay(4, 2, 1.0, 1);
        let coeffs = spec.generator.linear_process().unwrap().coefficients();
        let mut rng = Streams::new(0).stream("t", &[]);
        let base = draw_innovations(&spec, &mut rng, spec.lags());
        let copy = draw_innovations(&spec, &mut rng, spec.lags());
        let x = build_cloud(&spec, &coeffs, Lagged { eps: &base, d: 2 }, None).unwrap();
        let xm = build_cloud(&spec, &coeffs, Lagged { eps: &base, d: 2 }, Some((Lagged { eps: &copy, d: 2 }, 2))).unwrap();
        assert_eq!(x.point(0), xm.point(0));
        assert_ne!(x.point(1), xm.point(1));
    }

    #[test]
    fn coupling_discrepancy_decreases_in_m() {
        let spec = delay(2, 3, 1.0, 10);
        let m: Vec<usize> = (1..=15).collect();
        let prof = approx_profile(&spec, 2.0, 1.0, DEFAULT_DELTA, &m, 2000, 4).unwrap();
        for j in 1..m.len() {
            let slack = 2.0 * (prof.stderr[j] + prof.stderr[j - 1]);
            assert!(prof.nu_hat[j] <= prof.nu_hat[j - 1] + slack);
        }
        assert!(prof.nu_hat.iter().skip(spec.lags() - 1).all(|v| *v == 0.0));
        assert!(prof.nu_hat[0] > 0.0);
        assert!(approx_profile(&spec, 0.5, 1.0, 0.1, &m, 2000, 4).is_err());
    }

    #[test]
    fn prefix_sums_match_the_direct_coupling() {
        let spec = delay(2, 3, 1.0, 6);
        let coeffs = spec.generator.linear_process().unwrap().coefficients();
        let mut rng = Streams::new(8).stream("t", &[]);
        let base = draw_innovations(&spec, &mut rng, spec.lags());
        let copy = draw_innovations(&spec, &mut rng, spec.lags());
        let m_list: Vec<usize> = (1..=12).collect();
        let fast = coupling_moments(&spec, &coeffs, &base, &copy, &m_list, 1.0);
        let x = build_cloud(&spec, &coeffs, Lagged { eps: &base, d: 2 }, None).unwrap();
        for (mi, &m) in m_list.iter().enumerate() {
            let xm = build_cloud(&spec, &coeffs, Lagged { eps: &base, d: 2 }, Some((Lagged { eps: &copy, d: 2 }, m))).unwrap();
            for i in 0..3 {
                let direct = crate::geometry::euclid(x.point(i), xm.point(i));
                assert!((fast[mi * 3 + i] - direct).abs() < 1e-14);
                if m >= spec.lags() {
                    assert_eq!(fast[mi * 3 + i], 0.0);
                }
            }
        }
    }

    #[test]
    fn iid_profile_is_zero() {
        let prof = approx_profile(&iid(2, 3), 1.0, 1.0, 0.1, &[1, 2, 3], 10, 0).unwrap();
        assert!(prof.nu_hat.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn break_index_arithmetic() {
        let spec = iid(100, 3);
        let brk = BreakSpec {
            theta: 0.5,
            post_change: PostChange::MeanShift { shift: vec![0.3, 0.0] },
        };
        let base = gen_series(&spec, 5).unwrap();
        let broken = inject_break(&spec, &brk, 5).unwrap();
        assert_eq!(&broken[..50], &base[..50]);
        assert!(broken[50..].iter().zip(&base[50..]).all(|(a, b)| a != b));
        let zero = BreakSpec {
            theta: 0.5,
            post_change: PostChange::MeanShift { shift: vec![0.0, 0.0] },
        };
        assert_eq!(inject_break(&spec, &zero, 5).unwrap(), base);
    }

    #[test]
    fn invalid_breaks() {
        let spec = iid(10, 3);
        let bad = |theta, pc| inject_break(&spec, &BreakSpec { theta, post_change: pc }, 0).is_err();
        assert!(bad(0.05, PostChange::ScaleChange { factor: 0.5 }));
        assert!(bad(1.0, PostChange::ScaleChange { factor: 0.5 }));
        assert!(bad(0.5, PostChange::ScaleChange { factor: 0.0 }));
        assert!(bad(0.5, PostChange::MeanShift { shift: vec![1.0, 0.0] }));
        assert!(bad(0.5, PostChange::MeanShift { shift: vec![0.1] }));
    }

    #[test]
    fn spec_validation() {
        let mut s = iid(1, 3);
        assert!(matches!(gen_series(&s, 0), Err(Error::Config(_))));
        s.n = 4;
        s.r = 1;
        assert!(gen_series(&s, 0).is_err());
        let mut d = delay(4, 3, 1.0, 0);
        assert!(gen_series(&d, 0).is_err());
        d.generator = GeneratorSpec::DelayEmbedding {
            decay_exponent: 1.0,
            scale: 1.0,
            truncation_lag: 3,
        };
        assert!(gen_series(&d, 0).is_err());
    }

    #[test]
    fn truncated_gaussian_stays_in_box() {
        let spec = InnovationSpec::TruncatedGaussian {
            mean: vec![0.0],
            sd: 1.0,
            lo: vec![-0.2],
            hi: vec![0.3],
        };
        let mut rng = Streams::new(1).stream("g", &[]);
        let mut v = [0.0];
        for _ in 0..1000 {
            spec.sample(&mut rng, &mut v);
            assert!((-0.2..=0.3).contains(&v[0]));
        }
    }
}
