//! Batch commands that tie the modules into reproducible runs.
//!
//! Each command reads an [`ExperimentConfig`], writes plot-ready CSV files
//! and a JSON summary into an output directory, and returns a
//! [`RunManifest`] that is also written as `manifest.json`. Replication `i`
//! draws from streams keyed by `(seed, phase, i)` only, so outputs do not
//! depend on the number of worker threads.

mod config;
pub mod output;

pub use config::{
    ApproxSection, CritvalsSection, ExperimentConfig, FeaturesSection, FiltrationSection, StabilitySection,
    TestSection, SCHEMA_VERSION,
};

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::changepoint::{estimate_changepoint, run_test, simulate_limit_law, Statistic, StatSeries, TABLE_LEVELS};
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::persistence::{feature_map, DiagramPipeline, PersistenceDiagram};
use crate::procgen::{approx_profile, gen_series, inject_break};
use crate::rng::Streams;
use crate::stability::{
    default_fit_window, default_t_grid, envelope_ratio, estimate_sublevel, fit_alpha, target_alpha,
};
use output::{fmt_f64, write_json, CsvOut};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub run_id: String,
    pub library_version: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub config: Value,
    pub derived: Map<String, Value>,
    pub artifacts: Vec<String>,
}

struct Run {
    command: &'static str,
    run_id: String,
    config: Value,
    out: PathBuf,
    started: SystemTime,
    clock: Instant,
    derived: Map<String, Value>,
    artifacts: Vec<PathBuf>,
}

impl Run {
    fn start<C: Serialize>(command: &'static str, run_id: &str, config: &C, out: &Path) -> Result<Self> {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
        Ok(Self {
            command,
            run_id: run_id.to_string(),
            config: serde_json::to_value(config).map_err(|e| Error::Internal(e.to_string()))?,
            out: out.to_path_buf(),
            started: SystemTime::now(),
            clock: Instant::now(),
            derived: Map::new(),
            artifacts: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn derive(&mut self, key: &str, value: impl Serialize) {
        self.derived
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    fn finish(mut self) -> Result<RunManifest> {
        let manifest_path = self.path("manifest.json");
        self.artifacts.push(manifest_path.clone());
        let manifest = RunManifest {
            command: self.command.to_string(),
            run_id: self.run_id,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_seconds: self.started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_clock_seconds: self.clock.elapsed().as_secs_f64(),
            config: self.config,
            derived: self.derived,
            artifacts: self
                .artifacts
                .iter()
                .map(|p| p.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()))
                .collect(),
        };
        write_json(&manifest_path, &manifest)?;
        Ok(manifest)
    }
}

fn within_replication<T>(rep: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Replication {
        replication: rep,
        source: Box::new(e),
    })
}

/// Seed of the cloud series used by replication `rep`.
pub fn series_seed(master: u64, rep: usize) -> u64 {
    Streams::new(master).derive_seed("series", &[rep as u64])
}

/// Clouds of replication `rep`: the plain series, or the broken one when the
/// config has a `[break]` section.
pub fn replicate_series(cfg: &ExperimentConfig, rep: usize) -> Result<Vec<PointCloud>> {
    let series = cfg.require(&cfg.series, "series")?;
    let seed = series_seed(cfg.seed, rep);
    match &cfg.brk {
        Some(b) => inject_break(series, b, seed),
        None => gen_series(series, seed),
    }
}

pub fn pipeline(cfg: &ExperimentConfig) -> Result<DiagramPipeline> {
    let series = cfg.require(&cfg.series, "series")?;
    let f = cfg.require(&cfg.filtration, "filtration")?;
    let feat = cfg.require(&cfg.features, "features")?;
    DiagramPipeline::new(f.kind, f.dim_cap, feat.k, series.r, &series.domain)
}

/// `f(Z_{k,t})` for every cloud, as an `n × ℓ` series.
pub fn feature_series(clouds: &[PointCloud], pipe: &DiagramPipeline, features: &FeaturesSection) -> Result<StatSeries> {
    let mut values = Vec::with_capacity(clouds.len() * features.map.ell());
    for x in clouds {
        let z = pipe.features(x, &features.tie_break)?;
        values.extend(feature_map(&z, &features.map)?);
    }
    StatSeries::from_flat(features.map.ell(), values)
}

fn record_pipeline(run: &mut Run, pipe: &DiagramPipeline, cfg: &ExperimentConfig) {
    run.derive("n_k", pipe.n_k);
    run.derive("cap_t", pipe.cap);
    run.derive("c_star", pipe.kind.gradient_bound());
    if let Some(feat) = &cfg.features {
        run.derive("ell", feat.map.ell());
    }
}

#[derive(Debug, Clone, Serialize)]
struct RepOutcome {
    tests: Vec<crate::changepoint::TestResult>,
    estimate: Option<crate::changepoint::ChangePointEstimate>,
}

fn run_replication(cfg: &ExperimentConfig, pipe: &DiagramPipeline, rep: usize) -> Result<RepOutcome> {
    let features = cfg.require(&cfg.features, "features")?;
    let test = cfg.require(&cfg.test, "test")?;
    let clouds = replicate_series(cfg, rep)?;
    let series = feature_series(&clouds, pipe, features)?;
    let tests = test
        .statistics
        .iter()
        .map(|s| run_test(&series, &test.options(*s)))
        .collect::<Result<Vec<_>>>()?;
    let estimate = if test.estimate_changepoint {
        Some(estimate_changepoint(&series, test.weighting, test.bandwidth)?)
    } else {
        None
    };
    Ok(RepOutcome { tests, estimate })
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Full pipeline per replication: series → diagrams → features → test.
///
/// Writes `results.csv` (one row per replication and statistic),
/// `summary.json` (rejection rates, median `|θ̂ − θ|`) and `manifest.json`.
pub fn cmd_test(cfg: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let test = cfg.require(&cfg.test, "test")?;
    let pipe = pipeline(cfg)?;
    let mut run = Run::start("test", &cfg.run_id, cfg, out)?;
    record_pipeline(&mut run, &pipe, cfg);

    // replication 0 first, so its critical-value tables are simulated once
    // rather than by every worker at the same time
    let first = within_replication(0, run_replication(cfg, &pipe, 0))?;
    let rest: Vec<RepOutcome> = (1..cfg.replications)
        .into_par_iter()
        .map(|rep| within_replication(rep, run_replication(cfg, &pipe, rep)))
        .collect::<Result<_>>()?;
    let outcomes: Vec<RepOutcome> = std::iter::once(first).chain(rest).collect();

    let mut csv = CsvOut::create(
        &run.path("results.csv"),
        &[
            "replication", "statistic", "value", "critical_value", "p_value", "reject", "ell", "bandwidth",
            "ridge_applied", "v_hat", "theta_hat",
        ],
    )?;
    for (rep, o) in outcomes.iter().enumerate() {
        for t in &o.tests {
            let (v_hat, theta_hat) = o
                .estimate
                .map_or((String::new(), String::new()), |e| (e.v_hat.to_string(), fmt_f64(e.theta_hat)));
            csv.row([
                rep.to_string(),
                t.statistic.to_string(),
                fmt_f64(t.value),
                fmt_f64(t.critical_value),
                fmt_f64(t.p_value),
                t.reject.to_string(),
                t.ell.to_string(),
                t.bandwidth.to_string(),
                t.ridge_applied.to_string(),
                v_hat,
                theta_hat,
            ])?;
        }
    }
    run.artifacts.push(csv.finish()?);

    let n = outcomes.len() as f64;
    let mut per_stat = Map::new();
    for (i, s) in test.statistics.iter().enumerate() {
        let rejections = outcomes.iter().filter(|o| o.tests[i].reject).count();
        per_stat.insert(
            s.to_string(),
            json!({ "rejections": rejections, "rejection_rate": rejections as f64 / n }),
        );
    }
    let theta = cfg.brk.as_ref().map(|b| b.theta);
    let errors: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.estimate.zip(theta).map(|(e, th)| (e.theta_hat - th).abs()))
        .collect();
    let summary = json!({
        "run_id": cfg.run_id,
        "replications": outcomes.len(),
        "alpha": test.alpha,
        "statistics": per_stat,
        "theta": theta,
        "median_abs_theta_error": median(errors),
    });
    run.artifacts.push(write_json(&run.path("summary.json"), &summary)?);

    let t0 = &outcomes[0].tests[0];
    run.derive("bandwidth", t0.bandwidth);
    run.derive("effective_ell_replication_0", t0.ell);
    run.derive(
        "ridge_applied_replications",
        outcomes.iter().filter(|o| o.tests[0].ridge_applied).count(),
    );
    run.finish()
}

/// Sublevel curve of the stability proxy and its fitted exponent.
pub fn cmd_stability(cfg: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let st = cfg.require(&cfg.stability, "stability")?;
    let mut run = Run::start("stability", &cfg.run_id, cfg, out)?;
    let dim_cap = st.dim_cap.unwrap_or(st.r - 1);
    let grid = st.t_grid.clone().unwrap_or_else(|| default_t_grid(&st.domain));
    let (lo, hi) = st.fit_window.map_or_else(|| default_fit_window(&st.domain), |[a, b]| (a, b));
    let curve = estimate_sublevel(st.kind, &st.domain, st.r, dim_cap, &grid, st.n_samples, cfg.seed)?;

    let mut csv = CsvOut::create(&run.path("curve.csv"), &["t", "p_hat", "stderr", "n_samples", "kind", "r", "d"])?;
    for i in 0..curve.t_grid.len() {
        csv.row([
            fmt_f64(curve.t_grid[i]),
            fmt_f64(curve.p_hat[i]),
            fmt_f64(curve.stderr[i]),
            curve.n_samples.to_string(),
            curve.kind.to_string(),
            curve.r.to_string(),
            curve.d.to_string(),
        ])?;
    }
    run.artifacts.push(csv.finish()?);

    let fit = fit_alpha(&curve, lo, hi)?;
    let target = target_alpha(st.kind);
    let summary = json!({
        "alpha_hat": fit.alpha_hat,
        "alpha_stderr": fit.stderr,
        "intercept": fit.intercept,
        "n_points": fit.n_points,
        "window": [lo, hi],
        "target_alpha": target,
        "envelope_ratio_at_target": envelope_ratio(&curve, lo, hi, target).ok(),
        "kind": st.kind,
        "r": st.r,
        "d": st.domain.dim(),
        "n_samples": st.n_samples,
    });
    run.artifacts.push(write_json(&run.path("alpha.json"), &summary)?);
    run.derive("cap_t", st.kind.cap(&st.domain));
    run.derive("c_star", st.kind.gradient_bound());
    run.derive("dim_cap", dim_cap);
    run.finish()
}

/// Parameters of a critical-value table run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CritvalsArgs {
    pub run_id: String,
    pub statistics: Vec<Statistic>,
    pub ell: Vec<usize>,
    pub grid: usize,
    pub n_rep: usize,
    pub seed: u64,
}

impl CritvalsArgs {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let c = cfg.require(&cfg.critvals, "critvals")?;
        Ok(Self {
            run_id: cfg.run_id.clone(),
            statistics: c.statistics.clone(),
            ell: c.ell.clone(),
            grid: c.grid,
            n_rep: c.n_rep,
            seed: cfg.seed,
        })
    }
}

/// Quantile table `quantiles.csv` plus `moments.json`.
pub fn cmd_critvals(args: &CritvalsArgs, out: &Path) -> Result<RunManifest> {
    if args.statistics.is_empty() || args.ell.is_empty() {
        return Err(Error::config("critvals needs at least one statistic and one ell"));
    }
    let mut run = Run::start("critvals", &args.run_id, args, out)?;
    let mut csv = CsvOut::create(
        &run.path("quantiles.csv"),
        &["statistic", "ell", "level", "quantile", "n_rep", "grid", "seed"],
    )?;
    let mut moments = Vec::new();
    for &stat in &args.statistics {
        for &ell in &args.ell {
            let table = simulate_limit_law(stat, ell, args.grid, args.n_rep, args.seed)?;
            for level in TABLE_LEVELS {
                csv.row([
                    stat.to_string(),
                    ell.to_string(),
                    fmt_f64(level),
                    fmt_f64(table.quantile(level)),
                    args.n_rep.to_string(),
                    args.grid.to_string(),
                    args.seed.to_string(),
                ])?;
            }
            moments.push(json!({
                "statistic": stat, "ell": ell, "mean": table.mean, "variance": table.variance,
            }));
        }
    }
    run.artifacts.push(csv.finish()?);
    run.artifacts.push(write_json(&run.path("moments.json"), &moments)?);
    run.finish()
}

/// Coupling profile `nu.csv` and partial-sum diagnostics `approx.json`.
pub fn cmd_approx(cfg: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let series = cfg.require(&cfg.series, "series")?;
    let a = cfg.require(&cfg.approx, "approx")?;
    if !(a.p >= 1.0) {
        return Err(Error::input(format!("moment order p must be at least 1, got {}", a.p)));
    }
    let mut run = Run::start("approx", &cfg.run_id, cfg, out)?;
    let m_list: Vec<usize> = (1..=a.m_max).collect();
    let prof = approx_profile(series, a.p, a.alpha, a.delta, &m_list, a.n_mc, cfg.seed)?;
    let mut csv = CsvOut::create(&run.path("nu.csv"), &["m", "nu_hat", "stderr", "weighted_partial_sum"])?;
    for i in 0..prof.m.len() {
        csv.row([
            prof.m[i].to_string(),
            fmt_f64(prof.nu_hat[i]),
            fmt_f64(prof.stderr[i]),
            fmt_f64(prof.weighted_partial_sum[i]),
        ])?;
    }
    run.artifacts.push(csv.finish()?);
    let zero_from = series.generator.linear_process().map_or(1, |lp| lp.truncation_lag + series.r);
    let summary = json!({
        "p": prof.p,
        "alpha": prof.alpha,
        "delta": prof.delta,
        "weight_exponent": (1.0 + prof.delta) * prof.p / prof.alpha,
        "n_mc": prof.n_mc,
        "final_decade_increment": prof.final_decade_increment,
        "exactly_zero_from_m": zero_from,
    });
    run.artifacts.push(write_json(&run.path("approx.json"), &summary)?);
    run.derive("exactly_zero_from_m", zero_from);
    run.finish()
}

fn diagram_rows(csv: &mut CsvOut, t: usize, pd: &PersistenceDiagram) -> Result<()> {
    for p in pd.pairs() {
        csv.row([
            t.to_string(),
            pd.k().to_string(),
            fmt_f64(p.birth),
            fmt_f64(p.death),
            p.essential.to_string(),
            p.trivial.to_string(),
        ])?;
    }
    Ok(())
}

/// Series dump: `series_<rep>.csv` per replication, plus `diagrams_<rep>.csv`
/// when the config has filtration and feature sections.
pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let series = cfg.require(&cfg.series, "series")?;
    let pipe = match (&cfg.filtration, &cfg.features) {
        (Some(_), Some(_)) => Some(pipeline(cfg)?),
        _ => None,
    };
    let mut run = Run::start("simulate", &cfg.run_id, cfg, out)?;
    if let Some(p) = &pipe {
        record_pipeline(&mut run, p, cfg);
    }
    if let Some(b) = &cfg.brk {
        run.derive("change_index", b.change_index(series.n)?);
    }
    let d = series.dim();
    let mut header = vec!["t".to_string(), "point_index".to_string()];
    header.extend((0..d).map(|i| format!("coord_{i}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();

    for rep in 0..cfg.replications {
        let clouds = within_replication(rep, replicate_series(cfg, rep))?;
        let mut csv = CsvOut::create(&run.path(&format!("series_{rep}.csv")), &header)?;
        for (t, x) in clouds.iter().enumerate() {
            for (i, p) in x.points().enumerate() {
                let mut row = vec![(t + 1).to_string(), i.to_string()];
                row.extend(p.iter().map(|c| fmt_f64(*c)));
                csv.row(row)?;
            }
        }
        run.artifacts.push(csv.finish()?);
        if let Some(p) = &pipe {
            let mut csv = CsvOut::create(
                &run.path(&format!("diagrams_{rep}.csv")),
                &["t", "k", "birth", "death", "essential", "trivial"],
            )?;
            for (t, x) in clouds.iter().enumerate() {
                let pd = within_replication(rep, p.diagram(x))?;
                diagram_rows(&mut csv, t + 1, &pd)?;
            }
            run.artifacts.push(csv.finish()?);
        }
    }
    run.finish()
}
