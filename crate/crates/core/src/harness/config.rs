//! Versioned TOML experiment configuration. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::changepoint::{CvMethod, Statistic, TestOptions, Weighting};
use crate::error::{Error, Result};
use crate::geometry::{Domain, FiltrationKind};
use crate::persistence::{DiagramPipeline, FeatureMapSpec, TieBreak};
use crate::procgen::{BreakSpec, CloudSeriesSpec, DEFAULT_DELTA};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub run_id: String,
    pub seed: u64,
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<CloudSeriesSpec>,
    #[serde(rename = "break", default, skip_serializing_if = "Option::is_none")]
    pub brk: Option<BreakSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<FeaturesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critvals: Option<CritvalsSection>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSection {
    pub kind: FiltrationKind,
    pub dim_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesSection {
    pub k: usize,
    pub map: FeatureMapSpec,
    #[serde(default)]
    pub tie_break: TieBreak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSection {
    pub statistics: Vec<Statistic>,
    pub alpha: f64,
    pub cv_method: CvMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<usize>,
    #[serde(default)]
    pub estimate_changepoint: bool,
    #[serde(default = "inverse_lrc")]
    pub weighting: Weighting,
}

fn inverse_lrc() -> Weighting {
    Weighting::InverseLrc
}

impl TestSection {
    pub fn options(&self, statistic: Statistic) -> TestOptions {
        TestOptions {
            statistic,
            alpha: self.alpha,
            cv_method: self.cv_method,
            bandwidth: self.bandwidth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilitySection {
    pub kind: FiltrationKind,
    pub r: usize,
    pub domain: Domain,
    pub n_samples: usize,
    /// Defaults to `r − 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_cap: Option<usize>,
    /// Defaults to 24 points per decade over `[1e-4, 1e-1]·diam`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    /// Defaults to `[1e-4, 1e-2]·diam`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxSection {
    pub p: f64,
    pub alpha: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// `m = 1..=m_max`.
    pub m_max: usize,
    pub n_mc: usize,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CritvalsSection {
    pub statistics: Vec<Statistic>,
    pub ell: Vec<usize>,
    pub grid: usize,
    pub n_rep: usize,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported schema_version {}; this build reads version {SCHEMA_VERSION}",
                cfg.schema_version
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config serialisation failed: {e}")))
    }

    /// Cross-section checks that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::config("replications must be at least 1"));
        }
        if let Some(series) = &self.series {
            series.validate()?;
            if let Some(brk) = &self.brk {
                brk.validate(series)?;
            }
            if let (Some(f), Some(feat)) = (&self.filtration, &self.features) {
                DiagramPipeline::new(f.kind, f.dim_cap, feat.k, series.r, &series.domain)?;
                if feat.map.0.is_empty() {
                    return Err(Error::config("features.map must list at least one component"));
                }
            }
        } else if self.brk.is_some() {
            return Err(Error::config("[break] needs a [series] section"));
        }
        if let Some(t) = &self.test {
            if t.statistics.is_empty() {
                return Err(Error::config("test.statistics must not be empty"));
            }
            if !(t.alpha > 0.0 && t.alpha < 1.0) {
                return Err(Error::config(format!("test.alpha must lie in (0, 1), got {}", t.alpha)));
            }
        }
        if let Some(s) = &self.stability {
            if s.domain.dim() < 1 || s.r < 2 {
                return Err(Error::config("stability needs r >= 2"));
            }
            if let Some([lo, hi]) = s.fit_window {
                if !(lo > 0.0 && lo < hi) {
                    return Err(Error::config("stability.fit_window must satisfy 0 < lo < hi"));
                }
            }
        }
        if let Some(a) = &self.approx {
            if a.m_max < 1 {
                return Err(Error::config("approx.m_max must be at least 1"));
            }
        }
        Ok(())
    }

    pub(crate) fn require<'a, T>(&self, section: &'a Option<T>, name: &str) -> Result<&'a T> {
        section
            .as_ref()
            .ok_or_else(|| Error::config(format!("run `{}` needs a [{name}] section", self.run_id)))
    }
}
