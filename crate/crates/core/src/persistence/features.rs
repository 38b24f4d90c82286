use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::{PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

/// Order of pairs that share a birth value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Death ascending; padding entries first among identical `(birth, death)`.
    #[default]
    Deterministic,
    /// Uniformly random order inside each equal-birth group.
    SeededRandom { seed: u64 },
}

/// Flattened diagram `(d_1, b_1, ..., d_N, b_N)` with births non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    z: Vec<f64>,
}

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.z
    }

    pub fn n_features(&self) -> usize {
        self.z.len() / 2
    }

    pub fn deaths(&self) -> impl Iterator<Item = f64> + '_ {
        self.z.iter().step_by(2).copied()
    }

    pub fn births(&self) -> impl Iterator<Item = f64> + '_ {
        self.z.iter().skip(1).step_by(2).copied()
    }

    pub fn persistences(&self) -> impl Iterator<Item = f64> + '_ {
        self.z.chunks_exact(2).map(|c| c[0] - c[1])
    }

    pub fn distance(&self, other: &FeatureVector) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

pub fn feature_vector(pd: &PersistenceDiagram, tie: &TieBreak) -> FeatureVector {
    let mut pairs: Vec<PersistencePair> = pd.pairs().to_vec();
    match tie {
        TieBreak::Deterministic => pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
                .then(b.trivial.cmp(&a.trivial))
        }),
        TieBreak::SeededRandom { seed } => {
            pairs.sort_by(|a, b| a.birth.total_cmp(&b.birth));
            let mut rng = StreamRng::seed_from_u64(*seed);
            let mut start = 0;
            while start < pairs.len() {
                let end = start
                    + pairs[start..]
                        .iter()
                        .take_while(|p| p.birth == pairs[start].birth)
                        .count();
                pairs[start..end].shuffle(&mut rng);
                start = end;
            }
        }
    }
    FeatureVector {
        z: pairs.iter().flat_map(|p| [p.death, p.birth]).collect(),
    }
}

/// `‖(d_i − b_i)_i‖_γ` for `γ ∈ [1, ∞]`.
pub fn total_persistence(z: &FeatureVector, gamma: f64) -> Result<f64> {
    if !(gamma >= 1.0) {
        return Err(Error::input(format!("total persistence needs gamma >= 1, got {gamma}")));
    }
    if gamma.is_infinite() {
        return Ok(z.persistences().map(f64::abs).fold(0.0, f64::max));
    }
    let sum: f64 = z.persistences().map(|p| p.abs().powf(gamma)).sum();
    Ok(sum.powf(1.0 / gamma))
}

/// One coordinate of the statistic `f: R^{2N} → R^ℓ`.
///
/// Text form: `total_persistence:<gamma>` (gamma may be `inf`),
/// `max_persistence`, `mean_birth`, `mean_death`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FeatureComponent {
    TotalPersistence(f64),
    MaxPersistence,
    MeanBirth,
    MeanDeath,
}

impl FeatureComponent {
    pub fn evaluate(&self, z: &FeatureVector) -> Result<f64> {
        let n = z.n_features().max(1) as f64;
        match self {
            FeatureComponent::TotalPersistence(g) => total_persistence(z, *g),
            FeatureComponent::MaxPersistence => total_persistence(z, f64::INFINITY),
            FeatureComponent::MeanBirth => Ok(z.births().sum::<f64>() / n),
            FeatureComponent::MeanDeath => Ok(z.deaths().sum::<f64>() / n),
        }
    }

    /// Lipschitz constant with respect to the Euclidean norm on `R^{2N}`.
    ///
    /// Persistences `d_i − b_i` are `√2`-Lipschitz jointly, and
    /// `‖v‖_γ ≤ N^{max(1/γ − 1/2, 0)} ‖v‖_2` by Hölder.
    pub fn lipschitz_constant(&self, n_k: usize) -> f64 {
        let n = n_k as f64;
        match self {
            FeatureComponent::TotalPersistence(g) => {
                std::f64::consts::SQRT_2 * n.powf((1.0 / g - 0.5).max(0.0))
            }
            FeatureComponent::MaxPersistence => std::f64::consts::SQRT_2,
            FeatureComponent::MeanBirth | FeatureComponent::MeanDeath => n.powf(-0.5),
        }
    }
}

impl fmt::Display for FeatureComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureComponent::TotalPersistence(g) if g.is_infinite() => f.write_str("total_persistence:inf"),
            FeatureComponent::TotalPersistence(g) => write!(f, "total_persistence:{g}"),
            FeatureComponent::MaxPersistence => f.write_str("max_persistence"),
            FeatureComponent::MeanBirth => f.write_str("mean_birth"),
            FeatureComponent::MeanDeath => f.write_str("mean_death"),
        }
    }
}

impl FromStr for FeatureComponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_persistence" => Ok(Self::MaxPersistence),
            "mean_birth" => Ok(Self::MeanBirth),
            "mean_death" => Ok(Self::MeanDeath),
            _ => {
                let gamma = s
                    .strip_prefix("total_persistence:")
                    .ok_or_else(|| Error::config(format!("unknown feature component `{s}`")))?;
                let gamma: f64 = match gamma {
                    "inf" | "infinity" => f64::INFINITY,
                    g => g
                        .parse()
                        .map_err(|_| Error::config(format!("bad gamma in feature component `{s}`")))?,
                };
                if !(gamma >= 1.0) {
                    return Err(Error::config(format!("feature component `{s}`: gamma must be >= 1")));
                }
                Ok(Self::TotalPersistence(gamma))
            }
        }
    }
}

impl TryFrom<String> for FeatureComponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FeatureComponent> for String {
    fn from(c: FeatureComponent) -> String {
        c.to_string()
    }
}

/// Ordered list of `ℓ >= 1` components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureMapSpec(pub Vec<FeatureComponent>);

impl FeatureMapSpec {
    pub fn ell(&self) -> usize {
        self.0.len()
    }
}

pub fn feature_map(z: &FeatureVector, spec: &FeatureMapSpec) -> Result<Vec<f64>> {
    if spec.0.is_empty() {
        return Err(Error::config("feature map needs at least one component"));
    }
    spec.0.iter().map(|c| c.evaluate(z)).collect()
}
