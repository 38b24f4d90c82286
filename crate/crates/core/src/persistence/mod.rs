//! Filtered complexes, persistence diagrams and fixed-length feature vectors.

mod complex;
mod features;
mod reduction;

pub use complex::{build_filtration, FilteredComplex, FilteredSimplex};
pub(crate) use complex::simplex_values;
pub use features::{
    feature_map, feature_vector, total_persistence, FeatureComponent, FeatureMapSpec,
    FeatureVector, TieBreak,
};
pub use reduction::compute_persistence;

use crate::error::{Error, Result};
use crate::geometry::{Domain, FiltrationKind, PointCloud};

/// One point of a persistence diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    pub dim: usize,
    /// Class never dies inside the filtration; `death` holds the cap `T`.
    pub essential: bool,
    /// Diagonal padding entry `(0, 0)`.
    pub trivial: bool,
}

impl PersistencePair {
    pub fn finite(dim: usize, birth: f64, death: f64) -> Self {
        Self {
            birth,
            death,
            dim,
            essential: false,
            trivial: false,
        }
    }

    pub fn essential(dim: usize, birth: f64, cap: f64) -> Self {
        Self {
            birth,
            death: cap,
            dim,
            essential: true,
            trivial: false,
        }
    }

    pub fn padding(dim: usize) -> Self {
        Self {
            birth: 0.0,
            death: 0.0,
            dim,
            essential: false,
            trivial: true,
        }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    k: usize,
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub(crate) fn unpadded(k: usize, pairs: Vec<PersistencePair>) -> Self {
        Self { k, pairs }
    }

    pub fn new(k: usize, pairs: Vec<PersistencePair>) -> Result<Self> {
        if let Some(p) = pairs.iter().find(|p| p.dim != k || !(p.birth <= p.death) || p.birth < 0.0) {
            return Err(Error::input(format!(
                "pair ({}, {}) of dimension {} does not belong to a degree-{k} diagram",
                p.birth, p.death, p.dim
            )));
        }
        Ok(Self { k, pairs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.trivial)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `N_k = C(r, k+1) + C(r, k+2)`, the deterministic bound on the number of
/// degree-`k` features of an `r`-point cloud.
pub fn n_features(r: usize, k: usize) -> usize {
    binomial(r, k + 1) + binomial(r, k + 2)
}

/// Appends diagonal `(0, 0)` entries until the diagram has exactly `n_k` pairs.
pub fn pad_diagram(pd: &PersistenceDiagram, n_k: usize) -> Result<PersistenceDiagram> {
    if pd.pairs.len() > n_k {
        return Err(Error::Internal(format!(
            "degree-{} diagram has {} pairs, above the bound N_k = {n_k}",
            pd.k,
            pd.pairs.len()
        )));
    }
    let mut pairs = pd.pairs.clone();
    pairs.resize(n_k, PersistencePair::padding(pd.k));
    Ok(PersistenceDiagram { k: pd.k, pairs })
}

/// Filtration settings that turn a cloud into a degree-`k` feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramPipeline {
    pub kind: FiltrationKind,
    pub dim_cap: usize,
    pub k: usize,
    pub cap: f64,
    pub n_k: usize,
}

impl DiagramPipeline {
    pub fn new(kind: FiltrationKind, dim_cap: usize, k: usize, r: usize, domain: &Domain) -> Result<Self> {
        if k + 2 > r {
            return Err(Error::config(format!("feature dimension k = {k} needs k + 2 <= r = {r}")));
        }
        if dim_cap < k + 1 || dim_cap > r - 1 {
            return Err(Error::config(format!(
                "dim_cap = {dim_cap} must lie in {}..={} for k = {k}, r = {r}",
                k + 1,
                r - 1
            )));
        }
        Ok(Self {
            kind,
            dim_cap,
            k,
            cap: kind.cap(domain),
            n_k: n_features(r, k),
        })
    }

    /// Padded degree-`k` diagram of `x`.
    pub fn diagram(&self, x: &PointCloud) -> Result<PersistenceDiagram> {
        let complex = build_filtration(x, self.kind, self.dim_cap)?;
        let pd = compute_persistence(&complex, self.k, self.cap)?;
        pad_diagram(&pd, self.n_k)
    }

    pub fn features(&self, x: &PointCloud, tie: &TieBreak) -> Result<FeatureVector> {
        Ok(feature_vector(&self.diagram(x)?, tie))
    }
}
