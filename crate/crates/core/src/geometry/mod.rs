//! Domains, point clouds and filtration functions.
//!
//! Simplices are subsets of the point labels `0..r` (zero-based). Both
//! filtration functions use the Euclidean norm.

mod minball;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use minball::{smallest_enclosing_ball, Ball};
pub(crate) use minball::euclid;

/// Largest supported cloud size; simplices are stored as `u32` bitmasks.
pub const MAX_POINTS: usize = 32;

/// Axis-aligned box `[lo, hi]` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainRepr {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl TryFrom<DomainRepr> for Domain {
    type Error = Error;
    fn try_from(r: DomainRepr) -> Result<Self> {
        Domain::new(r.lo, r.hi)
    }
}

impl From<Domain> for DomainRepr {
    fn from(d: Domain) -> Self {
        DomainRepr { lo: d.lo, hi: d.hi }
    }
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::input(format!(
                "domain corners must be non-empty and of equal length (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::input("domain corners must be finite"));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] >= hi[i]) {
            return Err(Error::input(format!(
                "domain is not full-dimensional: lo[{i}] = {} >= hi[{i}] = {}",
                lo[i], hi[i]
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The unit cube `[0, 1]^d`.
    pub fn unit_cube(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d], vec![1.0; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn diameter(&self) -> f64 {
        euclid(&self.lo, &self.hi)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Metric projection onto the box (componentwise clipping).
    pub fn clip(&self, p: &mut [f64]) {
        for (x, (lo, hi)) in p.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            *x = x.clamp(*lo, *hi);
        }
    }
}

/// An ordered list of `r >= 2` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        let coords: Vec<f64> = points.iter().flat_map(|p| p.as_ref().iter().copied()).collect();
        if points.iter().any(|p| p.as_ref().len() != dim) {
            return Err(Error::input("points of a cloud must share one dimension"));
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::input(format!(
                "coordinate buffer of length {} does not hold points of dimension {dim}",
                coords.len()
            )));
        }
        let r = coords.len() / dim;
        if !(2..=MAX_POINTS).contains(&r) {
            return Err(Error::input(format!(
                "point clouds need 2..={MAX_POINTS} points, got {r}"
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("point coordinates must be finite"));
        }
        Ok(Self { dim, coords })
    }

    /// Number of points `r`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn within(&self, domain: &Domain) -> bool {
        domain.dim() == self.dim && self.points().all(|p| domain.contains(p))
    }

    /// Cloud whose `i`-th point is `self.point(perm[i])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if perm.len() != self.len() || perm.iter().any(|&p| p >= seen.len() || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::input("not a permutation of the point labels"));
        }
        let coords = perm.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        Ok(Self { dim: self.dim, coords })
    }

    pub fn map_points(&self, mut f: impl FnMut(&mut [f64])) -> Self {
        let mut coords = self.coords.clone();
        coords.chunks_exact_mut(self.dim).for_each(&mut f);
        Self { dim: self.dim, coords }
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        euclid(self.point(i), self.point(j))
    }
}

/// A non-empty subset of point labels, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex(u32);

impl Simplex {
    pub fn new(members: &[usize]) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::input("simplex must have at least one vertex"));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("simplex members must be strictly increasing"));
        }
        if let Some(&m) = members.iter().find(|&&m| m >= MAX_POINTS) {
            return Err(Error::input(format!("vertex label {m} exceeds {MAX_POINTS}")));
        }
        Ok(Self(members.iter().fold(0u32, |acc, &m| acc | (1 << m))))
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        debug_assert!(mask != 0);
        Self(mask)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    /// Number of vertices `|J|`.
    pub fn size(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Simplicial dimension `|J| - 1`.
    pub fn dim(&self) -> usize {
        self.size() - 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (0..MAX_POINTS).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn max_member(&self) -> usize {
        31 - self.0.leading_zeros() as usize
    }

    /// Codimension-one faces.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let mask = self.0;
        self.members()
            .filter(move |_| mask.count_ones() > 1)
            .map(move |m| Simplex(mask & !(1 << m)))
    }

    pub fn image(&self, relabel: &[usize]) -> Simplex {
        Simplex(self.members().fold(0, |acc, m| acc | (1 << relabel[m])))
    }

    /// Lexicographic order of the sorted member lists.
    pub fn lex_cmp(&self, other: &Simplex) -> std::cmp::Ordering {
        self.members().cmp(other.members())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationKind {
    VietorisRips,
    Cech,
}

impl FiltrationKind {
    pub fn value(self, simplex: &Simplex, x: &PointCloud) -> Result<f64> {
        match self {
            FiltrationKind::VietorisRips => vr_value(simplex, x),
            FiltrationKind::Cech => cech_value(simplex, x),
        }
    }

    pub fn cap(self, domain: &Domain) -> f64 {
        filtration_cap(self, domain)
    }

    pub fn gradient_bound(self) -> f64 {
        gradient_bound(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            FiltrationKind::VietorisRips => "vietoris_rips",
            FiltrationKind::Cech => "cech",
        }
    }
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_members(simplex: &Simplex, x: &PointCloud) -> Result<()> {
    if simplex.max_member() >= x.len() {
        return Err(Error::input(format!(
            "simplex {simplex} references a point outside a cloud of {} points",
            x.len()
        )));
    }
    Ok(())
}

/// Vietoris–Rips value: the largest pairwise distance within the simplex.
pub fn vr_value(simplex: &Simplex, x: &PointCloud) -> Result<f64> {
    check_members(simplex, x)?;
    let members: Vec<usize> = simplex.members().collect();
    let mut best: f64 = 0.0;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            best = best.max(x.distance(i, j));
        }
    }
    Ok(best)
}

/// Čech value: radius of the smallest ball enclosing the simplex's points.
pub fn cech_value(simplex: &Simplex, x: &PointCloud) -> Result<f64> {
    check_members(simplex, x)?;
    match simplex.size() {
        1 => Ok(0.0),
        2 => {
            let mut m = simplex.members();
            let (i, j) = (m.next().unwrap(), m.next().unwrap());
            Ok(x.distance(i, j) / 2.0)
        }
        _ => {
            let pts: Vec<&[f64]> = simplex.members().map(|i| x.point(i)).collect();
            Ok(smallest_enclosing_ball(&pts)?.radius)
        }
    }
}

/// Upper bound `T` on every filtration value of clouds in `domain`.
///
/// Rips uses the box diameter. Čech uses Jung's bound
/// `diam * sqrt(d / (2(d+1)))` on the radius of an enclosing ball.
pub fn filtration_cap(kind: FiltrationKind, domain: &Domain) -> f64 {
    let diam = domain.diameter();
    match kind {
        FiltrationKind::VietorisRips => diam,
        FiltrationKind::Cech => {
            let d = domain.dim() as f64;
            diam * (d / (2.0 * (d + 1.0))).sqrt()
        }
    }
}

/// Essential supremum `c*` of the gradient norm of the filtration function.
///
/// For Rips `∇‖x_i − x_j‖` has two unit blocks, giving `√2`. The enclosing
/// radius has gradient `Σ w_i u_i` with convex weights and unit vectors `u_i`,
/// whose norm is at most one.
pub fn gradient_bound(kind: FiltrationKind) -> f64 {
    match kind {
        FiltrationKind::VietorisRips => std::f64::consts::SQRT_2,
        FiltrationKind::Cech => 1.0,
    }
}
