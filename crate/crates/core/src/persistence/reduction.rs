//! Column reduction of the boundary matrix over the two-element field.
//!
//! Only the two dimensions that matter for a degree-`k` diagram are reduced,
//! top dimension first, so every pivot row found in dimension `k+1` clears
//! the corresponding dimension-`k` column before it is touched.

use std::collections::HashMap;

use super::{FilteredComplex, PersistenceDiagram, PersistencePair};
use crate::error::{Error, Result};

/// `a ^= b` for sorted index sets.
fn add_columns(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Degree-`k` persistence pairs with positive persistence, plus essential
/// classes which are assigned death `cap`. Pairs are sorted by birth, then
/// death. The result is not padded.
pub fn compute_persistence(c: &FilteredComplex, k: usize, cap: f64) -> Result<PersistenceDiagram> {
    if c.dim_cap() < k + 1 {
        return Err(Error::input(format!(
            "degree-{k} diagram needs simplices up to dimension {}, complex stops at {}",
            k + 1,
            c.dim_cap()
        )));
    }
    if !(cap >= c.max_value()) {
        return Err(Error::input(format!(
            "cap {cap} is below the largest filtration value {}",
            c.max_value()
        )));
    }

    let simplices = c.simplices();
    let n = simplices.len();
    let position: HashMap<u32, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.simplex.mask(), i))
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut cleared = vec![false; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs = Vec::new();

    for dim in [k + 1, k] {
        for j in (0..n).filter(|&j| simplices[j].dim == dim) {
            if cleared[j] {
                continue;
            }
            let mut col: Vec<usize> = simplices[j]
                .simplex
                .facets()
                .map(|f| position[&f.mask()])
                .collect();
            col.sort_unstable();
            while let Some(&low) = col.last() {
                match owner[low] {
                    Some(other) => col = add_columns(&col, &reduced[other]),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                owner[low] = Some(j);
                cleared[low] = true;
                if dim == k + 1 {
                    pairs.push((low, j));
                }
            }
            reduced[j] = col;
        }
    }

    let mut out: Vec<PersistencePair> = pairs
        .into_iter()
        .filter(|&(b, d)| simplices[d].value > simplices[b].value)
        .map(|(b, d)| PersistencePair::finite(k, simplices[b].value, simplices[d].value))
        .collect();
    out.extend(
        (0..n)
            .filter(|&i| simplices[i].dim == k && !cleared[i] && reduced[i].is_empty())
            .map(|i| PersistencePair::essential(k, simplices[i].value, cap)),
    );
    out.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
    Ok(PersistenceDiagram::unpadded(k, out))
}
