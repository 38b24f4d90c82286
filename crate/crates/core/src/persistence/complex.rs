use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::geometry::{FiltrationKind, PointCloud, Simplex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub dim: usize,
    pub value: f64,
}

/// Every simplex on `r` points up to `dim_cap`, in filtration order.
///
/// Order is `(value, dimension, lexicographic members)`, which respects faces.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    simplices: Vec<FilteredSimplex>,
    classes: Vec<Range<usize>>,
    n_points: usize,
    dim_cap: usize,
    kind: FiltrationKind,
}

/// Enumerates all subsets of `0..r` with exactly `size` elements.
pub(crate) fn subsets_of_size(r: usize, size: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 || size > r {
        return out;
    }
    loop {
        out.push(Simplex::from_mask(idx.iter().fold(0, |m, &i| m | (1 << i))));
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < r - size + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// All filtration values of simplices with `2..=dim_cap+1` vertices.
///
/// Each value is raised to the maximum over its facets, so rounding in the
/// enclosing-ball solver can never put a coface before one of its faces.
pub(crate) fn simplex_values(
    x: &PointCloud,
    kind: FiltrationKind,
    dim_cap: usize,
) -> Result<Vec<FilteredSimplex>> {
    let r = x.len();
    let mut values: HashMap<u32, f64> = HashMap::new();
    let mut out = Vec::new();
    for size in 1..=dim_cap + 1 {
        for s in subsets_of_size(r, size) {
            let facet_max = s
                .facets()
                .map(|f| values[&f.mask()])
                .fold(0.0, f64::max);
            let value = match (kind, size) {
                (_, 1) => 0.0,
                // Rips: the largest edge, which the facets already carry
                (FiltrationKind::VietorisRips, 3..) => facet_max,
                _ => kind.value(&s, x)?.max(facet_max),
            };
            values.insert(s.mask(), value);
            out.push(FilteredSimplex {
                simplex: s,
                dim: size - 1,
                value,
            });
        }
    }
    Ok(out)
}

/// Builds the filtered complex of `x` up to simplicial dimension `dim_cap`.
pub fn build_filtration(
    x: &PointCloud,
    kind: FiltrationKind,
    dim_cap: usize,
) -> Result<FilteredComplex> {
    let r = x.len();
    if dim_cap < 1 || dim_cap > r - 1 {
        return Err(Error::input(format!(
            "dim_cap must lie in 1..={} for {r} points, got {dim_cap}",
            r - 1
        )));
    }
    let mut simplices = simplex_values(x, kind, dim_cap)?;
    simplices.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.dim.cmp(&b.dim))
            .then_with(|| a.simplex.lex_cmp(&b.simplex))
    });

    let mut classes = Vec::new();
    let mut start = 0;
    for i in 1..=simplices.len() {
        if i == simplices.len() || simplices[i].value != simplices[start].value {
            classes.push(start..i);
            start = i;
        }
    }

    Ok(FilteredComplex {
        simplices,
        classes,
        n_points: r,
        dim_cap,
        kind,
    })
}

impl FilteredComplex {
    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Distinct values `u_1 < ... < u_L`.
    pub fn distinct_values(&self) -> Vec<f64> {
        self.classes
            .iter()
            .map(|c| self.simplices[c.start].value)
            .collect()
    }

    /// Partition of the simplices into groups of equal value, as index ranges.
    pub fn value_classes(&self) -> &[Range<usize>] {
        &self.classes
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    pub fn kind(&self) -> FiltrationKind {
        self.kind
    }

    pub fn max_value(&self) -> f64 {
        self.simplices.last().map(|s| s.value).unwrap_or(0.0)
    }
}
