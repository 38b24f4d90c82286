//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use topobreak::persistence::FilteredComplex;

/// Degree-`k` pairs `(birth, death, essential)` from a plain dense reduction
/// of the full boundary matrix, every column left to right, no clearing.
pub fn naive_diagram(c: &FilteredComplex, k: usize, cap: f64) -> Vec<(f64, f64, bool)> {
    let s = c.simplices();
    let n = s.len();
    let index: HashMap<u32, usize> = s.iter().enumerate().map(|(i, x)| (x.simplex.mask(), i)).collect();
    let mut cols: Vec<Vec<bool>> = s
        .iter()
        .map(|x| {
            let mut col = vec![false; n];
            if x.dim > 0 {
                for f in x.simplex.facets() {
                    col[index[&f.mask()]] = true;
                }
            }
            col
        })
        .collect();
    let low = |col: &[bool]| col.iter().rposition(|b| *b);
    let mut pivot_of_row: HashMap<usize, usize> = HashMap::new();
    for j in 0..n {
        while let Some(l) = low(&cols[j]) {
            match pivot_of_row.get(&l) {
                Some(&other) => {
                    let add = cols[other].clone();
                    cols[j].iter_mut().zip(add).for_each(|(a, b)| *a ^= b);
                }
                None => {
                    pivot_of_row.insert(l, j);
                    break;
                }
            }
        }
    }
    let mut out = Vec::new();
    for (&row, &col) in &pivot_of_row {
        if s[row].dim == k && s[col].value > s[row].value {
            out.push((s[row].value, s[col].value, false));
        }
    }
    for i in 0..n {
        if s[i].dim == k && low(&cols[i]).is_none() && !pivot_of_row.contains_key(&i) {
            out.push((s[i].value, cap, true));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `P(sup |B| ≤ x) = 1 − 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²x²}`.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    1.0 - 2.0
        * (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * x * x).exp()
            })
            .sum::<f64>()
}

/// Quantile of `sup_t B(t)²`, the one-bridge Λ limit.
pub fn lambda1_quantile(level: f64) -> f64 {
    bisect(kolmogorov_cdf, 0.2, 5.0, level).powi(2)
}

/// `K_ν(z) = ∫_0^∞ e^{−z cosh t} cosh(νt) dt` by the trapezoid rule.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    let h = 1e-3;
    let mut sum = 0.5 * (-z).exp();
    let mut t: f64 = h;
    loop {
        let v = (-z * t.cosh()).exp() * (nu * t).cosh();
        sum += v;
        if v < 1e-300 || t > 50.0 {
            break;
        }
        t += h;
    }
    sum * h
}

/// Cramér–von Mises limit law of `∫ B(t)² dt`, Anderson–Darling series:
/// `F(x) = (π√x)^{-1} Σ_j c_j √(4j+1) e^{−u_j} K_{1/4}(u_j)`,
/// `u_j = (4j+1)²/(16x)`, `c_j = Γ(j+½)/(Γ(½) j!)`.
pub fn cramer_von_mises_cdf(x: f64) -> f64 {
    let mut c = 1.0;
    let mut total = 0.0;
    for j in 0..60 {
        let q = (4 * j + 1) as f64;
        let u = q * q / (16.0 * x);
        let term = c * q.sqrt() * (-u).exp() * bessel_k(0.25, u);
        total += term;
        if term.abs() < 1e-18 {
            break;
        }
        c *= (j as f64 + 0.5) / (j as f64 + 1.0);
    }
    total / (std::f64::consts::PI * x.sqrt())
}

/// Quantile of `∫ B(t)² dt`, the one-bridge Ω limit.
pub fn omega1_quantile(level: f64) -> f64 {
    bisect(cramer_von_mises_cdf, 0.01, 3.0, level)
}

pub fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt())
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
