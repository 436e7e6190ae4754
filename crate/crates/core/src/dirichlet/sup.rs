use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::factor::{PolyFactor, Prepared};
use crate::report::{g12, g12_vec};
use crate::Result;

pub const DEFAULT_SAMPLES: usize = 32;
const GOLDEN_ITERS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    pub m: i64,
    pub samples: usize,
    /// max over the equally spaced samples
    #[serde(serialize_with = "g12")]
    pub sampled: f64,
    /// after golden-section refinement around the best sample
    #[serde(serialize_with = "g12")]
    pub value: f64,
    #[serde(serialize_with = "g12")]
    pub best_t: f64,
    /// sampled + L·h/2 bounds the true sup from above
    #[serde(serialize_with = "g12")]
    pub upper: f64,
}

/// sup of `f` over [m, m+1] from `g` samples t = m + i/(g−1) plus refinement.
pub fn sup_of(f: impl Fn(f64) -> f64, m: i64, g: usize, lipschitz: f64) -> SupEstimate {
    let g = g.max(2);
    let h = 1.0 / (g - 1) as f64;
    let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
    for i in 0..g {
        let v = f(m as f64 + i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let sampled = best;
    let mut best_t = m as f64 + best_i as f64 * h;
    let lo = (best_t - h).max(m as f64);
    let hi = (best_t + h).min(m as f64 + 1.0);
    let (t, v) = golden_max(&f, lo, hi, GOLDEN_ITERS);
    let mut value = sampled;
    if v > value {
        value = v;
        best_t = t;
    }
    SupEstimate { m, samples: g, sampled, value, best_t, upper: sampled + lipschitz * h / 2.0 }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Lipschitz constant of t ↦ |Π S_i(c+it)|.
fn product_lipschitz(ps: &[Prepared]) -> f64 {
    (0..ps.len())
        .map(|i| {
            ps[i].lipschitz
                * ps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.abs_sum).product::<f64>()
        })
        .sum()
}

/// Approximate sup_{t∈[m,m+1]} |Π S_i(c+it)|.
pub fn sup_on_unit_interval(factors: &[PolyFactor], c: f64, m: i64, g: usize) -> Result<SupEstimate> {
    let ps = factors.iter().map(|f| Prepared::new(f, c)).collect::<Result<Vec<_>>>()?;
    let lip = product_lipschitz(&ps);
    Ok(sup_of(|t| super::factor::product_abs(&ps, t), m, g, lip))
}

/// A vector of grid exponents σ_i = 1 − j_i log2/log N_i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeValueProfile {
    #[serde(serialize_with = "g12_vec")]
    pub sigmas: Vec<f64>,
    pub indices: Vec<u32>,
    #[serde(serialize_with = "g12")]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub profile: LargeValueProfile,
    pub members: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    #[serde(serialize_with = "g12")]
    pub t: f64,
    #[serde(serialize_with = "g12")]
    pub c: f64,
    /// Scale x in the lower grid limit σ ≥ −log x/log N_i.
    #[serde(serialize_with = "g12")]
    pub x: f64,
    pub cells: Vec<Cell>,
    pub s0: Vec<i64>,
    /// Members of s0 whose sup exceeds the top cell (σ_i would exceed 1).
    pub above_top: Vec<i64>,
    /// per m, per factor sup estimates used for classification
    #[serde(skip)]
    pub sups: BTreeMap<i64, Vec<f64>>,
}

impl Classification {
    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.members.len()).sum::<usize>() + self.s0.len()
    }
}

/// Cell index of a non-degenerate factor of length N whose sup is v, if any:
/// the j ≥ 0 with N^{1−c} 2^{−j} ≤ v ≤ 2 N^{1−c} 2^{−j}; ties go to the larger j.
pub fn grid_index(n_len: f64, c: f64, v: f64, j_max: u32) -> Option<u32> {
    if !(v > 0.0) {
        return None;
    }
    let top = n_len.powf(1.0 - c);
    let mut j = (top / v).log2().ceil();
    if !j.is_finite() {
        return None;
    }
    // repair floating-point edge effects
    let fits = |j: f64| top * (-j).exp2() <= v && v <= 2.0 * top * (-j).exp2();
    if !fits(j) {
        if fits(j + 1.0) {
            j += 1.0;
        } else if fits(j - 1.0) {
            j -= 1.0;
        }
    }
    if j < 0.0 || j > j_max as f64 || !fits(j) {
        return None;
    }
    Some(j as u32)
}

/// Largest admissible index: σ = 1 − j log2/log N ≥ −log x/log N.
pub fn grid_j_max(n_len: f64, x: f64) -> u32 {
    ((n_len * x).log2().floor()).max(0.0) as u32
}

/// Partition the integers of [T, 2T] into σ-profile cells and 𝒮₀.
pub fn classify_profile(factors: &[PolyFactor], c: f64, t: f64) -> Result<Classification> {
    let x: f64 = factors.iter().map(|f| 2.0 * f.length()).product();
    classify_profile_with(factors, c, t, x, DEFAULT_SAMPLES)
}

pub fn classify_profile_with(
    factors: &[PolyFactor],
    c: f64,
    t: f64,
    x: f64,
    samples: usize,
) -> Result<Classification> {
    let ps = factors.iter().map(|f| Prepared::new(f, c)).collect::<Result<Vec<_>>>()?;
    let lo = t.ceil() as i64;
    let hi = (2.0 * t).floor() as i64;
    let rows: Vec<(i64, Vec<f64>)> = (lo..=hi)
        .into_par_iter()
        .map(|m| {
            let sups = ps
                .iter()
                .map(|p| sup_of(|s| p.eval(s).norm(), m, samples, p.lipschitz).value)
                .collect();
            (m, sups)
        })
        .collect();
    let mut cells: BTreeMap<Vec<u32>, Vec<i64>> = BTreeMap::new();
    let mut s0 = Vec::new();
    let mut above_top = Vec::new();
    let mut sups = BTreeMap::new();
    for (m, vs) in rows {
        let mut idx = Vec::with_capacity(factors.len());
        let mut above = false;
        for (f, &v) in factors.iter().zip(&vs) {
            if f.is_degenerate() {
                if v > 0.0 {
                    idx.push(0);
                    continue;
                }
                break;
            }
            let n_len = f.length();
            let floor = n_len.powf(-c) / x;
            if v <= floor {
                break;
            }
            match grid_index(n_len, c, v, grid_j_max(n_len, x)) {
                Some(j) => idx.push(j),
                None => {
                    above |= v > 2.0 * n_len.powf(1.0 - c);
                    break;
                }
            }
        }
        if idx.len() == factors.len() {
            cells.entry(idx).or_default().push(m);
        } else {
            s0.push(m);
            if above {
                above_top.push(m);
            }
        }
        sups.insert(m, vs);
    }
    let cells = cells
        .into_iter()
        .map(|(indices, members)| Cell { profile: profile_of(factors, &indices, c), members })
        .collect();
    Ok(Classification { t, c, x, cells, s0, above_top, sups })
}

pub fn profile_of(factors: &[PolyFactor], indices: &[u32], c: f64) -> LargeValueProfile {
    let sigmas = factors
        .iter()
        .zip(indices)
        .map(|(f, &j)| if f.is_degenerate() { 1.0 } else { 1.0 - j as f64 * 2f64.ln() / f.length().ln() })
        .collect();
    LargeValueProfile { sigmas, indices: indices.to_vec(), c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::CoefficientClass;

    #[test]
    fn singleton_sup_is_one() {
        let s = sup_on_unit_interval(&[PolyFactor::singleton()], 1.2, 5, 32).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partition_counts() {
        let f = [PolyFactor::new(CoefficientClass::Unit, 3)];
        let cl = classify_profile(&f, 1.1, 50.5).unwrap();
        assert_eq!(cl.total() as i64, 101 - 51 + 1);
    }

    #[test]
    fn grid_index_brackets() {
        let (n, c) = (64.0f64, 1.2);
        for v in [0.01, 0.05, 0.2, 0.4] {
            if let Some(j) = grid_index(n, c, v, 40) {
                let base = n.powf(1.0 - c) * (-(j as f64)).exp2();
                assert!(base <= v && v <= 2.0 * base);
            }
        }
    }
}
