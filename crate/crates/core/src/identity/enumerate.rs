use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{weight, CoefficientClass, IdentityConfig, SignConvention};
use crate::arith::{mobius_table, CompensatedSum};
use crate::{Error, Result};

pub const MAX_ENUMERATION_K: u32 = 6;

/// One dyadic tuple (j; N_1, …, N_2k) with N_i = 2^{exps[i]}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub j: u32,
    pub exps: Vec<i32>,
    pub classes: Vec<CoefficientClass>,
    pub weight: i128,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Factorization", 4)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("lengths", &self.lengths())?;
        st.serialize_field("classes", &self.classes)?;
        st.serialize_field("weight", &(self.weight as i64))?;
        st.end()
    }
}

impl Factorization {
    pub fn k(&self) -> u32 {
        (self.exps.len() / 2) as u32
    }

    /// N_i as floats (exact: dyadic).
    pub fn lengths(&self) -> Vec<f64> {
        self.exps.iter().map(|&e| 2f64.powi(e)).collect()
    }

    /// Smallest and largest integer of (N_i, 2N_i].
    pub fn box_range(&self, i: usize) -> (u64, u64) {
        box_range(self.exps[i])
    }

    pub fn is_placeholder(&self, i: usize) -> bool {
        self.classes[i] == CoefficientClass::Singleton
    }

    /// Check every structural invariant against `cfg`.
    pub fn validate(&self, cfg: &IdentityConfig) -> std::result::Result<(), String> {
        let k = cfg.k as usize;
        if self.exps.len() != 2 * k || self.classes.len() != 2 * k {
            return Err("length vector must have 2k entries".into());
        }
        if self.j == 0 || self.j > cfg.k {
            return Err(format!("j = {} out of range", self.j));
        }
        if self.weight != weight(cfg.k, self.j, SignConvention::Corrected) {
            return Err("binomial weight mismatch".into());
        }
        for i in 0..2 * k {
            let want = class_at(i + 1, self.j as usize, k);
            if self.classes[i] != want {
                return Err(format!("position {} has class {:?}, want {:?}", i + 1, self.classes[i], want));
            }
            if self.exps[i] < -1 {
                return Err("lengths start at 1/2".into());
            }
            if want == CoefficientClass::Singleton && self.exps[i] != -1 {
                return Err(format!("placeholder position {} must have N = 1/2", i + 1));
            }
            if i < k && !below_cutoff(self.exps[i], cfg.mobius_cutoff) {
                return Err(format!("N_{} exceeds the Möbius cutoff", i + 1));
            }
        }
        let (lo, hi) = sum_bounds(cfg);
        let s: i64 = self.exps.iter().map(|&e| e as i64).sum();
        if s < lo || s > hi {
            return Err(format!("product 2^{s} outside [2^-2k x, 3x]"));
        }
        Ok(())
    }
}

/// Class of 1-based position `i` for a given j.
fn class_at(i: usize, j: usize, k: usize) -> CoefficientClass {
    if i <= k {
        if i <= j {
            CoefficientClass::Mobius
        } else {
            CoefficientClass::Singleton
        }
    } else if i == 2 * k {
        CoefficientClass::Log
    } else if i < k + j {
        CoefficientClass::Unit
    } else {
        CoefficientClass::Singleton
    }
}

fn box_range(e: i32) -> (u64, u64) {
    if e < 0 {
        (1, 1)
    } else {
        ((1u64 << e) + 1, 1u64 << (e + 1))
    }
}

/// (N, 2N] meets [1, L] iff N < L.
fn below_cutoff(e: i32, cutoff: u64) -> bool {
    e < 0 || (1u64 << e) < cutoff
}

/// Admissible range for Σ e_i: 2^{-2k} x ≤ 2^S ≤ 3x.
fn sum_bounds(cfg: &IdentityConfig) -> (i64, i64) {
    let a = 64 - (cfg.x - 1).leading_zeros() as i64; // smallest a with 2^a ≥ x
    let a = if cfg.x == 1 { 0 } else { a };
    let b = 63 - (3 * cfg.x).leading_zeros() as i64; // floor(log2 3x)
    (a - 2 * cfg.k as i64, b)
}

fn mobius_max_exp(cutoff: u64) -> i32 {
    let mut e = -1;
    while below_cutoff(e + 1, cutoff) {
        e += 1;
    }
    e
}

/// Number of factorizations, by counting exponent vectors with a sum
/// distribution rather than walking tuples. Saturates at `u128::MAX`.
pub fn count_factorizations(cfg: &IdentityConfig) -> u128 {
    let k = cfg.k as usize;
    let (lo, hi) = sum_bounds(cfg);
    let m_max = mobius_max_exp(cfg.mobius_cutoff) as i64;
    let mut total = 0u128;
    for j in 1..=k {
        let placeholders = (k - j) + (k - j);
        let active = 2 * j;
        // every active exponent is ≥ −1, so no single one exceeds this
        let free_max = hi + active as i64 + placeholders as i64;
        let offset = -(2 * k as i64); // minimum possible sum
        // partial sums may overshoot hi by up to the later −1 contributions
        let ceiling = hi + 2 * k as i64;
        let width = (ceiling - offset + 1).max(1) as usize;
        let mut dist = vec![0u128; width];
        dist[(-(placeholders as i64) - offset) as usize] = 1;
        for pos in 0..active {
            let top = if pos < j { m_max } else { free_max };
            let mut next = vec![0u128; dist.len()];
            for (s, &c) in dist.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for e in -1..=top {
                    let t = s as i64 + e;
                    if t >= 0 && t + offset <= ceiling {
                        next[t as usize] = next[t as usize].saturating_add(c);
                    }
                }
            }
            dist = next;
        }
        for (s, &c) in dist.iter().enumerate() {
            let v = s as i64 + offset;
            if v >= lo && v <= hi {
                total = total.saturating_add(c);
            }
        }
    }
    total
}

/// All factorizations in (j, lexicographic exponent) order.
pub fn enumerate_factorizations(cfg: &IdentityConfig) -> Result<Vec<Factorization>> {
    if cfg.k > MAX_ENUMERATION_K {
        return Err(Error::Capacity(format!(
            "enumeration refuses k = {} > {MAX_ENUMERATION_K}; it would emit {} factorizations",
            cfg.k,
            count_factorizations(cfg)
        )));
    }
    let k = cfg.k as usize;
    let (lo, hi) = sum_bounds(cfg);
    let m_max = mobius_max_exp(cfg.mobius_cutoff);
    let mut out = Vec::new();
    for j in 1..=k {
        let classes: Vec<CoefficientClass> = (1..=2 * k).map(|i| class_at(i, j, k)).collect();
        let active: Vec<usize> =
            (0..2 * k).filter(|&i| classes[i] != CoefficientClass::Singleton).collect();
        let mut exps = vec![-1i32; 2 * k];
        let base: i64 = -((2 * k - active.len()) as i64);
        let w = weight(cfg.k, j as u32, SignConvention::Corrected);
        walk(&active, 0, base, &mut exps, &classes, m_max, (lo, hi), &mut |e| {
            out.push(Factorization { j: j as u32, exps: e.to_vec(), classes: classes.clone(), weight: w })
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    active: &[usize],
    depth: usize,
    sum: i64,
    exps: &mut [i32],
    classes: &[CoefficientClass],
    m_max: i32,
    (lo, hi): (i64, i64),
    emit: &mut impl FnMut(&[i32]),
) {
    if depth == active.len() {
        if sum >= lo && sum <= hi {
            emit(exps);
        }
        return;
    }
    let pos = active[depth];
    let rest = (active.len() - depth - 1) as i64; // each contributes at least −1
    let mut e = -1i32;
    loop {
        if sum + e as i64 - rest > hi {
            break;
        }
        if classes[pos] == CoefficientClass::Mobius && e > m_max {
            break;
        }
        exps[pos] = e;
        walk(active, depth + 1, sum + e as i64, exps, classes, m_max, (lo, hi), emit);
        e += 1;
    }
    exps[pos] = -1;
}

/// Coefficients of Π S_i at the integers of (x, 3x].
pub fn coefficients_of_product(f: &Factorization, cfg: &IdentityConfig) -> BTreeMap<u64, f64> {
    let mu = mobius_table(cfg.mobius_cutoff as usize);
    coefficients_with(f, cfg, &mu)
}

fn coefficients_with(f: &Factorization, cfg: &IdentityConfig, mu: &[i8]) -> BTreeMap<u64, f64> {
    let mut acc: BTreeMap<u64, CompensatedSum> = BTreeMap::new();
    let hi = cfg.window_hi();
    // smallest achievable product of positions depth.. for pruning
    let n = f.exps.len();
    let mut min_tail = vec![1u64; n + 1];
    for i in (0..n).rev() {
        min_tail[i] = min_tail[i + 1].saturating_mul(f.box_range(i).0);
    }
    fn rec(
        f: &Factorization,
        i: usize,
        prod: u64,
        sign: i64,
        cfg: &IdentityConfig,
        mu: &[i8],
        min_tail: &[u64],
        hi: u64,
        acc: &mut BTreeMap<u64, CompensatedSum>,
    ) {
        if i == f.exps.len() {
            return;
        }
        let (a, b) = f.box_range(i);
        let last = i + 1 == f.exps.len();
        for m in a..=b {
            let Some(p) = prod.checked_mul(m) else { break };
            if p.saturating_mul(min_tail[i + 1]) > hi {
                break;
            }
            let s = match f.classes[i] {
                CoefficientClass::Mobius => {
                    if m > cfg.mobius_cutoff {
                        break;
                    }
                    sign * mu[m as usize] as i64
                }
                _ => sign,
            };
            if s == 0 {
                continue;
            }
            if last {
                if p > cfg.x {
                    // position 2k carries log n_2k
                    acc.entry(p).or_default().add(s as f64 * (m as f64).ln());
                }
            } else {
                rec(f, i + 1, p, s, cfg, mu, min_tail, hi, acc);
            }
        }
    }
    rec(f, 0, 1, 1, cfg, mu, &min_tail, hi, &mut acc);
    acc.into_iter().map(|(n, s)| (n, s.value())).filter(|(_, v)| *v != 0.0).collect()
}

/// Σ_f c_j(f) · coeff_f(n) over every factorization, for n ∈ (x, 3x].
pub fn weighted_window_sum(cfg: &IdentityConfig) -> Result<BTreeMap<u64, f64>> {
    let facts = enumerate_factorizations(cfg)?;
    let mu = mobius_table(cfg.mobius_cutoff as usize);
    let parts: Vec<BTreeMap<u64, f64>> =
        facts.par_iter().map(|f| coefficients_with(f, cfg, &mu)).collect();
    let mut acc: BTreeMap<u64, CompensatedSum> = BTreeMap::new();
    for (f, part) in facts.iter().zip(parts) {
        for (n, v) in part {
            acc.entry(n).or_default().add(f.weight as f64 * v);
        }
    }
    Ok(acc.into_iter().map(|(n, s)| (n, s.value())).collect())
}

/// Partition factorizations by whether some N_i > x^θ.
pub fn split_long(
    cfg: &IdentityConfig,
    theta: &BigRational,
) -> Result<(Vec<Factorization>, Vec<Factorization>)> {
    if !theta.is_positive() || *theta > BigRational::one() {
        return Err(Error::InvalidArgument("threshold exponent must lie in (0, 1]".into()));
    }
    let p = theta.numer().to_u32().ok_or_else(|| Error::InvalidArgument("threshold too fine".into()))?;
    let q = theta.denom().to_u32().ok_or_else(|| Error::InvalidArgument("threshold too fine".into()))?;
    let x_p = BigUint::from(cfg.x).pow(p);
    let long = |e: i32| e >= 0 && (BigUint::one() << (e as u64 * q as u64)) > x_p;
    let all = enumerate_factorizations(cfg)?;
    let (f, g): (Vec<_>, Vec<_>) = all.into_iter().partition(|fac| fac.exps.iter().any(|&e| long(e)));
    debug_assert!(!x_p.is_zero());
    Ok((f, g))
}
