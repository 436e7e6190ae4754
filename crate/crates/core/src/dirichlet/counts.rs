use std::collections::HashMap;

use serde::Serialize;

use super::factor::{product_terms, PolyFactor};
use super::sup::{classify_profile, LargeValueProfile};
use crate::report::{g12, g12_opt};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeValueCounts {
    #[serde(serialize_with = "g12")]
    pub t: f64,
    pub r: u64,
    pub r_star: u128,
    pub profile: Option<LargeValueProfile>,
    /// Π N_i
    #[serde(serialize_with = "g12_opt")]
    pub x1: Option<f64>,
    /// x1^σ = Π N_i^{σ_i}
    #[serde(serialize_with = "g12_opt")]
    pub sigma_agg: Option<f64>,
    /// log x1 / log T0
    #[serde(serialize_with = "g12_opt")]
    pub mu: Option<f64>,
}

impl LargeValueCounts {
    /// Attach a profile and the aggregate exponents derived from the factor lengths.
    pub fn with_profile(mut self, profile: LargeValueProfile, factors: &[PolyFactor], t0: f64) -> Self {
        let logs: Vec<f64> = factors.iter().map(|f| f.length().ln()).collect();
        let log_x1: f64 = logs.iter().sum();
        let weighted: f64 = logs.iter().zip(&profile.sigmas).map(|(l, s)| l * s).sum();
        self.x1 = Some(log_x1.exp());
        self.sigma_agg = Some(if log_x1 != 0.0 { weighted / log_x1 } else { 1.0 });
        self.mu = Some(log_x1 / t0.ln());
        self.profile = Some(profile);
        self
    }
}

/// R = |set| and R* = #{(m1,m2,m3,m4) : m1+m2 = m3+m4} by pair-sum counting.
pub fn count_r_rstar(members: &[i64], t: f64) -> Result<LargeValueCounts> {
    let lo = t.ceil() as i64;
    let hi = (2.0 * t).floor() as i64;
    if let Some(m) = members.iter().find(|&&m| m < lo || m > hi) {
        return Err(Error::InvalidArgument(format!("member {m} lies outside [{t}, {}]", 2.0 * t)));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != members.len() {
        return Err(Error::InvalidArgument("member set has duplicates".into()));
    }
    let mut pair_sums: HashMap<i64, u128> = HashMap::with_capacity(members.len() * 2);
    for &a in &sorted {
        for &b in &sorted {
            *pair_sums.entry(a + b).or_insert(0) += 1;
        }
    }
    let r_star = pair_sums.values().map(|&c| c * c).sum();
    Ok(LargeValueCounts {
        t,
        r: sorted.len() as u64,
        r_star,
        profile: None,
        x1: None,
        sigma_agg: None,
        mu: None,
    })
}

fn check_range(n: f64, sigma: f64) -> Result<()> {
    if !(n >= 1.0) {
        return Err(Error::InvalidArgument("bound formulas need N >= 1".into()));
    }
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} outside [1/2, 1]")));
    }
    Ok(())
}

/// log(NT)·(N^{2−2σ'} + T N^{1−2σ'})·mean_sq
pub fn montgomery_rhs(n: f64, sigma_prime: f64, t: f64, mean_sq: f64) -> Result<f64> {
    check_range(n, sigma_prime)?;
    Ok(montgomery_raw(n, sigma_prime, t, mean_sq))
}

pub(crate) fn montgomery_raw(n: f64, s: f64, t: f64, mean_sq: f64) -> f64 {
    (n * t).ln() * (n.powf(2.0 - 2.0 * s) + t * n.powf(1.0 - 2.0 * s)) * mean_sq
}

/// (log NT)²·(N^{2−2σ} + T N^{4−6σ})·(1 + mean_sq)³
pub fn huxley_rhs(n: f64, sigma: f64, t: f64, mean_sq: f64) -> Result<f64> {
    check_range(n, sigma)?;
    Ok(huxley_raw(n, sigma, t, mean_sq))
}

pub(crate) fn huxley_raw(n: f64, s: f64, t: f64, mean_sq: f64) -> f64 {
    (n * t).ln().powi(2) * (n.powf(2.0 - 2.0 * s) + t * n.powf(4.0 - 6.0 * s)) * (1.0 + mean_sq).powi(3)
}

/// Right side of the R* inequality for counts R, R*.
pub fn hb_rstar_rhs(r: f64, r_star: f64, n: f64, sigma_prime: f64, t: f64) -> f64 {
    let a = r * n + r * r + r.powf(1.25) * t.sqrt();
    let b = r_star * n + r.powi(4) + r * r_star.powf(0.75) * t.sqrt();
    n.powf(1.0 - 2.0 * sigma_prime) * a.sqrt() * b.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RstarCheck {
    pub r: u64,
    pub r_star: u128,
    #[serde(serialize_with = "g12")]
    pub rhs: f64,
    /// R*/RHS, or 0 when both vanish
    #[serde(serialize_with = "g12")]
    pub ratio: f64,
    #[serde(serialize_with = "g12")]
    pub slack: f64,
    pub pass: bool,
}

pub fn hb_rstar_check(counts: &LargeValueCounts, n: f64, sigma_prime: f64, t: f64, slack: f64) -> RstarCheck {
    let rhs = hb_rstar_rhs(counts.r as f64, counts.r_star as f64, n, sigma_prime, t);
    let ratio = if counts.r_star == 0 { 0.0 } else { counts.r_star as f64 / rhs };
    RstarCheck {
        r: counts.r,
        r_star: counts.r_star,
        rhs,
        ratio,
        slack,
        pass: counts.r_star as f64 <= slack * rhs,
    }
}

/// (1/N)·Σ|a_n|² over (N, 2N].
pub fn mean_square(f: &PolyFactor) -> Result<f64> {
    let terms = f.terms()?;
    Ok(terms.iter().map(|&(_, a)| a * a).sum::<f64>() / f.length().max(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ratios {
    #[serde(serialize_with = "g12")]
    pub mont: f64,
    #[serde(serialize_with = "g12")]
    pub hux: f64,
    #[serde(serialize_with = "g12")]
    pub hbstar: f64,
}

/// One classified cell of a large-value experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    #[serde(rename = "T", serialize_with = "g12")]
    pub t: f64,
    pub profile: Vec<f64>,
    #[serde(rename = "R")]
    pub r: u64,
    #[serde(rename = "R_star")]
    pub r_star: u128,
    /// length and exponent σ' the mean-value bounds are applied with
    #[serde(serialize_with = "g12")]
    pub n: f64,
    #[serde(serialize_with = "g12")]
    pub sigma_prime: f64,
    #[serde(serialize_with = "g12")]
    pub mean_sq: f64,
    #[serde(serialize_with = "g12")]
    pub mont_rhs: f64,
    #[serde(serialize_with = "g12")]
    pub hux_rhs: f64,
    #[serde(serialize_with = "g12")]
    pub hbstar_rhs: f64,
    pub ratios: Ratios,
}

/// Classify [T, 2T] for the product of `factors`, count every cell and
/// evaluate the three bounds for the product polynomial.
///
/// The product Σ b_n n^{-s} is renormalized as c_n = b_n (N/n)^c with N its
/// largest index, so that |Σ c_n n^{-it}| = N^c |S| ≥ N^{σ'} on a cell.
pub fn large_value_experiment(factors: &[PolyFactor], c: f64, t: f64) -> Result<Vec<ExperimentRow>> {
    let cl = classify_profile(factors, c, t)?;
    let terms = product_terms(factors)?;
    let Some(&(n_top, _)) = terms.last() else {
        return Ok(Vec::new());
    };
    let n = n_top as f64;
    let mean_sq = terms.iter().map(|&(k, b)| (b * (n / k as f64).powf(c)).powi(2)).sum::<f64>() / n;
    let log_x1: f64 = factors.iter().map(|f| f.length().ln()).sum();
    let mut rows = Vec::new();
    for cell in &cl.cells {
        let counts = count_r_rstar(&cell.members, t)?;
        let weighted: f64 =
            factors.iter().zip(&cell.profile.sigmas).map(|(f, s)| f.length().ln() * s).sum();
        // |S| ≥ Π N_i^{−c+σ_i} = exp(weighted − c log x1)
        let log_v = c * n.ln() + weighted - c * log_x1;
        let sigma_prime = log_v / n.ln();
        let mont = montgomery_raw(n, sigma_prime, t, mean_sq);
        let hux = huxley_raw(n, sigma_prime, t, mean_sq);
        let hb = hb_rstar_rhs(counts.r as f64, counts.r_star as f64, n, sigma_prime, t);
        rows.push(ExperimentRow {
            t,
            profile: cell.profile.sigmas.clone(),
            r: counts.r,
            r_star: counts.r_star,
            n,
            sigma_prime,
            mean_sq,
            mont_rhs: mont,
            hux_rhs: hux,
            hbstar_rhs: hb,
            ratios: Ratios {
                mont: counts.r as f64 / mont,
                hux: counts.r as f64 / hux,
                hbstar: counts.r_star as f64 / hb,
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_sum_examples() {
        let c = count_r_rstar(&[5, 6, 7], 4.0).unwrap();
        assert_eq!((c.r, c.r_star), (3, 19));
        let c = count_r_rstar(&[], 4.0).unwrap();
        assert_eq!((c.r, c.r_star), (0, 0));
        let c = count_r_rstar(&[10, 11, 12, 13], 10.0).unwrap();
        assert_eq!(c.r_star, (2 * 64 + 4) / 3);
        assert!(count_r_rstar(&[3], 4.0).is_err());
    }

    #[test]
    fn formula_plugins() {
        let e = std::f64::consts::E;
        // log(e·e) = 2
        assert!((montgomery_rhs(e, 1.0, e, 1.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((huxley_rhs(e, 1.0, e, 0.0).unwrap() - 4.0 * (1.0 + 1.0 / e)).abs() < 1e-12);
        assert!((hb_rstar_rhs(1.0, 1.0, 1.0, 0.5, 1.0) - 3.0).abs() < 1e-12);
        assert!(montgomery_rhs(10.0, 0.4, 5.0, 1.0).is_err());
    }
}
