//! Heath-Brown's combinatorial identity: Λ(n) as a signed sum of the
//! convolutions K^(j) and their dyadic factorizations into S_1⋯S_2k.

mod enumerate;

use serde::Serialize;

use crate::arith::{divisors, integer_root, mobius, CompensatedSum};
use crate::{Error, Result};

pub use enumerate::{
    coefficients_of_product, count_factorizations, enumerate_factorizations, split_long,
    weighted_window_sum, Factorization, MAX_ENUMERATION_K,
};
pub use crate::arith::mobius as mobius_fn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityConfig {
    pub x: u64,
    pub k: u32,
    /// floor((3x)^{1/k})
    pub mobius_cutoff: u64,
}

impl IdentityConfig {
    pub fn new(x: u64, k: u32) -> Result<Self> {
        if x == 0 || k == 0 {
            return Err(Error::InvalidArgument("identity needs x >= 1 and k >= 1".into()));
        }
        let three_x = x.checked_mul(3).ok_or_else(|| Error::Capacity("3x overflows".into()))?;
        Ok(IdentityConfig { x, k, mobius_cutoff: integer_root(three_x, k) })
    }

    pub fn window_hi(&self) -> u64 {
        3 * self.x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CoefficientClass {
    Mobius,
    Unit,
    Log,
    Singleton,
}

impl CoefficientClass {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientClass::Mobius => "MOBIUS",
            CoefficientClass::Unit => "UNIT",
            CoefficientClass::Log => "LOG",
            CoefficientClass::Singleton => "SINGLETON",
        }
    }
}

/// Which sign to attach to the binomial weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignConvention {
    /// c_j = (−1)^{j+1} C(k, j); recovers Λ.
    Corrected,
    /// c_j = (−1)^j C(k, j) as printed; recovers −Λ.
    Published,
}

pub fn binomial(k: u32, j: u32) -> i128 {
    if j > k {
        return 0;
    }
    let j = j.min(k - j);
    let mut acc: i128 = 1;
    for i in 0..j {
        acc = acc * (k - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn weight(k: u32, j: u32, conv: SignConvention) -> i128 {
    let sign = if j % 2 == 1 { 1 } else { -1 };
    let sign = match conv {
        SignConvention::Corrected => sign,
        SignConvention::Published => -sign,
    };
    sign * binomial(k, j)
}

/// Integer weights w(d), d | n, of the arithmetic function μ_L^{*j} * 1^{*(j−1)},
/// so that K^(j)(n) = Σ_{d|n} w(d) log(n/d).
fn kj_weights(divs: &[u64], j: u32, cutoff: u64) -> Vec<i128> {
    let mu_l: Vec<i128> =
        divs.iter().map(|&d| if d <= cutoff { mobius(d) as i128 } else { 0 }).collect();
    let one: Vec<i128> = vec![1; divs.len()];
    let mut acc: Vec<i128> = divs.iter().map(|&d| (d == 1) as i128).collect();
    for _ in 0..j {
        acc = convolve(divs, &acc, &mu_l);
    }
    for _ in 1..j {
        acc = convolve(divs, &acc, &one);
    }
    acc
}

fn convolve(divs: &[u64], a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; divs.len()];
    for (i, &d) in divs.iter().enumerate() {
        let mut s = 0;
        for (e_i, &e) in divs[..=i].iter().enumerate() {
            if d % e == 0 {
                let q = d / e;
                let q_i = divs.binary_search(&q).expect("divisor closed");
                s += a[e_i] * b[q_i];
            }
        }
        out[i] = s;
    }
    out
}

fn log_sum(n: u64, divs: &[u64], w: &[i128]) -> f64 {
    divs.iter()
        .zip(w)
        .filter(|(_, &c)| c != 0)
        .map(|(&d, &c)| c as f64 * ((n / d) as f64).ln())
        .collect::<CompensatedSum>()
        .value()
}

/// K^(j)(n): the 2j-fold convolution μ(n_1)⋯μ(n_j) log n_2j with n_i ≤ (3x)^{1/k} for i ≤ j.
pub fn compute_kj(n: u64, j: u32, cfg: &IdentityConfig) -> Result<f64> {
    if j == 0 || j > cfg.k {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= k = {}, got {j}", cfg.k)));
    }
    if n == 0 || n > cfg.window_hi() {
        return Err(Error::Domain(format!("K^(j) is evaluated for 1 <= n <= 3x, got {n}")));
    }
    let divs = divisors(n);
    Ok(log_sum(n, &divs, &kj_weights(&divs, j, cfg.mobius_cutoff)))
}

/// Σ_j c_j K^(j)(n) under the given sign convention.
pub fn lambda_via_identity_with(n: u64, cfg: &IdentityConfig, conv: SignConvention) -> Result<f64> {
    if n < cfg.x || n > cfg.window_hi() {
        return Err(Error::Domain(format!(
            "n = {n} lies outside the identity window [{}, {}]",
            cfg.x,
            cfg.window_hi()
        )));
    }
    let divs = divisors(n);
    let mut total = vec![0i128; divs.len()];
    for j in 1..=cfg.k {
        let c = weight(cfg.k, j, conv);
        for (t, w) in total.iter_mut().zip(kj_weights(&divs, j, cfg.mobius_cutoff)) {
            *t += c * w;
        }
    }
    Ok(log_sum(n, &divs, &total))
}

pub fn lambda_via_identity(n: u64, cfg: &IdentityConfig) -> Result<f64> {
    lambda_via_identity_with(n, cfg, SignConvention::Corrected)
}

/// Largest |Σ c_j K^(j)(n) − Λ(n)| over n ∈ (x, 3x].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub x: u64,
    pub k: u32,
    pub n_lo: u64,
    pub n_hi: u64,
    pub count: u64,
    #[serde(serialize_with = "crate::report::g12")]
    pub max_residual: f64,
    pub argmax_n: u64,
}

pub fn verify_identity(cfg: &IdentityConfig) -> Result<IdentityReport> {
    use rayon::prelude::*;
    let lo = cfg.x + 1;
    let hi = cfg.window_hi();
    let residuals: Vec<(u64, f64)> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let v = lambda_via_identity(n, cfg)?;
            Ok((n, (v - crate::primes::von_mangoldt(n)).abs()))
        })
        .collect::<Result<_>>()?;
    let (argmax_n, max_residual) = residuals
        .iter()
        .copied()
        .fold((lo, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    Ok(IdentityReport {
        x: cfg.x,
        k: cfg.k,
        n_lo: lo,
        n_hi: hi,
        count: hi - lo + 1,
        max_residual,
        argmax_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::von_mangoldt;

    #[test]
    fn config_cutoff() {
        let c = IdentityConfig::new(8, 1).unwrap();
        assert_eq!(c.mobius_cutoff, 24);
        let c = IdentityConfig::new(5000, 3).unwrap();
        assert_eq!(c.mobius_cutoff, 24); // 24^3 = 13824 <= 15000 < 15625
    }

    #[test]
    fn kj_examples() {
        let cfg = IdentityConfig::new(2, 1).unwrap();
        assert!((compute_kj(4, 1, &cfg).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(compute_kj(1, 1, &cfg).unwrap(), 0.0);
        assert!((compute_kj(5, 1, &cfg).unwrap() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn identity_examples() {
        let cfg = IdentityConfig::new(2, 1).unwrap();
        assert!((lambda_via_identity(4, &cfg).unwrap() - 2f64.ln()).abs() < 1e-12);
        let cfg = IdentityConfig::new(2, 2).unwrap();
        assert!(lambda_via_identity(6, &cfg).unwrap().abs() < 1e-12);
        assert!(matches!(lambda_via_identity(7, &cfg), Err(Error::Domain(_))));
        assert!(matches!(lambda_via_identity(1, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn published_sign_negates() {
        for k in 1..=3 {
            let cfg = IdentityConfig::new(40, k).unwrap();
            for n in 41..=120 {
                let a = lambda_via_identity_with(n, &cfg, SignConvention::Published).unwrap();
                assert!((a + von_mangoldt(n)).abs() < 1e-9, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(60, 30), 118264581564861424);
        assert_eq!(weight(3, 2, SignConvention::Corrected), -3);
    }

    #[test]
    fn large_k_still_evaluates() {
        let cfg = IdentityConfig::new(1000, 60).unwrap();
        assert_eq!(cfg.mobius_cutoff, 1);
        for n in [1009u64, 1024, 2000, 2999] {
            let v = lambda_via_identity(n, &cfg).unwrap();
            assert!((v - von_mangoldt(n)).abs() < 1e-6, "n={n}: {v}");
        }
    }
}
