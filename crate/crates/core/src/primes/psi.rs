use super::sieve::{isqrt, small_primes, Sieve};
use crate::arith::{prime_power_base, CompensatedSum};
use crate::Result;

/// Λ(n): log p when n = p^k, otherwise 0.
pub fn von_mangoldt(n: u64) -> f64 {
    assert!(n >= 1, "von Mangoldt is defined for n >= 1");
    prime_power_base(n).map_or(0.0, |p| (p as f64).ln())
}

/// Number of k ≥ 1 with p^k ≤ n.
fn power_count(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        match q.checked_mul(p) {
            Some(v) => q = v,
            None => break,
        }
    }
    k
}

impl Sieve {
    /// ψ(y) = Σ_{n ≤ y} Λ(n).
    pub fn chebyshev_psi(&self, y: f64) -> Result<f64> {
        if y < 2.0 {
            return Ok(0.0);
        }
        let n = y.floor() as u64;
        let mut sum = CompensatedSum::new();
        self.for_each_prime(2, n, |p| sum.add(power_count(p, n) as f64 * (p as f64).ln()))?;
        Ok(sum.value())
    }

    /// ψ(y + y/τ) − ψ(y), summed exactly over the integers of (y, y + y/τ].
    pub fn psi_window(&self, y: f64, tau: f64) -> Result<f64> {
        let lo = y.floor() as u64;
        let hi = (y + y / tau).floor() as u64;
        Ok(window_terms(self, lo, hi)?.iter().map(|&(_, v)| v).collect::<CompensatedSum>().value())
    }
}

/// (n, Λ(n)) for prime powers n in (lo, hi], ascending.
pub(crate) fn window_terms(sieve: &Sieve, lo: u64, hi: u64) -> Result<Vec<(u64, f64)>> {
    let mut terms = Vec::new();
    if hi <= lo {
        return Ok(terms);
    }
    sieve.for_each_prime(lo + 1, hi, |p| terms.push((p, (p as f64).ln())))?;
    for p in small_primes(isqrt(hi)) {
        let lp = (p as f64).ln();
        let mut q = p * p;
        loop {
            if q > lo && q <= hi {
                terms.push((q, lp));
            }
            match q.checked_mul(p) {
                Some(v) if v <= hi => q = v,
                _ => break,
            }
        }
    }
    terms.sort_unstable_by_key(|&(n, _)| n);
    Ok(terms)
}

pub fn chebyshev_psi(y: f64) -> Result<f64> {
    Sieve::default().chebyshev_psi(y)
}

pub fn psi_window(y: f64, tau: f64) -> Result<f64> {
    if y < 2.0 || tau < 2.0 {
        return Err(crate::Error::InvalidArgument("psi_window needs y >= 2 and tau >= 2".into()));
    }
    Sieve::default().psi_window(y, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_values() {
        assert_eq!(von_mangoldt(1), 0.0);
        assert_eq!(von_mangoldt(8), 2f64.ln());
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(9), 3f64.ln());
    }

    #[test]
    fn psi_small() {
        assert_eq!(chebyshev_psi(1.0).unwrap(), 0.0);
        let want = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((chebyshev_psi(10.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn windows() {
        let w = psi_window(100.0, 10.0).unwrap();
        let want = 101f64.ln() + 103f64.ln() + 107f64.ln() + 109f64.ln();
        assert!((w - want).abs() < 1e-12);
        assert!((psi_window(2.0, 2.0).unwrap() - 3f64.ln()).abs() < 1e-15);
        // (120, 128] holds 11^2, 5^3, 127 and 2^7
        let w = psi_window(120.0, 15.0).unwrap();
        let want = 11f64.ln() + 5f64.ln() + 127f64.ln() + 2f64.ln();
        assert!((w - want).abs() < 1e-12);
    }
}
