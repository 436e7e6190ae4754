use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::sieve::Sieve;
use crate::report::{g12, rational_str};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeGap {
    pub p: u64,
    pub next: u64,
    pub gap: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub x: u64,
    pub count: u64,
    pub max_gap: u64,
    pub sum_gap: u64,
    pub sum_gap_sq: u128,
}

impl GapSummary {
    /// The moment Σ d_n^power for power ∈ {1, 2}.
    pub fn moment(&self, power: u32) -> Result<u128> {
        match power {
            1 => Ok(self.sum_gap as u128),
            2 => Ok(self.sum_gap_sq),
            _ => Err(Error::InvalidArgument(format!("power must be 1 or 2, got {power}"))),
        }
    }

    pub fn mean_gap(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum_gap as f64 / self.count as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandSum {
    pub x: u64,
    #[serde(serialize_with = "rational_str")]
    pub tau: BigRational,
    #[serde(serialize_with = "rational_str")]
    pub lo: BigRational,
    #[serde(serialize_with = "rational_str")]
    pub hi: BigRational,
    pub sum_gap_sq: u128,
    pub contributing: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxGapRow {
    pub n: u64,
    pub max_gap: u64,
    /// Prime p_n opening the record gap.
    pub at: u64,
    /// log(max_gap)/log(n), rounded half-up to two decimals.
    #[serde(serialize_with = "g12")]
    pub ratio: f64,
}

impl Sieve {
    /// Stream every gap with `lo ≤ p_n ≤ hi`; the successor may exceed `hi`.
    pub fn for_each_gap(&self, lo: u64, hi: u64, mut f: impl FnMut(PrimeGap)) -> Result<()> {
        self.check(hi)?;
        let mut prev: Option<u64> = None;
        self.stream(lo, hi, |q| {
            if let Some(p) = prev {
                f(PrimeGap { p, next: q, gap: q - p });
            }
            prev = Some(q);
        });
        if let Some(p) = prev {
            let next = next_prime_after(self, p);
            f(PrimeGap { p, next, gap: next - p });
        }
        Ok(())
    }

    pub fn gaps(&self, lo: u64, hi: u64) -> Result<Vec<PrimeGap>> {
        let mut v = Vec::new();
        self.for_each_gap(lo, hi, |g| v.push(g))?;
        Ok(v)
    }

    pub fn gap_summary(&self, x: u64) -> Result<GapSummary> {
        Ok(self.gap_summaries(&[x])?.remove(0))
    }

    /// Summaries for every limit in one pass; limits must be strictly ascending.
    pub fn gap_summaries(&self, limits: &[u64]) -> Result<Vec<GapSummary>> {
        if limits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("limits must be strictly ascending".into()));
        }
        let Some(&top) = limits.last() else {
            return Ok(Vec::new());
        };
        let mut out = Vec::with_capacity(limits.len());
        let mut s = GapSummary { x: 0, count: 0, max_gap: 0, sum_gap: 0, sum_gap_sq: 0 };
        let mut idx = 0;
        self.for_each_gap(2, top, |g| {
            while idx < limits.len() && g.p > limits[idx] {
                out.push(GapSummary { x: limits[idx], ..s.clone() });
                idx += 1;
            }
            s.count += 1;
            s.max_gap = s.max_gap.max(g.gap);
            s.sum_gap += g.gap;
            s.sum_gap_sq += (g.gap as u128) * (g.gap as u128);
        })?;
        while idx < limits.len() {
            out.push(GapSummary { x: limits[idx], ..s.clone() });
            idx += 1;
        }
        Ok(out)
    }

    pub fn max_gap_table(&self, limits: &[u64]) -> Result<Vec<MaxGapRow>> {
        if limits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("limits must be strictly ascending".into()));
        }
        let Some(&top) = limits.last() else {
            return Ok(Vec::new());
        };
        if limits[0] < 2 {
            return Err(Error::InvalidArgument("limits must be at least 2".into()));
        }
        let mut rows = Vec::with_capacity(limits.len());
        let mut best = (0u64, 0u64);
        let mut idx = 0;
        self.for_each_gap(2, top, |g| {
            while idx < limits.len() && g.p > limits[idx] {
                rows.push(table_row(limits[idx], best));
                idx += 1;
            }
            if g.gap > best.0 {
                best = (g.gap, g.p);
            }
        })?;
        while idx < limits.len() {
            rows.push(table_row(limits[idx], best));
            idx += 1;
        }
        Ok(rows)
    }

    pub fn dyadic_band_sum(&self, x: u64, tau: &BigRational) -> Result<BandSum> {
        let zero = BigRational::from_integer(0.into());
        let xq = BigRational::from_integer(BigInt::from(x));
        if *tau <= zero || *tau > xq {
            return Err(Error::InvalidArgument("band sums need 0 < tau <= x".into()));
        }
        let lo = BigRational::from_integer(4.into()) * &xq / tau;
        let hi = BigRational::from_integer(8.into()) * &xq / tau;
        // d ≥ lo ⟺ d ≥ ceil(lo); d ≤ hi ⟺ d ≤ floor(hi).
        let d_lo = to_u128_sat(&lo.ceil().to_integer());
        let d_hi = to_u128_sat(&hi.floor().to_integer());
        let mut sum = 0u128;
        let mut contributing = 0u64;
        let upper = x.checked_mul(2).ok_or_else(|| Error::Capacity("2x overflows".into()))?;
        self.for_each_gap(x, upper, |g| {
            let d = g.gap as u128;
            if d >= d_lo && d <= d_hi {
                sum += d * d;
                contributing += 1;
            }
        })?;
        Ok(BandSum { x, tau: tau.clone(), lo, hi, sum_gap_sq: sum, contributing })
    }
}

fn to_u128_sat(v: &BigInt) -> u128 {
    u128::try_from(v).unwrap_or(if v.sign() == num_bigint::Sign::Minus { 0 } else { u128::MAX })
}

fn table_row(n: u64, (gap, at): (u64, u64)) -> MaxGapRow {
    let ratio = if gap == 0 { 0.0 } else { round_half_up_2((gap as f64).ln() / (n as f64).ln()) };
    MaxGapRow { n, max_gap: gap, at, ratio }
}

fn round_half_up_2(v: f64) -> f64 {
    (v * 100.0 + 0.5).floor() / 100.0
}

fn next_prime_after(sieve: &Sieve, p: u64) -> u64 {
    let mut width = 64u64;
    let mut start = p + 1;
    loop {
        let mut found = None;
        sieve.stream(start, start + width, |q| {
            if found.is_none() {
                found = Some(q);
            }
        });
        if let Some(q) = found {
            return q;
        }
        start += width + 1;
        width *= 2;
    }
}

pub fn max_gap_table(limits: &[u64]) -> Result<Vec<MaxGapRow>> {
    Sieve::default().max_gap_table(limits)
}

pub fn gap_moment_sum(x: u64, power: u32) -> Result<GapSummary> {
    if x < 3 {
        return Err(Error::InvalidArgument("gap moments need x >= 3".into()));
    }
    if !(1..=2).contains(&power) {
        return Err(Error::InvalidArgument(format!("power must be 1 or 2, got {power}")));
    }
    Sieve::default().gap_summary(x)
}

pub fn dyadic_band_sum(x: u64, tau: &BigRational) -> Result<BandSum> {
    Sieve::default().dyadic_band_sum(x, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moments() {
        let s = gap_moment_sum(10, 2).unwrap();
        assert_eq!(s.count, 4);
        assert_eq!(s.moment(2).unwrap(), 25);
        assert_eq!(s.moment(1).unwrap(), 9);
        assert_eq!(s.max_gap, 4);
        assert!(gap_moment_sum(10, 3).is_err());
        assert!(gap_moment_sum(2, 1).is_err());
    }

    #[test]
    fn table_first_rows() {
        let rows = max_gap_table(&[10, 100, 1000]).unwrap();
        let gaps: Vec<u64> = rows.iter().map(|r| r.max_gap).collect();
        assert_eq!(gaps, vec![4, 8, 20]);
        assert_eq!(rows[0].ratio, 0.60);
        assert_eq!(rows[2].at, 887);
    }

    #[test]
    fn band_sum_out_of_reach() {
        let b = dyadic_band_sum(100, &BigRational::from_integer(1.into())).unwrap();
        assert_eq!(b.sum_gap_sq, 0);
        assert_eq!(b.contributing, 0);
        assert!(dyadic_band_sum(100, &BigRational::from_integer(101.into())).is_err());
    }

    #[test]
    fn rounding_half_up() {
        assert_eq!(round_half_up_2(0.3891), 0.39);
        assert_eq!(round_half_up_2(0.2722), 0.27);
    }
}
