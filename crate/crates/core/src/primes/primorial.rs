use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::smallest_factor;
use crate::{Error, Result};

/// A run of consecutive composites following a primorial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimorialRun {
    pub n: usize,
    #[serde(serialize_with = "big_str")]
    pub primorial: BigUint,
    /// P + 2, the first member of the run.
    #[serde(serialize_with = "big_str")]
    pub start: BigUint,
    /// p_n − 1 consecutive composites P+2, …, P+p_n.
    pub length: u64,
    /// (j, a prime factor of P + j) for every member.
    pub witnesses: Vec<(u64, u64)>,
}

fn big_str<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Certify that P + j is composite for 2 ≤ j ≤ p_n where P = p_1⋯p_n.
pub fn composite_run_demo(n: usize) -> Result<PrimorialRun> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    if n > 100_000 {
        return Err(Error::Capacity(format!("primorial of {n} primes is beyond the demo budget")));
    }
    let mut primes = Vec::with_capacity(n);
    let mut hi = 32u64;
    while primes.len() < n {
        primes = super::sieve::small_primes(hi);
        hi *= 2;
    }
    primes.truncate(n);
    let pn = *primes.last().expect("n >= 1");
    let primorial = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
    let mut witnesses = Vec::with_capacity(pn as usize);
    for j in 2..=pn {
        let w = smallest_factor(j);
        let m = &primorial + j;
        if !(&m % w).is_zero() || m == BigUint::from(w) {
            return Err(Error::Numerical(format!("witness {w} fails for j = {j}")));
        }
        witnesses.push((j, w));
    }
    Ok(PrimorialRun { n, start: &primorial + 2u32, primorial, length: pn - 1, witnesses })
}
