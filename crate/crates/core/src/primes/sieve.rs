//! Segmented sieve of Eratosthenes over the residues coprime to 30.

use rayon::prelude::*;

use crate::{Error, Result};

const WHEEL: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
const RES_IDX: [u8; 30] = {
    let mut t = [u8::MAX; 30];
    let mut i = 0;
    while i < 8 {
        t[WHEEL[i] as usize] = i as u8;
        i += 1;
    }
    t
};

pub const DEFAULT_CEILING: u64 = 10_000_000_000;
pub const DEFAULT_SEGMENT_ODDS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest `hi` accepted by range queries.
    pub ceiling: u64,
    /// Odd numbers covered by one segment; rounded up to whole wheel turns.
    pub segment_odds: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { ceiling: DEFAULT_CEILING, segment_odds: DEFAULT_SEGMENT_ODDS }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Sieve {
    cfg: SieveConfig,
}

impl Sieve {
    pub fn new(cfg: SieveConfig) -> Self {
        Sieve { cfg }
    }

    pub fn config(&self) -> &SieveConfig {
        &self.cfg
    }

    /// Whole wheel turns (blocks of 30 integers) per segment.
    fn blocks_per_segment(&self) -> u64 {
        (self.cfg.segment_odds * 2).div_ceil(30).max(1)
    }

    pub(crate) fn check(&self, hi: u64) -> Result<()> {
        if hi > self.cfg.ceiling {
            return Err(Error::Capacity(format!(
                "sieve limit {hi} exceeds the configured ceiling {}",
                self.cfg.ceiling
            )));
        }
        Ok(())
    }

    /// Primes in `[lo, hi]`, ascending.
    pub fn primes(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.for_each_prime(lo, hi, |p| out.push(p))?;
        Ok(out)
    }

    /// Stream the primes in `[lo, hi]` in ascending order.
    pub fn for_each_prime(&self, lo: u64, hi: u64, f: impl FnMut(u64)) -> Result<()> {
        self.check(hi)?;
        self.stream(lo, hi, f);
        Ok(())
    }

    /// Like [`Sieve::for_each_prime`] without the ceiling check; used for
    /// successor lookups just past an admissible limit.
    pub(crate) fn stream(&self, lo: u64, hi: u64, mut f: impl FnMut(u64)) {
        if lo > hi {
            return;
        }
        for p in [2u64, 3, 5] {
            if lo <= p && p <= hi {
                f(p);
            }
        }
        if hi < 7 {
            return;
        }
        let base_primes = small_primes(isqrt(hi));
        let span = self.blocks_per_segment() * 30;
        let first = lo / 30 * 30;
        let n_segments = (hi - first) / span + 1;
        let batch = (rayon::current_num_threads() * 2).max(1) as u64;
        let mut s = 0;
        while s < n_segments {
            let end = (s + batch).min(n_segments);
            let chunks: Vec<Vec<u64>> = (s..end)
                .into_par_iter()
                .map(|i| {
                    let base = first + i * span;
                    sieve_segment(base, span / 30, lo, hi, &base_primes)
                })
                .collect();
            for chunk in chunks {
                chunk.into_iter().for_each(&mut f);
            }
            s = end;
        }
    }
}

/// Primes in `[lo, hi]` with the default configuration.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    Sieve::default().primes(lo, hi)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    crate::arith::integer_root(n, 2)
}

/// Plain sieve for the primes up to `n` (used for sieving primes).
pub(crate) fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut is = vec![true; n + 1];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Primes ≥ 7 within `[lo, hi]` among the integers `[base, base + 30·blocks)`.
fn sieve_segment(base: u64, blocks: u64, lo: u64, hi: u64, base_primes: &[u64]) -> Vec<u64> {
    let end = base + 30 * blocks; // exclusive
    let mut flags = vec![true; (blocks * 8) as usize];
    if base == 0 {
        flags[0] = false; // the integer 1
    }
    for &p in base_primes.iter().filter(|&&p| p >= 7) {
        if p * p >= end {
            break;
        }
        // Multiples p*q with q coprime to 30 and q ≥ max(p, base/p).
        let q_min = p.max(base.div_ceil(p));
        for &w in &WHEEL {
            let qb0 = if q_min > w { (q_min - w).div_ceil(30) } else { 0 };
            let n0 = p * (30 * qb0 + w);
            if n0 >= end {
                continue;
            }
            let r = RES_IDX[(n0 % 30) as usize] as usize;
            let mut block = ((n0 - base) / 30) as usize;
            let nblocks = blocks as usize;
            let step = p as usize;
            while block < nblocks {
                flags[block * 8 + r] = false;
                block += step;
            }
        }
    }
    let mut out = Vec::new();
    let lo = lo.max(7);
    for (i, &f) in flags.iter().enumerate() {
        if f {
            let n = base + 30 * (i as u64 / 8) + WHEEL[i % 8];
            if n >= lo && n <= hi {
                out.push(n);
            }
        }
    }
    out
}
