//! Small integer helpers shared by the engines.

/// Smallest prime factor of `n` (n ≥ 2) by trial division with a 2,3,5 wheel.
pub fn smallest_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            return p;
        }
    }
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return d;
        }
        d += STEPS[i];
        i = (i + 1) & 7;
    }
    n
}

/// Prime factorization as (prime, exponent) pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_factor(n);
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_factor(n) == n
}

/// Möbius function.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut sign = 1i8;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Möbius values for 0..=limit via a linear sieve (index 0 unused).
pub fn mobius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![0i8; limit + 1];
    if limit == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut composite = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > limit {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// If `n` is a prime power p^k (k ≥ 1) return p.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = smallest_factor(n);
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

/// Largest c with c^k ≤ n.
pub fn integer_root(n: u64, k: u32) -> u64 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    let pow_le = |c: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            acc *= c as u128;
            if acc > n as u128 {
                return false;
            }
        }
        true
    };
    let mut c = (n as f64).powf(1.0 / k as f64).round() as u64;
    while c > 0 && !pow_le(c) {
        c -= 1;
    }
    while pow_le(c + 1) {
        c += 1;
    }
    c
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(7), -1);
        assert_eq!(mobius(6), 1);
    }

    #[test]
    fn mobius_table_matches_factorization() {
        let t = mobius_table(2000);
        for n in 1..=2000u64 {
            assert_eq!(t[n as usize], mobius(n), "n={n}");
        }
    }

    #[test]
    fn integer_root_brackets() {
        for n in [0u64, 1, 2, 7, 8, 9, 26, 27, 28, 15000, 1 << 40, u64::MAX] {
            for k in 1..=6 {
                let c = integer_root(n, k) as u128;
                assert!(c.pow(k) <= n as u128);
                assert!((c + 1).pow(k) > n as u128);
            }
        }
    }

    #[test]
    fn divisors_of_360() {
        let d = divisors(360);
        assert_eq!(d.len(), 24);
        assert!(d.iter().all(|x| 360 % x == 0));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
