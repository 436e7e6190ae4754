use gapscope_core::primes::*;
use gapscope_core::Error;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn is_prime_td(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain byte-array sieve, no wheel, no segments.
fn reference_sieve(n: usize) -> Vec<u64> {
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

fn lambda_td(n: u64) -> f64 {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    if n >= 2 {
        (n as f64).ln()
    } else {
        0.0
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn sieve_examples() {
    assert_eq!(sieve_primes(1, 10).unwrap(), vec![2, 3, 5, 7]);
    assert_eq!(sieve_primes(90, 100).unwrap(), vec![97]);
    assert!(sieve_primes(0, 1).unwrap().is_empty());
    let all = sieve_primes(1, 1_000_000).unwrap();
    assert_eq!(all.len(), 78498);
    assert_eq!(all, reference_sieve(1_000_000));
}

#[test]
fn sieve_ceiling_is_a_capacity_error() {
    let s = Sieve::new(SieveConfig { ceiling: 1000, ..SieveConfig::default() });
    assert!(matches!(s.primes(1, 1001), Err(Error::Capacity(_))));
    assert!(matches!(sieve_primes(1, DEFAULT_CEILING + 1), Err(Error::Capacity(_))));
}

#[test]
fn segment_size_does_not_change_output() {
    let small = Sieve::new(SieveConfig { segment_odds: 64, ..SieveConfig::default() });
    assert_eq!(small.primes(999_000, 1_003_000).unwrap(), sieve_primes(999_000, 1_003_000).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sieve_matches_trial_division(lo in 0u64..3_000_000, w in 0u64..3000) {
        let got = sieve_primes(lo, lo + w).unwrap();
        let want: Vec<u64> = (lo..=lo + w).filter(|&n| is_prime_td(n)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn gap_invariants(x in 3u64..200_000) {
        let s = gap_moment_sum(x, 2).unwrap();
        let gaps = Sieve::default().gaps(2, x).unwrap();
        let last = gaps.last().unwrap();
        // telescoping under the p_n <= x convention
        prop_assert_eq!(s.sum_gap, last.next - 2);
        prop_assert!(last.p <= x && last.next > x);
        prop_assert_eq!(s.count as usize, gaps.len());
        prop_assert!(s.sum_gap_sq >= s.sum_gap as u128);
        prop_assert!((s.max_gap as u128).pow(2) <= s.sum_gap_sq);
        for g in &gaps {
            prop_assert!(g.gap <= g.p);
            prop_assert!(g.p == 2 || g.gap % 2 == 0);
            prop_assert!(is_prime_td(g.next));
        }
        // prefix property
        let longer = Sieve::default().gaps(2, x + 1000).unwrap();
        prop_assert_eq!(&longer[..gaps.len()], &gaps[..]);
    }

    #[test]
    fn psi_matches_trial_division(y in 0u64..100_000) {
        let want: f64 = (1..=y).map(lambda_td).sum();
        let got = chebyshev_psi(y as f64).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0));
    }
}

#[test]
fn max_gap_rows() {
    let rows = max_gap_table(&[10, 100, 1000, 1_000_000]).unwrap();
    let gaps: Vec<u64> = rows.iter().map(|r| r.max_gap).collect();
    assert_eq!(gaps, vec![4, 8, 20, 114]);
    assert_eq!(rows[3].ratio, 0.34);
    assert_eq!(rows[3].at, 492_113);
    assert!(max_gap_table(&[100, 10]).is_err());
    // oracle: brute force over the reference sieve
    let ps = reference_sieve(1_000_200);
    let best = ps.windows(2).filter(|w| w[0] <= 1_000_000).map(|w| w[1] - w[0]).max().unwrap();
    assert_eq!(best, 114);
}

#[test]
fn moment_examples() {
    assert_eq!(gap_moment_sum(10, 2).unwrap().sum_gap_sq, 25);
    assert_eq!(gap_moment_sum(10, 1).unwrap().sum_gap, 9);
    let ps = reference_sieve(200);
    let oracle: u64 = ps.windows(2).filter(|w| w[0] <= 100).map(|w| (w[1] - w[0]).pow(2)).sum();
    assert_eq!(oracle, 477);
    assert_eq!(gap_moment_sum(100, 2).unwrap().moment(2).unwrap(), 477);
    assert!(gap_moment_sum(2, 1).is_err());
    assert!(gap_moment_sum(10, 3).is_err());
}

fn band_oracle(x: u64, lo: f64, hi: f64) -> u128 {
    let ps = reference_sieve((2 * x + 1000) as usize);
    ps.windows(2)
        .filter(|w| w[0] >= x && w[0] <= 2 * x)
        .map(|w| w[1] - w[0])
        .filter(|&d| d as f64 >= lo && d as f64 <= hi)
        .map(|d| (d * d) as u128)
        .sum()
}

#[test]
fn band_examples() {
    let b = dyadic_band_sum(100, &rat(100, 1)).unwrap();
    assert_eq!((b.lo.clone(), b.hi.clone()), (rat(4, 1), rat(8, 1)));
    assert_eq!(b.sum_gap_sq, band_oracle(100, 4.0, 8.0));
    assert!(b.sum_gap_sq > 0);
    assert_eq!(dyadic_band_sum(100, &rat(1, 1)).unwrap().sum_gap_sq, 0);
    let b = dyadic_band_sum(1_000_000, &rat(31623, 1)).unwrap();
    assert!(b.sum_gap_sq > 0);
    assert_eq!(b.sum_gap_sq, band_oracle(1_000_000, 4e6 / 31623.0, 8e6 / 31623.0));
    assert!(dyadic_band_sum(100, &rat(101, 1)).is_err());
    assert!(dyadic_band_sum(100, &rat(0, 1)).is_err());
}

#[test]
fn band_decomposition_covers_large_gaps() {
    let x = 50_000u64;
    let gaps = Sieve::default().gaps(x, 2 * x).unwrap();
    let bands: Vec<BandSum> =
        (0..16).map(|j| dyadic_band_sum(x, &rat(x as i64, 1i64 << j)).unwrap()).collect();
    let mut total = 0u128;
    for g in &gaps {
        let d = BigRational::from_integer(g.gap.into());
        let hits = bands.iter().filter(|b| b.lo <= d && d <= b.hi).count();
        if g.gap >= 4 {
            assert!((1..=2).contains(&hits), "gap {} covered {hits} times", g.gap);
        }
        total += (g.gap as u128).pow(2);
    }
    let band_total: u128 = bands.iter().map(|b| b.sum_gap_sq).sum();
    assert!(band_total <= 2 * total);
}

#[test]
fn von_mangoldt_examples() {
    assert_eq!(von_mangoldt(8), 2f64.ln());
    assert_eq!(von_mangoldt(6), 0.0);
    assert_eq!(von_mangoldt(9), 3f64.ln());
    assert_eq!(von_mangoldt(1), 0.0);
}

#[test]
fn psi_examples() {
    assert_eq!(chebyshev_psi(1.0).unwrap(), 0.0);
    let want = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
    assert!((chebyshev_psi(10.0).unwrap() - want).abs() < 1e-12);
    let big = chebyshev_psi(1e6).unwrap();
    assert!((big / 1e6 - 1.0).abs() < 0.005);
}

#[test]
fn psi_window_examples() {
    let want: f64 = [101f64, 103.0, 107.0, 109.0].iter().map(|p| p.ln()).sum();
    assert!((psi_window(100.0, 10.0).unwrap() - want).abs() < 1e-12);
    assert!((psi_window(2.0, 2.0).unwrap() - 3f64.ln()).abs() < 1e-15);
    assert!(psi_window(1.0, 2.0).is_err());
}

#[test]
fn prime_free_windows_are_small() {
    let mut checked = 0;
    for y in (1000..20_000).step_by(37) {
        for tau in [50.0, 200.0, 1000.0] {
            let y = y as f64 + 0.5;
            let hi = (y + y / tau).floor() as u64;
            if sieve_primes(y as u64 + 1, hi).unwrap().is_empty() {
                let bound = 2.0 * y.ln().powi(2) * (y / tau).sqrt();
                assert!(psi_window(y, tau).unwrap() <= bound);
                checked += 1;
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn composite_runs() {
    let r = composite_run_demo(2).unwrap();
    assert_eq!(r.primorial, BigUint::from(6u32));
    assert_eq!(r.witnesses.iter().map(|w| w.0).collect::<Vec<_>>(), vec![2, 3]);
    let r = composite_run_demo(3).unwrap();
    assert!(r.length >= 4);
    let r = composite_run_demo(5).unwrap();
    assert_eq!(r.primorial, BigUint::from(2310u32));
    for j in 2312u64..=2321 {
        assert!(!is_prime_td(j));
    }
    for (j, w) in &r.witnesses {
        assert_eq!((2310 + j) % w, 0);
    }
}
