use std::collections::BTreeSet;

use gapscope_core::identity::*;
use gapscope_core::primes::von_mangoldt;
use gapscope_core::Error;
use num_rational::BigRational;
use proptest::prelude::*;

fn mu_td(mut n: u64) -> i64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

fn lambda_td(n: u64) -> f64 {
    (2..=n).find(|p| n % p == 0).map_or(0.0, |p| {
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    })
}

/// K^(j)(n) by walking ordered 2j-tuples of divisors.
fn kj_oracle(n: u64, j: usize, cutoff: u64) -> f64 {
    fn rec(rest: u64, pos: usize, j: usize, cutoff: u64, w: i64) -> f64 {
        if pos == 2 * j - 1 {
            return w as f64 * (rest as f64).ln();
        }
        let mut s = 0.0;
        for d in 1..=rest {
            if rest % d != 0 {
                continue;
            }
            let mut w2 = w;
            if pos < j {
                if d > cutoff {
                    continue;
                }
                w2 *= mu_td(d);
                if w2 == 0 {
                    continue;
                }
            }
            s += rec(rest / d, pos + 1, j, cutoff, w2);
        }
        s
    }
    rec(n, 0, j, cutoff, 1)
}

#[test]
fn mobius_examples() {
    assert_eq!(mobius_fn(1), 1);
    assert_eq!(mobius_fn(12), 0);
    assert_eq!(mobius_fn(30), -1);
    for n in 1..2000 {
        assert_eq!(mobius_fn(n) as i64, mu_td(n));
    }
}

#[test]
fn config_cutoff() {
    for (x, k) in [(2, 1), (50, 2), (500, 3), (5000, 3), (1000, 60)] {
        let c = IdentityConfig::new(x, k).unwrap();
        let m = c.mobius_cutoff as u128;
        assert!(m.pow(k) <= 3 * x as u128);
        assert!((m + 1).pow(k) > 3 * x as u128);
    }
}

#[test]
fn kj_examples() {
    let cfg = IdentityConfig::new(2, 1).unwrap();
    assert!((compute_kj(4, 1, &cfg).unwrap() - 2f64.ln()).abs() < 1e-15);
    let cfg = IdentityConfig::new(10, 3).unwrap();
    for j in 1..=3 {
        assert_eq!(compute_kj(1, j, &cfg).unwrap(), 0.0);
    }
    let cfg = IdentityConfig::new(10, 1).unwrap();
    assert!((compute_kj(29, 1, &cfg).unwrap() - 29f64.ln()).abs() < 1e-12);
    assert!(compute_kj(31, 1, &cfg).is_err());
    assert!(compute_kj(5, 2, &cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kj_matches_tuple_walk(x in 2u64..80, k in 1u32..4, j in 1u32..3, n in 1u64..240) {
        let cfg = IdentityConfig::new(x, k).unwrap();
        prop_assume!(j <= k && n <= 3 * x);
        let got = compute_kj(n, j, &cfg).unwrap();
        let want = kj_oracle(n, j as usize, cfg.mobius_cutoff);
        prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
    }

    #[test]
    fn identity_recovers_lambda(x in 1u64..400, k in 1u32..5, t in 0u64..1000) {
        let cfg = IdentityConfig::new(x, k).unwrap();
        let n = x + t % (2 * x + 1);
        let got = lambda_via_identity(n, &cfg).unwrap();
        prop_assert!((got - lambda_td(n)).abs() < 1e-9);
        let printed = lambda_via_identity_with(n, &cfg, SignConvention::Published).unwrap();
        prop_assert!((printed + lambda_td(n)).abs() < 1e-9);
    }
}

#[test]
fn identity_examples() {
    let cfg = IdentityConfig::new(2, 1).unwrap();
    assert!((lambda_via_identity(4, &cfg).unwrap() - 2f64.ln()).abs() < 1e-12);
    let cfg = IdentityConfig::new(2, 2).unwrap();
    assert!(lambda_via_identity(6, &cfg).unwrap().abs() < 1e-12);
    for k in 1..=3 {
        let cfg = IdentityConfig::new(1, k).unwrap();
        assert!((lambda_via_identity(2, &cfg).unwrap() - 2f64.ln()).abs() < 1e-12);
    }
    let cfg = IdentityConfig::new(10, 2).unwrap();
    assert!(matches!(lambda_via_identity(31, &cfg), Err(Error::Domain(_))));
    assert!(matches!(lambda_via_identity(9, &cfg), Err(Error::Domain(_))));
}

#[test]
fn verify_report() {
    let r = verify_identity(&IdentityConfig::new(50, 2).unwrap()).unwrap();
    assert_eq!((r.n_lo, r.n_hi, r.count), (51, 150, 100));
    assert!(r.max_residual <= 1e-9);
}

/// Exponent vectors admitted by the stated constraints, by brute force.
fn factorization_oracle(x: u64, k: usize) -> BTreeSet<(u32, Vec<i32>)> {
    let cutoff = (3.0 * x as f64).powf(1.0 / k as f64);
    let top = (3.0 * x as f64).log2().floor() as i32 + 2 * k as i32;
    let lo = x as f64 / 4f64.powi(k as i32);
    let mut out = BTreeSet::new();
    for j in 1..=k {
        let n = 2 * k;
        let mut e = vec![-1i32; n];
        loop {
            let ok = (0..n).all(|i| {
                let pos = i + 1;
                let placeholder = (pos > j && pos <= k) || (pos >= k + j && pos < 2 * k);
                let mobius_ok = pos > k || 2f64.powi(e[i]) < cutoff;
                (!placeholder || e[i] == -1) && mobius_ok
            });
            let prod = 2f64.powi(e.iter().sum());
            if ok && prod >= lo && prod <= 3.0 * x as f64 {
                out.insert((j as u32, e.clone()));
            }
            let mut i = 0;
            while i < n {
                e[i] += 1;
                if e[i] <= top {
                    break;
                }
                e[i] = -1;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (x, k) in [(8, 1), (20, 1), (16, 2), (40, 2), (12, 3)] {
        let cfg = IdentityConfig::new(x, k).unwrap();
        let fs = enumerate_factorizations(&cfg).unwrap();
        let got: BTreeSet<_> = fs.iter().map(|f| (f.j, f.exps.clone())).collect();
        assert_eq!(got.len(), fs.len(), "duplicates for x={x} k={k}");
        assert_eq!(got, factorization_oracle(x, k as usize), "x={x} k={k}");
        assert_eq!(count_factorizations(&cfg), fs.len() as u128);
        for f in &fs {
            f.validate(&cfg).unwrap();
            assert_eq!(*f.classes.last().unwrap(), CoefficientClass::Log);
            for i in 0..f.exps.len() {
                if f.is_placeholder(i) {
                    assert_eq!(f.lengths()[i], 0.5);
                }
            }
        }
    }
    let cfg = IdentityConfig::new(8, 1).unwrap();
    let n1: BTreeSet<i32> = enumerate_factorizations(&cfg).unwrap().iter().map(|f| f.exps[0]).collect();
    // N1 ∈ {1/2, 1, 2, 4, 8, 16}: boxes meeting [1, 24]
    assert_eq!(n1, (-1..=4).collect());
}

#[test]
fn enumeration_refuses_large_k() {
    let cfg = IdentityConfig::new(1000, 60).unwrap();
    match enumerate_factorizations(&cfg) {
        Err(Error::Capacity(msg)) => assert!(msg.contains("k = 60")),
        other => panic!("{other:?}"),
    }
    // the identity path still works at k = 60
    assert!((lambda_via_identity(1009, &cfg).unwrap() - 1009f64.ln()).abs() < 1e-9);
}

#[test]
fn weighted_sum_is_exact() {
    for (x, k) in [(50, 1), (50, 2), (60, 3)] {
        let cfg = IdentityConfig::new(x, k).unwrap();
        let total = weighted_window_sum(&cfg).unwrap();
        for n in x + 1..=3 * x {
            let got = total.get(&n).copied().unwrap_or(0.0);
            assert!((got - von_mangoldt(n)).abs() < 1e-9, "x={x} k={k} n={n}");
        }
    }
    let cfg = IdentityConfig::new(8, 1).unwrap();
    let total = weighted_window_sum(&cfg).unwrap();
    assert!((total[&9] - 3f64.ln()).abs() < 1e-12);
    assert!(total.get(&12).copied().unwrap_or(0.0).abs() < 1e-12);
}

#[test]
fn product_coefficients_stay_in_window() {
    let cfg = IdentityConfig::new(50, 2).unwrap();
    let mut hit = 0;
    for f in enumerate_factorizations(&cfg).unwrap() {
        let c = coefficients_of_product(&f, &cfg);
        assert!(c.keys().all(|&n| (50..=150).contains(&n)));
        hit += !c.is_empty() as usize;
    }
    assert!(hit > 0);
}

#[test]
fn long_split() {
    let cfg = IdentityConfig::new(1024, 1).unwrap();
    let all = enumerate_factorizations(&cfg).unwrap();
    let theta = BigRational::new(19.into(), 20.into());
    let (f, g) = split_long(&cfg, &theta).unwrap();
    assert_eq!(f.len() + g.len(), all.len());
    // N_i > 2^9.5 ⟺ e ≥ 10
    assert!(f.iter().all(|x| x.exps.iter().any(|&e| e >= 10)));
    assert!(g.iter().all(|x| x.exps.iter().all(|&e| e <= 9)));
    let one = BigRational::from_integer(1.into());
    let (f1, g1) = split_long(&cfg, &one).unwrap();
    assert!(f1.iter().all(|x| x.exps.iter().any(|&e| 2f64.powi(e) > 1024.0)));
    assert_eq!(f1.len() + g1.len(), all.len());
    assert!(split_long(&cfg, &BigRational::from_integer(2.into())).is_err());
}
