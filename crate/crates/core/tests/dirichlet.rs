use gapscope_core::dirichlet::*;
use gapscope_core::identity::CoefficientClass;
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(exp: i32) -> PolyFactor {
    PolyFactor::new(CoefficientClass::Unit, exp)
}

/// Σ a_n n^{-c-it} by plain summation.
fn naive_eval(terms: &[(u64, f64)], c: f64, t: f64) -> Complex64 {
    terms.iter().map(|&(n, a)| a * (Complex64::new(-c, -t) * (n as f64).ln()).exp()).sum()
}

fn dense_sup(f: impl Fn(f64) -> f64, m: i64, samples: usize) -> f64 {
    (0..samples).map(|i| f(m as f64 + i as f64 / (samples - 1) as f64)).fold(f64::MIN, f64::max)
}

fn rstar_brute(s: &[i64]) -> u128 {
    let mut n = 0;
    for &a in s {
        for &b in s {
            for &c in s {
                for &d in s {
                    n += (a + b == c + d) as u128;
                }
            }
        }
    }
    n
}

#[test]
fn eval_examples() {
    for t in [0.0, 1.0, 17.5] {
        assert_eq!(eval_factor(&PolyFactor::singleton(), 1.3, t).unwrap(), Complex64::new(1.0, 0.0));
    }
    let v = eval_factor(&unit(1), 1.0, 0.0).unwrap();
    assert!((v.re - 7.0 / 12.0).abs() < 1e-15 && v.im == 0.0);
    // −3^{−1.1−i} to 30 digits
    let want = Complex64::new(-0.135836985680457202088912399786, 0.265973344874058984332921933850);
    let got = eval_factor(&PolyFactor::new(CoefficientClass::Mobius, 1), 1.1, 1.0).unwrap();
    assert!((got - want).norm() < 1e-14);
    assert!(eval_factor(&unit(24), 1.1, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_matches_naive_sum(class in 0usize..3, exp in 0i32..9, c in 0.5f64..2.0, t in -500f64..500.0) {
        let class = [CoefficientClass::Unit, CoefficientClass::Log, CoefficientClass::Mobius][class];
        let f = PolyFactor::new(class, exp);
        let terms = f.terms().unwrap();
        let bound = (2f64.powi(exp + 1)).ln() + 1.0;
        prop_assert!(terms.iter().all(|&(_, a)| a.abs() <= bound));
        let got = eval_factor(&f, c, t).unwrap();
        let want = naive_eval(&terms, c, t);
        prop_assert!((got - want).norm() <= 1e-10 * terms.len().max(1) as f64);
    }

    #[test]
    fn triangle_bound(e1 in 0i32..6, e2 in 0i32..6, c in 0.6f64..1.6, t in 0f64..300.0) {
        let fs = [unit(e1), PolyFactor::new(CoefficientClass::Log, e2)];
        let ps: Vec<Prepared> = fs.iter().map(|f| Prepared::new(f, c).unwrap()).collect();
        let cap: f64 = ps.iter().map(|p| p.abs_sum).product();
        prop_assert!(product_abs(&ps, t) <= cap * (1.0 + 1e-12));
    }

    #[test]
    fn rstar_matches_quadruple_walk(set in prop::collection::btree_set(100i64..200, 0..30)) {
        let members: Vec<i64> = set.into_iter().collect();
        let c = count_r_rstar(&members, 100.0).unwrap();
        prop_assert_eq!(c.r as usize, members.len());
        prop_assert_eq!(c.r_star, rstar_brute(&members));
        if c.r >= 1 {
            let r = c.r as u128;
            prop_assert!(r * r <= c.r_star && c.r_star <= r * r * r);
        }
    }
}

#[test]
fn sup_examples() {
    for m in [1, 7, 100] {
        let s = sup_on_unit_interval(&[PolyFactor::singleton()], 1.1, m, 32).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
    }
    let c = 1.1;
    let f = |t: f64| naive_eval(&[(3, 1.0), (4, 1.0)], c, t).norm();
    let dense = dense_sup(f, 3, 320);
    let s = sup_on_unit_interval(&[unit(1)], c, 3, 32).unwrap();
    assert_eq!(s.samples, 32);
    assert!(s.value >= s.sampled);
    assert!((s.value - dense).abs() <= 1e-4 * dense);
    assert!(s.upper >= dense);
    for m in 1..40 {
        let fs = [unit(3), PolyFactor::new(CoefficientClass::Mobius, 2)];
        let g64 = sup_on_unit_interval(&fs, c, m, 64).unwrap();
        let g8 = sup_on_unit_interval(&fs, c, m, 8).unwrap();
        assert!(g64.sampled >= g8.sampled);
    }
}

#[test]
fn classification_partitions() {
    for t in [1.0, 10.5, 50.0, 77.3] {
        let fs = [unit(3), PolyFactor::new(CoefficientClass::Log, 2), PolyFactor::singleton()];
        let cl = classify_profile(&fs, 1.05, t).unwrap();
        let want = (2.0 * t).floor() as i64 - t.ceil() as i64 + 1;
        assert_eq!(cl.total() as i64, want);
        let mut all: Vec<i64> = cl.cells.iter().flat_map(|c| c.members.clone()).chain(cl.s0.clone()).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len() as i64, want);
        for cell in &cl.cells {
            assert!(cell.profile.sigmas.iter().all(|&s| s <= 1.0));
        }
    }
    let cl = classify_profile(&[PolyFactor::singleton()], 1.2, 20.0).unwrap();
    assert_eq!(cl.cells.len(), 1);
    assert_eq!(cl.cells[0].profile.sigmas, vec![1.0]);
    assert!(cl.s0.is_empty());
}

#[test]
fn classification_matches_brute_force() {
    let (c, t) = (1.1, 50.0);
    let f = unit(3);
    let cl = classify_profile(&[f.clone()], c, t).unwrap();
    let terms = f.terms().unwrap();
    let n = 8f64;
    let x = 16f64;
    let top = n.powf(1.0 - c);
    let mut want: std::collections::BTreeMap<u32, Vec<i64>> = Default::default();
    let mut s0 = Vec::new();
    for m in 50..=100 {
        let v = cl.sups[&m][0];
        let dense = dense_sup(|s| naive_eval(&terms, c, s).norm(), m, 320);
        assert!((v - dense).abs() <= 1e-3 * dense, "m={m}");
        let j = (0..=7u32).rev().find(|&j| {
            let a = top / 2f64.powi(j as i32);
            a <= v && v <= 2.0 * a
        });
        match j {
            Some(j) if v > n.powf(-c) / x => want.entry(j).or_default().push(m),
            _ => s0.push(m),
        }
    }
    let got: std::collections::BTreeMap<u32, Vec<i64>> =
        cl.cells.iter().map(|c| (c.profile.indices[0], c.members.clone())).collect();
    assert_eq!(got, want);
    assert_eq!(cl.s0, s0);
}

#[test]
fn count_examples() {
    let c = count_r_rstar(&[5, 6, 7], 4.0).unwrap();
    assert_eq!((c.r, c.r_star), (3, 19));
    let c = count_r_rstar(&[], 4.0).unwrap();
    assert_eq!((c.r, c.r_star), (0, 0));
    for r in 1..=40i64 {
        let ap: Vec<i64> = (0..r).map(|i| 200 + 3 * i).collect();
        let want = (2 * r.pow(3) + r) / 3;
        assert_eq!(count_r_rstar(&ap, 200.0).unwrap().r_star, want as u128);
        if r <= 4 {
            assert_eq!(rstar_brute(&ap), want as u128);
        }
    }
    assert!(count_r_rstar(&[3], 4.0).is_err());
    assert!(count_r_rstar(&[5, 5], 4.0).is_err());
}

#[test]
fn bound_formulas() {
    let e = std::f64::consts::E;
    // log(NT) = 2 multiplies the bracket 1 + e·e⁻¹
    assert!((montgomery_rhs(e, 1.0, e, 1.0).unwrap() - 4.0).abs() < 1e-12);
    let v = montgomery_rhs(10.0, 0.5, 30.0, 2.0).unwrap();
    assert!((v - 300f64.ln() * 40.0 * 2.0).abs() < 1e-9);
    assert!((huxley_rhs(e, 1.0, e, 0.0).unwrap() - 4.0 * (1.0 + 1.0 / e)).abs() < 1e-12);
    let n: f64 = 1000.0;
    let h = huxley_rhs(n, 2.0 / 3.0, n.powf(2.0 / 3.0), 0.0).unwrap();
    assert!((h - (n * n.powf(2.0 / 3.0)).ln().powi(2) * 2.0 * n.powf(2.0 / 3.0)).abs() < 1e-6 * h);
    assert!(montgomery_rhs(0.5, 0.7, 10.0, 1.0).is_err());
    assert!(huxley_rhs(10.0, 0.4, 10.0, 1.0).is_err());
    assert!((hb_rstar_rhs(1.0, 1.0, 1.0, 0.5, 1.0) - 3.0).abs() < 1e-12);
    let zero = count_r_rstar(&[], 10.0).unwrap();
    let chk = hb_rstar_check(&zero, 8.0, 0.75, 10.0, 100.0);
    assert!(chk.pass && chk.rhs == 0.0 && chk.ratio == 0.0);
}

#[test]
fn experiment_rows_hold_with_slack() {
    let rows = large_value_experiment(&[unit(4), unit(3)], 1.05, 200.0).unwrap();
    assert!(!rows.is_empty());
    for r in &rows {
        assert!((r.r as f64) <= 100.0 * r.mont_rhs);
        assert!(r.ratios.hbstar <= 100.0);
        let rr = r.r as u128;
        assert!(rr * rr <= r.r_star && r.r_star <= rr.pow(3));
    }
}

#[test]
fn c1_c2_magnitudes() {
    for y in [10.0f64, 100.0, 1e4] {
        for tau in [2.0, 3.0, 10.0, 100.0] {
            let c = PerronParams::new(y, tau).unwrap().c;
            for t in [0.0, 0.3, 1.0, 5.0, 40.0, 1e3, -7.0] {
                let s = Complex64::new(c, t);
                assert!(c1(s, tau).norm() <= 2.0 / tau, "y={y} tau={tau} t={t}");
                assert!(c2(s, tau).norm() <= 2.0 * s.norm() / (tau * tau));
            }
        }
    }
}

#[test]
fn perron_examples() {
    let p = PerronParams::new(9.0, 3.0).unwrap().with_t0(200.0);
    assert!(p.c > 1.0 && p.t1 < p.t0);
    let r = perron_window(&p, &[unit(3)]).unwrap();
    assert_eq!(r.direct, 3.0);
    assert!(r.residual <= r.envelope);
    // window (20.5, 27.33] misses (8, 16]
    let p = PerronParams::new(20.5, 3.0).unwrap();
    let r = perron_window(&p, &[unit(3)]).unwrap();
    assert_eq!(r.direct, 0.0);
    assert!(r.k <= 50.0);
    assert!(PerronParams::new(2.0, 3.0).is_err());
}

#[test]
fn quadrature_is_converged() {
    for (y, tau) in [(9.5, 3.0), (101.5, 5.0), (600.5, 10.0)] {
        let p = PerronParams::new(y, tau).unwrap();
        let fs = [unit(3), PolyFactor::new(CoefficientClass::Log, 3)];
        let a = perron_window(&p, &fs).unwrap();
        let opts = QuadratureOptions { panel_width: 0.5, ..QuadratureOptions::default() };
        let b = perron_window_with(&p, &fs, &opts).unwrap();
        assert!((a.estimate - b.estimate).abs() <= 1e-6 * a.estimate.abs().max(1.0), "y={y}");
    }
}

#[test]
fn tail_examples() {
    let p = PerronParams::new(99.5, 4.0).unwrap();
    let fs = [unit(4)];
    assert_eq!(tail_e4(&p, &fs, p.t1, p.t1).unwrap(), 0.0);
    let whole = tail_e4(&p, &fs, p.t1, p.t0).unwrap();
    let a = tail_e4(&p, &fs, p.t1, 50.0).unwrap();
    let b = tail_e4(&p, &fs, 50.0, p.t0).unwrap();
    assert!(whole <= a + b + 1e-9);
    assert!(tail_e4(&p, &fs, 60.0, 50.0).is_err());
}
