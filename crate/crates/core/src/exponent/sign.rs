//! Sign certification of univariate polynomials on [a, b] with rational or algebraic ends.

use std::cmp::Ordering;

use serde_json::{json, Value};

use super::algebraic::Endpoint;
use super::poly::{q, qi, Poly, Sturm, Q};
use crate::report::fmt_rational;

/// Certificate that a polynomial is ≥ 0 on the domain.
#[derive(Clone, Debug, PartialEq)]
pub enum SignCert {
    /// The polynomial is identically zero.
    Zero,
    /// Degenerate domain {a}; `refined` is a root-free box around an algebraic a.
    Point { sign: i8, refined: Option<(Q, Q)> },
    /// Samples s_0 < … < s_n strictly inside (a, b), each a non-root; `counts[i]` is the number of
    /// distinct roots in (s_i, s_{i+1}] and is at most 1. The end boxes isolate algebraic ends.
    Interval {
        lo_sign: i8,
        hi_sign: i8,
        lo_box: Option<(Q, Q)>,
        hi_box: Option<(Q, Q)>,
        samples: Vec<(Q, i8)>,
        counts: Vec<usize>,
    },
}

/// Where a polynomial goes negative.
#[derive(Clone, Debug, PartialEq)]
pub struct Negative {
    pub sigma: Q,
    /// Root-free box around an algebraic point domain containing `sigma`.
    pub sigma_box: Option<(Q, Q)>,
}

#[derive(Clone, Debug)]
pub struct Domain {
    a: Endpoint,
    b: Endpoint,
    point: bool,
}

impl Domain {
    /// None if b < a.
    pub fn new(a: &Endpoint, b: &Endpoint) -> Option<Domain> {
        let (mut a, mut b) = (a.clone(), b.clone());
        match a.cmp_endpoint(&mut b) {
            Ordering::Greater => None,
            Ordering::Equal => Some(Domain { a: a.clone(), b: a, point: true }),
            Ordering::Less => {
                // separate the rational boxes
                loop {
                    let (_, ah) = a.bounds();
                    let (bl, _) = b.bounds();
                    if ah < bl {
                        break;
                    }
                    a.refine();
                    b.refine();
                }
                Some(Domain { a, b, point: false })
            }
        }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.a
    }

    pub fn hi(&self) -> &Endpoint {
        &self.b
    }

    pub fn is_point(&self) -> bool {
        self.point
    }

    /// A rational inside the domain (the point itself if rational).
    pub fn interior_point(&self) -> Q {
        if self.point {
            return self.a.bounds().0;
        }
        let (_, ah) = self.a.bounds();
        let (bl, _) = self.b.bounds();
        (ah + bl) / qi(2)
    }

    /// Whether a rational lies in [a, b].
    pub fn contains(&self, x: &Q) -> bool {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.cmp_q(x) != Ordering::Greater && b.cmp_q(x) != Ordering::Less
    }

    fn scan(&self, p: &Poly) -> Scan {
        let sqf = p.square_free();
        let st = Sturm::new(&sqf);
        let (_, ah) = self.a.bounds();
        let (bl, _) = self.b.bounds();
        let quarter = (&bl - &ah) / qi(4);
        let left = anchor(p, &st, &self.a, &quarter, true);
        let right = anchor(p, &st, &self.b, &quarter, false);
        let mut samples = vec![left.sample.clone()];
        let mut counts = Vec::new();
        isolate(p, &st, left.sample.clone(), right.sample.clone(), &mut samples, &mut counts);
        let samples = samples.into_iter().map(|s| {
            let sg = p.sign_at(&s);
            (s, sg)
        });
        Scan { left, right, samples: samples.collect(), counts }
    }

    /// A rational box isolating a root of p in [a, b], if any.
    pub fn root_in(&self, p: &Poly) -> Option<(Q, Q)> {
        if p.is_zero() {
            let (l, _) = self.a.bounds();
            let (_, h) = self.b.bounds();
            return Some((l, h));
        }
        if p.degree() == 0 {
            return None;
        }
        if self.point {
            let mut a = self.a.clone();
            return (a.sign_of(p) == 0).then(|| a.bounds());
        }
        let sc = self.scan(p);
        if sc.left.sign == 0 {
            return Some(sc.left.bx.unwrap_or_else(|| self.a.bounds()));
        }
        if sc.right.sign == 0 {
            return Some(sc.right.bx.unwrap_or_else(|| self.b.bounds()));
        }
        sc.counts
            .iter()
            .position(|&c| c > 0)
            .map(|i| (sc.samples[i].0.clone(), sc.samples[i + 1].0.clone()))
    }

    /// Sign of a root-free polynomial on the domain.
    pub fn constant_sign(&self, p: &Poly) -> i8 {
        let mut a = self.a.clone();
        if self.point {
            return a.sign_of(p);
        }
        p.sign_at(&self.interior_point())
    }

    /// Decide p ≥ 0 on [a, b].
    pub fn nonneg(&self, p: &Poly) -> std::result::Result<SignCert, Negative> {
        if p.is_zero() {
            return Ok(SignCert::Zero);
        }
        if self.point {
            let mut a = self.a.clone();
            let sign = a.sign_of(p);
            let refined = match &a {
                Endpoint::Algebraic(x) => {
                    let (l, h) = x.interval();
                    Some((l.clone(), h.clone()))
                }
                Endpoint::Rational(_) => None,
            };
            if sign >= 0 {
                return Ok(SignCert::Point { sign, refined });
            }
            return Err(match refined {
                Some((l, h)) => Negative { sigma: (&l + &h) / qi(2), sigma_box: Some((l, h)) },
                None => Negative { sigma: a.bounds().0, sigma_box: None },
            });
        }
        let sc = self.scan(p);
        for (end, anc) in [(&self.a, &sc.left), (&self.b, &sc.right)] {
            if let (Some(r), true) = (end.as_rational(), anc.sign < 0) {
                return Err(Negative { sigma: r.clone(), sigma_box: None });
            }
        }
        if let Some((s, _)) = sc.samples.iter().find(|(_, sg)| *sg < 0) {
            return Err(Negative { sigma: s.clone(), sigma_box: None });
        }
        Ok(SignCert::Interval {
            lo_sign: sc.left.sign,
            hi_sign: sc.right.sign,
            lo_box: sc.left.bx,
            hi_box: sc.right.bx,
            samples: sc.samples,
            counts: sc.counts,
        })
    }

    /// Independent re-check of a nonnegativity certificate.
    pub fn recheck(&self, p: &Poly, cert: &SignCert) -> bool {
        match cert {
            SignCert::Zero => p.is_zero(),
            SignCert::Point { sign, .. } => {
                let mut a = self.a.clone();
                self.point && *sign >= 0 && a.sign_of(p) == *sign
            }
            SignCert::Interval { lo_sign, hi_sign, lo_box, hi_box, samples, counts } => {
                if self.point || samples.is_empty() || counts.len() + 1 != samples.len() || p.is_zero() {
                    return false;
                }
                let sqf = p.square_free();
                let st = Sturm::new(&sqf);
                let first = &samples[0].0;
                let last = &samples[samples.len() - 1].0;
                if !check_end(p, &st, &self.a, *lo_sign, lo_box.as_ref(), first, true)
                    || !check_end(p, &st, &self.b, *hi_sign, hi_box.as_ref(), last, false)
                {
                    return false;
                }
                samples.windows(2).zip(counts).all(|(w, &c)| {
                    w[0].0 < w[1].0 && c <= 1 && st.count(&w[0].0, &w[1].0) == c
                }) && samples.iter().all(|(s, sg)| *sg > 0 && p.sign_at(s) == *sg)
            }
        }
    }
}

struct Anchor {
    sign: i8,
    bx: Option<(Q, Q)>,
    sample: Q,
}

struct Scan {
    left: Anchor,
    right: Anchor,
    samples: Vec<(Q, i8)>,
    counts: Vec<usize>,
}

/// Sign at the end and a non-root sample with no root strictly between.
fn anchor(p: &Poly, st: &Sturm, end: &Endpoint, quarter: &Q, left: bool) -> Anchor {
    match end {
        Endpoint::Rational(r) => {
            let mut w = quarter.clone();
            loop {
                let s = if left { r + &w } else { r - &w };
                let n = if left { st.count(r, &s) } else { st.count(&s, r) - (st.poly().sign_at(r) == 0) as usize };
                if n == 0 && p.sign_at(&s) != 0 {
                    return Anchor { sign: p.sign_at(r), bx: None, sample: s };
                }
                w /= qi(2);
            }
        }
        Endpoint::Algebraic(a) => {
            let mut a = a.clone();
            let sign = a.sign_of(p);
            let want = (sign == 0) as usize;
            loop {
                let (l, h) = a.interval();
                if st.count_closed(l, h) == want {
                    break;
                }
                a.refine();
            }
            let (l, h) = a.interval();
            let sample = if left { h.clone() } else { l.clone() };
            Anchor { sign, bx: Some((l.clone(), h.clone())), sample }
        }
    }
}

fn check_end(p: &Poly, st: &Sturm, end: &Endpoint, sign: i8, bx: Option<&(Q, Q)>, sample: &Q, left: bool) -> bool {
    if sign < 0 {
        return false;
    }
    match (end, bx) {
        (Endpoint::Rational(r), None) => {
            let inside = if left { r < sample } else { sample < r };
            let n = if left { st.count(r, sample) } else { st.count_closed(sample, r) - (st.poly().sign_at(r) == 0) as usize };
            inside && n == 0 && p.sign_at(r) == sign
        }
        (Endpoint::Algebraic(a), Some((l, h))) => {
            let near = if left { h } else { l };
            if near != sample || l >= h || Sturm::new(a.poly()).count_closed(l, h) != 1 {
                return false;
            }
            let roots = st.count_closed(l, h);
            if sign == 0 {
                // the single root of p in the box must be the endpoint itself
                let g = p.gcd(a.poly());
                roots == 1 && g.degree() >= 1 && Sturm::new(&g.square_free()).count_closed(l, h) == 1
            } else {
                roots == 0 && p.sign_at(sample) == sign
            }
        }
        _ => false,
    }
}

/// A non-root strictly inside (lo, hi).
fn interior_nonroot(p: &Poly, lo: &Q, hi: &Q) -> Q {
    let width = hi - lo;
    for k in 2i64.. {
        for j in 1..k {
            let m = lo + &width * q(j, k);
            if p.sign_at(&m) != 0 {
                return m;
            }
        }
    }
    unreachable!()
}

fn isolate(p: &Poly, st: &Sturm, lo: Q, hi: Q, samples: &mut Vec<Q>, counts: &mut Vec<usize>) {
    let c = st.count(&lo, &hi);
    if c <= 1 {
        samples.push(hi);
        counts.push(c);
        return;
    }
    let m = interior_nonroot(p, &lo, &hi);
    isolate(p, st, lo, m.clone(), samples, counts);
    isolate(p, st, m, hi, samples, counts);
}

fn box_json(b: &Option<(Q, Q)>) -> Value {
    match b {
        Some((l, h)) => json!([fmt_rational(l), fmt_rational(h)]),
        None => Value::Null,
    }
}

impl SignCert {
    pub fn to_json(&self) -> Value {
        match self {
            SignCert::Zero => json!({"kind": "identically_zero"}),
            SignCert::Point { sign, refined } => json!({"kind": "point", "sign": sign, "box": box_json(refined)}),
            SignCert::Interval { lo_sign, hi_sign, lo_box, hi_box, samples, counts } => json!({
                "kind": "sturm",
                "lo_sign": lo_sign,
                "hi_sign": hi_sign,
                "lo_box": box_json(lo_box),
                "hi_box": box_json(hi_box),
                "samples": samples.iter().map(|(s, _)| fmt_rational(s)).collect::<Vec<_>>(),
                "root_counts": counts,
            }),
        }
    }
}
