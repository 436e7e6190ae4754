//! Real algebraic numbers as (square-free polynomial, isolating interval).

use std::cmp::Ordering;
use std::fmt;

use num_traits::ToPrimitive;

use super::poly::{q, Poly, Sturm, Q};
use crate::error::{Error, Result};
use crate::report::{fmt_rational, parse_rational};

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    poly: Poly,
    lo: Q,
    hi: Q,
}

impl AlgebraicNumber {
    /// The unique root of `poly` in the closed interval [lo, hi].
    pub fn new(poly: Poly, lo: Q, hi: Q) -> Result<Self> {
        if poly.degree() < 1 {
            return Err(Error::InvalidArgument("algebraic number needs a nonconstant polynomial".into()));
        }
        if lo > hi {
            return Err(Error::InvalidArgument("isolating interval is empty".into()));
        }
        let poly = poly.square_free();
        let n = Sturm::new(&poly).count_closed(&lo, &hi);
        if n != 1 {
            return Err(Error::InvalidArgument(format!(
                "{poly} has {n} roots in [{}, {}], expected exactly one",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        }
        let mut a = AlgebraicNumber { poly, lo, hi };
        a.settle();
        Ok(a)
    }

    /// Collapse to a point when an endpoint is the root.
    fn settle(&mut self) {
        if self.poly.sign_at(&self.lo) == 0 {
            self.hi = self.lo.clone();
        } else if self.poly.sign_at(&self.hi) == 0 {
            self.lo = self.hi.clone();
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (&Q, &Q) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Halve the isolating interval.
    pub fn refine(&mut self) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) / q(2, 1);
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == 0 {
            self.lo = mid.clone();
            self.hi = mid;
        } else if s_mid == self.poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Q) {
        while &self.hi - &self.lo > *width {
            self.refine();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut a = self.clone();
        a.refine_to(&q(1, 1 << 30).pow(2));
        ((&a.lo + &a.hi) / q(2, 1)).to_f64().unwrap_or(f64::NAN)
    }

    /// Sign of p at this number; refines self as needed.
    pub fn sign_of(&mut self, p: &Poly) -> i8 {
        if let Some(r) = self.as_rational() {
            return p.sign_at(r);
        }
        if p.is_zero() {
            return 0;
        }
        let g = p.gcd(&self.poly);
        if g.degree() >= 1 && Sturm::new(&g.square_free()).count_closed(&self.lo, &self.hi) >= 1 {
            return 0;
        }
        let sp = Sturm::new(&p.square_free());
        while sp.count_closed(&self.lo, &self.hi) > 0 {
            self.refine();
            if let Some(r) = self.as_rational() {
                return p.sign_at(r);
            }
        }
        p.sign_at(&self.lo)
    }

    /// Sign of (self − r).
    pub fn cmp_rational(&mut self, r: &Q) -> Ordering {
        let x_minus_r = Poly::new(vec![-r.clone(), q(1, 1)]);
        match self.sign_of(&x_minus_r) {
            0 => Ordering::Equal,
            1 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    pub fn cmp_algebraic(&mut self, o: &mut AlgebraicNumber) -> Ordering {
        if let Some(r) = o.as_rational().cloned() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.as_rational().cloned() {
            return o.cmp_rational(&r).reverse();
        }
        let g = self.poly.gcd(&o.poly);
        if g.degree() >= 1 {
            let lo = self.lo.clone().max(o.lo.clone());
            let hi = self.hi.clone().min(o.hi.clone());
            if lo <= hi && Sturm::new(&g.square_free()).count_closed(&lo, &hi) >= 1 {
                return Ordering::Equal;
            }
        }
        loop {
            if self.hi < o.lo {
                return Ordering::Less;
            }
            if o.hi < self.lo {
                return Ordering::Greater;
            }
            self.refine();
            o.refine();
            if self.as_rational().is_some() || o.as_rational().is_some() {
                return self.cmp_algebraic(o);
            }
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root({}; {}, {})", self.poly, fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Interval endpoint: rational or algebraic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endpoint {
    Rational(Q),
    Algebraic(AlgebraicNumber),
}

impl Endpoint {
    /// Parse `p/q`, a decimal, or `root(poly; lo, hi)`.
    pub fn parse(text: &str) -> Result<Endpoint> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
            let (poly, iv) = inner
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("expected `root(poly; lo, hi)`, got `{t}`")))?;
            let (lo, hi) = iv
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `lo, hi` in `{t}`")))?;
            let poly = super::rational_fn::parse_poly(poly)?;
            let a = AlgebraicNumber::new(poly, parse_rational(lo.trim())?, parse_rational(hi.trim())?)
                .map_err(|e| Error::Parse(format!("`{t}`: {e}")))?;
            return Ok(match a.as_rational() {
                Some(r) => Endpoint::Rational(r.clone()),
                None => Endpoint::Algebraic(a),
            });
        }
        let r = super::rational_fn::RationalFn::parse(t)?
            .as_constant()
            .ok_or_else(|| Error::Parse(format!("endpoint `{t}` is not a constant")))?;
        Ok(Endpoint::Rational(r))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Endpoint::Algebraic(a) => a.to_f64(),
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Endpoint::Rational(r) => Some(r),
            Endpoint::Algebraic(_) => None,
        }
    }

    /// Rational bounds lo ≤ value ≤ hi.
    pub fn bounds(&self) -> (Q, Q) {
        match self {
            Endpoint::Rational(r) => (r.clone(), r.clone()),
            Endpoint::Algebraic(a) => (a.lo.clone(), a.hi.clone()),
        }
    }

    pub fn sign_of(&mut self, p: &Poly) -> i8 {
        match self {
            Endpoint::Rational(r) => p.sign_at(r),
            Endpoint::Algebraic(a) => a.sign_of(p),
        }
    }

    pub fn cmp_endpoint(&mut self, o: &mut Endpoint) -> Ordering {
        match (self, o) {
            (Endpoint::Rational(a), Endpoint::Rational(b)) => (*a).cmp(b),
            (Endpoint::Algebraic(a), Endpoint::Rational(b)) => a.cmp_rational(b),
            (Endpoint::Rational(a), Endpoint::Algebraic(b)) => b.cmp_rational(a).reverse(),
            (Endpoint::Algebraic(a), Endpoint::Algebraic(b)) => a.cmp_algebraic(b),
        }
    }

    /// Compare with a rational.
    pub fn cmp_q(&mut self, r: &Q) -> Ordering {
        self.cmp_endpoint(&mut Endpoint::Rational(r.clone()))
    }

    pub(crate) fn refine(&mut self) {
        if let Endpoint::Algebraic(a) = self {
            a.refine();
            if let Some(r) = a.as_rational().cloned() {
                *self = Endpoint::Rational(r);
            }
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Endpoint::Algebraic(a) => write!(f, "{a}"),
        }
    }
}
