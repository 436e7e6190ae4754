//! Rational functions in σ with Laurent dependence on μ, plus a small expression parser.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{qi, Poly, Q};
use crate::error::{Error, Result};
use crate::report::{fmt_rational, parse_rational};

/// Σ_j c_j(σ) μ^j with j ∈ Z.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MuPoly(BTreeMap<i32, Poly>);

impl MuPoly {
    pub fn zero() -> Self {
        MuPoly(BTreeMap::new())
    }

    pub fn sigma(p: Poly) -> Self {
        MuPoly::term(0, p)
    }

    pub fn term(j: i32, p: Poly) -> Self {
        let mut m = BTreeMap::new();
        if !p.is_zero() {
            m.insert(j, p);
        }
        MuPoly(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Poly)> {
        self.0.iter().map(|(j, p)| (*j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Lowest and highest μ power, if nonzero.
    pub fn mu_span(&self) -> Option<(i32, i32)> {
        Some((*self.0.keys().next()?, *self.0.keys().next_back()?))
    }

    pub fn coeff(&self, j: i32) -> Poly {
        self.0.get(&j).cloned().unwrap_or_default()
    }

    /// Single term c(σ)μ^j, if that is the whole polynomial.
    pub fn as_monomial(&self) -> Option<(i32, &Poly)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(j, p)| (*j, p))
        } else {
            None
        }
    }

    pub fn add(&self, o: &MuPoly) -> MuPoly {
        let mut m = self.0.clone();
        for (j, p) in &o.0 {
            let s = m.get(j).map(|x| x.add(p)).unwrap_or_else(|| p.clone());
            if s.is_zero() {
                m.remove(j);
            } else {
                m.insert(*j, s);
            }
        }
        MuPoly(m)
    }

    pub fn neg(&self) -> MuPoly {
        MuPoly(self.0.iter().map(|(j, p)| (*j, p.neg())).collect())
    }

    pub fn mul(&self, o: &MuPoly) -> MuPoly {
        let mut acc = MuPoly::zero();
        for (i, a) in &self.0 {
            for (j, b) in &o.0 {
                acc = acc.add(&MuPoly::term(i + j, a.mul(b)));
            }
        }
        acc
    }

    pub fn shift(&self, k: i32) -> MuPoly {
        MuPoly(self.0.iter().map(|(j, p)| (j + k, p.clone())).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> MuPoly {
        let mut m = BTreeMap::new();
        for (j, p) in &self.0 {
            let c = f(p);
            if !c.is_zero() {
                m.insert(*j, c);
            }
        }
        MuPoly(m)
    }

    pub fn eval(&self, sigma: &Q, mu: &Q) -> Q {
        let mut acc = Q::zero();
        for (j, p) in &self.0 {
            acc += p.eval(sigma) * pow_q(mu, *j);
        }
        acc
    }
}

pub(crate) fn pow_q(x: &Q, e: i32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        Q::one() / acc
    } else {
        acc
    }
}

/// numerator / (q(σ)·μ^k).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: MuPoly,
    den_poly: Poly,
    den_mu: i32,
}

impl RationalFn {
    pub fn constant(c: Q) -> Self {
        RationalFn::from_parts(MuPoly::sigma(Poly::constant(c)), Poly::constant(Q::one()), 0)
    }

    pub fn sigma() -> Self {
        RationalFn::from_parts(MuPoly::sigma(Poly::x()), Poly::constant(Q::one()), 0)
    }

    pub fn mu() -> Self {
        RationalFn::from_parts(MuPoly::term(1, Poly::constant(Q::one())), Poly::constant(Q::one()), 0)
    }

    pub fn from_sigma_ratio(num: Poly, den: Poly) -> Self {
        RationalFn::from_parts(MuPoly::sigma(num), den, 0)
    }

    fn from_parts(num: MuPoly, den_poly: Poly, den_mu: i32) -> Self {
        assert!(!den_poly.is_zero(), "zero denominator");
        let mut r = RationalFn { num, den_poly, den_mu };
        r.normalize();
        r
    }

    /// Cancel σ-gcd and μ powers; make the denominator monic.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_poly = Poly::constant(Q::one());
            self.den_mu = 0;
            return;
        }
        let mut g = self.den_poly.clone();
        for (_, p) in self.num.terms() {
            if g.degree() <= 0 {
                break;
            }
            g = g.gcd(p);
        }
        if g.degree() >= 1 {
            self.den_poly = self.den_poly.divrem(&g).0;
            self.num = self.num.map_coeffs(|p| p.divrem(&g).0);
        }
        let lead = self.den_poly.lead();
        if !lead.is_one() {
            let inv = Q::one() / lead;
            self.den_poly = self.den_poly.scale(&inv);
            self.num = self.num.map_coeffs(|p| p.scale(&inv));
        }
        let (lo, _) = self.num.mu_span().expect("nonzero");
        let k = lo.min(self.den_mu);
        if k != 0 {
            self.num = self.num.shift(-k);
            self.den_mu -= k;
        }
    }

    pub fn numerator(&self) -> &MuPoly {
        &self.num
    }

    pub fn den_poly(&self) -> &Poly {
        &self.den_poly
    }

    pub fn den_mu(&self) -> i32 {
        self.den_mu
    }

    pub fn is_mu_free(&self) -> bool {
        self.den_mu == 0 && self.num.mu_span().map_or(true, |(lo, hi)| lo == 0 && hi == 0)
    }

    /// (p, q) with value p(σ)/q(σ) when μ-free.
    pub fn sigma_parts(&self) -> Option<(Poly, Poly)> {
        if !self.is_mu_free() {
            return None;
        }
        Some((self.num.coeff(0), self.den_poly.clone()))
    }

    pub fn as_constant(&self) -> Option<Q> {
        let (n, d) = self.sigma_parts()?;
        Some(n.as_constant()? / d.as_constant()?)
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        let k = self.den_mu.max(o.den_mu);
        let a = self.num.mul(&MuPoly::sigma(o.den_poly.clone())).shift(k - self.den_mu);
        let b = o.num.mul(&MuPoly::sigma(self.den_poly.clone())).shift(k - o.den_mu);
        RationalFn::from_parts(a.add(&b), self.den_poly.mul(&o.den_poly), k)
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.neg(), ..self.clone() }
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn::from_parts(self.num.mul(&o.num), self.den_poly.mul(&o.den_poly), self.den_mu + o.den_mu)
    }

    /// Fails unless the divisor's numerator is a single μ power.
    pub fn div(&self, o: &RationalFn) -> Result<RationalFn> {
        let (j, p) = o.num.as_monomial().ok_or_else(|| {
            if o.num.is_zero() {
                Error::Domain("division by zero".into())
            } else {
                Error::Parse(format!("divisor {o} is not of the form q(σ)·μ^k"))
            }
        })?;
        let num = self.num.mul(&MuPoly::sigma(o.den_poly.clone())).shift(o.den_mu);
        let den = self.den_poly.mul(p);
        let mut k = self.den_mu + j;
        let num = if k < 0 {
            let n = num.shift(-k);
            k = 0;
            n
        } else {
            num
        };
        Ok(RationalFn::from_parts(num, den, k))
    }

    pub fn powi(&self, e: i32) -> Result<RationalFn> {
        let mut acc = RationalFn::constant(Q::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(self);
        }
        if e < 0 {
            RationalFn::constant(Q::one()).div(&acc)
        } else {
            Ok(acc)
        }
    }

    pub fn eval(&self, sigma: &Q, mu: &Q) -> Result<Q> {
        let d = self.den_poly.eval(sigma) * pow_q(mu, self.den_mu);
        if d.is_zero() {
            return Err(Error::Domain(format!("denominator of {self} vanishes at σ={}", fmt_rational(sigma))));
        }
        Ok(self.num.eval(sigma, mu) / d)
    }

    pub fn eval_f64(&self, sigma: f64, mu: f64) -> f64 {
        let n: f64 = self.num.terms().map(|(j, p)| p.eval_f64(sigma) * mu.powi(j)).sum();
        n / (self.den_poly.eval_f64(sigma) * mu.powi(self.den_mu))
    }

    /// Substitute σ ↦ σ and μ ↦ g(σ) for a μ-free g.
    pub fn substitute_mu(&self, g: &RationalFn) -> Result<RationalFn> {
        let mut acc = RationalFn::constant(Q::zero());
        for (j, p) in self.num.terms() {
            let t = RationalFn::from_sigma_ratio(p.clone(), Poly::constant(Q::one())).mul(&g.powi(j)?);
            acc = acc.add(&t);
        }
        acc.div(&RationalFn::from_sigma_ratio(self.den_poly.clone(), Poly::constant(Q::one())).mul(&g.powi(self.den_mu)?))
    }

    pub fn parse(text: &str) -> Result<RationalFn> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks, pos: 0, src: text };
        let r = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }
}

impl fmt::Display for MuPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(j, p)| match j {
                0 => format!("({p})"),
                1 => format!("({p})*mu"),
                _ => format!("({p})*mu^{j}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_one = self.den_poly.as_constant().is_some_and(|c| c.is_one());
        let num = match (self.num.as_monomial(), self.num.is_zero()) {
            (_, true) => "0".to_string(),
            (Some((0, p)), _) => p.to_string(),
            _ => self.num.to_string(),
        };
        match (den_one, self.den_mu) {
            (true, 0) => write!(f, "{num}"),
            (true, k) => write!(f, "({num})/mu^{k}"),
            (false, 0) => write!(f, "({num})/({})", self.den_poly),
            (false, k) => write!(f, "({num})/(({})*mu^{k})", self.den_poly),
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Sigma,
    Mu,
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_rational(&lit)?));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(match word.as_str() {
                "s" | "sigma" | "σ" | "x" => Tok::Sigma,
                "mu" | "μ" => Tok::Mu,
                _ => return Err(Error::Parse(format!("unknown identifier `{word}` in `{text}`"))),
            });
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{text}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let t = self.unary()?;
            acc = if c == '*' { acc.mul(&t) } else { acc.div(&t)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFn> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let neg = if self.peek_op() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) if n.is_integer() && n.abs() <= qi(64) => {
                    self.pos += 1;
                    i32::try_from(n.to_integer()).map_err(|_| self.error("exponent too large"))?
                }
                _ => return Err(self.error("expected an integer exponent")),
            };
            return base.powi(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFn> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(RationalFn::constant(n)),
            Tok::Sigma => Ok(RationalFn::sigma()),
            Tok::Mu => Ok(RationalFn::mu()),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(_) => {
                self.pos -= 1;
                Err(self.error("unexpected operator"))
            }
        }
    }
}

/// Parse a μ-free polynomial in σ.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let r = RationalFn::parse(text)?;
    match r.sigma_parts() {
        Some((n, d)) if d.degree() == 0 => Ok(n.scale(&(Q::one() / d.lead()))),
        _ => Err(Error::Parse(format!("`{text}` is not a polynomial in σ"))),
    }
}
