//! Claims max(lhs) ≤ rhs over σ-intervals and μ-ranges, and their exact verification.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::algebraic::Endpoint;
use super::poly::{q, Poly, Q};
use super::rational_fn::RationalFn;
use super::sign::{Domain, SignCert};
use crate::error::{Error, Result};
use crate::report::fmt_rational;

/// Default μ-range.
pub fn mu_all() -> (Q, Q) {
    (q(4, 3), q(19, 9))
}

/// Default σ-range.
pub fn sigma_all() -> (Q, Q) {
    (q(1, 2), q(1, 1))
}

/// One end of the μ-range: a constant or a μ-free function of σ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MuBound {
    Const(Q),
    Fn(RationalFn),
}

impl MuBound {
    pub fn parse(text: &str) -> Result<MuBound> {
        let f = RationalFn::parse(text)?;
        if let Some(c) = f.as_constant() {
            return Ok(MuBound::Const(c));
        }
        if !f.is_mu_free() {
            return Err(Error::Parse(format!("μ bound `{text}` depends on μ")));
        }
        Ok(MuBound::Fn(f))
    }

    pub fn at(&self, sigma: &Q) -> Result<Q> {
        match self {
            MuBound::Const(c) => Ok(c.clone()),
            MuBound::Fn(f) => f.eval(sigma, &Q::one()),
        }
    }

    fn as_fn(&self) -> RationalFn {
        match self {
            MuBound::Const(c) => RationalFn::constant(c.clone()),
            MuBound::Fn(f) => f.clone(),
        }
    }
}

impl fmt::Display for MuBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuBound::Const(c) => write!(f, "{}", fmt_rational(c)),
            MuBound::Fn(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub id: String,
    pub lhs: Vec<RationalFn>,
    pub rhs: RationalFn,
    pub sigma: (Endpoint, Endpoint),
    pub mu: (MuBound, MuBound),
    /// Recorded only; verification is always non-strict.
    pub strict: bool,
    pub source: String,
}

/// Split on `sep` outside parentheses.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl Claim {
    /// `id | lhs_1; lhs_2 | rhs | sigma_lo, sigma_hi | mu_lo, mu_hi [| strict] [| source]`
    pub fn parse_line(line: &str) -> Result<Claim> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() < 5 {
            return Err(Error::Parse(format!("claim needs at least 5 `|`-separated fields: `{line}`")));
        }
        let id = fields[0].to_string();
        if id.is_empty() {
            return Err(Error::Parse(format!("empty claim id: `{line}`")));
        }
        let ctx = |e: Error| Error::Parse(format!("claim {id}: {e}"));
        let lhs = split_top(fields[1], ';')
            .into_iter()
            .map(|t| RationalFn::parse(t.trim()))
            .collect::<Result<Vec<_>>>()
            .map_err(ctx)?;
        let rhs = RationalFn::parse(fields[2]).map_err(ctx)?;
        let sigma = if fields[3] == "all" {
            let (a, b) = sigma_all();
            (Endpoint::Rational(a), Endpoint::Rational(b))
        } else {
            let parts = split_top(fields[3], ',');
            if parts.len() != 2 {
                return Err(Error::Parse(format!("claim {id}: σ-interval needs two endpoints")));
            }
            (Endpoint::parse(parts[0]).map_err(ctx)?, Endpoint::parse(parts[1]).map_err(ctx)?)
        };
        let mu = if fields[4] == "all" {
            let (a, b) = mu_all();
            (MuBound::Const(a), MuBound::Const(b))
        } else {
            let parts = split_top(fields[4], ',');
            if parts.len() != 2 {
                return Err(Error::Parse(format!("claim {id}: μ-range needs two bounds")));
            }
            (MuBound::parse(parts[0]).map_err(ctx)?, MuBound::parse(parts[1]).map_err(ctx)?)
        };
        let mut strict = false;
        let mut source = String::new();
        for f in &fields[5..] {
            match *f {
                "strict" => strict = true,
                "nonstrict" | "" => {}
                other => source = other.to_string(),
            }
        }
        let c = Claim { id, lhs, rhs, sigma, mu, strict, source };
        c.check_shape()?;
        Ok(c)
    }

    fn check_shape(&self) -> Result<()> {
        if self.lhs.is_empty() {
            return Err(Error::Parse(format!("claim {}: empty lhs", self.id)));
        }
        Ok(())
    }

    pub fn to_line(&self) -> String {
        let lhs: Vec<String> = self.lhs.iter().map(|f| f.to_string()).collect();
        let mut s = format!(
            "{} | {} | {} | {}, {} | {}, {}",
            self.id,
            lhs.join("; "),
            self.rhs,
            self.sigma.0,
            self.sigma.1,
            self.mu.0,
            self.mu.1
        );
        if self.strict {
            s.push_str(" | strict");
        }
        if !self.source.is_empty() {
            s.push_str(" | ");
            s.push_str(&self.source);
        }
        s
    }

    /// The same claim with rhs lowered by `delta`.
    pub fn mutated(&self, delta: &Q) -> Claim {
        Claim {
            id: format!("{}~{}", self.id, fmt_rational(delta)),
            rhs: self.rhs.sub(&RationalFn::constant(delta.clone())),
            ..self.clone()
        }
    }

    /// Exact max(lhs) and rhs at a point.
    pub fn eval(&self, sigma: &Q, mu: &Q) -> Result<(Q, Q)> {
        let mut best: Option<Q> = None;
        for f in &self.lhs {
            let v = f.eval(sigma, mu)?;
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
        Ok((best.expect("nonempty lhs"), self.rhs.eval(sigma, mu)?))
    }

    fn ill(&self, reason: String) -> Error {
        Error::IllPosed { id: self.id.clone(), reason }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuSide {
    /// Difference independent of μ.
    Free,
    Lo,
    Hi,
}

/// Nonnegativity of one reduced polynomial: rhs − lhs[i] at one μ-end, times certified signs.
#[derive(Clone, Debug, PartialEq)]
pub struct PartCert {
    pub lhs_index: usize,
    pub mu_side: MuSide,
    pub poly: Poly,
    pub cert: SignCert,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub lhs_index: usize,
    pub sigma: Q,
    pub mu: Q,
    pub lhs_value: Q,
    pub rhs_value: Q,
    /// For an algebraic point interval: a root-free box around it on which the claim fails.
    pub sigma_box: Option<(Q, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Proof(Vec<PartCert>),
    Counterexample(Counterexample),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub id: String,
    pub holds: bool,
    pub strict: bool,
    pub certificate: Certificate,
}

/// rhs − lhs reduced to polynomials in σ, one per μ-end.
fn reduce(c: &Claim, dom: &Domain, i: usize) -> Result<Vec<(MuSide, Poly)>> {
    let d = c.rhs.sub(&c.lhs[i]);
    if d.numerator().is_zero() {
        return Ok(vec![(MuSide::Free, Poly::zero())]);
    }
    if let Some(b) = dom.root_in(d.den_poly()) {
        return Err(c.ill(format!(
            "denominator {} of rhs − lhs[{i}] vanishes in [{}, {}]",
            d.den_poly(),
            fmt_rational(&b.0),
            fmt_rational(&b.1)
        )));
    }
    let sq = Poly::constant(Q::from_integer(dom.constant_sign(d.den_poly()).into()));
    let (lo, hi) = d.numerator().mu_span().expect("nonzero");
    if hi - lo > 1 {
        return Err(Error::Domain(format!("claim {}: rhs − lhs[{i}] is not affine in μ", c.id)));
    }
    let a = d.numerator().coeff(lo).mul(&sq);
    let b = d.numerator().coeff(lo + 1).mul(&sq);
    if b.is_zero() {
        return Ok(vec![(MuSide::Free, a)]);
    }
    let mut out = Vec::new();
    let sides: &[(MuSide, &MuBound)] = if c.mu.0 == c.mu.1 {
        &[(MuSide::Lo, &c.mu.0)]
    } else {
        &[(MuSide::Lo, &c.mu.0), (MuSide::Hi, &c.mu.1)]
    };
    for (side, bound) in sides {
        let p = match bound {
            MuBound::Const(m) => a.add(&b.scale(m)),
            MuBound::Fn(g) => {
                let (gn, gd) = g.sigma_parts().expect("μ-free bound");
                let sg = Poly::constant(Q::from_integer(dom.constant_sign(&gd).into()));
                a.mul(&gd).add(&b.mul(&gn)).mul(&sg)
            }
        };
        out.push((*side, p));
    }
    Ok(out)
}

/// Checks that every denominator is sign-definite and the μ-range is a nonempty positive interval.
fn well_posed(c: &Claim, dom: &Domain) -> Result<()> {
    let mut fns: Vec<(String, &RationalFn)> =
        c.lhs.iter().enumerate().map(|(i, f)| (format!("lhs[{i}]"), f)).collect();
    fns.push(("rhs".into(), &c.rhs));
    let bounds: Vec<RationalFn> = [&c.mu.0, &c.mu.1].iter().map(|b| b.as_fn()).collect();
    fns.push(("mu_lo".into(), &bounds[0]));
    fns.push(("mu_hi".into(), &bounds[1]));
    for (name, f) in fns {
        if let Some((l, h)) = dom.root_in(f.den_poly()) {
            return Err(c.ill(format!(
                "denominator {} of {name} changes sign or vanishes; root isolated in [{}, {}]",
                f.den_poly(),
                fmt_rational(&l),
                fmt_rational(&h)
            )));
        }
    }
    let sign_of = |f: &RationalFn| -> Poly {
        let (n, d) = f.sigma_parts().expect("μ-free");
        n.scale(&Q::from_integer(dom.constant_sign(&d).into()))
    };
    let lo = sign_of(&bounds[0]);
    if dom.nonneg(&lo).is_err() || dom.root_in(&lo).is_some() {
        return Err(c.ill("μ lower bound is not positive on the σ-interval".into()));
    }
    if let Err(neg) = dom.nonneg(&sign_of(&bounds[1].sub(&bounds[0]))) {
        return Err(c.ill(format!("μ-range is empty at σ = {}", fmt_rational(&neg.sigma))));
    }
    Ok(())
}

fn domain(c: &Claim) -> Result<Domain> {
    Domain::new(&c.sigma.0, &c.sigma.1)
        .ok_or_else(|| c.ill(format!("σ-interval [{}, {}] is empty", c.sigma.0, c.sigma.1)))
}

/// Exact verdict for max(lhs) ≤ rhs on the claim's box.
pub fn verify_claim(c: &Claim) -> Result<Verdict> {
    c.check_shape()?;
    let dom = domain(c)?;
    well_posed(c, &dom)?;
    let mut parts = Vec::new();
    for i in 0..c.lhs.len() {
        for (side, p) in reduce(c, &dom, i)? {
            match dom.nonneg(&p) {
                Ok(cert) => parts.push(PartCert { lhs_index: i, mu_side: side, poly: p, cert }),
                Err(neg) => {
                    let bound = if side == MuSide::Hi { &c.mu.1 } else { &c.mu.0 };
                    let mu = bound.at(&neg.sigma)?;
                    let lhs_value = c.lhs[i].eval(&neg.sigma, &mu)?;
                    let rhs_value = c.rhs.eval(&neg.sigma, &mu)?;
                    if lhs_value <= rhs_value {
                        return Err(Error::Numerical(format!(
                            "claim {}: reduced polynomial negative at σ = {} but direct evaluation disagrees",
                            c.id,
                            fmt_rational(&neg.sigma)
                        )));
                    }
                    let cx = Counterexample { lhs_index: i, sigma: neg.sigma, mu, lhs_value, rhs_value, sigma_box: neg.sigma_box };
                    return Ok(Verdict { id: c.id.clone(), holds: false, strict: c.strict, certificate: Certificate::Counterexample(cx) });
                }
            }
        }
    }
    Ok(Verdict { id: c.id.clone(), holds: true, strict: c.strict, certificate: Certificate::Proof(parts) })
}

/// Re-check a verdict without trusting the verifier's search.
pub fn recheck(c: &Claim, v: &Verdict) -> bool {
    if v.id != c.id {
        return false;
    }
    let Ok(dom) = domain(c) else { return false };
    match (&v.certificate, v.holds) {
        (Certificate::Counterexample(cx), false) => {
            if cx.lhs_index >= c.lhs.len() {
                return false;
            }
            let in_sigma = match &cx.sigma_box {
                None => dom.contains(&cx.sigma),
                Some((l, h)) => {
                    // the point domain must lie in the box and the reduced polynomials must not vanish there
                    let mut a = dom.lo().clone();
                    let inside = dom.is_point()
                        && a.cmp_q(l) != std::cmp::Ordering::Less
                        && a.cmp_q(h) != std::cmp::Ordering::Greater
                        && l <= &cx.sigma
                        && &cx.sigma <= h;
                    let free = reduce(c, &dom, cx.lhs_index).map_or(false, |ps| {
                        ps.iter().any(|(_, p)| {
                            !p.is_zero() && super::poly::Sturm::new(&p.square_free()).count_closed(l, h) == 0 && p.sign_at(&cx.sigma) < 0
                        })
                    });
                    inside && free
                }
            };
            let (Ok(lo), Ok(hi)) = (c.mu.0.at(&cx.sigma), c.mu.1.at(&cx.sigma)) else { return false };
            let in_mu = lo <= cx.mu && cx.mu <= hi;
            let values = c.lhs[cx.lhs_index].eval(&cx.sigma, &cx.mu).ok() == Some(cx.lhs_value.clone())
                && c.rhs.eval(&cx.sigma, &cx.mu).ok() == Some(cx.rhs_value.clone());
            in_sigma && in_mu && values && cx.lhs_value > cx.rhs_value
        }
        (Certificate::Proof(parts), true) => {
            let mut expected = Vec::new();
            for i in 0..c.lhs.len() {
                match reduce(c, &dom, i) {
                    Ok(ps) => expected.extend(ps.into_iter().map(|(s, p)| (i, s, p))),
                    Err(_) => return false,
                }
            }
            expected.len() == parts.len()
                && expected.iter().zip(parts).all(|((i, s, p), part)| {
                    part.lhs_index == *i && part.mu_side == *s && part.poly == *p && dom.recheck(p, &part.cert)
                })
        }
        _ => false,
    }
}

/// Verify claims in parallel; results keep input order.
pub fn verify_all(claims: &[Claim]) -> Vec<Result<Verdict>> {
    claims.par_iter().map(verify_claim).collect()
}

fn qs(x: &Q) -> String {
    fmt_rational(x)
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        let cert = match &self.certificate {
            Certificate::Proof(parts) => json!({
                "kind": "proof",
                "parts": parts.iter().map(|p| json!({
                    "lhs_index": p.lhs_index,
                    "mu_side": p.mu_side,
                    "poly": p.poly.to_string(),
                    "check": p.cert.to_json(),
                })).collect::<Vec<_>>(),
            }),
            Certificate::Counterexample(cx) => json!({
                "kind": "counterexample",
                "lhs_index": cx.lhs_index,
                "sigma": qs(&cx.sigma),
                "mu": qs(&cx.mu),
                "lhs": qs(&cx.lhs_value),
                "rhs": qs(&cx.rhs_value),
                "sigma_box": cx.sigma_box.as_ref().map(|(l, h)| vec![qs(l), qs(h)]),
            }),
        };
        json!({"id": self.id, "holds": self.holds, "strict": self.strict, "certificate": cert})
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "σ = {}, μ = {}: lhs[{}] = {} > rhs = {}",
            qs(&self.sigma),
            qs(&self.mu),
            self.lhs_index,
            qs(&self.lhs_value),
            qs(&self.rhs_value)
        )
    }
}
