//! Published large-value exponents and the least admissible ν at a point (σ, μ).

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::claim::{mu_all, sigma_all};
use super::poly::{q, qi, Poly, Q};
use super::rational_fn::{parse_poly, RationalFn};
use crate::error::{Error, Result};
use crate::report::{fmt_rational, rational_str};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// Exponent of T0 bounding R.
    R,
    /// Exponent of T0 bounding R*.
    RStar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: BoundKind,
    #[serde(serialize_with = "display_str")]
    pub exponent: RationalFn,
    /// Denominator as stated; the entry applies only where it is positive.
    #[serde(skip)]
    pub denominator: Poly,
    /// Validity interval in σ.
    #[serde(serialize_with = "rational_str")]
    pub lo: Q,
    #[serde(serialize_with = "rational_str")]
    pub hi: Q,
}

fn display_str<S: serde::Serializer>(f: &RationalFn, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl CatalogEntry {
    fn new(name: &str, kind: BoundKind, num: &str, den: &str, lo: Q, hi: Q) -> Self {
        let denominator = parse_poly(den).expect("catalog denominator");
        let exponent = RationalFn::from_sigma_ratio(parse_poly(num).expect("catalog numerator"), denominator.clone());
        CatalogEntry { name: name.into(), kind, exponent, denominator, lo, hi }
    }

    /// The exponent at σ, if the entry applies there.
    pub fn at(&self, sigma: &Q) -> Option<Q> {
        if sigma < &self.lo || sigma > &self.hi {
            return None;
        }
        if !self.denominator.eval(sigma).is_positive() {
            return None;
        }
        self.exponent.eval(sigma, &Q::one()).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl Default for BoundCatalog {
    fn default() -> Self {
        use BoundKind::*;
        let (h, one) = (q(1, 2), qi(1));
        BoundCatalog {
            entries: vec![
                CatalogEntry::new("trivial", R, "1", "1", h.clone(), one.clone()),
                CatalogEntry::new("montgomery", R, "3-3*s", "2-s", h.clone(), q(3, 4)),
                CatalogEntry::new("huxley", R, "3-3*s", "3*s-1", q(3, 4), one.clone()),
                CatalogEntry::new("heath-brown-1", R, "3-3*s", "10*s-7", h.clone(), q(25, 28)),
                CatalogEntry::new("heath-brown-2", R, "4-4*s", "4*s-1", q(25, 28), one.clone()),
                CatalogEntry::new("heath-brown-3", RStar, "15-16*s", "2", h, q(3, 4)),
                CatalogEntry::new("heath-brown-4", RStar, "12-12*s", "4*s-1", q(3, 4), one),
            ],
        }
    }
}

impl BoundCatalog {
    /// Smallest applicable R exponent.
    pub fn r(&self, sigma: &Q) -> Q {
        self.min_of(BoundKind::R, sigma).expect("trivial bound always applies")
    }

    /// Smallest applicable R* exponent, including R* ≤ R³.
    pub fn r_star(&self, sigma: &Q) -> Q {
        let cubed = self.r(sigma) * qi(3);
        match self.min_of(BoundKind::RStar, sigma) {
            Some(v) if v < cubed => v,
            _ => cubed,
        }
    }

    fn min_of(&self, kind: BoundKind, sigma: &Q) -> Option<Q> {
        self.entries.iter().filter(|e| e.kind == kind).filter_map(|e| e.at(sigma)).min()
    }

    pub fn without(&self, name: &str) -> BoundCatalog {
        BoundCatalog { entries: self.entries.iter().filter(|e| e.name != name).cloned().collect() }
    }
}

/// ν making R ≪ T0^r meet condition (ii).
pub fn nu_ii(r: &Q, sigma: &Q, mu: &Q) -> Q {
    (r - qi(1)) / mu - qi(1) + qi(2) * sigma
}

/// ν making R* ≪ T0^{r*} meet condition (iii).
pub fn nu_iii(rs: &Q, sigma: &Q, mu: &Q) -> Q {
    (rs - qi(1)) / mu - qi(3) + qi(4) * sigma
}

/// Which configuration family sets the requirement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuClass {
    /// All pieces short: published exponents plus the split arguments.
    Balanced,
    /// Two pieces longer than T0^(1/2).
    TwoLong,
    /// One piece longer than x1^(3/5).
    OneLong,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuDetail {
    #[serde(serialize_with = "rational_str")]
    pub sigma: Q,
    #[serde(serialize_with = "rational_str")]
    pub mu: Q,
    /// None when R ≪ x1^(1−σ) already holds.
    #[serde(serialize_with = "opt_rational")]
    pub nu: Option<Q>,
    /// Catalog-only value min(ν_ii(r), ν_iii(r*)).
    #[serde(serialize_with = "rational_str")]
    pub catalog: Q,
    #[serde(serialize_with = "opt_rational")]
    pub balanced: Option<Q>,
    #[serde(serialize_with = "opt_rational")]
    pub two_long: Option<Q>,
    #[serde(serialize_with = "opt_rational")]
    pub one_long: Option<Q>,
    pub class: Option<NuClass>,
    /// The balanced family reaches the maximum (the other families give suprema over open conditions).
    pub attained: bool,
}

fn opt_rational<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&fmt_rational(v)),
        None => s.serialize_none(),
    }
}

fn check_range(sigma: &Q, mu: &Q) -> Result<()> {
    let (sl, sh) = sigma_all();
    let (ml, mh) = mu_all();
    if sigma < &sl || sigma > &sh {
        return Err(Error::Domain(format!("σ = {} outside [1/2, 1]", fmt_rational(sigma))));
    }
    if mu < &ml || mu > &mh {
        return Err(Error::Domain(format!("μ = {} outside [4/3, 19/9]", fmt_rational(mu))));
    }
    Ok(())
}

fn max_q(xs: impl IntoIterator<Item = Q>) -> Q {
    xs.into_iter().max().expect("nonempty")
}

fn min_opt(xs: impl IntoIterator<Item = Option<Q>>) -> Option<Q> {
    xs.into_iter().flatten().min()
}

/// Guaranteed exponent of the shorter factor after combining: min(2μ/5, μ − 1).
fn m_low(mu: &Q) -> Q {
    (qi(2) * mu / qi(5)).min(mu - qi(1))
}

/// σ ≤ 3/4, μ ≤ 2: Montgomery on both factors plus the R* bound on the shorter.
fn split_small(s: &Q, mu: &Q) -> Option<Q> {
    if *s > q(3, 4) || *mu > qi(2) {
        return None;
    }
    let m = m_low(mu);
    let mut vals = vec![s - q(1, 2)];
    if m < mu - qi(1) {
        let one_s = qi(1) - s;
        let feasible = m >= qi(2) * mu * &one_s / qi(9) + q(5, 9) && m >= qi(2) * mu * &one_s / qi(3) + q(1, 3);
        if !feasible {
            return None;
        }
        vals.push(s - qi(1) / mu);
        vals.push(q(1, 2) + s / qi(2) - (q(1, 4) + qi(5) * &m / qi(4)) / mu);
        vals.push(q(1, 5) + qi(4) * s / qi(5) - (q(3, 5) + qi(4) * &m / qi(5)) / mu);
    }
    Some(max_q(vals))
}

/// 3/4 ≤ σ ≤ 13/16, μ ≤ 4/(4σ − 1): Huxley on both factors plus the R* bound.
fn split_large(s: &Q, mu: &Q) -> Option<Q> {
    if *s < q(3, 4) || *s > q(13, 16) || *mu > qi(4) / (qi(4) * s - qi(1)) {
        return None;
    }
    let m = m_low(mu);
    let one_s = qi(1) - s;
    let mut vals = vec![one_s.clone(), (mu / qi(2) - q(1, 2)) / mu, s - qi(1) / mu];
    let a = qi(2) * s - (&m + q(3, 2)) / mu;
    let feasible = m >= mu * &one_s + q(1, 6) && m >= mu * &one_s / qi(3) + q(1, 2);
    let case4 = if feasible {
        let b = max_q([
            s - qi(1) / mu,
            q(5, 4) - s / qi(4) - (q(5, 8) + qi(5) * &m / qi(4)) / mu,
            q(1, 5) + qi(4) * s / qi(5) - (q(3, 5) + qi(4) * &m / qi(5)) / mu,
        ]);
        a.min(b)
    } else {
        a
    };
    vals.push(case4);
    Some(max_q(vals))
}

/// 13/16 ≤ σ ≤ 25/28, μ ≥ 4/(4σ − 1): the raised-polynomial argument.
fn lemma_mu(s: &Q, mu: &Q) -> Option<Q> {
    if *s < q(13, 16) || *s > q(25, 28) || *mu < qi(4) / (qi(4) * s - qi(1)) {
        return None;
    }
    let f = |a: i64, b: i64, c: i64, d: i64| (qi(a) - qi(b) * s) / (qi(c) * s - qi(d));
    let rs = max_q([f(7, 7, 3, 1), f(18, 19, 6, 2), f(34, 34, 15, 5), f(69, 73, 24, 8), f(31, 31, 15, 5), f(128, 124, 60, 15)]);
    Some(nu_iii(&rs, s, mu))
}

/// One piece longer than x1^(3/5).
fn one_long_route(s: &Q, mu: &Q) -> Q {
    let a = -q(5, 7) / mu + q(1, 5) + qi(2) * s / qi(7);
    let b = q(1, 7) / mu - q(1, 7) + qi(2) * s / qi(7);
    a.max(b)
}

/// Least ν for which (i), (ii) or (iii) holds at (σ, μ), with the split arguments applied.
pub fn required_nu_detail(sigma: &Q, mu: &Q, cat: &BoundCatalog) -> Result<NuDetail> {
    check_range(sigma, mu)?;
    let r = cat.r(sigma);
    let rs = cat.r_star(sigma);
    let catalog = nu_ii(&r, sigma, mu).min(nu_iii(&rs, sigma, mu));
    let mut d = NuDetail {
        sigma: sigma.clone(),
        mu: mu.clone(),
        nu: None,
        catalog: catalog.clone(),
        balanced: None,
        two_long: None,
        one_long: None,
        class: None,
        attained: false,
    };
    if r <= mu * (qi(1) - sigma) {
        return Ok(d);
    }
    let zero = Q::zero();
    let balanced = min_opt([
        Some(catalog.clone()),
        split_small(sigma, mu),
        split_large(sigma, mu),
        lemma_mu(sigma, mu),
    ])
    .expect("catalog value")
    .max(zero.clone());
    let two = catalog.clone().min(q(1, 4)).max(zero.clone());
    let one = catalog.min(one_long_route(sigma, mu)).max(zero);
    let nu = balanced.clone().max(two.clone()).max(one.clone());
    d.class = Some(if balanced == nu {
        NuClass::Balanced
    } else if two == nu {
        NuClass::TwoLong
    } else {
        NuClass::OneLong
    });
    d.attained = balanced == nu && nu.is_positive();
    d.balanced = Some(balanced);
    d.two_long = Some(two);
    d.one_long = Some(one);
    d.nu = Some(nu);
    Ok(d)
}

/// Least admissible ν at (σ, μ); None when condition (i) holds outright.
pub fn required_nu(sigma: &Q, mu: &Q, cat: &BoundCatalog) -> Result<Option<Q>> {
    Ok(required_nu_detail(sigma, mu, cat)?.nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_points() {
        let cat = BoundCatalog::default();
        assert_eq!(required_nu(&q(3, 4), &q(9, 5), &cat).unwrap(), Some(q(1, 4)));
        for mu in [q(4, 3), q(9, 5), q(19, 9)] {
            assert_eq!(required_nu(&qi(1), &mu, &cat).unwrap(), None);
        }
        let v = required_nu(&q(1, 2), &q(4, 3), &cat).unwrap().unwrap_or_default();
        assert!(v <= q(1, 4));
        assert!(required_nu(&q(2, 5), &q(3, 2), &cat).is_err());
        assert!(required_nu(&q(3, 4), &qi(3), &cat).is_err());
        // catalog alone does not reach 1/4 at the critical point
        let d = required_nu_detail(&q(3, 4), &q(9, 5), &cat).unwrap();
        assert_eq!(d.catalog, q(5, 18));
        assert!(d.attained);
    }
}
