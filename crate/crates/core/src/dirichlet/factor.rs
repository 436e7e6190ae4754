use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{mobius_table, CompensatedSum};
use crate::identity::CoefficientClass;
use crate::{Error, Result};

/// Largest length accepted for direct summation.
pub const MAX_FACTOR_LENGTH: f64 = 1e7;

/// A dyadic Dirichlet polynomial Σ_{N<n≤2N} a_n n^{-s} with N = 2^exp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyFactor {
    pub class: CoefficientClass,
    pub exp: i32,
    /// Möbius coefficients vanish above this bound (the M_x truncation).
    pub cutoff: Option<u64>,
}

impl PolyFactor {
    pub fn new(class: CoefficientClass, exp: i32) -> Self {
        PolyFactor { class, exp: exp.max(-1), cutoff: None }
    }

    pub fn singleton() -> Self {
        PolyFactor::new(CoefficientClass::Singleton, -1)
    }

    pub fn with_cutoff(mut self, cutoff: u64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn length(&self) -> f64 {
        2f64.powi(self.exp)
    }

    /// Integer range (N, 2N].
    pub fn range(&self) -> (u64, u64) {
        if self.exp < 0 || self.class == CoefficientClass::Singleton {
            (1, 1)
        } else {
            ((1u64 << self.exp) + 1, 1u64 << (self.exp + 1))
        }
    }

    /// A factor of length ≤ 1 has a t-independent modulus.
    pub fn is_degenerate(&self) -> bool {
        self.exp <= 0 || self.class == CoefficientClass::Singleton
    }

    pub fn check_budget(&self) -> Result<()> {
        if self.length() > MAX_FACTOR_LENGTH {
            return Err(Error::Capacity(format!(
                "factor length 2^{} exceeds the direct summation budget {MAX_FACTOR_LENGTH}",
                self.exp
            )));
        }
        Ok(())
    }

    /// Nonzero coefficients (n, a_n), ascending in n.
    pub fn terms(&self) -> Result<Vec<(u64, f64)>> {
        self.check_budget()?;
        let (a, b) = self.range();
        Ok(match self.class {
            CoefficientClass::Singleton => vec![(1, 1.0)],
            CoefficientClass::Unit => (a..=b).map(|n| (n, 1.0)).collect(),
            CoefficientClass::Log => {
                (a..=b).map(|n| (n, (n as f64).ln())).filter(|&(_, v)| v != 0.0).collect()
            }
            CoefficientClass::Mobius => {
                let top = self.cutoff.map_or(b, |c| c.min(b));
                if top < a {
                    Vec::new()
                } else {
                    let mu = mobius_table(top as usize);
                    (a..=top)
                        .filter(|&n| mu[n as usize] != 0)
                        .map(|n| (n, mu[n as usize] as f64))
                        .collect()
                }
            }
        })
    }
}

/// Coefficients prepared for repeated evaluation at a fixed real part c.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// (log n, a_n n^{-c})
    pub terms: Vec<(f64, f64)>,
    /// Σ |a_n| n^{-c}
    pub abs_sum: f64,
    /// Σ |a_n| (log n) n^{-c}, a Lipschitz constant in t
    pub lipschitz: f64,
}

impl Prepared {
    pub fn new(f: &PolyFactor, c: f64) -> Result<Self> {
        Ok(Self::from_terms(&f.terms()?, c))
    }

    pub fn from_terms(terms: &[(u64, f64)], c: f64) -> Self {
        let terms: Vec<(f64, f64)> = terms
            .iter()
            .map(|&(n, a)| {
                let l = (n as f64).ln();
                (l, a * (-c * l).exp())
            })
            .collect();
        let abs_sum = terms.iter().map(|&(_, w)| w.abs()).collect::<CompensatedSum>().value();
        let lipschitz = terms.iter().map(|&(l, w)| w.abs() * l).collect::<CompensatedSum>().value();
        Prepared { terms, abs_sum, lipschitz }
    }

    /// Σ a_n n^{-c-it}
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for &(l, w) in &self.terms {
            let (s, co) = (t * l).sin_cos();
            re.add(w * co);
            im.add(-w * s);
        }
        Complex64::new(re.value(), im.value())
    }
}

pub fn eval_factor(f: &PolyFactor, c: f64, t: f64) -> Result<Complex64> {
    Ok(Prepared::new(f, c)?.eval(t))
}

/// |Π S_i(c+it)| for prepared factors.
pub fn product_abs(factors: &[Prepared], t: f64) -> f64 {
    factors.iter().map(|p| p.eval(t).norm()).product()
}

/// Coefficients of Π S_i as a sorted sparse vector.
pub fn product_terms(factors: &[PolyFactor]) -> Result<Vec<(u64, f64)>> {
    let total: f64 = factors.iter().map(|f| 2.0 * f.length()).product();
    if total > MAX_FACTOR_LENGTH {
        return Err(Error::Capacity(format!(
            "product length {total} exceeds the direct coefficient budget {MAX_FACTOR_LENGTH}"
        )));
    }
    let mut acc: std::collections::BTreeMap<u64, f64> = [(1u64, 1.0)].into_iter().collect();
    for f in factors {
        let terms = f.terms()?;
        let mut next = std::collections::BTreeMap::new();
        for (&m, &a) in &acc {
            for &(n, b) in &terms {
                *next.entry(m * n).or_insert(0.0) += a * b;
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().filter(|&(_, v)| v != 0.0).collect())
}
