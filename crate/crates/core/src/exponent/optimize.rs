//! Grid search for the critical exponent ν*.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::catalog::{required_nu_detail, BoundCatalog, NuClass, NuDetail};
use super::claim::{mu_all, sigma_all};
use super::poly::{q, Q};
use crate::error::{Error, Result};
use crate::report::{fmt_rational, rational_str};

/// Lower bound on ν imposed by the main proposition.
pub fn nu_floor() -> Q {
    q(29, 120)
}

pub const REFINE_LEVELS: u32 = 6;

/// Closed box in (σ, μ) sampled at a fixed step.
#[derive(Clone, Debug, PartialEq)]
pub struct GridBox {
    pub sigma: (Q, Q),
    pub mu: (Q, Q),
    pub step: Q,
}

impl GridBox {
    pub fn full(step: Q) -> Self {
        GridBox { sigma: sigma_all(), mu: mu_all(), step }
    }

    /// A single grid point.
    pub fn point(sigma: Q, mu: Q) -> Self {
        GridBox { sigma: (sigma.clone(), sigma), mu: (mu.clone(), mu), step: q(1, 64) }
    }

    fn axis(lo: &Q, hi: &Q, step: &Q) -> Vec<Q> {
        let mut out = Vec::new();
        let mut x = lo.clone();
        while &x < hi {
            out.push(x.clone());
            x += step;
        }
        out.push(hi.clone());
        out
    }

    pub fn sigmas(&self) -> Vec<Q> {
        Self::axis(&self.sigma.0, &self.sigma.1, &self.step)
    }

    pub fn mus(&self) -> Vec<Q> {
        Self::axis(&self.mu.0, &self.mu.1, &self.step)
    }

    fn contains(&self, s: &Q, m: &Q) -> bool {
        s >= &self.sigma.0 && s <= &self.sigma.1 && m >= &self.mu.0 && m <= &self.mu.1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridCell {
    #[serde(serialize_with = "rational_str")]
    pub sigma: Q,
    #[serde(serialize_with = "rational_str")]
    pub mu: Q,
    /// required_nu with "none" read as 0.
    #[serde(serialize_with = "rational_str")]
    pub nu: Q,
    pub class: Option<NuClass>,
    pub attained: bool,
}

impl From<NuDetail> for GridCell {
    fn from(d: NuDetail) -> Self {
        GridCell { sigma: d.sigma, mu: d.mu, nu: d.nu.unwrap_or_else(Q::zero), class: d.class, attained: d.attained }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuOptimum {
    #[serde(serialize_with = "rational_str")]
    pub step: Q,
    /// max(unconstrained, floor).
    #[serde(serialize_with = "rational_str")]
    pub nu_star: Q,
    #[serde(serialize_with = "rational_str")]
    pub unconstrained: Q,
    #[serde(serialize_with = "rational_str")]
    pub floor: Q,
    pub below_floor: bool,
    /// Lexicographically smallest maximizer, preferring attained cells.
    pub argmax: (String, String),
    pub argmax_attained: bool,
    /// Every grid point reaching the grid maximum.
    pub maximizers: Vec<GridCell>,
    /// Best value found by the dyadic hill climb from argmax.
    #[serde(serialize_with = "rational_str")]
    pub refined: Q,
    pub refined_at: (String, String),
    #[serde(skip)]
    pub grid: Vec<GridCell>,
}

impl NuOptimum {
    pub fn argmax_q(&self) -> (Q, Q) {
        let m = self.maximizers.iter().find(|c| (fmt_rational(&c.sigma), fmt_rational(&c.mu)) == self.argmax);
        let m = m.expect("argmax is a maximizer");
        (m.sigma.clone(), m.mu.clone())
    }

    /// Grid dump as CSV: sigma,mu,nu,class,attained.
    pub fn grid_csv(&self) -> String {
        let mut out = String::from("sigma,mu,nu,class,attained\n");
        for c in &self.grid {
            let class = match c.class {
                Some(NuClass::Balanced) => "balanced",
                Some(NuClass::TwoLong) => "two-long",
                Some(NuClass::OneLong) => "one-long",
                None => "none",
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_rational(&c.sigma),
                fmt_rational(&c.mu),
                fmt_rational(&c.nu),
                class,
                c.attained
            ));
        }
        out
    }
}

/// ν* over the full (σ, μ) range at the given grid step.
pub fn optimize_nu(resolution: &Q) -> Result<NuOptimum> {
    if !resolution.is_positive() || *resolution > q(1, 64) {
        return Err(Error::InvalidArgument(format!(
            "resolution {} must lie in (0, 1/64]",
            fmt_rational(resolution)
        )));
    }
    optimize_nu_box(&GridBox::full(resolution.clone()), &BoundCatalog::default())
}

pub fn optimize_nu_box(b: &GridBox, cat: &BoundCatalog) -> Result<NuOptimum> {
    if !b.step.is_positive() {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let mus = b.mus();
    let grid: Vec<GridCell> = b
        .sigmas()
        .par_iter()
        .map(|s| mus.iter().map(|m| required_nu_detail(s, m, cat).map(GridCell::from)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let max = grid.iter().map(|c| c.nu.clone()).max().expect("grid is nonempty");
    let maximizers: Vec<GridCell> = grid.iter().filter(|c| c.nu == max).cloned().collect();
    let best = maximizers.iter().find(|c| c.attained).unwrap_or(&maximizers[0]);
    let (refined, rs, rm) = hill_climb(b, cat, &best.sigma, &best.mu, &max)?;
    let unconstrained = max.clone().max(refined.clone());
    let floor = nu_floor();
    Ok(NuOptimum {
        step: b.step.clone(),
        nu_star: unconstrained.clone().max(floor.clone()),
        below_floor: unconstrained < floor,
        unconstrained,
        floor,
        argmax: (fmt_rational(&best.sigma), fmt_rational(&best.mu)),
        argmax_attained: best.attained,
        maximizers,
        refined,
        refined_at: (fmt_rational(&rs), fmt_rational(&rm)),
        grid,
    })
}

fn hill_climb(b: &GridBox, cat: &BoundCatalog, s0: &Q, m0: &Q, v0: &Q) -> Result<(Q, Q, Q)> {
    let (mut s, mut m, mut v) = (s0.clone(), m0.clone(), v0.clone());
    let mut h = b.step.clone();
    for _ in 0..REFINE_LEVELS {
        h /= q(2, 1);
        loop {
            let mut moved = false;
            for (ds, dm) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                let ns = &s + &h * q(ds, 1);
                let nm = &m + &h * q(dm, 1);
                if !b.contains(&ns, &nm) {
                    continue;
                }
                let nv = required_nu_detail(&ns, &nm, cat)?.nu.unwrap_or_else(Q::zero);
                if nv > v {
                    (s, m, v) = (ns, nm, nv);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }
    Ok((v, s, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::catalog::required_nu;

    #[test]
    fn single_cell_matches_pointwise() {
        let b = GridBox::point(q(3, 4), q(9, 5));
        let o = optimize_nu_box(&b, &BoundCatalog::default()).unwrap();
        assert_eq!(o.grid.len(), 1);
        assert_eq!(Some(o.unconstrained), required_nu(&q(3, 4), &q(9, 5), &BoundCatalog::default()).unwrap());
    }

    #[test]
    fn rejects_coarse_resolution() {
        assert!(optimize_nu(&q(1, 32)).is_err());
    }
}
