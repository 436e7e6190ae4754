//! Check that the four case regions cover [1/2, 1] × [4/3, 19/9].

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::Serialize;

use super::claim::{mu_all, sigma_all};
use super::poly::{q, qi, Q};
use crate::report::fmt_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseRegion {
    /// σ ≤ 3/4.
    SigmaSmall,
    /// σ ≥ 3/4 and μ ≤ 4/(4σ − 1).
    SigmaLarge,
    /// 3/4 ≤ σ ≤ 1 − 10⁻²² and μ ≥ 4/(4σ − 1).
    MuLarge,
    /// σ ≥ 1 − 10⁻²².
    SigmaNearOne,
}

impl CaseRegion {
    pub const ALL: [CaseRegion; 4] =
        [CaseRegion::SigmaSmall, CaseRegion::SigmaLarge, CaseRegion::MuLarge, CaseRegion::SigmaNearOne];

    pub fn contains(self, s: &Q, m: &Q) -> bool {
        let t = q(3, 4);
        match self {
            CaseRegion::SigmaSmall => *s <= t,
            CaseRegion::SigmaLarge => *s >= t && *m <= mu_curve(s),
            CaseRegion::MuLarge => *s >= t && *s <= near_one() && *m >= mu_curve(s),
            CaseRegion::SigmaNearOne => *s >= near_one(),
        }
    }
}

/// 1 − 10⁻²².
pub fn near_one() -> Q {
    Q::one() - Q::new(BigInt::one(), Pow::pow(BigInt::from(10), 22u32))
}

/// The boundary curve μ = 4/(4σ − 1).
pub fn mu_curve(s: &Q) -> Q {
    qi(4) / (qi(4) * s - qi(1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub points_checked: usize,
    pub excluded: Vec<CaseRegion>,
    /// (σ, μ) pairs claimed by no remaining region.
    pub uncovered: Vec<(String, String)>,
    pub boundary_points: usize,
    /// Boundary points not claimed by both SigmaLarge and MuLarge.
    pub boundary_unshared: Vec<(String, String)>,
}

impl CoverageReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Full coverage check at step 1/64.
pub fn coverage_check() -> CoverageReport {
    coverage_check_with(&[], &q(1, 64))
}

/// Coverage check with some regions removed. Samples grid nodes, cell centres,
/// points on the boundary curve and the σ = 1 − 10⁻²² line.
pub fn coverage_check_with(excluded: &[CaseRegion], step: &Q) -> CoverageReport {
    let (sl, sh) = sigma_all();
    let (ml, mh) = mu_all();
    let axis = |lo: &Q, hi: &Q| {
        let mut v = Vec::new();
        let mut x = lo.clone();
        while &x < hi {
            v.push(x.clone());
            let mid = &x + step / qi(2);
            if &mid < hi {
                v.push(mid);
            }
            x += step;
        }
        v.push(hi.clone());
        v
    };
    let mut sigmas = axis(&sl, &sh);
    sigmas.push(near_one());
    let mus = axis(&ml, &mh);

    let mut pts: Vec<(Q, Q)> = Vec::new();
    for s in &sigmas {
        for m in &mus {
            pts.push((s.clone(), m.clone()));
        }
    }
    let mut boundary = Vec::new();
    for s in &sigmas {
        let m = mu_curve(s);
        if *s >= q(3, 4) && m >= ml && m <= mh {
            boundary.push((s.clone(), m));
        }
    }
    pts.extend(boundary.iter().cloned());

    let active: Vec<CaseRegion> = CaseRegion::ALL.iter().copied().filter(|r| !excluded.contains(r)).collect();
    let show = |(s, m): &(Q, Q)| (fmt_rational(s), fmt_rational(m));
    let uncovered = pts.iter().filter(|(s, m)| !active.iter().any(|r| r.contains(s, m))).map(show).collect();
    let boundary_unshared = boundary
        .iter()
        .filter(|(s, m)| {
            let near = *s >= near_one();
            !(CaseRegion::SigmaLarge.contains(s, m) && (near || CaseRegion::MuLarge.contains(s, m)))
        })
        .map(show)
        .collect();
    CoverageReport {
        points_checked: pts.len(),
        excluded: excluded.to_vec(),
        uncovered,
        boundary_points: boundary.len(),
        boundary_unshared,
    }
}
