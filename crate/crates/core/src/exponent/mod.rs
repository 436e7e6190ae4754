//! Exact verification of exponent inequalities and the ν optimization.

mod algebraic;
mod catalog;
mod claim;
mod coverage;
mod ledger;
mod optimize;
mod poly;
mod rational_fn;
mod sign;

pub use algebraic::{AlgebraicNumber, Endpoint};
pub use catalog::{
    nu_ii, nu_iii, required_nu, required_nu_detail, BoundCatalog, BoundKind, CatalogEntry, NuClass, NuDetail,
};
pub use claim::{
    mu_all, recheck, sigma_all, verify_all, verify_claim, Certificate, Claim, Counterexample, MuBound, MuSide,
    PartCert, Verdict,
};
pub use poly::{Poly, Sturm};
pub use rational_fn::{parse_poly, MuPoly, RationalFn};
pub use sign::{Domain, Negative, SignCert};
pub use ledger::{builtin_ledger, parse_ledger, BUILTIN_LEDGER, MUTATION_TARGETS};
pub use coverage::{coverage_check, coverage_check_with, mu_curve, near_one, CaseRegion, CoverageReport};
pub use optimize::{nu_floor, optimize_nu, optimize_nu_box, GridBox, GridCell, NuOptimum, REFINE_LEVELS};
