//! Desk-scale tools for prime gap statistics, the Heath-Brown decomposition of
//! the von Mangoldt function, Dirichlet polynomial experiments, and exact
//! certification of rational exponent inequalities.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod exponent;
pub mod identity;
pub mod primes;
pub mod report;

pub use error::{Error, Result};

pub use dirichlet::{LargeValueCounts, LargeValueProfile, PerronParams, PolyFactor};
pub use exponent::{BoundCatalog, Claim, RationalFn, Verdict};
pub use identity::{CoefficientClass, Factorization, IdentityConfig};
pub use primes::{BandSum, GapSummary, PrimeGap};
