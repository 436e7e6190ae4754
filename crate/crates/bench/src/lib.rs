//! Benchmark inputs shared by the criterion targets.

use gapscope_core::dirichlet::PolyFactor;
use gapscope_core::identity::CoefficientClass;

/// Members m, m + d, ..., the worst case for pair-sum collisions.
pub fn progression(start: i64, step: i64, len: usize) -> Vec<i64> {
    (0..len as i64).map(|i| start + step * i).collect()
}

/// A two-factor product covering (2000, 2200].
pub fn perron_factors() -> Vec<PolyFactor> {
    vec![PolyFactor::new(CoefficientClass::Unit, 7), PolyFactor::new(CoefficientClass::Log, 3)]
}

pub fn experiment_factors() -> Vec<PolyFactor> {
    vec![PolyFactor::new(CoefficientClass::Unit, 4), PolyFactor::new(CoefficientClass::Mobius, 3)]
}
