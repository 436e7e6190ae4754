//! Prime generation, gap statistics and Chebyshev-function evaluation.

mod gaps;
mod primorial;
mod psi;
mod sieve;

pub use gaps::{dyadic_band_sum, gap_moment_sum, max_gap_table, BandSum, GapSummary, MaxGapRow, PrimeGap};
pub use primorial::{composite_run_demo, PrimorialRun};
pub use psi::{chebyshev_psi, psi_window, von_mangoldt};
pub use sieve::{sieve_primes, Sieve, SieveConfig, DEFAULT_CEILING, DEFAULT_SEGMENT_ODDS};

#[allow(unused_imports)]
pub(crate) use psi::window_terms;
#[allow(unused_imports)]
pub(crate) use sieve::small_primes;
