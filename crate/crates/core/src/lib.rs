//! Sieved Liouville and Möbius tables with neighboring-value statistics.
//!
//! The pipeline is: [`sieve::sieve_range`] builds a [`FactorSignTable`] over
//! `[1, N]`, which can be persisted as a `.lmt` file ([`table`]). The
//! [`correlation`] module computes per-(h, X) sums, contingency tables and χ²
//! statistics from it, [`stats`] aggregates sweeps over h, and [`analytic`]
//! evaluates the Euler products the square-free statistics converge to.

pub mod analytic;
pub mod cli;
pub mod correlation;
pub mod error;
mod scan;
pub mod sieve;
pub mod stats;
pub mod table;

pub use correlation::{
    chi_square, conditional_expectations, contingency, correlation, decade_decay_ratios, summatory,
    ChiSquare, ConditionalExpectations, ContingencyTable, CorrelationRecord, Mode,
};
pub use error::{Error, Result};
pub use sieve::{factor_oracle, sieve_range, SieveConfig};
pub use stats::{summarize, sweep, SweepSummary};
pub use table::{FactorSignTable, NValues, Sign};
