//! Generalized Zeckendorf decompositions over positive linear recurrence
//! sequences, exact two-dimensional recurrences for their gap and summand
//! counts, and numerical checks of the Gaussian limits of those counts.
//!
//! The usual flow:
//!
//! ```
//! use plrs_gaps::{evolve_statistic, Plrs, Statistic, DEFAULT_BUDGET};
//!
//! let fib = Plrs::fibonacci();
//! let evolved = evolve_statistic(&fib, Statistic::Gap(2), 60, DEFAULT_BUDGET).unwrap();
//! let row = evolved.rows.row(60).unwrap();
//! // Every integer in [G_60, G_61) is counted once.
//! let seq = fib.sequence(61);
//! assert_eq!(row.omega(), &seq.interval_size(60));
//! ```

pub mod asymptotics;
pub mod convergence;
pub mod engine;
pub mod error;
pub mod format;
pub mod pipeline;
pub mod plrs;
pub mod ratio;
pub mod table;
pub mod zeckendorf;

pub use asymptotics::{check_positivity, compute_constants, AsymptoticConstants, MomentReport, TableConstants};
pub use engine::{distribution, evolve, Distribution, Provenance, Row, RowTable};
pub use error::{Error, Result};
pub use pipeline::{analyze, binomial_rows, evolve_statistic, oracle_rows, seed_rows, validate_table, Evolved, ValidationReport};
pub use plrs::{growth_ratio_check, Plrs, SequenceTable, SpectralData};
pub use table::{build_gap_table, build_summand_table, build_table, CoefficientTable, TableKind};
pub use zeckendorf::{decompose, gap_profile, is_legal, Decomposition, GapProfile, Statistic, DEFAULT_BUDGET};
