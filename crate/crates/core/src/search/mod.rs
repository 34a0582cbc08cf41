//! Exhaustive search over axiom subsets and domain sizes.
//!
//! Sizes are handled in increasing order. Inconsistency moves up to
//! supersets and to larger sizes; consistency moves down to subsets and to
//! smaller sizes. Moves across sizes are limited to sets whose axioms all
//! passed the existential set-guard check.

pub mod checkpoint;
mod lattice;
mod oracle;
pub mod report;
mod results;
mod schedule;

pub use lattice::{Lattice, LatticeError, Outcome, Provenance, Rule, Status, Universe};
pub use oracle::{brute_force_oracle, fubini, weak_orders, OracleError, OracleTable};
pub use report::SearchResults;
pub use results::{count_inconsistent, minimal_impossibilities, unconfirmed_impossibilities, MinimalImpossibility};
pub use schedule::{search, search_with_progress, Progress, SearchConfig, SearchError, SearchRun, SearchStats};
