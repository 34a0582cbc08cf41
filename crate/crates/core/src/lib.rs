//! Automated search for impossibility theorems about extending a linear
//! order on objects to a preference relation on nonempty sets of objects.
//!
//! [`model`] fixes the propositional encoding, [`axioms`] holds the axiom
//! catalog, [`mslsp`] parses and grounds axioms written in a two-sorted
//! logic, and [`search`] walks the lattice of axiom subsets and domain sizes.

pub mod axioms;
pub mod equiv;
pub mod model;
pub mod mslsp;
pub mod search;

pub use axioms::{
    clause_count, clauses_for, fixture_witnesses, holds, instance_cnf, minmax_order, AxiomId,
    AxiomSet, ProblemInstance,
};
pub use model::{decode_model, encode_model, order_units, DomainSize, ElementCode, ElementOrder, SetCode, SetRelation};
pub use setpref_sat as sat;
