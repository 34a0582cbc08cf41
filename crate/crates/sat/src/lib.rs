//! Propositional back end: CNF container, DIMACS and DRAT codecs, a CDCL
//! solver, an independent DRAT checker and an external-solver bridge.

pub mod check;
pub mod cnf;
pub mod dimacs;
pub mod drat;
pub mod external;
pub mod solver;

pub use check::{check_drat, CheckError, CheckReport};
pub use cnf::{Clause, CnfFormula, Lit, Var};
pub use dimacs::{export_dimacs, import_dimacs, DimacsError};
pub use drat::{DratProof, ProofStep};
pub use external::{ExternalError, ExternalSolver};
pub use solver::{
    emit_proof, solve, Model, RestartPolicy, SolveError, Solver, SolverConfig, Stats,
    UnknownReason, Verdict,
};
