//! Equivalence checks between CNF encodings of the same constraint.

use std::collections::HashSet;

use setpref_sat::cnf::normalize_clause;
use setpref_sat::{Clause, CnfFormula, Lit, Solver, SolverConfig, Var, Verdict};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    /// A clause of one side is not entailed by the other.
    #[error("clause {clause:?} of the {side} formula is not entailed by the other")]
    NotEntailed { side: &'static str, clause: Vec<i64> },
    /// An assignment to the shared variables separates the two formulas.
    #[error("assignment {assignment:?} satisfies only the {side} formula")]
    Separated { side: &'static str, assignment: Vec<bool> },
    #[error("solver gave up while checking {0:?}")]
    Undecided(Vec<i64>),
}

fn dimacs(c: &[Lit]) -> Vec<i64> {
    c.iter().map(|l| l.to_dimacs()).collect()
}

/// Checks that every clause of `premise` over variables `1..=shared` is
/// implied by `conclusion`. Clauses mentioning other variables are skipped.
fn entails_all(
    conclusion: &CnfFormula,
    premise: &CnfFormula,
    shared: u32,
    side: &'static str,
) -> Result<(), EquivError> {
    let present: HashSet<Clause> = conclusion
        .clauses()
        .iter()
        .filter_map(|c| normalize_clause(c))
        .collect();
    let mut solver: Option<Solver> = None;
    for c in premise.clauses() {
        let Some(c) = normalize_clause(c) else { continue };
        if c.iter().any(|l| l.var().id() > shared) || present.contains(&c) {
            continue;
        }
        let solver = solver.get_or_insert_with(|| Solver::new(conclusion, &SolverConfig::default()));
        let negated: Vec<Lit> = c.iter().map(|&l| !l).collect();
        match solver.solve_under(&negated) {
            Verdict::Unsat => {}
            Verdict::Sat(_) => {
                return Err(EquivError::NotEntailed {
                    side,
                    clause: dimacs(&c),
                })
            }
            Verdict::Unknown(_) => return Err(EquivError::Undecided(dimacs(&c))),
        }
    }
    Ok(())
}

/// Clause-wise equivalence of two formulas over the same variables: each
/// side implies every clause of the other. Neither formula may use
/// variables above `shared`.
pub fn clausewise_equivalent(a: &CnfFormula, b: &CnfFormula, shared: u32) -> Result<(), EquivError> {
    assert!(
        a.num_vars() <= shared && b.num_vars() <= shared,
        "clause-wise check needs formulas without auxiliary variables"
    );
    entails_all(a, b, shared, "second")?;
    entails_all(b, a, shared, "first")
}

/// Projected equivalence by enumerating every assignment to `1..=shared`:
/// the restrictions of both formulas' model sets to those variables must
/// coincide. Auxiliary variables above `shared` are existentially
/// projected with the solver. Only usable for small `shared`.
pub fn projected_equivalent_exhaustive(
    a: &CnfFormula,
    b: &CnfFormula,
    shared: u32,
) -> Result<(), EquivError> {
    assert!(shared <= 24, "exhaustive enumeration over {shared} variables");
    let mut sa = Solver::new(a, &SolverConfig::default());
    let mut sb = Solver::new(b, &SolverConfig::default());
    let mut assumptions = Vec::with_capacity(shared as usize);
    for bits in 0u64..1 << shared {
        assumptions.clear();
        assumptions.extend((0..shared).map(|i| Lit::new(Var::new(i + 1), bits >> i & 1 == 1)));
        let decide = |s: &mut Solver| match s.solve_under(&assumptions) {
            Verdict::Sat(_) => Ok(true),
            Verdict::Unsat => Ok(false),
            Verdict::Unknown(_) => Err(EquivError::Undecided(dimacs(&assumptions))),
        };
        let in_a = decide(&mut sa)?;
        let in_b = decide(&mut sb)?;
        if in_a != in_b {
            return Err(EquivError::Separated {
                side: if in_a { "first" } else { "second" },
                assignment: (0..shared).map(|i| bits >> i & 1 == 1).collect(),
            });
        }
    }
    Ok(())
}
