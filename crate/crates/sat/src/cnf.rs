//! Literals, clauses and the CNF container shared by the encoder, the solver
//! and the DIMACS/DRAT layers.

use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on 0, which DIMACS reserves as the clause terminator.
    pub fn new(id: u32) -> Var {
        assert!(id >= 1, "variable ids start at 1");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based index, handy for dense per-variable arrays.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A signed variable. Internally `2 * index + sign`, so literals can index
/// watch lists directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit((var.index() as u32) << 1 | u32::from(!positive))
    }

    /// Builds a literal from a nonzero DIMACS integer.
    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a literal");
        let var = Var::new(value.unsigned_abs() as u32);
        Lit::new(var, value > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var().id());
        if self.is_positive() {
            id
        } else {
            -id
        }
    }

    pub fn var(self) -> Var {
        Var((self.0 >> 1) + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

/// A clause list together with a declared variable count.
///
/// Clauses are stored as generated: literal order is kept and complementary
/// pairs are not removed, so a quantifier expansion contributes exactly one
/// clause per instance. [`CnfFormula::simplified`] produces the
/// tautology-free normal form the solver works on.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn with_clauses(num_vars: u32, clauses: Vec<Clause>) -> CnfFormula {
        let mut cnf = CnfFormula::new(num_vars);
        for clause in clauses {
            cnf.add_clause(clause);
        }
        cnf
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Raises the declared variable count; never lowers it.
    pub fn declare_vars(&mut self, num_vars: u32) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    /// Adds a clause, merging repeated literals. Panics if a literal refers
    /// to a variable beyond the declared count.
    pub fn add_clause(&mut self, mut clause: Clause) {
        for lit in &clause {
            assert!(
                lit.var().id() <= self.num_vars,
                "literal {lit} beyond declared variable count {}",
                self.num_vars
            );
        }
        let mut seen = Vec::with_capacity(clause.len());
        clause.retain(|lit| {
            if seen.contains(lit) {
                false
            } else {
                seen.push(*lit);
                true
            }
        });
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, other: &CnfFormula) {
        self.declare_vars(other.num_vars);
        self.clauses.extend(other.clauses.iter().cloned());
    }

    /// Sorted literals, tautologies and duplicate clauses removed.
    pub fn simplified(&self) -> CnfFormula {
        let mut clauses: Vec<Clause> = self
            .clauses
            .iter()
            .filter_map(|clause| normalize_clause(clause))
            .collect();
        clauses.sort();
        clauses.dedup();
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
        }
    }

    /// Evaluates every clause under a total assignment indexed by
    /// `Var::index`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.first_falsified(assignment).is_none()
    }

    /// Index of the first clause the assignment falsifies, if any.
    pub fn first_falsified(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|clause| {
            !clause
                .iter()
                .any(|lit| assignment[lit.var().index()] == lit.is_positive())
        })
    }
}

/// Sorts and dedups a clause; `None` when it contains a complementary pair.
pub fn normalize_clause(clause: &[Lit]) -> Option<Clause> {
    let mut lits = clause.to_vec();
    lits.sort_unstable();
    lits.dedup();
    if lits.windows(2).any(|w| w[0] == !w[1]) {
        None
    } else {
        Some(lits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_literal_round_trip() {
        for value in [1i64, -1, 7, -4005] {
            assert_eq!(Lit::from_dimacs(value).to_dimacs(), value);
        }
        let l = Lit::from_dimacs(-3);
        assert_eq!(l.var().id(), 3);
        assert!(!l.is_positive());
        assert_eq!(!l, Lit::from_dimacs(3));
    }

    #[test]
    fn add_clause_merges_duplicates_but_keeps_tautologies() {
        let mut cnf = CnfFormula::new(2);
        cnf.add_clause(vec![Lit::from_dimacs(1), Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        cnf.add_clause(vec![Lit::from_dimacs(1), Lit::from_dimacs(-1)]);
        assert_eq!(cnf.num_clauses(), 2);
        assert_eq!(cnf.clauses()[0].len(), 2);
        let simple = cnf.simplified();
        assert_eq!(simple.num_clauses(), 1);
    }

    #[test]
    #[should_panic]
    fn literal_beyond_declared_count_panics() {
        let mut cnf = CnfFormula::new(1);
        cnf.add_clause(vec![Lit::from_dimacs(2)]);
    }
}
