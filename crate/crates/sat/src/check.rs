//! Forward DRAT checker for proofs made of RUP lemmas.
//!
//! Shares nothing with the solver beyond the literal type: it keeps its own
//! clause store, watch lists and propagation loop, so a solver bug cannot
//! silently validate its own output. Every added lemma must follow from the
//! live clauses by unit propagation; deletions remove one matching copy.

use std::collections::HashMap;

use thiserror::Error;

use crate::cnf::{normalize_clause, CnfFormula, Lit};
use crate::drat::{DratProof, ProofStep};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("proof step {step}: lemma is not implied by unit propagation")]
    NotRup { step: usize },
    #[error("proof never derives the empty clause")]
    NoEmptyClause,
    #[error("proof step {step}: literal {lit} beyond variable count {num_vars}")]
    UnknownVariable { step: usize, lit: i64, num_vars: u32 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub lemmas_checked: usize,
    pub deletions: usize,
    /// Deletions that named a clause not present in the database.
    pub ignored_deletions: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Free,
    True,
    False,
}

struct Db {
    clauses: Vec<Vec<Lit>>,
    alive: Vec<bool>,
    index: HashMap<Vec<Lit>, Vec<usize>>,
    watches: Vec<Vec<usize>>,
    units: Vec<usize>,
    vals: Vec<Val>,
    trail: Vec<Lit>,
}

impl Db {
    fn new(num_vars: u32) -> Db {
        Db {
            clauses: Vec::new(),
            alive: Vec::new(),
            index: HashMap::new(),
            watches: vec![Vec::new(); 2 * num_vars as usize],
            units: Vec::new(),
            vals: vec![Val::Free; 2 * num_vars as usize],
            trail: Vec::new(),
        }
    }

    fn insert(&mut self, lits: Vec<Lit>) {
        let id = self.clauses.len();
        if lits.len() >= 2 {
            self.watches[lits[0].code()].push(id);
            self.watches[lits[1].code()].push(id);
        } else if lits.len() == 1 {
            self.units.push(id);
        }
        self.index.entry(lits.clone()).or_default().push(id);
        self.clauses.push(lits);
        self.alive.push(true);
    }

    fn remove(&mut self, lits: &[Lit]) -> bool {
        let Some(ids) = self.index.get_mut(lits) else {
            return false;
        };
        let Some(id) = ids.pop() else {
            return false;
        };
        if ids.is_empty() {
            self.index.remove(lits);
        }
        self.alive[id] = false;
        true
    }

    fn set(&mut self, lit: Lit) -> bool {
        match self.vals[lit.code()] {
            Val::True => true,
            Val::False => false,
            Val::Free => {
                self.vals[lit.code()] = Val::True;
                self.vals[(!lit).code()] = Val::False;
                self.trail.push(lit);
                true
            }
        }
    }

    fn reset(&mut self) {
        for lit in self.trail.drain(..) {
            self.vals[lit.code()] = Val::Free;
            self.vals[(!lit).code()] = Val::Free;
        }
    }

    /// True when propagation reaches a conflict.
    fn propagate(&mut self) -> bool {
        let mut head = 0;
        while head < self.trail.len() {
            let false_lit = !self.trail[head];
            head += 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut keep = 0;
            let mut conflict = false;
            let mut i = 0;
            while i < ws.len() {
                let id = ws[i];
                i += 1;
                if !self.alive[id] {
                    continue;
                }
                let clause = &mut self.clauses[id];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                if self.vals[clause[0].code()] == Val::True {
                    ws[keep] = id;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    if self.vals[clause[k].code()] != Val::False {
                        clause.swap(1, k);
                        self.watches[clause[1].code()].push(id);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[keep] = id;
                keep += 1;
                let first = clause[0];
                match self.vals[first.code()] {
                    Val::False => {
                        conflict = true;
                        while i < ws.len() {
                            ws[keep] = ws[i];
                            keep += 1;
                            i += 1;
                        }
                    }
                    _ => {
                        self.set(first);
                    }
                }
            }
            ws.truncate(keep);
            self.watches[false_lit.code()] = ws;
            if conflict {
                return true;
            }
        }
        false
    }

    fn implies(&mut self, lemma: &[Lit]) -> bool {
        let mut conflict = false;
        for &lit in lemma {
            if !self.set(!lit) {
                conflict = true;
                break;
            }
        }
        if !conflict {
            for k in 0..self.units.len() {
                let id = self.units[k];
                if self.alive[id] && !self.set(self.clauses[id][0]) {
                    conflict = true;
                    break;
                }
            }
        }
        if !conflict {
            conflict = self.propagate();
        }
        self.reset();
        conflict
    }
}

/// Checks that `proof` refutes `cnf`.
pub fn check_drat(cnf: &CnfFormula, proof: &DratProof) -> Result<CheckReport, CheckError> {
    let mut db = Db::new(cnf.num_vars());
    let mut report = CheckReport::default();
    let mut has_empty = false;
    for clause in cnf.clauses() {
        match normalize_clause(clause) {
            Some(lits) if lits.is_empty() => has_empty = true,
            Some(lits) => db.insert(lits),
            None => {}
        }
    }
    if has_empty {
        return Ok(report);
    }

    for (step, entry) in proof.steps().iter().enumerate() {
        let lits = match entry {
            ProofStep::Add(l) | ProofStep::Delete(l) => l,
        };
        if let Some(bad) = lits.iter().find(|l| l.var().id() > cnf.num_vars()) {
            return Err(CheckError::UnknownVariable {
                step,
                lit: bad.to_dimacs(),
                num_vars: cnf.num_vars(),
            });
        }
        let Some(lits) = normalize_clause(lits) else {
            // Tautologies carry no information either way.
            continue;
        };
        match entry {
            ProofStep::Add(_) => {
                if !db.implies(&lits) {
                    return Err(CheckError::NotRup { step });
                }
                report.lemmas_checked += 1;
                if lits.is_empty() {
                    return Ok(report);
                }
                db.insert(lits);
            }
            ProofStep::Delete(_) => {
                report.deletions += 1;
                // Unit deletions are ignored, matching common checker practice.
                if lits.len() == 1 || !db.remove(&lits) {
                    report.ignored_deletions += 1;
                }
            }
        }
    }
    Err(CheckError::NoEmptyClause)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(values: &[i64]) -> Vec<Lit> {
        values.iter().map(|&v| Lit::from_dimacs(v)).collect()
    }

    fn formula(n: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::with_clauses(n, clauses.iter().map(|c| clause(c)).collect())
    }

    #[test]
    fn accepts_trivial_refutation() {
        let f = formula(1, &[&[1], &[-1]]);
        let proof = DratProof::parse("0\n").unwrap();
        assert!(check_drat(&f, &proof).is_ok());
    }

    #[test]
    fn accepts_hand_written_resolution_proof() {
        // (1 2)(1 -2)(-1 2)(-1 -2)
        let f = formula(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let proof = DratProof::parse("1 0\nd 1 2 0\n0\n").unwrap();
        let report = check_drat(&f, &proof).unwrap();
        assert_eq!(report.lemmas_checked, 2);
    }

    #[test]
    fn rejects_non_implied_lemma() {
        let f = formula(2, &[&[1, 2], &[-1, 2]]);
        let proof = DratProof::parse("-2 0\n0\n").unwrap();
        assert_eq!(check_drat(&f, &proof), Err(CheckError::NotRup { step: 0 }));
    }

    #[test]
    fn rejects_proof_without_empty_clause() {
        let f = formula(2, &[&[1, 2], &[1, -2]]);
        let proof = DratProof::parse("1 0\n").unwrap();
        assert_eq!(check_drat(&f, &proof), Err(CheckError::NoEmptyClause));
    }

    #[test]
    fn deleted_clauses_no_longer_support_lemmas() {
        let f = formula(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let proof = DratProof::parse("d 1 2 0\nd 1 -2 0\n1 0\n0\n").unwrap();
        assert_eq!(check_drat(&f, &proof), Err(CheckError::NotRup { step: 2 }));
    }
}
