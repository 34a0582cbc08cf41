//! DRAT clausal proofs: the trace the solver emits and a text codec for it.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Lit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofStep {
    Add(Clause),
    Delete(Clause),
}

/// An ordered list of clause additions and deletions. An unsatisfiability
/// proof ends with the addition of the empty clause.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DratProof {
    steps: Vec<ProofStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DratParseError {
    #[error("line {line}: invalid token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: step is not terminated by 0")]
    MissingTerminator { line: usize },
}

impl DratProof {
    pub fn new() -> DratProof {
        DratProof::default()
    }

    pub fn add(&mut self, lits: &[Lit]) {
        self.steps.push(ProofStep::Add(lits.to_vec()));
    }

    pub fn delete(&mut self, lits: &[Lit]) {
        self.steps.push(ProofStep::Delete(lits.to_vec()));
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn derives_empty_clause(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s, ProofStep::Add(c) if c.is_empty()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let lits = match step {
                ProofStep::Add(lits) => lits,
                ProofStep::Delete(lits) => {
                    out.push_str("d ");
                    lits
                }
            };
            for lit in lits {
                let _ = write!(out, "{} ", lit.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse(text: &str) -> Result<DratProof, DratParseError> {
        let mut proof = DratProof::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut tokens = raw.split_whitespace().peekable();
            if tokens.peek().is_none() || raw.trim_start().starts_with('c') {
                continue;
            }
            let delete = tokens.peek() == Some(&"d");
            if delete {
                tokens.next();
            }
            let mut lits = Vec::new();
            let mut terminated = false;
            for token in tokens {
                if terminated {
                    return Err(DratParseError::BadToken {
                        line,
                        token: token.to_string(),
                    });
                }
                let value: i64 = token.parse().map_err(|_| DratParseError::BadToken {
                    line,
                    token: token.to_string(),
                })?;
                if value == 0 {
                    terminated = true;
                } else {
                    lits.push(Lit::from_dimacs(value));
                }
            }
            if !terminated {
                return Err(DratParseError::MissingTerminator { line });
            }
            proof.steps.push(if delete {
                ProofStep::Delete(lits)
            } else {
                ProofStep::Add(lits)
            });
        }
        Ok(proof)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut proof = DratProof::new();
        proof.add(&[Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        proof.delete(&[Lit::from_dimacs(3)]);
        proof.add(&[]);
        let text = proof.to_text();
        assert_eq!(text, "1 -2 0\nd 3 0\n0\n");
        assert_eq!(DratProof::parse(&text).unwrap(), proof);
        assert!(proof.derives_empty_clause());
    }

    #[test]
    fn unterminated_step_is_rejected() {
        assert_eq!(
            DratProof::parse("1 2\n"),
            Err(DratParseError::MissingTerminator { line: 1 })
        );
    }
}
