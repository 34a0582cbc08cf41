//! DIMACS CNF reader and writer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Lit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {reason}")]
    BadHeader { line: usize, reason: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    LiteralOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("line {line}: last clause is not terminated by 0")]
    MissingTerminator { line: usize },
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Renders `p cnf <vars> <clauses>` followed by one zero-terminated clause
/// per line.
pub fn export_dimacs(cnf: &CnfFormula) -> String {
    let mut out = String::with_capacity(16 + cnf.num_clauses() * 16);
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.num_clauses());
    for clause in cnf.clauses() {
        for lit in clause {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn import_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::BadHeader {
                    line,
                    reason: "duplicate header".into(),
                });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line,
                token: token.to_string(),
            })?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if value.unsigned_abs() > u64::from(num_vars) {
                return Err(DimacsError::LiteralOutOfRange {
                    line,
                    lit: value,
                    num_vars,
                });
            }
            current.push(Lit::from_dimacs(value));
        }
    }

    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator { line: last_line });
    }
    let Some((num_vars, declared)) = header else {
        return Err(DimacsError::BadHeader {
            line: last_line.max(1),
            reason: "no `p cnf` line".into(),
        });
    };
    if declared != clauses.len() {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula::with_clauses(num_vars, clauses))
}

fn parse_header(line_text: &str, line: usize) -> Result<(u32, usize), DimacsError> {
    let bad = |reason: &str| DimacsError::BadHeader {
        line,
        reason: reason.to_string(),
    };
    let mut parts = line_text.split_whitespace();
    if parts.next() != Some("p") {
        return Err(bad("expected `p`"));
    }
    if parts.next() != Some("cnf") {
        return Err(bad("expected format `cnf`"));
    }
    let num_vars = parts
        .next()
        .and_then(|t| t.parse::<u32>().ok())
        .ok_or_else(|| bad("variable count is not a number"))?;
    let num_clauses = parts
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or_else(|| bad("clause count is not a number"))?;
    if parts.next().is_some() {
        return Err(bad("trailing tokens"));
    }
    Ok((num_vars, num_clauses))
}
