//! Runs a third-party DIMACS solver as a subprocess.
//!
//! The formula is written to a temporary file whose path is passed as the
//! last argument. The solver's stdout is scanned for a status line
//! (`s SATISFIABLE`, `s UNSATISFIABLE`, or the same words without the `s`)
//! and for `v` lines carrying the model.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

use crate::cnf::{CnfFormula, Lit};
use crate::dimacs::export_dimacs;
use crate::solver::{Model, UnknownReason, Verdict};

/// Environment variable naming the default external solver binary.
pub const SOLVER_ENV: &str = "SETPREF_EXTERNAL_SOLVER";

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("could not run `{path}`: {source}")]
    Spawn {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("temporary file: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver output has no SATISFIABLE/UNSATISFIABLE status line")]
    NoStatus,
    #[error("invalid model value `{0}`")]
    BadModel(String),
    #[error("reported model falsifies clause #{0}")]
    WrongModel(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>) -> ExternalSolver {
        ExternalSolver {
            program: program.into(),
            args: Vec::new(),
        }
    }

    /// Reads the program path from [`SOLVER_ENV`].
    pub fn from_env() -> Option<ExternalSolver> {
        std::env::var_os(SOLVER_ENV).map(ExternalSolver::new)
    }

    pub fn solve(&self, cnf: &CnfFormula) -> Result<Verdict, ExternalError> {
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(export_dimacs(cnf).as_bytes())?;
        file.flush()?;
        self.solve_file(cnf, file.path())
    }

    fn solve_file(&self, cnf: &CnfFormula, path: &Path) -> Result<Verdict, ExternalError> {
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(path)
            .output()
            .map_err(|source| ExternalError::Spawn {
                path: self.program.clone(),
                source,
            })?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        let verdict = parse_solver_output(&stdout, cnf.num_vars())?;
        if let Verdict::Sat(model) = &verdict {
            if let Some(clause) = cnf.first_falsified(model.as_slice()) {
                return Err(ExternalError::WrongModel(clause));
            }
        }
        Ok(verdict)
    }
}

/// Parses competition-style solver output. Variables missing from the `v`
/// lines default to false.
pub fn parse_solver_output(stdout: &str, num_vars: u32) -> Result<Verdict, ExternalError> {
    let mut status = None;
    let mut values = vec![false; num_vars as usize];
    for line in stdout.lines() {
        let line = line.trim();
        let body = line.strip_prefix("s ").unwrap_or(line);
        match body {
            "SATISFIABLE" => status = Some(true),
            "UNSATISFIABLE" => status = Some(false),
            "UNKNOWN" | "INDETERMINATE" => {
                if status.is_none() {
                    return Ok(Verdict::Unknown(UnknownReason::Timeout));
                }
            }
            _ => {}
        }
        if let Some(rest) = line.strip_prefix("v ").or(line.strip_prefix("v\t")) {
            for token in rest.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| ExternalError::BadModel(token.to_string()))?;
                if value == 0 {
                    continue;
                }
                if value.unsigned_abs() > u64::from(num_vars) {
                    return Err(ExternalError::BadModel(token.to_string()));
                }
                let lit = Lit::from_dimacs(value);
                values[lit.var().index()] = lit.is_positive();
            }
        }
    }
    match status {
        Some(true) => Ok(Verdict::Sat(Model::from_values(values))),
        Some(false) => Ok(Verdict::Unsat),
        None => Err(ExternalError::NoStatus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_competition_output() {
        let v = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        let m = v.model().unwrap();
        assert_eq!(m.as_slice(), &[true, false, true]);
        assert_eq!(
            parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(),
            Verdict::Unsat
        );
        assert_eq!(parse_solver_output("UNSATISFIABLE\n", 1).unwrap(), Verdict::Unsat);
        assert!(matches!(
            parse_solver_output("nothing\n", 1),
            Err(ExternalError::NoStatus)
        ));
        assert!(matches!(
            parse_solver_output("s SATISFIABLE\nv 9 0\n", 1),
            Err(ExternalError::BadModel(_))
        ));
    }

    #[test]
    fn missing_program_is_a_spawn_error() {
        let solver = ExternalSolver::new("/nonexistent/solver-binary");
        let err = solver.solve(&CnfFormula::new(1)).unwrap_err();
        assert!(matches!(err, ExternalError::Spawn { .. }));
    }

    #[cfg(unix)]
    #[test]
    fn runs_a_script_solver() {
        use std::os::unix::fs::PermissionsExt;
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("fake.sh");
        std::fs::write(&script, "#!/bin/sh\necho 's SATISFIABLE'\necho 'v 1 0'\n").unwrap();
        std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
        let cnf = CnfFormula::with_clauses(1, vec![vec![Lit::from_dimacs(1)]]);
        let v = ExternalSolver::new(&script).solve(&cnf).unwrap();
        assert!(v.is_sat());
        // A model that violates the formula is caught.
        let cnf = CnfFormula::with_clauses(1, vec![vec![Lit::from_dimacs(-1)]]);
        assert!(matches!(
            ExternalSolver::new(&script).solve(&cnf),
            Err(ExternalError::WrongModel(0))
        ));
    }
}
