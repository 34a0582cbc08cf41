//! Append-only record of solver verdicts.
//!
//! ```text
//! # setpref-checkpoint v1 universe=fffff min_n=2 max_n=5
//! 00007 3 SAT 0
//! 00013 3 UNSAT 0
//! 0001f 3 WITNESS 0 00007
//! ```
//!
//! Each record is `mask size verdict seed`, the mask in hex over the full
//! catalog numbering. `WITNESS` records carry the solved set whose model
//! satisfied the listed set as a fifth field. Pruned cells are not stored;
//! replay recomputes them.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::lattice::{Lattice, LatticeError, Outcome, Provenance, Status};
use crate::axioms::AxiomSet;

const MAGIC: &str = "# setpref-checkpoint v1";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: not a version 1 checkpoint")]
    Version { path: PathBuf },
    #[error("{path}: written for {found}, but this run is {expected}")]
    Mismatch {
        path: PathBuf,
        found: String,
        expected: String,
    },
    #[error("{path}:{line}: corrupt record `{text}`")]
    Corrupt { path: PathBuf, line: usize, text: String },
    #[error("replay: {0}")]
    Replay(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub universe: AxiomSet,
    pub min_n: u32,
    pub max_n: u32,
}

impl Header {
    fn line(&self) -> String {
        format!(
            "{MAGIC} universe={:05x} min_n={} max_n={}",
            self.universe.mask(),
            self.min_n,
            self.max_n
        )
    }

    fn parse(text: &str) -> Option<Header> {
        let rest = text.strip_prefix(MAGIC)?;
        let mut universe = None;
        let mut min_n = None;
        let mut max_n = None;
        for field in rest.split_whitespace() {
            let (key, value) = field.split_once('=')?;
            match key {
                "universe" => universe = Some(AxiomSet::from_mask(u32::from_str_radix(value, 16).ok()?)),
                "min_n" => min_n = value.parse().ok(),
                "max_n" => max_n = value.parse().ok(),
                _ => return None,
            }
        }
        Some(Header {
            universe: universe?,
            min_n: min_n?,
            max_n: max_n?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Record {
    Solved {
        set: AxiomSet,
        n: u32,
        outcome: Outcome,
        seed: u64,
    },
    Witness {
        set: AxiomSet,
        n: u32,
        seed: u64,
        from: AxiomSet,
    },
}

impl Record {
    fn line(&self) -> String {
        match *self {
            Record::Solved { set, n, outcome, seed } => {
                let verdict = match outcome {
                    Outcome::Sat => "SAT",
                    Outcome::Unsat => "UNSAT",
                    Outcome::Timeout => "TIMEOUT",
                };
                format!("{:05x} {n} {verdict} {seed}", set.mask())
            }
            Record::Witness { set, n, seed, from } => {
                format!("{:05x} {n} WITNESS {seed} {:05x}", set.mask(), from.mask())
            }
        }
    }

    fn parse(text: &str) -> Option<Record> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let mask = |s: &str| u32::from_str_radix(s, 16).ok().filter(|&m| m < 1 << 20).map(AxiomSet::from_mask);
        let set = mask(fields.first()?)?;
        let n: u32 = fields.get(1)?.parse().ok()?;
        let seed: u64 = fields.get(3)?.parse().ok()?;
        let outcome = match *fields.get(2)? {
            "SAT" => Outcome::Sat,
            "UNSAT" => Outcome::Unsat,
            "TIMEOUT" => Outcome::Timeout,
            "WITNESS" if fields.len() == 5 => {
                return Some(Record::Witness {
                    set,
                    n,
                    seed,
                    from: mask(fields[4])?,
                })
            }
            _ => return None,
        };
        (fields.len() == 4).then_some(Record::Solved { set, n, outcome, seed })
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CheckpointError + '_ {
    move |source| CheckpointError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads the records of an existing checkpoint. A missing or empty file
/// yields no records.
pub fn read(path: &Path, expected: &Header) -> Result<Vec<Record>, CheckpointError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut lines = BufReader::new(file).lines();
    let Some(first) = lines.next() else {
        return Ok(Vec::new());
    };
    let first = first.map_err(io_err(path))?;
    if first.trim().is_empty() {
        return Ok(Vec::new());
    }
    let header = Header::parse(first.trim()).ok_or_else(|| CheckpointError::Version {
        path: path.to_path_buf(),
    })?;
    if header != *expected {
        return Err(CheckpointError::Mismatch {
            path: path.to_path_buf(),
            found: header.line(),
            expected: expected.line(),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(io_err(path))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let record = Record::parse(text)
            .filter(|r| match r {
                Record::Solved { set, n, .. } | Record::Witness { set, n, .. } => {
                    set.is_subset_of(expected.universe) && (expected.min_n..=expected.max_n).contains(n)
                }
            })
            .ok_or_else(|| CheckpointError::Corrupt {
                path: path.to_path_buf(),
                line: i + 2,
                text: text.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Applies records in file order.
pub fn replay(lattice: &mut Lattice, records: &[Record], prune: bool) -> Result<(), CheckpointError> {
    for record in records {
        let dense = |s: AxiomSet| lattice.universe().compress(s).ok_or(LatticeError::Outside(s));
        match *record {
            Record::Solved { set, n, outcome, .. } => {
                let c = dense(set)?;
                lattice.record(c, n, outcome, prune)?;
            }
            Record::Witness { set, n, from, .. } => {
                let (c, f) = (dense(set)?, dense(from)?);
                lattice.record_witness(c, f, n, prune)?;
            }
        }
    }
    Ok(())
}

pub struct CheckpointWriter {
    file: File,
    path: PathBuf,
}

impl CheckpointWriter {
    /// Opens for appending, writing the header if the file is new or empty.
    pub fn open(path: &Path, header: &Header) -> Result<CheckpointWriter, CheckpointError> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err(path))?;
        let empty = file.metadata().map_err(io_err(path))?.len() == 0;
        if empty {
            writeln!(file, "{}", header.line()).map_err(io_err(path))?;
        }
        Ok(CheckpointWriter {
            file,
            path: path.to_path_buf(),
        })
    }

    /// Writes one round of records with a single write call.
    pub fn append(&mut self, records: &[Record]) -> Result<(), CheckpointError> {
        let mut text = String::new();
        for r in records {
            text.push_str(&r.line());
            text.push('\n');
        }
        self.file.write_all(text.as_bytes()).map_err(io_err(&self.path))?;
        self.file.flush().map_err(io_err(&self.path))
    }
}

/// Writes every solved and witnessed cell of `lattice` to a fresh file.
pub fn save(lattice: &Lattice, seed: u64, path: &Path) -> Result<(), CheckpointError> {
    let header = Header {
        universe: lattice.universe().set(),
        min_n: lattice.min_n(),
        max_n: lattice.max_n(),
    };
    File::create(path).map_err(io_err(path))?;
    let mut writer = CheckpointWriter::open(path, &header)?;
    let mut records = Vec::new();
    for n in lattice.sizes() {
        for c in 0..lattice.universe().num_cells() as u32 {
            let set = lattice.universe().expand(c);
            match lattice.provenance_dense(c, n) {
                Provenance::Solved => {
                    let outcome = match lattice.status_dense(c, n) {
                        Status::Possible => Outcome::Sat,
                        Status::Impossible => Outcome::Unsat,
                        _ => Outcome::Timeout,
                    };
                    records.push(Record::Solved { set, n, outcome, seed });
                }
                Provenance::Witnessed { from } => records.push(Record::Witness { set, n, seed, from }),
                _ => {}
            }
        }
    }
    writer.append(&records)
}

/// Rebuilds a lattice from a checkpoint, recomputing pruned cells. An empty
/// file carries no universe and yields `None`.
pub fn load(path: &Path, certified: AxiomSet, prune: bool) -> Result<Option<Lattice>, CheckpointError> {
    let file = File::open(path).map_err(io_err(path))?;
    let first = BufReader::new(file)
        .lines()
        .next()
        .transpose()
        .map_err(io_err(path))?
        .unwrap_or_default();
    if first.trim().is_empty() {
        return Ok(None);
    }
    let header = Header::parse(first.trim()).ok_or_else(|| CheckpointError::Version {
        path: path.to_path_buf(),
    })?;
    let records = read(path, &header)?;
    let mut lattice = Lattice::new(header.universe, header.min_n, header.max_n, certified);
    replay(&mut lattice, &records, prune)?;
    Ok(Some(lattice))
}
