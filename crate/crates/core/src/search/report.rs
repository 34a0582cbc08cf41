//! Result tables as aligned text, CSV and JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lattice::{Lattice, Provenance, Status};
use super::results::{count_inconsistent, minimal_impossibilities, unconfirmed_impossibilities, MinimalImpossibility};
use crate::axioms::{AxiomId, AxiomSet};

/// Everything a report shows, detached from the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResults {
    pub universe: AxiomSet,
    pub min_n: u32,
    pub max_n: u32,
    pub minimal: Vec<MinimalImpossibility>,
    pub unconfirmed: Vec<MinimalImpossibility>,
    pub count_inconsistent: u64,
    pub complete: bool,
}

impl SearchResults {
    pub fn from_lattice(lattice: &Lattice) -> SearchResults {
        SearchResults {
            universe: lattice.universe().set(),
            min_n: lattice.min_n(),
            max_n: lattice.max_n(),
            minimal: minimal_impossibilities(lattice),
            unconfirmed: unconfirmed_impossibilities(lattice),
            count_inconsistent: count_inconsistent(lattice),
            complete: lattice.is_complete(),
        }
    }

    /// Minimal impossibility counts per size, from `min_n` to `max_n`.
    pub fn histogram(&self) -> Vec<(u32, usize)> {
        (self.min_n..=self.max_n)
            .map(|n| (n, self.minimal.iter().filter(|m| m.size == n).count()))
            .collect()
    }
}

pub fn caveat(max_n: u32) -> String {
    format!(
        "Exhaustive only for domains of at most {max_n} elements: an axiom set consistent at \
         every size searched may still fail on a larger domain."
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

/// Table with one row per minimal impossibility and one column per catalog
/// axiom, `x` marking members.
pub fn text(results: &SearchResults) -> String {
    let mut out = String::new();
    let labels: Vec<&str> = AxiomId::ALL.iter().map(|a| a.label()).collect();
    out.push_str(&format!("{:>4} {:>4}", "No.", "Size"));
    for l in &labels {
        out.push_str(&format!(" {l}"));
    }
    out.push('\n');
    for (i, m) in results.minimal.iter().enumerate() {
        out.push_str(&format!("{:>4} {:>4}", i + 1, m.size));
        for (a, l) in AxiomId::ALL.iter().zip(&labels) {
            let mark = if m.axioms.contains(*a) { "x" } else { "." };
            out.push_str(&format!(" {mark:^width$}", width = l.len()));
        }
        out.push('\n');
    }
    out.push('\n');
    let hist: Vec<String> = results
        .histogram()
        .iter()
        .map(|(n, k)| format!("n={n}: {k}"))
        .collect();
    out.push_str(&format!(
        "{} minimal impossibilities ({})\n",
        results.minimal.len(),
        hist.join(", ")
    ));
    out.push_str(&format!("{} inconsistent axiom sets\n", results.count_inconsistent));
    if !results.complete {
        out.push_str(&format!(
            "PARTIAL: some cells are unknown or timed out; {} candidates unconfirmed\n",
            results.unconfirmed.len()
        ));
    }
    out.push_str(&caveat(results.max_n));
    out.push('\n');
    out
}

/// `Size` followed by one 0/1 column per catalog axiom.
pub fn csv(results: &SearchResults) -> String {
    let mut out = String::from("Size");
    for a in AxiomId::ALL {
        out.push(',');
        out.push_str(a.name());
    }
    out.push('\n');
    for m in &results.minimal {
        out.push_str(&m.size.to_string());
        for a in AxiomId::ALL {
            out.push_str(if m.axioms.contains(a) { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsvError {
    #[error("line {0}: {1}")]
    Line(usize, String),
}

pub fn parse_csv(text: &str) -> Result<Vec<MinimalImpossibility>, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns.first() != Some(&"Size") {
        return Err(CsvError::Line(1, "header must start with `Size`".into()));
    }
    let axioms = columns[1..]
        .iter()
        .map(|c| c.parse::<AxiomId>().map_err(|e| CsvError::Line(1, e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            return Err(CsvError::Line(i + 1, format!("expected {} fields", columns.len())));
        }
        let size = fields[0]
            .parse()
            .map_err(|_| CsvError::Line(i + 1, format!("bad size `{}`", fields[0])))?;
        let mut set = AxiomSet::EMPTY;
        for (a, f) in axioms.iter().zip(&fields[1..]) {
            match *f {
                "1" | "x" => set = set.with(*a),
                "0" | "" | "." => {}
                other => return Err(CsvError::Line(i + 1, format!("bad mark `{other}`"))),
            }
        }
        out.push(MinimalImpossibility { axioms: set, size });
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEntry {
    size: u32,
    axioms: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCell {
    axioms: Vec<String>,
    n: u32,
    status: String,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonReport {
    universe: Vec<String>,
    min_n: u32,
    max_n: u32,
    complete: bool,
    caveat: String,
    count_inconsistent: u64,
    minimal_impossibilities: Vec<JsonEntry>,
    unconfirmed: Vec<JsonEntry>,
    /// Solved and witnessed cells only; pruned cells follow from these.
    cells: Vec<JsonCell>,
}

fn names(s: AxiomSet) -> Vec<String> {
    s.iter().map(|a| a.name().to_string()).collect()
}

fn entries(list: &[MinimalImpossibility]) -> Vec<JsonEntry> {
    list.iter()
        .map(|m| JsonEntry {
            size: m.size,
            axioms: names(m.axioms),
        })
        .collect()
}

/// Results plus the provenance of every solved or witnessed cell.
pub fn json(results: &SearchResults, lattice: Option<&Lattice>) -> String {
    let mut cells = Vec::new();
    if let Some(lattice) = lattice {
        for n in lattice.sizes() {
            for c in 0..lattice.universe().num_cells() as u32 {
                let provenance = match lattice.provenance_dense(c, n) {
                    Provenance::Solved => "solved".to_string(),
                    Provenance::Witnessed { from } => format!("witness of {from}"),
                    _ => continue,
                };
                let status: Status = lattice.status_dense(c, n);
                cells.push(JsonCell {
                    axioms: names(lattice.universe().expand(c)),
                    n,
                    status: status.to_string(),
                    provenance,
                });
            }
        }
    }
    let report = JsonReport {
        universe: names(results.universe),
        min_n: results.min_n,
        max_n: results.max_n,
        complete: results.complete,
        caveat: caveat(results.max_n),
        count_inconsistent: results.count_inconsistent,
        minimal_impossibilities: entries(&results.minimal),
        unconfirmed: entries(&results.unconfirmed),
        cells,
    };
    serde_json::to_string_pretty(&report).expect("plain data serializes")
}

/// Minimal impossibilities listed in a JSON report.
pub fn parse_json(text: &str) -> Result<Vec<MinimalImpossibility>, String> {
    let report: JsonReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
    report
        .minimal_impossibilities
        .into_iter()
        .map(|e| {
            let axioms = e
                .axioms
                .iter()
                .map(|a| a.parse::<AxiomId>().map_err(|e| e.to_string()))
                .collect::<Result<AxiomSet, _>>()?;
            Ok(MinimalImpossibility { axioms, size: e.size })
        })
        .collect()
}
