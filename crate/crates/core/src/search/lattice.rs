use std::fmt;

use thiserror::Error;

use crate::axioms::{AxiomId, AxiomSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Unknown,
    Possible,
    Impossible,
    Timeout,
}

impl Status {
    pub fn is_resolved(self) -> bool {
        matches!(self, Status::Possible | Status::Impossible)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Unknown => "unknown",
            Status::Possible => "possible",
            Status::Impossible => "impossible",
            Status::Timeout => "timeout",
        })
    }
}

/// The four monotone pruning rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Impossible at `n` implies impossible at every larger size.
    LargerSize,
    /// Impossible implies impossible for every superset.
    Superset,
    /// Possible at `n` implies possible at every smaller size.
    SmallerSize,
    /// Possible implies possible for every subset.
    Subset,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::LargerSize => 1,
            Rule::Superset => 2,
            Rule::SmallerSize => 3,
            Rule::Subset => 4,
        }
    }

    fn from_number(k: u8) -> Rule {
        match k {
            1 => Rule::LargerSize,
            2 => Rule::Superset,
            3 => Rule::SmallerSize,
            _ => Rule::Subset,
        }
    }
}

/// Why a cell has its status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    None,
    Solved,
    /// Possible because a model found for `from` at the same size happens to
    /// satisfy this larger set too.
    Witnessed { from: AxiomSet },
    /// Derived from the cell `(from, from_n)` by `rule`.
    Pruned { rule: Rule, from: AxiomSet, from_n: u32 },
}

/// Packed cell: status, provenance tag, source size, source cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Cell {
    status: u8,
    tag: u8,
    from_n: u8,
    from: u32,
}

const UNKNOWN: u8 = 0;
const POSSIBLE: u8 = 1;
const IMPOSSIBLE: u8 = 2;
const TIMEOUT: u8 = 3;

const TAG_NONE: u8 = 0;
const TAG_SOLVED: u8 = 1;
const TAG_WITNESSED: u8 = 2;
// Tags 3..=6 are pruning rules 1..=4.
const TAG_RULE_BASE: u8 = 2;

fn status_of(code: u8) -> Status {
    match code {
        UNKNOWN => Status::Unknown,
        POSSIBLE => Status::Possible,
        IMPOSSIBLE => Status::Impossible,
        _ => Status::Timeout,
    }
}

/// The axioms under search, with a dense numbering of their subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    set: AxiomSet,
    members: Vec<AxiomId>,
}

impl Universe {
    pub fn new(set: AxiomSet) -> Universe {
        Universe {
            set,
            members: set.iter().collect(),
        }
    }

    pub fn set(&self) -> AxiomSet {
        self.set
    }

    pub fn members(&self) -> &[AxiomId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of subsets.
    pub fn num_cells(&self) -> usize {
        1 << self.members.len()
    }

    /// Axiom set of a dense subset index.
    pub fn expand(&self, c: u32) -> AxiomSet {
        self.members
            .iter()
            .enumerate()
            .filter(|(i, _)| c >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect()
    }

    /// Dense index of a subset; `None` if it leaves the universe.
    pub fn compress(&self, s: AxiomSet) -> Option<u32> {
        if !s.is_subset_of(self.set) {
            return None;
        }
        Some(
            self.members
                .iter()
                .enumerate()
                .filter(|(_, &a)| s.contains(a))
                .fold(0, |acc, (i, _)| acc | 1 << i),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("{set} at n={n} is already {existing} but was derived {incoming}; the encoding is inconsistent")]
    Conflict {
        set: AxiomSet,
        n: u32,
        existing: Status,
        incoming: Status,
    },
    #[error("n={0} is outside the searched sizes")]
    Size(u32),
    #[error("{0} is not inside the search universe")]
    Outside(AxiomSet),
}

/// Outcome of solving one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Sat,
    Unsat,
    Timeout,
}

/// Status of every (axiom subset, domain size) pair for one universe and a
/// range of sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    universe: Universe,
    min_n: u32,
    max_n: u32,
    /// Axioms that may move verdicts across sizes.
    certified: AxiomSet,
    /// Dense certified-member mask.
    certified_dense: u32,
    levels: Vec<Vec<Cell>>,
}

impl Lattice {
    pub fn new(universe: AxiomSet, min_n: u32, max_n: u32, certified: AxiomSet) -> Lattice {
        assert!(min_n >= 1 && min_n <= max_n, "bad size range {min_n}..={max_n}");
        let universe = Universe::new(universe);
        let cells = universe.num_cells();
        let certified_dense = universe
            .compress(AxiomSet::from_mask(certified.mask() & universe.set().mask()))
            .expect("intersection lies inside the universe");
        Lattice {
            levels: vec![vec![Cell::default(); cells]; (max_n - min_n + 1) as usize],
            universe,
            min_n,
            max_n,
            certified,
            certified_dense,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn min_n(&self) -> u32 {
        self.min_n
    }

    pub fn max_n(&self) -> u32 {
        self.max_n
    }

    pub fn certified(&self) -> AxiomSet {
        self.certified
    }

    pub fn sizes(&self) -> std::ops::RangeInclusive<u32> {
        self.min_n..=self.max_n
    }

    fn cell(&self, c: u32, n: u32) -> &Cell {
        &self.levels[(n - self.min_n) as usize][c as usize]
    }

    fn cell_mut(&mut self, c: u32, n: u32) -> &mut Cell {
        &mut self.levels[(n - self.min_n) as usize][c as usize]
    }

    /// Status by dense index.
    pub fn status_dense(&self, c: u32, n: u32) -> Status {
        status_of(self.cell(c, n).status)
    }

    pub fn status(&self, s: AxiomSet, n: u32) -> Result<Status, LatticeError> {
        let c = self.universe.compress(s).ok_or(LatticeError::Outside(s))?;
        if !self.sizes().contains(&n) {
            return Err(LatticeError::Size(n));
        }
        Ok(self.status_dense(c, n))
    }

    pub fn provenance_dense(&self, c: u32, n: u32) -> Provenance {
        let cell = self.cell(c, n);
        let from = self.universe.expand(cell.from);
        match cell.tag {
            TAG_NONE => Provenance::None,
            TAG_SOLVED => Provenance::Solved,
            TAG_WITNESSED => Provenance::Witnessed { from },
            k => Provenance::Pruned {
                rule: Rule::from_number(k - TAG_RULE_BASE),
                from,
                from_n: u32::from(cell.from_n),
            },
        }
    }

    pub fn provenance(&self, s: AxiomSet, n: u32) -> Result<Provenance, LatticeError> {
        let c = self.universe.compress(s).ok_or(LatticeError::Outside(s))?;
        if !self.sizes().contains(&n) {
            return Err(LatticeError::Size(n));
        }
        Ok(self.provenance_dense(c, n))
    }

    /// Whether every member of the dense subset `c` is certified.
    fn moves_across_sizes(&self, c: u32) -> bool {
        c & !self.certified_dense == 0
    }

    fn conflict(&self, c: u32, n: u32, incoming: Status) -> LatticeError {
        LatticeError::Conflict {
            set: self.universe.expand(c),
            n,
            existing: self.status_dense(c, n),
            incoming,
        }
    }

    /// Records a solver verdict for `(c, n)` and, when `prune` is set,
    /// propagates it. Returns the number of cells newly resolved by pruning.
    pub fn record(&mut self, c: u32, n: u32, outcome: Outcome, prune: bool) -> Result<usize, LatticeError> {
        let current = self.cell(c, n).status;
        let target = match outcome {
            Outcome::Sat => POSSIBLE,
            Outcome::Unsat => IMPOSSIBLE,
            Outcome::Timeout => {
                if current == UNKNOWN {
                    *self.cell_mut(c, n) = Cell {
                        status: TIMEOUT,
                        tag: TAG_SOLVED,
                        from_n: 0,
                        from: 0,
                    };
                }
                return Ok(0);
            }
        };
        match current {
            UNKNOWN | TIMEOUT => {
                *self.cell_mut(c, n) = Cell {
                    status: target,
                    tag: TAG_SOLVED,
                    from_n: 0,
                    from: 0,
                };
            }
            s if s == target => return Ok(0),
            _ => return Err(self.conflict(c, n, status_of(target))),
        }
        if !prune {
            return Ok(0);
        }
        if target == POSSIBLE {
            self.close_possible(c, n)
        } else {
            self.close_impossible(c, n)
        }
    }

    /// Marks `witness` possible at `n` because a model of `from` satisfies
    /// it, then propagates. Returns the number of cells newly resolved.
    pub fn record_witness(&mut self, witness: u32, from: u32, n: u32, prune: bool) -> Result<usize, LatticeError> {
        match self.cell(witness, n).status {
            UNKNOWN | TIMEOUT => {
                *self.cell_mut(witness, n) = Cell {
                    status: POSSIBLE,
                    tag: TAG_WITNESSED,
                    from_n: n as u8,
                    from,
                };
            }
            POSSIBLE => return Ok(0),
            _ => return Err(self.conflict(witness, n, Status::Possible)),
        }
        Ok(1 + if prune { self.close_possible(witness, n)? } else { 0 })
    }

    /// Rules 4 and 3 from a freshly possible cell. Stops at cells already
    /// possible, whose own closure has been taken.
    fn close_possible(&mut self, c: u32, n: u32) -> Result<usize, LatticeError> {
        let mut stack = vec![(c, n)];
        let mut count = 0;
        while let Some((d, m)) = stack.pop() {
            let mut next: Vec<(u32, u32, Rule)> = Vec::new();
            let mut bits = d;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                next.push((d ^ b, m, Rule::Subset));
            }
            if m > self.min_n && self.moves_across_sizes(d) {
                next.push((d, m - 1, Rule::SmallerSize));
            }
            for (e, k, rule) in next {
                match self.cell(e, k).status {
                    POSSIBLE => {}
                    IMPOSSIBLE => return Err(self.conflict(e, k, Status::Possible)),
                    _ => {
                        *self.cell_mut(e, k) = Cell {
                            status: POSSIBLE,
                            tag: TAG_RULE_BASE + rule.number(),
                            from_n: n as u8,
                            from: c,
                        };
                        count += 1;
                        stack.push((e, k));
                    }
                }
            }
        }
        Ok(count)
    }

    /// Rules 2 and 1 from a freshly impossible cell.
    fn close_impossible(&mut self, c: u32, n: u32) -> Result<usize, LatticeError> {
        let full = (self.universe.num_cells() - 1) as u32;
        let mut stack = vec![(c, n)];
        let mut count = 0;
        while let Some((d, m)) = stack.pop() {
            let mut next: Vec<(u32, u32, Rule)> = Vec::new();
            let mut bits = full & !d;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                next.push((d | b, m, Rule::Superset));
            }
            if m < self.max_n && self.moves_across_sizes(d) {
                next.push((d, m + 1, Rule::LargerSize));
            }
            for (e, k, rule) in next {
                match self.cell(e, k).status {
                    IMPOSSIBLE => {}
                    POSSIBLE => return Err(self.conflict(e, k, Status::Impossible)),
                    _ => {
                        *self.cell_mut(e, k) = Cell {
                            status: IMPOSSIBLE,
                            tag: TAG_RULE_BASE + rule.number(),
                            from_n: n as u8,
                            from: c,
                        };
                        count += 1;
                        stack.push((e, k));
                    }
                }
            }
        }
        Ok(count)
    }

    /// Cells at size `n` with the given status, as dense indices.
    pub fn cells_with(&self, n: u32, status: Status) -> impl Iterator<Item = u32> + '_ {
        self.levels[(n - self.min_n) as usize]
            .iter()
            .enumerate()
            .filter(move |(_, cell)| status_of(cell.status) == status)
            .map(|(c, _)| c as u32)
    }

    pub fn count(&self, n: u32, status: Status) -> usize {
        self.cells_with(n, status).count()
    }

    /// Solved cells in size-then-index order.
    pub fn solved_cells(&self) -> impl Iterator<Item = (AxiomSet, u32, Status)> + '_ {
        self.sizes().flat_map(move |n| {
            self.levels[(n - self.min_n) as usize]
                .iter()
                .enumerate()
                .filter(|(_, cell)| cell.tag == TAG_SOLVED)
                .map(move |(c, cell)| (self.universe.expand(c as u32), n, status_of(cell.status)))
        })
    }

    /// True when no cell is unknown or timed out.
    pub fn is_complete(&self) -> bool {
        self.levels
            .iter()
            .all(|level| level.iter().all(|cell| cell.status == POSSIBLE || cell.status == IMPOSSIBLE))
    }

    /// Equal statuses everywhere, ignoring provenance.
    pub fn same_statuses(&self, other: &Lattice) -> bool {
        self.universe == other.universe
            && self.min_n == other.min_n
            && self.max_n == other.max_n
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.status == y.status))
    }
}
