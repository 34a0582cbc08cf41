use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use super::checkpoint::{self, CheckpointError, CheckpointWriter, Header, Record};
use super::lattice::{Lattice, LatticeError, Outcome, Status};
use crate::axioms::{clauses_for, AxiomSet};
use crate::model::{order_units, DomainSize, ElementOrder};
use crate::mslsp::certified_axioms;
use setpref_sat::{CnfFormula, Lit, Solver, SolverConfig, Var, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Smallest size searched.
    pub min_n: u32,
    pub max_n: u32,
    /// Parallel solver threads.
    pub workers: usize,
    /// Cells handed out per round. Fixed independently of `workers` so the
    /// result does not depend on the thread count.
    pub batch_size: usize,
    /// Solved cells between direction switches within a size. `None`
    /// switches once per full sweep of the subsets.
    pub switch_interval: Option<u64>,
    pub conflict_budget: Option<u64>,
    /// Wall-clock budget per cell. Makes timeouts machine dependent.
    pub time_budget: Option<Duration>,
    pub seed: u64,
    /// Apply the four propagation rules. Off means every cell is solved.
    pub pruning: bool,
    /// Mark the largest set satisfied by each model found as possible.
    pub witness_lifting: bool,
    /// Reuse one solver per worker and size, switching axioms on through
    /// assumptions. Verdicts are unaffected; witnesses may vary with the
    /// worker count.
    pub incremental: bool,
    /// Fix the element order to the canonical one in cells containing
    /// LIN_E. Every catalog axiom is invariant under renaming elements, so
    /// verdicts are unchanged.
    pub fix_order: bool,
    pub checkpoint: Option<PathBuf>,
    /// Axioms allowed to move verdicts across sizes. `None` uses the
    /// catalog sources that pass the guard check.
    pub certified: Option<AxiomSet>,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            min_n: 2,
            max_n: 4,
            workers: 1,
            batch_size: 32,
            switch_interval: None,
            conflict_budget: None,
            time_budget: None,
            seed: 0,
            pruning: true,
            witness_lifting: true,
            incremental: false,
            fix_order: true,
            checkpoint: None,
            certified: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("the axiom universe is empty")]
    EmptyUniverse,
    #[error("bad size range {0}..={1}")]
    Sizes(u32, u32),
    #[error("solver model for {set} at n={n} violates the instance")]
    InvalidModel { set: AxiomSet, n: u32 },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub solved: u64,
    pub sat: u64,
    pub unsat: u64,
    pub timeout: u64,
    pub witnessed: u64,
    pub pruned: u64,
    pub replayed: u64,
}

/// Progress notice after each round.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub n: u32,
    pub resolved: usize,
    pub cells: usize,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SearchRun {
    pub lattice: Lattice,
    pub stats: SearchStats,
    pub config: SearchConfig,
    pub elapsed: Duration,
}

/// Clauses of every universe member at one size.
struct LevelCnf {
    n: DomainSize,
    per_axiom: Vec<CnfFormula>,
    /// Selector-guarded conjunction, for incremental solving.
    guarded: Option<CnfFormula>,
    /// Dense bit of LIN_E and the units fixing the canonical order.
    lin_e: Option<u32>,
    order: Vec<Lit>,
}

impl LevelCnf {
    fn new(universe: &[crate::AxiomId], n: DomainSize, incremental: bool, fix_order: bool) -> LevelCnf {
        let per_axiom: Vec<CnfFormula> = universe.iter().map(|&a| clauses_for(a, n)).collect();
        let guarded = incremental.then(|| {
            let base = n.num_vars();
            let mut cnf = CnfFormula::new(base + per_axiom.len() as u32);
            for (i, part) in per_axiom.iter().enumerate() {
                let sel = Var::new(base + 1 + i as u32).neg();
                for c in part.clauses() {
                    let mut c = c.clone();
                    c.push(sel);
                    cnf.add_clause(c);
                }
            }
            cnf
        });
        let lin_e = fix_order
            .then(|| universe.iter().position(|&a| a == crate::AxiomId::LinE))
            .flatten()
            .map(|i| i as u32);
        LevelCnf {
            n,
            per_axiom,
            guarded,
            lin_e,
            order: order_units(&ElementOrder::canonical(n)),
        }
    }

    fn order_for(&self, cell: u32) -> &[Lit] {
        match self.lin_e {
            Some(i) if cell >> i & 1 == 1 => &self.order,
            _ => &[],
        }
    }

    /// Dense mask of the members whose clauses the assignment satisfies.
    fn satisfied(&self, assignment: &[bool]) -> u32 {
        self.per_axiom
            .iter()
            .enumerate()
            .filter(|(_, cnf)| cnf.is_satisfied_by(assignment))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

struct CellResult {
    cell: u32,
    outcome: Outcome,
    witness: Option<u32>,
}

fn solver_config(cfg: &SearchConfig) -> SolverConfig {
    SolverConfig {
        conflict_budget: cfg.conflict_budget,
        time_budget: cfg.time_budget,
        seed: cfg.seed,
        ..SolverConfig::default()
    }
}

fn finish(level: &LevelCnf, cell: u32, verdict: Verdict) -> CellResult {
    match verdict {
        Verdict::Sat(model) => CellResult {
            cell,
            outcome: Outcome::Sat,
            witness: Some(level.satisfied(&model.as_slice()[..level.n.num_vars() as usize])),
        },
        Verdict::Unsat => CellResult {
            cell,
            outcome: Outcome::Unsat,
            witness: None,
        },
        Verdict::Unknown(_) => CellResult {
            cell,
            outcome: Outcome::Timeout,
            witness: None,
        },
    }
}

fn solve_fresh(level: &LevelCnf, cell: u32, scfg: &SolverConfig) -> CellResult {
    let clauses = level
        .per_axiom
        .iter()
        .enumerate()
        .filter(|(i, _)| cell >> i & 1 == 1)
        .flat_map(|(_, cnf)| cnf.clauses().iter().map(Vec::as_slice))
        .chain(level.order_for(cell).iter().map(std::slice::from_ref));
    let mut solver = Solver::from_clauses(level.n.num_vars(), clauses, scfg);
    finish(level, cell, solver.solve())
}

fn solve_incremental(level: &LevelCnf, pool: &Mutex<Vec<Solver>>, cell: u32, scfg: &SolverConfig) -> CellResult {
    let guarded = level.guarded.as_ref().expect("built for incremental runs");
    let taken = pool.lock().expect("solver pool").pop();
    let mut solver = taken.unwrap_or_else(|| Solver::new(guarded, scfg));
    let base = level.n.num_vars();
    let assumptions: Vec<Lit> = (0..level.per_axiom.len() as u32)
        .map(|i| Lit::new(Var::new(base + 1 + i), cell >> i & 1 == 1))
        .chain(level.order_for(cell).iter().copied())
        .collect();
    let verdict = solver.solve_under(&assumptions);
    let result = finish(level, cell, verdict);
    pool.lock().expect("solver pool").push(solver);
    result
}

/// Subsets ordered by size, then by index.
fn sweep_order(cells: usize) -> Vec<u32> {
    let mut order: Vec<u32> = (0..cells as u32).collect();
    order.sort_by_key(|&c| (c.count_ones(), c));
    order
}

pub fn search(universe: AxiomSet, cfg: &SearchConfig) -> Result<SearchRun, SearchError> {
    search_with_progress(universe, cfg, &mut |_| {})
}

/// Walks the sizes in increasing order. Within a size, cells are taken in
/// rounds of `batch_size` from the ascending or descending end of the
/// sweep order, solved in parallel, and applied to the lattice in order.
pub fn search_with_progress(
    universe: AxiomSet,
    cfg: &SearchConfig,
    progress: &mut dyn FnMut(&Progress),
) -> Result<SearchRun, SearchError> {
    if universe.is_empty() {
        return Err(SearchError::EmptyUniverse);
    }
    if cfg.min_n < 1 || cfg.min_n > cfg.max_n || DomainSize::new(cfg.max_n).is_err() {
        return Err(SearchError::Sizes(cfg.min_n, cfg.max_n));
    }
    let started = Instant::now();
    let certified = cfg.certified.unwrap_or_else(certified_axioms);
    let mut lattice = Lattice::new(universe, cfg.min_n, cfg.max_n, certified);
    let mut stats = SearchStats::default();
    let cells = lattice.universe().num_cells();
    let mut solved_at = vec![0u64; (cfg.max_n + 1) as usize];

    let header = Header {
        universe,
        min_n: cfg.min_n,
        max_n: cfg.max_n,
    };
    let mut writer = match &cfg.checkpoint {
        Some(path) => {
            let records = checkpoint::read(path, &header)?;
            for record in &records {
                if let Record::Solved { n, .. } = record {
                    solved_at[*n as usize] += 1;
                }
            }
            stats.replayed = records.len() as u64;
            checkpoint::replay(&mut lattice, &records, cfg.pruning)?;
            Some(CheckpointWriter::open(path, &header)?)
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    let scfg = solver_config(cfg);
    let order = sweep_order(cells);
    let interval = cfg.switch_interval.unwrap_or(cells as u64).max(1);
    let members = lattice.universe().members().to_vec();

    for size in cfg.min_n..=cfg.max_n {
        let n = DomainSize::with_bound(size, crate::model::HARD_MAX_N).map_err(|_| SearchError::Sizes(cfg.min_n, cfg.max_n))?;
        let level = LevelCnf::new(&members, n, cfg.incremental, cfg.fix_order);
        let solvers = Mutex::new(Vec::new());
        let (mut lo, mut hi) = (0usize, order.len());
        loop {
            let ascending = (solved_at[size as usize] / interval) % 2 == 0;
            let mut batch = Vec::with_capacity(cfg.batch_size);
            while lo < hi && batch.len() < cfg.batch_size.max(1) {
                let c = if ascending {
                    lo += 1;
                    order[lo - 1]
                } else {
                    hi -= 1;
                    order[hi]
                };
                if lattice.status_dense(c, size) == Status::Unknown {
                    batch.push(c);
                }
            }
            if batch.is_empty() {
                break;
            }
            let results: Vec<CellResult> = pool.install(|| {
                batch
                    .par_iter()
                    .map(|&c| {
                        if cfg.incremental {
                            solve_incremental(&level, &solvers, c, &scfg)
                        } else {
                            solve_fresh(&level, c, &scfg)
                        }
                    })
                    .collect()
            });
            let mut records = Vec::with_capacity(results.len());
            for r in &results {
                stats.solved += 1;
                let set = lattice.universe().expand(r.cell);
                records.push(Record::Solved {
                    set,
                    n: size,
                    outcome: r.outcome,
                    seed: cfg.seed,
                });
                match r.outcome {
                    Outcome::Sat => stats.sat += 1,
                    Outcome::Unsat => stats.unsat += 1,
                    Outcome::Timeout => stats.timeout += 1,
                }
                stats.pruned += lattice.record(r.cell, size, r.outcome, cfg.pruning)? as u64;
                if let Some(w) = r.witness {
                    if w & r.cell != r.cell {
                        return Err(SearchError::InvalidModel { set, n: size });
                    }
                    if cfg.pruning && cfg.witness_lifting && w != r.cell {
                        let newly = lattice.record_witness(w, r.cell, size, cfg.pruning)?;
                        if newly > 0 {
                            stats.witnessed += 1;
                            stats.pruned += newly as u64 - 1;
                            records.push(Record::Witness {
                                set: lattice.universe().expand(w),
                                n: size,
                                seed: cfg.seed,
                                from: set,
                            });
                        }
                    }
                }
            }
            solved_at[size as usize] += results.len() as u64;
            if let Some(w) = writer.as_mut() {
                w.append(&records)?;
            }
            progress(&Progress {
                n: size,
                resolved: cells - lattice.count(size, Status::Unknown),
                cells,
                stats,
                elapsed: started.elapsed(),
            });
        }
    }
    Ok(SearchRun {
        lattice,
        stats,
        config: cfg.clone(),
        elapsed: started.elapsed(),
    })
}
