//! Conflict-driven clause-learning solver.
//!
//! Two watched literals, first-UIP learning with recursive minimization,
//! VSIDS branching with phase saving, geometric (or Luby) restarts and
//! activity/LBD based learnt-clause reduction. Every learnt clause and every
//! deletion can be logged as a DRAT step.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cnf::{normalize_clause, CnfFormula, Lit, Var};
use crate::drat::DratProof;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RestartPolicy {
    /// Restart after `first` conflicts, then multiply the interval by `factor`.
    Geometric { first: u64, factor: f64 },
    /// Luby sequence scaled by `unit` conflicts.
    Luby { unit: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Wall-clock budget per solve call.
    pub time_budget: Option<Duration>,
    /// Conflict budget per solve call; unlike the time budget this keeps
    /// `Unknown` verdicts reproducible.
    pub conflict_budget: Option<u64>,
    /// Approximate cap on clause-database memory.
    pub memory_cap_bytes: Option<usize>,
    pub restart: RestartPolicy,
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Perturbs the initial branching order; 0 keeps the natural order.
    pub seed: u64,
    pub emit_proof: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_budget: None,
            conflict_budget: None,
            memory_cap_bytes: None,
            restart: RestartPolicy::Geometric {
                first: 100,
                factor: 1.5,
            },
            var_decay: 0.95,
            clause_decay: 0.999,
            seed: 0,
            emit_proof: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnknownReason {
    Timeout,
    Memory,
}

/// A total assignment, indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn from_values(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn value(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.values
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Model),
    Unsat,
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsat)
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Verdict::Sat(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("solver produced a model that falsifies clause #{clause}")]
    InvalidModel { clause: usize },
    #[error("a proof was requested but the formula is not unsatisfiable")]
    NoRefutation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

/// Solves `cnf`, re-checking any model against every clause before
/// returning it.
pub fn solve(cnf: &CnfFormula, config: &SolverConfig) -> Result<Verdict, SolveError> {
    let mut solver = Solver::new(cnf, config);
    let verdict = solver.solve();
    check_verdict(cnf, verdict)
}

/// Solves `cnf` and returns its DRAT refutation. Fails unless the verdict is
/// `Unsat`.
pub fn emit_proof(cnf: &CnfFormula, config: &SolverConfig) -> Result<DratProof, SolveError> {
    let config = SolverConfig {
        emit_proof: true,
        ..config.clone()
    };
    let mut solver = Solver::new(cnf, &config);
    match check_verdict(cnf, solver.solve())? {
        Verdict::Unsat => Ok(solver.take_proof().unwrap_or_default()),
        _ => Err(SolveError::NoRefutation),
    }
}

pub(crate) fn check_verdict(cnf: &CnfFormula, verdict: Verdict) -> Result<Verdict, SolveError> {
    if let Verdict::Sat(model) = &verdict {
        if let Some(clause) = cnf.first_falsified(model.as_slice()) {
            return Err(SolveError::InvalidModel { clause });
        }
    }
    Ok(verdict)
}

const NO_REASON: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    Undef,
    True,
    False,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Debug, Clone, Copy)]
struct Header {
    start: u32,
    len: u32,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f64,
}

#[derive(Default)]
struct ClauseDb {
    lits: Vec<Lit>,
    headers: Vec<Header>,
    garbage: usize,
}

impl ClauseDb {
    fn lits(&self, cref: u32) -> &[Lit] {
        let h = &self.headers[cref as usize];
        &self.lits[h.start as usize..(h.start + h.len) as usize]
    }

    fn push(&mut self, lits: &[Lit], learnt: bool, lbd: u32) -> u32 {
        let cref = self.headers.len() as u32;
        self.headers.push(Header {
            start: self.lits.len() as u32,
            len: lits.len() as u32,
            learnt,
            deleted: false,
            lbd,
            activity: 0.0,
        });
        self.lits.extend_from_slice(lits);
        cref
    }

    fn bytes(&self) -> usize {
        self.lits.len() * std::mem::size_of::<Lit>()
            + self.headers.len() * std::mem::size_of::<Header>()
    }

    /// Moves live literals to the front of the arena. Clause references stay
    /// valid because they index headers, not literal offsets.
    fn compact(&mut self) {
        let mut fresh = Vec::with_capacity(self.lits.len() - self.garbage);
        for h in self.headers.iter_mut() {
            if h.deleted {
                h.len = 0;
                h.start = 0;
                continue;
            }
            let start = fresh.len() as u32;
            fresh.extend_from_slice(&self.lits[h.start as usize..(h.start + h.len) as usize]);
            h.start = start;
        }
        self.lits = fresh;
        self.garbage = 0;
    }
}

/// Indexed binary max-heap over variable activities.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<u32>,
}

const NOT_IN_HEAP: u32 = u32::MAX;

impl VarHeap {
    fn with_vars(n: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![NOT_IN_HEAP; n],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != NOT_IN_HEAP
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len() as u32;
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = NOT_IN_HEAP;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top as usize)
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v] as usize, act);
        }
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = i as u32;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let len = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len
                && act[self.heap[right] as usize] > act[self.heap[left] as usize]
            {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = i as u32;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i as u32;
    }
}

pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    ok: bool,

    db: ClauseDb,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,

    values: Vec<Value>,
    level: Vec<u32>,
    reason: Vec<u32>,
    polarity: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,

    seen: Vec<bool>,
    analyze_stack: Vec<Lit>,
    analyze_toclear: Vec<Lit>,
    lbd_stamp: Vec<u64>,
    lbd_counter: u64,

    max_learnts: f64,
    num_original: usize,
    proof: Option<DratProof>,
    stats: Stats,
}

impl Solver {
    pub fn new(cnf: &CnfFormula, config: &SolverConfig) -> Solver {
        Solver::from_clauses(cnf.num_vars(), cnf.clauses().iter().map(Vec::as_slice), config)
    }

    /// Loads clauses straight from borrowed slices, skipping the copy into a
    /// [`CnfFormula`].
    pub fn from_clauses<'a>(
        num_vars: u32,
        clauses: impl IntoIterator<Item = &'a [Lit]>,
        config: &SolverConfig,
    ) -> Solver {
        let n = num_vars as usize;
        let mut solver = Solver {
            config: config.clone(),
            num_vars: n,
            ok: true,
            db: ClauseDb::default(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            values: vec![Value::Undef; 2 * n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            polarity: vec![false; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::with_vars(n),
            seen: vec![false; n],
            analyze_stack: Vec::new(),
            analyze_toclear: Vec::new(),
            lbd_stamp: vec![0; n + 1],
            lbd_counter: 0,
            max_learnts: 0.0,
            num_original: 0,
            proof: config.emit_proof.then(DratProof::new),
            stats: Stats::default(),
        };
        if config.seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for act in solver.activity.iter_mut() {
                *act = rng.gen::<f64>() * 1e-5;
            }
        }
        for v in 0..n {
            solver.heap.insert(v, &solver.activity);
        }
        for clause in clauses {
            if !solver.ok {
                break;
            }
            if let Some(lits) = normalize_clause(clause) {
                solver.add_original(&lits);
            }
        }
        solver.max_learnts = (solver.num_original as f64 / 3.0).max(2000.0);
        solver
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn take_proof(&mut self) -> Option<DratProof> {
        self.proof.take()
    }

    fn add_original(&mut self, lits: &[Lit]) {
        match lits.len() {
            0 => {
                self.ok = false;
                self.log_add(&[]);
            }
            1 => match self.lit_value(lits[0]) {
                Value::True => {}
                Value::False => {
                    self.ok = false;
                    self.log_add(&[]);
                }
                Value::Undef => self.assign(lits[0], NO_REASON),
            },
            _ => {
                let cref = self.db.push(lits, false, 0);
                self.attach(cref);
                self.num_original += 1;
            }
        }
    }

    fn log_add(&mut self, lits: &[Lit]) {
        if let Some(proof) = self.proof.as_mut() {
            proof.add(lits);
        }
    }

    fn log_delete(&mut self, lits: &[Lit]) {
        if let Some(proof) = self.proof.as_mut() {
            proof.delete(lits);
        }
    }

    fn attach(&mut self, cref: u32) {
        let lits = self.db.lits(cref);
        let (a, b) = (lits[0], lits[1]);
        self.watches[a.code()].push(Watcher { cref, blocker: b });
        self.watches[b.code()].push(Watcher { cref, blocker: a });
    }

    #[inline]
    fn lit_value(&self, lit: Lit) -> Value {
        self.values[lit.code()]
    }

    #[inline]
    fn assign(&mut self, lit: Lit, reason: u32) {
        let v = lit.var().index();
        self.values[lit.code()] = Value::True;
        self.values[(!lit).code()] = Value::False;
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Unit propagation; returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.values[w.blocker.code()] == Value::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let h = self.db.headers[w.cref as usize];
                let start = h.start as usize;
                let end = start + h.len as usize;
                {
                    let lits = &mut self.db.lits[start..end];
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.db.lits[start];
                if first != w.blocker && self.values[first.code()] == Value::True {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                for k in start + 2..end {
                    let lit = self.db.lits[k];
                    if self.values[lit.code()] != Value::False {
                        self.db.lits.swap(start + 1, k);
                        self.watches[lit.code()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        continue 'watchers;
                    }
                }
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                if self.values[first.code()] == Value::False {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.assign(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let h = &mut self.db.headers[cref as usize];
        if !h.learnt {
            return;
        }
        h.activity += self.cla_inc;
        if h.activity > 1e20 {
            for &c in &self.learnts {
                self.db.headers[c as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit::from_code(0)];
        let mut path_count = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();

        loop {
            self.bump_clause(confl);
            let skip = usize::from(p.is_some());
            let len = self.db.headers[confl as usize].len as usize;
            for k in skip..len {
                let q = self.db.lits(confl)[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = lit.var().index();
            confl = self.reason[v];
            self.seen[v] = false;
            p = Some(lit);
            path_count -= 1;
            if path_count == 0 {
                break;
            }
        }
        learnt[0] = !p.unwrap();

        // Recursive minimization.
        self.analyze_toclear.clear();
        self.analyze_toclear.extend_from_slice(&learnt);
        let mut abstract_levels = 0u32;
        for lit in &learnt[1..] {
            abstract_levels |= self.abstract_level(lit.var().index());
        }
        let mut kept = 1;
        for k in 1..learnt.len() {
            let lit = learnt[k];
            let v = lit.var().index();
            if self.reason[v] == NO_REASON || !self.lit_redundant(lit, abstract_levels) {
                learnt[kept] = lit;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for lit in std::mem::take(&mut self.analyze_toclear) {
            self.seen[lit.var().index()] = false;
        }

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()]
        };
        (learnt, backjump)
    }

    fn lit_redundant(&mut self, lit: Lit, abstract_levels: u32) -> bool {
        self.analyze_stack.clear();
        self.analyze_stack.push(lit);
        let top = self.analyze_toclear.len();
        while let Some(q) = self.analyze_stack.pop() {
            let cref = self.reason[q.var().index()];
            let len = self.db.headers[cref as usize].len as usize;
            for k in 1..len {
                let r = self.db.lits(cref)[k];
                let v = r.var().index();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v] != NO_REASON && (self.abstract_level(v) & abstract_levels) != 0 {
                    self.seen[v] = true;
                    self.analyze_stack.push(r);
                    self.analyze_toclear.push(r);
                } else {
                    for l in self.analyze_toclear.drain(top..) {
                        self.seen[l.var().index()] = false;
                    }
                    return false;
                }
            }
        }
        true
    }

    fn compute_lbd(&mut self, lits: &[Lit]) -> u32 {
        self.lbd_counter += 1;
        let mut count = 0;
        for lit in lits {
            let lvl = self.level[lit.var().index()] as usize;
            if self.lbd_stamp[lvl] != self.lbd_counter {
                self.lbd_stamp[lvl] = self.lbd_counter;
                count += 1;
            }
        }
        count
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let lit = self.trail[k];
            let v = lit.var().index();
            self.values[lit.code()] = Value::Undef;
            self.values[(!lit).code()] = Value::Undef;
            self.reason[v] = NO_REASON;
            self.polarity[v] = lit.is_positive();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.values[2 * v] == Value::Undef {
                let var = Var::new(v as u32 + 1);
                return Some(Lit::new(var, self.polarity[v]));
            }
        }
        None
    }

    fn is_locked(&self, cref: u32) -> bool {
        let first = self.db.lits(cref)[0];
        self.values[first.code()] == Value::True
            && self.reason[first.var().index()] == cref
    }

    fn reduce_db(&mut self) {
        let mut candidates: Vec<u32> = self.learnts.clone();
        candidates.sort_by(|&a, &b| {
            let ha = &self.db.headers[a as usize];
            let hb = &self.db.headers[b as usize];
            hb.lbd
                .cmp(&ha.lbd)
                .then(ha.activity.partial_cmp(&hb.activity).unwrap_or(std::cmp::Ordering::Equal))
        });
        let target = candidates.len() / 2;
        let mut removed = 0;
        let mut keep = Vec::with_capacity(candidates.len());
        for cref in candidates {
            let h = self.db.headers[cref as usize];
            if removed < target && h.lbd > 2 && h.len > 2 && !self.is_locked(cref) {
                self.delete_clause(cref);
                removed += 1;
            } else {
                keep.push(cref);
            }
        }
        if removed > 0 {
            let headers = &self.db.headers;
            for ws in self.watches.iter_mut() {
                ws.retain(|w| !headers[w.cref as usize].deleted);
            }
        }
        keep.sort_unstable();
        self.learnts = keep;
        if self.db.garbage * 2 > self.db.lits.len() {
            self.db.compact();
        }
    }

    /// Marks a clause deleted; watchers are swept by the caller.
    fn delete_clause(&mut self, cref: u32) {
        if self.proof.is_some() {
            let lits = self.db.lits(cref).to_vec();
            self.log_delete(&lits);
        }
        let h = &mut self.db.headers[cref as usize];
        h.deleted = true;
        self.db.garbage += h.len as usize;
    }

    fn luby(y: f64, mut x: u64) -> f64 {
        let mut size = 1u64;
        let mut seq = 0u32;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        y.powi(seq as i32)
    }

    /// Solves the loaded formula.
    pub fn solve(&mut self) -> Verdict {
        self.solve_under(&[])
    }

    /// Solves under temporary unit assumptions. Learnt clauses are kept, so
    /// repeated calls on the same solver get cheaper. `Unsat` means
    /// unsatisfiable together with the assumptions.
    pub fn solve_under(&mut self, assumptions: &[Lit]) -> Verdict {
        if !self.ok {
            return Verdict::Unsat;
        }
        let started = Instant::now();
        let conflicts_at_start = self.stats.conflicts;
        let mut restart_round = 0u64;
        let mut geometric_interval = match self.config.restart {
            RestartPolicy::Geometric { first, .. } => first as f64,
            RestartPolicy::Luby { unit } => unit as f64,
        };

        let verdict = loop {
            let budget = match self.config.restart {
                RestartPolicy::Geometric { factor, .. } => {
                    let b = geometric_interval;
                    geometric_interval *= factor;
                    b as u64
                }
                RestartPolicy::Luby { unit } => (Self::luby(2.0, restart_round) * unit as f64) as u64,
            };
            restart_round += 1;
            match self.search(budget.max(1), assumptions, started, conflicts_at_start) {
                Some(verdict) => break verdict,
                None => {
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                }
            }
        };
        self.cancel_until(0);
        verdict
    }

    fn out_of_budget(&self, started: Instant, conflicts_at_start: u64) -> Option<UnknownReason> {
        if let Some(limit) = self.config.conflict_budget {
            if self.stats.conflicts - conflicts_at_start >= limit {
                return Some(UnknownReason::Timeout);
            }
        }
        if let Some(limit) = self.config.time_budget {
            if started.elapsed() >= limit {
                return Some(UnknownReason::Timeout);
            }
        }
        if let Some(cap) = self.config.memory_cap_bytes {
            if self.db.bytes() > cap {
                return Some(UnknownReason::Memory);
            }
        }
        None
    }

    /// Runs CDCL until `budget` conflicts; `None` asks for a restart.
    fn search(
        &mut self,
        budget: u64,
        assumptions: &[Lit],
        started: Instant,
        conflicts_at_start: u64,
    ) -> Option<Verdict> {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    self.log_add(&[]);
                    return Some(Verdict::Unsat);
                }
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                self.log_add(&learnt);
                self.stats.learnt_clauses += 1;
                if learnt.len() == 1 {
                    self.assign(learnt[0], NO_REASON);
                } else {
                    let lbd = self.compute_lbd(&learnt);
                    let cref = self.db.push(&learnt, true, lbd);
                    self.attach(cref);
                    self.learnts.push(cref);
                    self.bump_clause(cref);
                    self.assign(learnt[0], cref);
                }
                self.var_inc /= self.config.var_decay;
                self.cla_inc /= self.config.clause_decay;
                if self.stats.conflicts % 64 == 0 {
                    if let Some(reason) = self.out_of_budget(started, conflicts_at_start) {
                        return Some(Verdict::Unknown(reason));
                    }
                }
                if let Some(reason) = self
                    .config
                    .conflict_budget
                    .filter(|&l| self.stats.conflicts - conflicts_at_start >= l)
                    .map(|_| UnknownReason::Timeout)
                {
                    return Some(Verdict::Unknown(reason));
                }
            } else {
                if conflicts_here >= budget {
                    return None;
                }
                if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                let mut next = None;
                while (self.decision_level() as usize) < assumptions.len() {
                    let a = assumptions[self.decision_level() as usize];
                    match self.lit_value(a) {
                        Value::True => self.trail_lim.push(self.trail.len()),
                        Value::False => return Some(Verdict::Unsat),
                        Value::Undef => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                let decision = match next {
                    Some(lit) => lit,
                    None => match self.pick_branch() {
                        Some(lit) => lit,
                        None => return Some(Verdict::Sat(self.extract_model())),
                    },
                };
                self.stats.decisions += 1;
                if self.stats.decisions % 1024 == 0 {
                    if let Some(reason) = self.out_of_budget(started, conflicts_at_start) {
                        return Some(Verdict::Unknown(reason));
                    }
                }
                self.trail_lim.push(self.trail.len());
                self.assign(decision, NO_REASON);
            }
        }
    }

    fn extract_model(&self) -> Model {
        Model::from_values(
            (0..self.num_vars)
                .map(|v| self.values[2 * v] == Value::True)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use proptest::prelude::*;

    fn cnf(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::with_clauses(
            num_vars,
            clauses
                .iter()
                .map(|c| c.iter().map(|&v| Lit::from_dimacs(v)).collect())
                .collect(),
        )
    }

    fn brute_force_sat(f: &CnfFormula) -> bool {
        let n = f.num_vars();
        (0u64..1 << n).any(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            f.is_satisfied_by(&a)
        })
    }

    /// Pigeonhole: `holes + 1` pigeons into `holes` holes.
    fn pigeonhole(holes: u32) -> CnfFormula {
        let pigeons = holes + 1;
        let var = |p: u32, h: u32| i64::from(p * holes + h + 1);
        let mut clauses: Vec<Clause> = Vec::new();
        for p in 0..pigeons {
            clauses.push((0..holes).map(|h| Lit::from_dimacs(var(p, h))).collect());
        }
        for h in 0..holes {
            for p in 0..pigeons {
                for q in p + 1..pigeons {
                    clauses.push(vec![Lit::from_dimacs(-var(p, h)), Lit::from_dimacs(-var(q, h))]);
                }
            }
        }
        CnfFormula::with_clauses(pigeons * holes, clauses)
    }

    #[test]
    fn empty_formula_is_sat() {
        let v = solve(&CnfFormula::new(0), &SolverConfig::default()).unwrap();
        assert!(v.is_sat());
        let v = solve(&CnfFormula::new(3), &SolverConfig::default()).unwrap();
        assert_eq!(v.model().unwrap().num_vars(), 3);
    }

    #[test]
    fn contradictory_units_are_unsat() {
        let f = cnf(1, &[&[1], &[-1]]);
        assert_eq!(solve(&f, &SolverConfig::default()).unwrap(), Verdict::Unsat);
        let proof = emit_proof(&f, &SolverConfig::default()).unwrap();
        assert!(proof.derives_empty_clause());
    }

    #[test]
    fn empty_clause_is_unsat() {
        let f = CnfFormula::with_clauses(2, vec![vec![]]);
        assert!(solve(&f, &SolverConfig::default()).unwrap().is_unsat());
    }

    #[test]
    fn proof_request_on_sat_instance_fails() {
        let f = cnf(2, &[&[1, 2]]);
        assert_eq!(
            emit_proof(&f, &SolverConfig::default()),
            Err(SolveError::NoRefutation)
        );
    }

    #[test]
    fn pigeonhole_is_unsat() {
        for holes in 2..=6 {
            let v = solve(&pigeonhole(holes), &SolverConfig::default()).unwrap();
            assert!(v.is_unsat(), "php({holes})");
        }
    }

    #[test]
    fn conflict_budget_yields_unknown() {
        let cfg = SolverConfig {
            conflict_budget: Some(5),
            ..SolverConfig::default()
        };
        assert_eq!(
            solve(&pigeonhole(8), &cfg).unwrap(),
            Verdict::Unknown(UnknownReason::Timeout)
        );
    }

    #[test]
    fn assumptions_restrict_models() {
        let f = cnf(3, &[&[1, 2], &[-1, 3]]);
        let mut s = Solver::new(&f, &SolverConfig::default());
        let v = s.solve_under(&[Lit::from_dimacs(1), Lit::from_dimacs(-3)]);
        assert!(v.is_unsat());
        let v = s.solve_under(&[Lit::from_dimacs(-1)]);
        let m = v.model().unwrap();
        assert!(!m.value(Var::new(1)) && m.value(Var::new(2)));
        assert!(s.solve().is_sat());
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..7).map(|i| Solver::luby(2.0, i) as u64).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4]);
    }

    fn arb_cnf() -> impl Strategy<Value = CnfFormula> {
        (1u32..10).prop_flat_map(|nv| {
            let lit = (1..=i64::from(nv), any::<bool>()).prop_map(|(v, s)| {
                Lit::from_dimacs(if s { v } else { -v })
            });
            prop::collection::vec(prop::collection::vec(lit, 1..4), 0..40)
                .prop_map(move |cs| CnfFormula::with_clauses(nv, cs))
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(f in arb_cnf(), seed in 0u64..4) {
            let cfg = SolverConfig { seed, ..SolverConfig::default() };
            let v = solve(&f, &cfg).unwrap();
            prop_assert_eq!(v.is_sat(), brute_force_sat(&f));
        }

        #[test]
        fn deterministic_per_seed(f in arb_cnf(), seed in 0u64..4) {
            let cfg = SolverConfig { seed, ..SolverConfig::default() };
            prop_assert_eq!(solve(&f, &cfg).unwrap(), solve(&f, &cfg).unwrap());
        }
    }
}
