use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use setpref::axioms::{format_chain, format_ranking};
use setpref::mslsp::{self, classify_esg, ground_with, GroundConfig};
use setpref::sat::{
    check_drat, export_dimacs, import_dimacs, CnfFormula, ExternalSolver, Solver, SolverConfig, Verdict,
};
use setpref::search::report::{self, Format};
use setpref::search::{self as lattice_search, checkpoint, SearchConfig, SearchResults};
use setpref::{decode_model, instance_cnf, AxiomId, ElementOrder, ProblemInstance, SetRelation};

use crate::*;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, message: impl Display) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| fail(EXIT_FAILURE, format!("{}: {e}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(io(path)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| fail(EXIT_FAILURE, e)),
    }
}

fn solver_config(b: &Budget) -> SolverConfig {
    SolverConfig {
        conflict_budget: b.conflicts,
        time_budget: b.timeout.map(Duration::from_secs_f64),
        seed: b.seed,
        ..SolverConfig::default()
    }
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Sat(_) => EXIT_SAT,
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn verdict_word(v: &Verdict) -> &'static str {
    match v {
        Verdict::Sat(_) => "SAT",
        Verdict::Unsat => "UNSAT",
        Verdict::Unknown(_) => "UNKNOWN",
    }
}

fn instance(i: &Instance) -> CnfFormula {
    instance_cnf(ProblemInstance::new(i.axioms, i.size))
}

pub fn check(a: &CheckArgs) -> Outcome {
    let cnf = instance(&a.instance);
    let started = Instant::now();
    let config = SolverConfig {
        emit_proof: a.proof.is_some(),
        ..solver_config(&a.budget)
    };
    let mut proof = None;
    let verdict = match a.solver {
        SolverKind::Builtin => {
            let mut solver = Solver::new(&cnf, &config);
            let v = solver.solve();
            if let Some(m) = v.model() {
                if let Some(c) = cnf.first_falsified(m.as_slice()) {
                    return Err(fail(EXIT_FAILURE, format!("internal error: model falsifies clause #{c}")));
                }
            }
            proof = solver.take_proof();
            v
        }
        SolverKind::External => {
            let ext = match &a.solver_path {
                Some(p) => ExternalSolver::new(p),
                None => ExternalSolver::from_env().ok_or_else(|| {
                    fail(
                        EXIT_USAGE,
                        "--solver external needs --solver-path or SETPREF_EXTERNAL_SOLVER",
                    )
                })?,
            };
            ext.solve(&cnf).map_err(|e| fail(EXIT_FAILURE, e))?
        }
    };
    let elapsed = started.elapsed();
    println!("{}", verdict_word(&verdict));
    println!(
        "axioms={} n={} vars={} clauses={} time={:.3}s",
        a.instance.axioms,
        a.instance.size.get(),
        cnf.num_vars(),
        cnf.num_clauses(),
        elapsed.as_secs_f64()
    );
    if let (Some(path), Verdict::Unsat) = (&a.proof, &verdict) {
        let proof = proof.ok_or_else(|| fail(EXIT_USAGE, "proofs need the built-in solver"))?;
        fs::write(path, proof.to_text()).map_err(io(path))?;
        println!("proof={} steps={}", path.display(), proof.len());
        if a.verify_proof {
            let report = check_drat(&cnf, &proof).map_err(|e| fail(EXIT_FAILURE, format!("proof rejected: {e}")))?;
            println!("proof verified: {} lemmas checked", report.lemmas_checked);
        }
    }
    Ok(verdict_code(&verdict))
}

fn pairs_listing(
    n: setpref::DomainSize,
    ord: &ElementOrder,
    rel: &SetRelation,
    strict: &str,
) -> (String, String) {
    let elems = n
        .elements()
        .flat_map(|x| n.elements().map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && ord.get(x, y))
        .map(|(x, y)| format!("{x} {strict} {y}"))
        .collect::<Vec<_>>()
        .join(", ");
    let sets = n
        .sets()
        .flat_map(|a| n.sets().map(move |b| (a, b)))
        .filter(|&(a, b)| rel.get(a, b))
        .map(|(a, b)| format!("{a} >= {b}"))
        .collect::<Vec<_>>()
        .join("\n  ");
    (elems, sets)
}

pub fn witness(a: &WitnessArgs) -> Outcome {
    let cnf = instance(&a.instance);
    let verdict = Solver::new(&cnf, &solver_config(&a.budget)).solve();
    let model = match &verdict {
        Verdict::Sat(m) => m,
        Verdict::Unsat => {
            println!("UNSAT: {} admits no relation at n={}", a.instance.axioms, a.instance.size.get());
            return Ok(EXIT_UNSAT);
        }
        Verdict::Unknown(_) => {
            println!("UNKNOWN: budget exhausted");
            return Ok(EXIT_UNKNOWN);
        }
    };
    let n = a.instance.size;
    let (ord, rel) = decode_model(model.as_slice(), n).map_err(|e| fail(EXIT_FAILURE, e))?;
    let (strict, indiff) = if a.ascii { (">", "~") } else { ("≻", "∼") };
    let (pairs_l, pairs_w) = pairs_listing(n, &ord, &rel, strict);
    match format_ranking(&ord, strict) {
        Some(line) => println!("linear order: {line}"),
        None => println!("element relation (not linear): {pairs_l}"),
    }
    match format_chain(&rel, strict, indiff) {
        Some(chain) => println!("set ranking: {chain}"),
        None => println!("set relation (not a weak order):\n  {pairs_w}"),
    }
    Ok(EXIT_SAT)
}

pub fn dimacs(a: &DimacsArgs) -> Outcome {
    let cnf = instance(&a.instance);
    let text = format!(
        "c axioms {}\nc n {}\n{}",
        a.instance.axioms,
        a.instance.size.get(),
        export_dimacs(&cnf)
    );
    write_out(a.out.as_deref(), &text)?;
    Ok(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(io(path))
}

fn parse_mslsp(path: &Path, text: &str) -> Result<mslsp::Formula, Failure> {
    mslsp::parse(text).map_err(|e| fail(EXIT_DATA, format!("{}:{e}", path.display())))
}

pub fn esg_check(a: &EsgArgs) -> Outcome {
    if a.files.is_empty() && !a.catalog {
        return Err(fail(EXIT_USAGE, "no files given (or pass --catalog)"));
    }
    let mut all_esg = true;
    let mut show = |name: &str, f: &mslsp::Formula| {
        let verdict = classify_esg(f);
        all_esg &= verdict.is_esg();
        println!("{name}: {verdict}");
    };
    if a.catalog {
        for axiom in AxiomId::ALL {
            show(&mslsp::catalog_file_name(axiom), &mslsp::catalog_formula(axiom));
        }
    }
    for path in &a.files {
        let f = parse_mslsp(path, &read(path)?)?;
        show(&path.display().to_string(), &f);
    }
    Ok(if all_esg { 0 } else { EXIT_FAILURE })
}

pub fn ground(a: &GroundArgs) -> Outcome {
    let f = parse_mslsp(&a.file, &read(&a.file)?)?;
    let mut cfg = GroundConfig::default();
    if let Some(b) = a.literal_budget {
        cfg.literal_budget = b;
    }
    let cnf = ground_with(&f, a.size, cfg).map_err(|e| fail(EXIT_DATA, e))?;
    let text = format!("c ground {} n {}\n{}", a.file.display(), a.size.get(), export_dimacs(&cnf));
    write_out(a.out.as_deref(), &text)?;
    eprintln!("vars={} clauses={}", cnf.num_vars(), cnf.num_clauses());
    Ok(0)
}

fn render(results: &SearchResults, lattice: &lattice_search::Lattice, format: Format) -> String {
    match format {
        Format::Text => report::text(results),
        Format::Csv => report::csv(results),
        Format::Json => report::json(results, Some(lattice)) + "\n",
    }
}

pub fn search(a: &SearchArgs) -> Outcome {
    if a.min_size < 1 || a.min_size > a.max_size || setpref::DomainSize::new(a.max_size).is_err() {
        return Err(fail(
            EXIT_USAGE,
            format!("bad size range {}..={}", a.min_size, a.max_size),
        ));
    }
    let cfg = SearchConfig {
        min_n: a.min_size,
        max_n: a.max_size,
        workers: a.workers.max(1),
        batch_size: a.batch_size.max(1),
        switch_interval: a.switch_interval,
        conflict_budget: a.budget,
        time_budget: a.time_budget.map(Duration::from_secs_f64),
        seed: a.seed,
        pruning: !a.no_pruning,
        witness_lifting: !a.no_witness_lifting,
        incremental: a.incremental,
        fix_order: !a.no_order_fixing,
        checkpoint: a.checkpoint.clone(),
        certified: None,
    };
    let quiet = a.quiet;
    let mut last_report = Instant::now();
    let mut progress = |p: &lattice_search::Progress| {
        if quiet || last_report.elapsed() < Duration::from_secs(2) {
            return;
        }
        last_report = Instant::now();
        eprintln!(
            "n={} resolved {}/{} solved={} unsat={} timeout={} elapsed={:.1}s",
            p.n,
            p.resolved,
            p.cells,
            p.stats.solved,
            p.stats.unsat,
            p.stats.timeout,
            p.elapsed.as_secs_f64()
        );
    };
    let run = lattice_search::search_with_progress(a.axioms, &cfg, &mut progress)
        .map_err(|e| fail(EXIT_FAILURE, e))?;
    let results = SearchResults::from_lattice(&run.lattice);
    if !quiet {
        let s = run.stats;
        eprintln!(
            "solved={} sat={} unsat={} timeout={} witnessed={} pruned={} replayed={} time={:.1}s",
            s.solved,
            s.sat,
            s.unsat,
            s.timeout,
            s.witnessed,
            s.pruned,
            s.replayed,
            run.elapsed.as_secs_f64()
        );
    }
    if let Some(path) = &a.out {
        fs::write(path, report::json(&results, Some(&run.lattice)) + "\n").map_err(io(path))?;
    }
    if let Some(path) = &a.csv {
        fs::write(path, report::csv(&results)).map_err(io(path))?;
    }
    write_out(None, &render(&results, &run.lattice, a.format))?;
    Ok(if results.complete { 0 } else { EXIT_UNKNOWN })
}

pub fn report(a: &ReportArgs) -> Outcome {
    let lattice = checkpoint::load(&a.checkpoint, mslsp::certified_axioms(), true)
        .map_err(|e| fail(EXIT_DATA, e))?
        .ok_or_else(|| fail(EXIT_DATA, format!("{}: empty checkpoint", a.checkpoint.display())))?;
    let results = SearchResults::from_lattice(&lattice);
    write_out(None, &render(&results, &lattice, a.format))?;
    Ok(if results.complete { 0 } else { EXIT_UNKNOWN })
}

pub fn solve_file(a: &SolveArgs) -> Outcome {
    let cnf = import_dimacs(&read(&a.file)?).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", a.file.display())))?;
    let config = SolverConfig {
        emit_proof: a.proof.is_some(),
        ..solver_config(&a.budget)
    };
    let mut solver = Solver::new(&cnf, &config);
    let verdict = solver.solve();
    let mut out = String::new();
    match &verdict {
        Verdict::Sat(m) => {
            out.push_str("s SATISFIABLE\n");
            let lits: Vec<String> = m
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                .collect();
            for chunk in lits.chunks(16) {
                out.push_str(&format!("v {}\n", chunk.join(" ")));
            }
            out.push_str("v 0\n");
        }
        Verdict::Unsat => out.push_str("s UNSATISFIABLE\n"),
        Verdict::Unknown(_) => out.push_str("s UNKNOWN\n"),
    }
    write_out(None, &out)?;
    if let (Some(path), Verdict::Unsat) = (&a.proof, &verdict) {
        let proof = solver.take_proof().unwrap_or_default();
        fs::write(path, proof.to_text()).map_err(io(path))?;
    }
    Ok(verdict_code(&verdict))
}
