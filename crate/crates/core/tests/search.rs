use std::sync::OnceLock;

use setpref::sat::{solve, SolverConfig, Verdict};
use setpref::search::checkpoint;
use setpref::search::report::{self, Format};
use setpref::search::*;
use setpref::*;

fn set(list: &str) -> AxiomSet {
    AxiomSet::parse_list(list).unwrap()
}

fn full_to(max_n: u32) -> &'static SearchRun {
    static THREE: OnceLock<SearchRun> = OnceLock::new();
    static FOUR: OnceLock<SearchRun> = OnceLock::new();
    let cell = if max_n == 3 { &THREE } else { &FOUR };
    cell.get_or_init(|| {
        let cfg = SearchConfig {
            max_n,
            ..SearchConfig::default()
        };
        search(AxiomSet::all(), &cfg).unwrap()
    })
}

fn consistent(axioms: AxiomSet, n: u32) -> bool {
    let cnf = instance_cnf(ProblemInstance::new(axioms, DomainSize::new(n).unwrap()));
    match solve(&cnf, &SolverConfig::default()).unwrap() {
        Verdict::Sat(_) => true,
        Verdict::Unsat => false,
        Verdict::Unknown(r) => panic!("no budget was set: {r:?}"),
    }
}

/// Eleven axioms with impossibilities at sizes 3 and 4.
fn small_universe() -> AxiomSet {
    set("LIN_E,REFL_S,COMPL_S,TRANS_S,SDOM,GF1,GF2,IND,SUA_V,SUA_P,S_TOP_MON")
}

#[test]
fn full_catalog_to_three_has_seven() {
    let run = full_to(3);
    let results = SearchResults::from_lattice(&run.lattice);
    assert!(results.complete);
    assert_eq!(results.minimal.len(), 7);
    assert!(results.minimal.iter().all(|m| m.size == 3));
    assert!(results.unconfirmed.is_empty());
    let no2 = set("LIN_E,SUA_V,SUA_P");
    assert!(results.minimal.iter().any(|m| m.axioms == no2));
}

#[test]
fn full_catalog_to_four_has_seven_and_thirty_six() {
    let results = SearchResults::from_lattice(&full_to(4).lattice);
    assert_eq!(results.histogram(), vec![(2, 0), (3, 7), (4, 36)]);
    let named = [
        "LIN_E,TRANS_S,SDOM,IND,SUA_V,S_TOP_MON",
        "LIN_E,TRANS_S,GF1,GF2,IND,SUA_V",
        "LIN_E,TRANS_S,GF1,GF2,BOT_IND,TOP_IND,SUA_V",
        "LIN_E,TRANS_S,BOT_IND,SUA_V,S_TOP_MON,MC",
    ];
    for s in named {
        assert!(
            results.minimal.contains(&MinimalImpossibility { axioms: set(s), size: 4 }),
            "{s}"
        );
    }
    let mut sorted = results.minimal.clone();
    sorted.sort_by_key(|m| (m.size, m.axioms.len(), m.axioms.mask()));
    assert_eq!(sorted, results.minimal);
}

#[test]
fn reported_sets_are_doubly_minimal_by_direct_solves() {
    let results = SearchResults::from_lattice(&full_to(4).lattice);
    for m in &results.minimal {
        assert!(!consistent(m.axioms, m.size), "{} at {}", m.axioms, m.size);
        assert!(consistent(m.axioms, m.size - 1), "{} at {}", m.axioms, m.size - 1);
        for a in m.axioms.iter() {
            assert!(consistent(m.axioms.without(a), m.size), "{} minus {a}", m.axioms);
        }
    }
}

#[test]
fn single_theorem_universe() {
    let cfg = SearchConfig {
        max_n: 3,
        ..SearchConfig::default()
    };
    let run = search(set("LIN_E,SUA_V,SUA_P"), &cfg).unwrap();
    let results = SearchResults::from_lattice(&run.lattice);
    assert_eq!(
        results.minimal,
        vec![MinimalImpossibility {
            axioms: set("LIN_E,SUA_V,SUA_P"),
            size: 3
        }]
    );
    assert_eq!(results.count_inconsistent, 1);
}

#[test]
fn indifference_universe_has_nothing() {
    let cfg = SearchConfig {
        max_n: 4,
        ..SearchConfig::default()
    };
    let run = search(set("REFL_S,EVEN_EXT"), &cfg).unwrap();
    assert!(minimal_impossibilities(&run.lattice).is_empty());
    assert_eq!(count_inconsistent(&run.lattice), 0);
    assert!(run.lattice.is_complete());
}

#[test]
fn bad_arguments() {
    let cfg = SearchConfig::default();
    assert!(matches!(search(AxiomSet::EMPTY, &cfg), Err(SearchError::EmptyUniverse)));
    let cfg = SearchConfig {
        min_n: 4,
        max_n: 3,
        ..SearchConfig::default()
    };
    assert!(matches!(search(AxiomSet::all(), &cfg), Err(SearchError::Sizes(4, 3))));
    let cfg = SearchConfig {
        max_n: 40,
        ..SearchConfig::default()
    };
    assert!(search(AxiomSet::all(), &cfg).is_err());
}

fn four() -> AxiomSet {
    set("LIN_E,TRANS_S,SUA_V,SUA_P")
}

#[test]
fn impossible_moves_to_supersets_and_larger_sizes() {
    let mut lat = Lattice::new(four(), 2, 5, AxiomSet::all());
    let ab = set("LIN_E,SUA_V");
    let c = lat.universe().compress(ab).unwrap();
    let newly = lat.record(c, 3, Outcome::Unsat, true).unwrap();
    // 4 supersets at each of sizes 3, 4, 5, minus the solved cell.
    assert_eq!(newly, 4 * 3 - 1);
    for extra in [AxiomId::TransS, AxiomId::SuaP] {
        assert_eq!(lat.status(ab.with(extra), 3).unwrap(), Status::Impossible);
        assert_eq!(
            lat.provenance(ab.with(extra), 3).unwrap(),
            Provenance::Pruned {
                rule: Rule::Superset,
                from: ab,
                from_n: 3
            }
        );
    }
    for n in 4..=5 {
        assert_eq!(lat.status(ab, n).unwrap(), Status::Impossible);
    }
    assert!(matches!(
        lat.provenance(ab, 4).unwrap(),
        Provenance::Pruned {
            rule: Rule::LargerSize,
            ..
        }
    ));
    assert_eq!(lat.status(ab, 2).unwrap(), Status::Unknown);
    assert_eq!(lat.status(set("LIN_E"), 3).unwrap(), Status::Unknown);
    assert_eq!(lat.provenance(ab, 3).unwrap(), Provenance::Solved);
}

#[test]
fn possible_moves_to_subsets_and_smaller_sizes() {
    let mut lat = Lattice::new(four(), 2, 5, AxiomSet::all());
    let s = set("LIN_E,TRANS_S,SUA_V");
    let c = lat.universe().compress(s).unwrap();
    lat.record(c, 4, Outcome::Sat, true).unwrap();
    for n in 2..=4 {
        for sub in 0..8u32 {
            let t = AxiomSet::from_mask(s.mask() & sub_mask(s, sub));
            assert_eq!(lat.status(t, n).unwrap(), Status::Possible, "{t} at {n}");
        }
    }
    assert!(matches!(
        lat.provenance(s, 3).unwrap(),
        Provenance::Pruned {
            rule: Rule::SmallerSize,
            ..
        }
    ));
    assert_eq!(lat.status(s, 5).unwrap(), Status::Unknown);
    assert_eq!(lat.status(four(), 4).unwrap(), Status::Unknown);
}

/// The subset of `s` picked by the low bits of `pick`, one bit per member.
fn sub_mask(s: AxiomSet, pick: u32) -> u32 {
    s.iter()
        .enumerate()
        .filter(|(i, _)| pick >> i & 1 == 1)
        .fold(0, |acc, (_, a)| acc | 1 << a.index())
}

#[test]
fn uncertified_sets_stay_at_their_size() {
    let mut lat = Lattice::new(four(), 2, 5, set("LIN_E,TRANS_S"));
    let ab = set("LIN_E,SUA_V");
    let c = lat.universe().compress(ab).unwrap();
    lat.record(c, 3, Outcome::Unsat, true).unwrap();
    assert_eq!(lat.status(ab, 4).unwrap(), Status::Unknown);
    assert_eq!(lat.status(four(), 3).unwrap(), Status::Impossible);

    let lt = set("LIN_E,TRANS_S");
    lat.record(lat.universe().compress(lt).unwrap(), 4, Outcome::Sat, true).unwrap();
    assert_eq!(lat.status(lt, 2).unwrap(), Status::Possible);
}

#[test]
fn conflicting_verdicts_are_rejected() {
    let mut lat = Lattice::new(four(), 2, 5, AxiomSet::all());
    let u = lat.universe().compress(four()).unwrap();
    let s = lat.universe().compress(set("LIN_E")).unwrap();
    lat.record(s, 3, Outcome::Unsat, true).unwrap();
    assert!(matches!(
        lat.record(u, 3, Outcome::Sat, true),
        Err(LatticeError::Conflict { .. })
    ));
    assert_eq!(lat.record(s, 3, Outcome::Unsat, true).unwrap(), 0);
}

#[test]
fn timeouts_can_be_resolved_later() {
    let mut lat = Lattice::new(four(), 2, 3, AxiomSet::all());
    let s = lat.universe().compress(set("LIN_E")).unwrap();
    lat.record(s, 3, Outcome::Timeout, true).unwrap();
    assert_eq!(lat.status_dense(s, 3), Status::Timeout);
    assert!(!lat.is_complete());
    let u = lat.universe().compress(four()).unwrap();
    lat.record(u, 3, Outcome::Sat, true).unwrap();
    assert_eq!(lat.status_dense(s, 3), Status::Possible);
}

#[test]
fn timeouts_block_minimality_claims() {
    let mut lat = Lattice::new(set("SUA_V,SUA_P"), 3, 3, AxiomSet::all());
    let both = lat.universe().compress(set("SUA_V,SUA_P")).unwrap();
    let one = lat.universe().compress(set("SUA_V")).unwrap();
    lat.record(both, 3, Outcome::Unsat, true).unwrap();
    lat.record(one, 3, Outcome::Timeout, true).unwrap();
    assert!(minimal_impossibilities(&lat).is_empty());
    assert_eq!(unconfirmed_impossibilities(&lat).len(), 1);
}

#[test]
fn oracle_examples() {
    assert_eq!(fubini(7)[7], 47_293);
    assert_eq!(fubini(4), vec![1, 1, 3, 13, 75]);
    assert_eq!(weak_orders(3).len(), 13);
    assert_eq!(weak_orders(7).len(), 47_293);
    assert_eq!(
        brute_force_oracle(set("REFL_S,COMPL_S,TRANS_S,LIN_E"), 3),
        Ok(Status::Possible)
    );
    assert_eq!(
        brute_force_oracle(set("REFL_S,COMPL_S,TRANS_S,LIN_E,SUA_V,SUA_P"), 3),
        Ok(Status::Impossible)
    );
    assert!(matches!(brute_force_oracle(set("LIN_E"), 3), Err(OracleError::NotWeakOrder(_))));
    assert_eq!(
        brute_force_oracle(set("REFL_S,COMPL_S,TRANS_S"), 4),
        Err(OracleError::Size(4))
    );
}

#[test]
fn oracle_agrees_with_solver_on_sampled_sets() {
    use rand::{Rng, SeedableRng};
    let weak = set("REFL_S,COMPL_S,TRANS_S");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let s = AxiomSet::from_mask(rng.gen::<u32>() & AxiomSet::all().mask()).union(weak);
        let expected = if consistent(s, 3) {
            Status::Possible
        } else {
            Status::Impossible
        };
        assert_eq!(brute_force_oracle(s, 3).unwrap(), expected, "{s}");
    }
}

fn small_cfg() -> SearchConfig {
    SearchConfig {
        max_n: 4,
        ..SearchConfig::default()
    }
}

#[test]
fn result_ignores_workers_and_direction_switches() {
    let base = search(small_universe(), &small_cfg()).unwrap();
    let reference = report::json(&SearchResults::from_lattice(&base.lattice), Some(&base.lattice));
    for (workers, switch, batch) in [(3, None, 32), (1, Some(1), 32), (4, Some(7), 32), (2, Some(100), 32)] {
        let cfg = SearchConfig {
            workers,
            switch_interval: switch,
            batch_size: batch,
            ..small_cfg()
        };
        let run = search(small_universe(), &cfg).unwrap();
        assert!(run.lattice.same_statuses(&base.lattice));
        if switch.is_none() {
            let json = report::json(&SearchResults::from_lattice(&run.lattice), Some(&run.lattice));
            assert_eq!(json, reference, "workers={workers}");
        }
    }
    let cfg = SearchConfig {
        batch_size: 5,
        incremental: true,
        ..small_cfg()
    };
    let run = search(small_universe(), &cfg).unwrap();
    assert_eq!(
        minimal_impossibilities(&run.lattice),
        minimal_impossibilities(&base.lattice)
    );
}

#[test]
fn pruned_and_unpruned_runs_agree() {
    let pruned = search(small_universe(), &small_cfg()).unwrap();
    let cfg = SearchConfig {
        pruning: false,
        witness_lifting: false,
        incremental: true,
        ..small_cfg()
    };
    let unpruned = search(small_universe(), &cfg).unwrap();
    assert_eq!(unpruned.stats.solved, 3 * (1 << small_universe().len()));
    assert_eq!(unpruned.stats.pruned, 0);
    assert!(pruned.lattice.same_statuses(&unpruned.lattice));
    assert!(pruned.stats.solved < unpruned.stats.solved / 10);
}

#[test]
fn fixing_the_element_order_keeps_every_verdict() {
    let unpruned = |fix_order| SearchConfig {
        pruning: false,
        witness_lifting: false,
        incremental: true,
        fix_order,
        ..small_cfg()
    };
    let fixed = search(small_universe(), &unpruned(true)).unwrap();
    let free = search(small_universe(), &unpruned(false)).unwrap();
    assert!(fixed.lattice.same_statuses(&free.lattice));
    let fresh = SearchConfig {
        fix_order: false,
        ..small_cfg()
    };
    let fresh = search(small_universe(), &fresh).unwrap();
    let default = search(small_universe(), &small_cfg()).unwrap();
    assert_eq!(
        SearchResults::from_lattice(&fresh.lattice),
        SearchResults::from_lattice(&default.lattice)
    );
}

#[test]
fn checkpoint_round_trip_keeps_solved_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ckpt");
    let run = search(small_universe(), &small_cfg()).unwrap();
    checkpoint::save(&run.lattice, 0, &path).unwrap();
    let loaded = checkpoint::load(&path, run.lattice.certified(), true).unwrap().unwrap();
    assert!(loaded.same_statuses(&run.lattice));
    assert_eq!(
        loaded.solved_cells().collect::<Vec<_>>(),
        run.lattice.solved_cells().collect::<Vec<_>>()
    );
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full_path = dir.path().join("full.ckpt");
    let cfg = SearchConfig {
        checkpoint: Some(full_path.clone()),
        batch_size: 8,
        ..small_cfg()
    };
    let full = search(small_universe(), &cfg).unwrap();
    assert_eq!(full.stats.replayed, 0);

    let text = std::fs::read_to_string(&full_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Cut inside size 4.
    let cut = lines.iter().position(|l| l.split_whitespace().nth(1) == Some("4")).unwrap() + 3;
    let partial_path = dir.path().join("partial.ckpt");
    std::fs::write(&partial_path, lines[..cut].join("\n") + "\n").unwrap();

    let cfg = SearchConfig {
        checkpoint: Some(partial_path.clone()),
        batch_size: 8,
        ..small_cfg()
    };
    let resumed = search(small_universe(), &cfg).unwrap();
    assert_eq!(resumed.stats.replayed, cut as u64 - 1);
    assert!(resumed.lattice.same_statuses(&full.lattice));
    assert_eq!(
        minimal_impossibilities(&resumed.lattice),
        minimal_impossibilities(&full.lattice)
    );

    let again = search(small_universe(), &cfg).unwrap();
    assert_eq!(again.stats.solved, 0);
    assert!(again.lattice.same_statuses(&full.lattice));
}

#[test]
fn empty_checkpoint_starts_fresh() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.ckpt");
    std::fs::write(&path, "").unwrap();
    assert!(checkpoint::load(&path, AxiomSet::all(), true).unwrap().is_none());
    let cfg = SearchConfig {
        checkpoint: Some(path.clone()),
        max_n: 3,
        ..SearchConfig::default()
    };
    let run = search(set("LIN_E,SUA_V,SUA_P"), &cfg).unwrap();
    assert_eq!(run.stats.replayed, 0);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# setpref-checkpoint v1"));
}

#[test]
fn checkpoint_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.ckpt");
    let cfg = SearchConfig {
        checkpoint: Some(path.clone()),
        max_n: 3,
        ..SearchConfig::default()
    };
    search(set("LIN_E,SUA_V,SUA_P"), &cfg).unwrap();
    let other = search(set("LIN_E,SUA_V"), &cfg);
    assert!(matches!(
        other,
        Err(SearchError::Checkpoint(checkpoint::CheckpointError::Mismatch { .. }))
    ));

    std::fs::write(&path, "setpref v0\n").unwrap();
    assert!(matches!(
        checkpoint::load(&path, AxiomSet::all(), true),
        Err(checkpoint::CheckpointError::Version { .. })
    ));
    let header = "# setpref-checkpoint v1 universe=00c01 min_n=2 max_n=3\n";
    std::fs::write(&path, format!("{header}00001 3 MAYBE 0\n")).unwrap();
    assert!(matches!(
        checkpoint::load(&path, AxiomSet::all(), true),
        Err(checkpoint::CheckpointError::Corrupt { line: 2, .. })
    ));
    std::fs::write(&path, format!("{header}00001 3 UNSAT 0\n00c01 3 SAT 0\n")).unwrap();
    assert!(matches!(
        checkpoint::load(&path, AxiomSet::all(), true),
        Err(checkpoint::CheckpointError::Replay(_))
    ));
}

#[test]
fn text_report_for_three() {
    let results = SearchResults::from_lattice(&full_to(3).lattice);
    let text = report::text(&results);
    let rows: Vec<&str> = text
        .lines()
        .skip(1)
        .take_while(|l| !l.trim().is_empty())
        .collect();
    assert_eq!(rows.len(), 7);
    for row in rows {
        let cols: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cols[1], "3");
        assert_eq!(cols.len(), 22);
    }
    assert!(text.contains("7 minimal impossibilities"));
    assert!(text.contains("at most 3 elements"));
    assert!(!text.contains("PARTIAL"));
}

#[test]
fn dominance_and_top_monotonicity_row() {
    let results = SearchResults::from_lattice(&full_to(4).lattice);
    let csv = report::csv(&results);
    let wanted = set("LIN_E,TRANS_S,SDOM,IND,SUA_V,S_TOP_MON");
    let row: String = std::iter::once("4".to_string())
        .chain(AxiomId::ALL.iter().map(|a| if wanted.contains(*a) { "1" } else { "0" }.to_string()))
        .collect::<Vec<_>>()
        .join(",");
    assert!(csv.lines().any(|l| l == row), "{row}");
}

#[test]
fn csv_and_json_round_trip() {
    let run = full_to(4);
    let results = SearchResults::from_lattice(&run.lattice);
    let csv = report::csv(&results);
    assert!(csv.starts_with("Size,LIN_E,REFL_S,COMPL_S,TRANS_S,EXT,SDOM,GF1,GF2,IND,STRICT_IND"));
    assert_eq!(report::parse_csv(&csv).unwrap(), results.minimal);
    let json = report::json(&results, Some(&run.lattice));
    assert_eq!(report::parse_json(&json).unwrap(), results.minimal);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["count_inconsistent"], results.count_inconsistent);
    assert_eq!(value["minimal_impossibilities"].as_array().unwrap().len(), 43);
    let solved = run.lattice.solved_cells().count();
    let cells = value["cells"].as_array().unwrap();
    assert!(cells.len() >= solved);
    assert!(cells.iter().all(|c| c["provenance"] == "solved" || c["provenance"].as_str().unwrap().starts_with("witness")));
    assert!(report::parse_csv("Size,NOPE\n3,1\n").is_err());
    assert!(report::parse_csv("Size,LIN_E\n3,2\n").is_err());
    assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
    assert!("xml".parse::<Format>().is_err());
}

#[test]
fn partial_lattice_is_flagged() {
    let mut lat = Lattice::new(set("SUA_V,SUA_P"), 3, 3, AxiomSet::all());
    let both = lat.universe().compress(set("SUA_V,SUA_P")).unwrap();
    lat.record(both, 3, Outcome::Timeout, true).unwrap();
    let results = SearchResults::from_lattice(&lat);
    assert!(!results.complete);
    assert!(report::text(&results).contains("PARTIAL"));
}
