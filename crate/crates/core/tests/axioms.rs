use setpref::axioms::satisfied;
use setpref::sat::{Solver, SolverConfig, Verdict};
use setpref::AxiomId::*;
use setpref::*;

fn n(k: u32) -> DomainSize {
    DomainSize::new(k).unwrap()
}

fn set(list: &str) -> AxiomSet {
    AxiomSet::parse_list(list).unwrap()
}

/// Every weak order on `items` objects as a rank vector: maps onto an
/// initial segment `0..k` of ranks.
fn weak_orders(items: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut ranks = vec![0u32; items];
    let total = (items as u64).pow(items as u32);
    for code in 0..total {
        let mut c = code;
        for r in ranks.iter_mut() {
            *r = (c % items as u64) as u32;
            c /= items as u64;
        }
        let mut used = vec![false; items];
        for &r in &ranks {
            used[r as usize] = true;
        }
        let k = used.iter().filter(|&&u| u).count();
        if used[..k].iter().all(|&u| u) {
            out.push(ranks.clone());
        }
    }
    out
}

#[test]
fn fubini_count_for_seven_sets() {
    assert_eq!(weak_orders(3).len(), 13);
    assert_eq!(weak_orders(7).len(), 47_293);
}

#[test]
fn lin_e_alone_has_two_models_at_two() {
    let cnf = instance_cnf(ProblemInstance::new(set("LIN_E"), n(2)));
    let l_models = (0u32..16)
        .filter(|bits| {
            let mut a = vec![false; cnf.num_vars() as usize];
            for i in 0..4 {
                a[i] = bits >> i & 1 == 1;
            }
            cnf.is_satisfied_by(&a)
        })
        .count();
    assert_eq!(l_models, 2);
}

#[test]
fn empty_instance_is_trivially_sat() {
    let cnf = instance_cnf(ProblemInstance::new(AxiomSet::EMPTY, n(3)));
    assert_eq!(cnf.num_clauses(), 0);
    assert!(setpref::sat::solve(&cnf, &SolverConfig::default()).unwrap().is_sat());
}

#[test]
fn kannai_peleg_instance_fits_the_variable_bound() {
    let cnf = instance_cnf(ProblemInstance::new(set("LIN_E,COMPL_S,TRANS_S,GF1,GF2,IND"), n(6)));
    assert!(cnf.num_vars() <= 4005);
}

#[test]
fn transitivity_clause_shape() {
    let cnf = clauses_for(TransS, n(3));
    assert_eq!(cnf.num_clauses(), 343);
    for c in cnf.clauses() {
        // A = B or B = C repeats a literal, which the container merges.
        assert!(c.len() == 2 || c.len() == 3);
        assert_eq!(c.iter().filter(|l| l.is_positive()).count(), 1);
    }
}

/// Clause counts by enumerating the quantifier ranges over bit masks,
/// times the number of consequent literals per instance.
fn enumerated_count(axiom: AxiomId, k: u32) -> u64 {
    let full = (1u32 << k) - 1;
    let sets = || 1..=full;
    let elems = || 0..k;
    let bit = |x: u32| 1u32 << x;
    let count = |it: &mut dyn Iterator<Item = ()>| it.count() as u64;
    match axiom {
        LinE => u64::from(k + 2 * k * (k - 1) + k * k * k),
        ReflS => u64::from(full),
        ComplS => u64::from(full) * u64::from(full - 1),
        TransS => u64::from(full).pow(3),
        Ext => 2 * u64::from(k * k),
        SDom => 4 * u64::from(k * k),
        Gf1 | Gf2 => 2 * u64::from(full) * u64::from(k),
        Ind | TopInd | BotInd | StrictInd | DisInd => {
            let per = if axiom == StrictInd { 2 } else { 1 };
            per * count(&mut sets().flat_map(|a| {
                sets().flat_map(move |b| {
                    elems().filter_map(move |x| {
                        let ok = (a | b) & bit(x) == 0 && (axiom != DisInd || a & b == 0);
                        ok.then_some(())
                    })
                })
            }))
        }
        IntInd => count(&mut sets().flat_map(|a| {
            sets().flat_map(move |b| {
                elems().flat_map(move |x| {
                    elems().filter_map(move |y| (x != y && (a | b) & (bit(x) | bit(y)) == 0).then_some(()))
                })
            })
        })),
        SuaV | SuaP | STopMon | SBotMon => 2 * u64::from(k).pow(3),
        EvenExt => {
            2 * count(&mut sets().filter(|a| a.count_ones() % 2 == 0).flat_map(|a| {
                elems().flat_map(move |x| {
                    elems().filter_map(move |y| (x != y && a & (bit(x) | bit(y)) == 0).then_some(()))
                })
            }))
        }
        Mc => u64::from(full).pow(2),
    }
}

#[test]
fn clause_counts_match_closed_forms() {
    for k in 2..=6 {
        for a in AxiomId::ALL {
            let expected = enumerated_count(a, k);
            assert_eq!(clause_count(a, n(k)), expected, "{a} at n={k}");
            assert_eq!(clauses_for(a, n(k)).num_clauses() as u64, expected, "{a} at n={k}");
        }
        assert_eq!(clause_count(TransS, n(k)), ((1u64 << k) - 1).pow(3));
    }
}

/// At n=2 every assignment to the 13 variables is checked: the generated
/// CNF is satisfied exactly when the semantic evaluator says the axiom
/// holds.
#[test]
fn generator_matches_evaluator_exhaustively_at_two() {
    let k = n(2);
    let cnfs: Vec<_> = AxiomId::ALL.iter().map(|&a| clauses_for(a, k)).collect();
    let vars = k.num_vars();
    for bits in 0u32..1 << vars {
        let assignment: Vec<bool> = (0..vars).map(|i| bits >> i & 1 == 1).collect();
        let (ord, rel) = decode_model(&assignment, k).unwrap();
        for (a, cnf) in AxiomId::ALL.iter().zip(&cnfs) {
            assert_eq!(
                cnf.is_satisfied_by(&assignment),
                holds(*a, &ord, &rel),
                "{a} on assignment {bits:#b}"
            );
        }
    }
}

/// At n=3 every weak order on the seven sets, under the canonical linear
/// order, is checked against every generator.
#[test]
fn generator_matches_evaluator_on_all_weak_orders_at_three() {
    let k = n(3);
    let ord = ElementOrder::canonical(k);
    let cnfs: Vec<_> = AxiomId::ALL.iter().map(|&a| clauses_for(a, k)).collect();
    for ranks in weak_orders(7) {
        let rel = SetRelation::from_ranks(k, &ranks);
        let assignment = encode_model(&ord, &rel);
        for (a, cnf) in AxiomId::ALL.iter().zip(&cnfs) {
            assert_eq!(cnf.is_satisfied_by(&assignment), holds(*a, &ord, &rel), "{a} on {ranks:?}");
        }
    }
}

/// Random relation pairs at n=3, including non-linear element relations and
/// incomplete or intransitive set relations.
#[test]
fn generator_matches_evaluator_on_random_pairs_at_three() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let k = n(3);
    let cnfs: Vec<_> = AxiomId::ALL.iter().map(|&a| clauses_for(a, k)).collect();
    let orders = weak_orders(7);
    for round in 0..20_000 {
        let mut ord = ElementOrder::canonical(k);
        if round % 2 == 0 {
            for x in k.elements() {
                for y in k.elements() {
                    ord.set(x, y, rng.gen());
                }
            }
        }
        let ranks = &orders[rng.gen_range(0..orders.len())];
        let mut rel = SetRelation::from_ranks(k, ranks);
        for _ in 0..rng.gen_range(0..4) {
            let a = SetCode::new(rng.gen_range(1..8));
            let b = SetCode::new(rng.gen_range(1..8));
            rel.set(a, b, !rel.get(a, b));
        }
        let assignment = encode_model(&ord, &rel);
        for (a, cnf) in AxiomId::ALL.iter().zip(&cnfs) {
            assert_eq!(cnf.is_satisfied_by(&assignment), holds(*a, &ord, &rel), "{a}");
        }
    }
}

/// Models found by the solver, enumerated with blocking clauses, satisfy
/// the evaluator.
#[test]
fn solver_models_satisfy_evaluator() {
    for k in [2, 3] {
        let k = n(k);
        for a in AxiomId::ALL {
            let mut cnf = clauses_for(a, k);
            for _ in 0..25 {
                let mut solver = Solver::new(&cnf, &SolverConfig::default());
                let Verdict::Sat(model) = solver.solve() else { break };
                let (ord, rel) = decode_model(model.as_slice(), k).unwrap();
                assert!(holds(a, &ord, &rel), "{a} at n={}", k.get());
                let block = (1..=k.num_vars())
                    .map(|v| {
                        let var = setpref::sat::Var::new(v);
                        if model.value(var) {
                            var.neg()
                        } else {
                            var.pos()
                        }
                    })
                    .collect();
                cnf.add_clause(block);
            }
        }
    }
}

#[test]
fn universal_indifference() {
    let k = n(3);
    let ord = ElementOrder::canonical(k);
    let rel = SetRelation::full(k);
    for a in [ReflS, ComplS, TransS, Ind, Mc] {
        assert!(holds(a, &ord, &rel), "{a}");
    }
    assert!(!holds(SDom, &ord, &rel));
}

#[test]
fn fixtures_reproduce_the_separation_pattern() {
    let four = [SDom, Ind, SuaV, STopMon];
    let fixtures = fixture_witnesses();
    assert_eq!(fixtures.len(), 4);
    let violated = [SDom, Ind, SuaV, STopMon];
    for (fx, missing) in fixtures.iter().zip(violated) {
        assert!(fx.rel.is_weak_order(), "{}", fx.name);
        for a in [ReflS, ComplS, TransS] {
            assert!(holds(a, &fx.ord, &fx.rel), "{} {a}", fx.name);
        }
        for a in four {
            assert_eq!(holds(a, &fx.ord, &fx.rel), a != missing, "{} {a}", fx.name);
        }
        let held = four.iter().filter(|&&a| holds(a, &fx.ord, &fx.rel)).count();
        assert_eq!(held, 3);
    }
}

#[test]
fn minmax_at_four() {
    let k = n(4);
    let ord = ElementOrder::canonical(k);
    let rel = minmax_order(k, &ord);
    assert!(rel.is_weak_order());
    assert!(!holds(Ind, &ord, &rel));
    assert!(holds(SuaV, &ord, &rel));
    assert!(holds(Ext, &ord, &rel));
}

#[test]
fn minmax_extends_the_element_order() {
    for k in 2..=5 {
        let k = n(k);
        let ord = ElementOrder::canonical(k);
        let rel = minmax_order(k, &ord);
        assert!(holds(Ext, &ord, &rel));
        assert!(satisfied(set("REFL_S,COMPL_S,TRANS_S"), &ord, &rel) == set("REFL_S,COMPL_S,TRANS_S"));
    }
}

#[test]
fn implication_sanity_on_weak_orders() {
    let k = n(3);
    let ord = ElementOrder::canonical(k);
    for ranks in weak_orders(7) {
        let rel = SetRelation::from_ranks(k, &ranks);
        if holds(Gf1, &ord, &rel) && holds(Gf2, &ord, &rel) {
            assert!(holds(SDom, &ord, &rel));
        }
        if holds(StrictInd, &ord, &rel) {
            assert!(holds(Ind, &ord, &rel));
        }
    }
}
