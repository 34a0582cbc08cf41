use setpref::equiv::{clausewise_equivalent, projected_equivalent_exhaustive};
use setpref::mslsp::{catalog_formula, eval, ground, ground_with, parse, GroundConfig, PB_SOURCE};
use setpref::{clauses_for, decode_model, AxiomId, DomainSize};

fn n(k: u32) -> DomainSize {
    DomainSize::new(k).unwrap()
}

#[test]
fn grounded_sources_match_generators() {
    for k in [2, 3, 4] {
        let k = n(k);
        for a in AxiomId::ALL {
            let grounded = ground(&catalog_formula(a), k).unwrap();
            assert_eq!(grounded.num_vars(), k.num_vars(), "{a}: no auxiliary variables expected");
            clausewise_equivalent(&grounded, &clauses_for(a, k), k.num_vars())
                .unwrap_or_else(|e| panic!("{a} at n={}: {e}", k.get()));
        }
    }
}

/// Every assignment at n=2: generator, grounded CNF and direct evaluation
/// of the source agree.
#[test]
fn grounding_preserves_semantics_exhaustively_at_two() {
    let k = n(2);
    let vars = k.num_vars();
    let cases: Vec<_> = AxiomId::ALL
        .iter()
        .map(|&a| {
            let f = catalog_formula(a);
            (a, ground(&f, k).unwrap(), clauses_for(a, k), f)
        })
        .collect();
    let pb = parse(PB_SOURCE).unwrap();
    let pb_cnf = ground(&pb, k).unwrap();
    for bits in 0u32..1 << vars {
        let assignment: Vec<bool> = (0..vars).map(|i| bits >> i & 1 == 1).collect();
        let (ord, rel) = decode_model(&assignment, k).unwrap();
        for (a, grounded, generated, f) in &cases {
            let truth = eval(f, &ord, &rel);
            assert_eq!(grounded.is_satisfied_by(&assignment), truth, "{a} {bits:#b}");
            assert_eq!(generated.is_satisfied_by(&assignment), truth, "{a} {bits:#b}");
        }
        assert_eq!(pb_cnf.is_satisfied_by(&assignment), eval(&pb, &ord, &rel));
    }
}

/// A tiny literal budget forces the definitional encoding; the projection
/// onto the relation variables must not change.
#[test]
fn definitional_encoding_preserves_projection() {
    let k = n(2);
    let cfg = GroundConfig { literal_budget: 1 };
    let mut saw_aux = false;
    for a in AxiomId::ALL {
        let f = catalog_formula(a);
        let small = ground_with(&f, k, cfg).unwrap();
        saw_aux |= small.num_vars() > k.num_vars();
        projected_equivalent_exhaustive(&small, &clauses_for(a, k), k.num_vars())
            .unwrap_or_else(|e| panic!("{a}: {e}"));
    }
    assert!(saw_aux);
}

/// At n=3: the definitional CNF implies every generator clause, and on a
/// spread of weak orders the two agree on which relation pairs extend to a
/// model.
#[test]
fn definitional_encoding_preserves_projection_at_three() {
    use setpref::sat::{Lit, Solver, Var, Verdict};
    use setpref::{encode_model, ElementOrder, SetRelation};
    let k = n(3);
    let cfg = GroundConfig { literal_budget: 1 };
    let ord = ElementOrder::canonical(k);
    for a in [AxiomId::Gf1, AxiomId::SDom, AxiomId::StrictInd, AxiomId::SuaV, AxiomId::IntInd] {
        let small = ground_with(&catalog_formula(a), k, cfg).unwrap();
        assert!(small.num_vars() > k.num_vars(), "{a}");
        let generated = clauses_for(a, k);
        let mut solver = Solver::new(&small, &Default::default());
        for c in generated.clauses() {
            let negated: Vec<Lit> = c.iter().map(|&l| !l).collect();
            assert!(matches!(solver.solve_under(&negated), Verdict::Unsat), "{a}");
        }
        let mut ranks = [0u32; 7];
        for code in (0..7u32.pow(7)).step_by(97) {
            let mut c = code;
            for r in ranks.iter_mut() {
                *r = c % 7;
                c /= 7;
            }
            let rel = SetRelation::from_ranks(k, &ranks);
            let assignment = encode_model(&ord, &rel);
            let units: Vec<Lit> = assignment
                .iter()
                .enumerate()
                .map(|(i, &b)| Lit::new(Var::new(i as u32 + 1), b))
                .collect();
            let extends = matches!(solver.solve_under(&units), Verdict::Sat(_));
            assert_eq!(extends, generated.is_satisfied_by(&assignment), "{a} {ranks:?}");
        }
    }
}
