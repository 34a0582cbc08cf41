//! Under reflexivity, completeness, transitivity, dominance and
//! independence on five elements, every set is indifferent to the pair of
//! its best and worst member.

use setpref::sat::{CnfFormula, Lit, Solver, SolverConfig, Var, Verdict};
use setpref::*;

fn instance() -> (DomainSize, CnfFormula) {
    let n = DomainSize::new(5).unwrap();
    let axioms = AxiomSet::parse_list("LIN_E,REFL_S,COMPL_S,TRANS_S,GF1,GF2,IND").unwrap();
    (n, instance_cnf(ProblemInstance::new(axioms, n)))
}

fn pair_of_extremes(ord: &ElementOrder, a: SetCode) -> SetCode {
    SetCode::singleton(ord.max_of(a).unwrap()).with(ord.min_of(a).unwrap())
}

#[test]
fn sampled_witnesses_have_extreme_pair_indifference() {
    let (n, mut cnf) = instance();
    for _ in 0..12 {
        let Verdict::Sat(model) = Solver::new(&cnf, &SolverConfig::default()).solve() else {
            panic!("the instance is satisfiable at five");
        };
        let (ord, rel) = decode_model(model.as_slice(), n).unwrap();
        assert!(ord.is_linear());
        for a in n.sets() {
            assert!(rel.indifferent(a, pair_of_extremes(&ord, a)), "{a}");
        }
        let block = (1..=n.num_vars())
            .map(|v| Lit::new(Var::new(v), !model.value(Var::new(v))))
            .collect();
        cnf.add_clause(block);
    }
}

/// Refutes a counterexample for each set under the canonical order, which
/// covers every linear order since the axioms are invariant under renaming
/// elements.
#[test]
fn no_witness_breaks_extreme_pair_indifference() {
    let (n, mut cnf) = instance();
    let ord = ElementOrder::canonical(n);
    let base = cnf.num_vars();
    cnf.declare_vars(base + n.num_sets());
    for a in n.sets() {
        let m = pair_of_extremes(&ord, a);
        let sel = Var::new(base + a.mask()).pos();
        cnf.add_clause(vec![!sel, !model::w(n, a, m), !model::w(n, m, a)]);
    }
    let fix: Vec<Lit> = n
        .elements()
        .flat_map(|x| n.elements().map(move |y| (x, y)))
        .map(|(x, y)| {
            let lit = model::l(n, x, y);
            if ord.get(x, y) {
                lit
            } else {
                !lit
            }
        })
        .collect();
    let mut solver = Solver::new(&cnf, &SolverConfig::default());
    assert!(solver.solve_under(&fix).is_sat());
    for a in n.sets() {
        let mut assumptions = fix.clone();
        assumptions.push(Var::new(base + a.mask()).pos());
        assert!(matches!(solver.solve_under(&assumptions), Verdict::Unsat), "{a}");
    }
}
