//! Grounding over a fixed domain, and direct evaluation on a structure.

use std::collections::HashMap;

use setpref_sat::cnf::normalize_clause;
use setpref_sat::{Clause, CnfFormula, Lit, Var};
use thiserror::Error;

use super::ast::{Atom, Formula, Pred, Sort, Term, Variable};
use super::normal::normalize;
use crate::model::{l, w, DomainSize, ElementCode, ElementOrder, SetCode, SetRelation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("formula has free variables: {0}")]
    NotClosed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundConfig {
    /// Largest distributed CNF, in literals, produced without auxiliary
    /// variables. Larger top-level conjuncts get definitional encoding.
    pub literal_budget: u64,
}

impl Default for GroundConfig {
    fn default() -> GroundConfig {
        GroundConfig {
            literal_budget: 1_000_000,
        }
    }
}

/// Propositional skeleton left after constant folding.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Prop {
    Const(bool),
    Lit(Lit),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

type Env = HashMap<u32, u32>;

fn term_value(t: &Term, env: &Env) -> u32 {
    match t {
        Term::Var(v) => env[&v.id],
        Term::Union(a, b) => term_value(a, env) | term_value(b, env),
        Term::Sing(x) => 1 << term_value(x, env),
        Term::ReplaceInBy(a, s, b) => {
            (term_value(s, env) & !(1 << term_value(a, env))) | (1 << term_value(b, env))
        }
    }
}

/// Value of an atom whose predicate is a fixed part of the structure, or the
/// literal standing for a preference atom.
enum AtomValue {
    Fixed(bool),
    Pref(Lit),
}

fn atom_value(a: &Atom, env: &Env, n: DomainSize) -> AtomValue {
    let v: Vec<u32> = a.args.iter().map(|t| term_value(t, env)).collect();
    let elem = |c: u32| ElementCode::new(c as u8);
    match a.pred {
        Pred::In => AtomValue::Fixed(v[1] & (1 << v[0]) != 0),
        Pred::Subseteq => AtomValue::Fixed(v[0] | v[1] == v[1]),
        Pred::Disjoint => AtomValue::Fixed(v[0] & v[1] == 0),
        Pred::EvenCard => AtomValue::Fixed(v[0].count_ones() % 2 == 0),
        Pred::EqualCard => AtomValue::Fixed(v[0].count_ones() == v[1].count_ones()),
        Pred::Eq => AtomValue::Fixed(v[0] == v[1]),
        Pred::LPref => AtomValue::Pref(l(n, elem(v[0]), elem(v[1]))),
        Pred::WPref => AtomValue::Pref(w(n, SetCode::new(v[0]), SetCode::new(v[1]))),
        Pred::LStrict | Pred::WStrict => unreachable!("strict sugar is removed by normalize"),
    }
}

fn domain(v: &Variable, n: DomainSize) -> std::ops::RangeInclusive<u32> {
    match v.sort {
        Sort::Elem => 0..=n.get() - 1,
        Sort::Set => 1..=n.num_sets(),
    }
}

fn and(parts: Vec<Prop>) -> Prop {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Prop::Const(true) => {}
            Prop::Const(false) => return Prop::Const(false),
            Prop::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Prop::Const(true),
        1 => out.pop().unwrap(),
        _ => Prop::And(out),
    }
}

fn or(parts: Vec<Prop>) -> Prop {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Prop::Const(false) => {}
            Prop::Const(true) => return Prop::Const(true),
            Prop::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Prop::Const(false),
        1 => out.pop().unwrap(),
        _ => Prop::Or(out),
    }
}

/// `f` must be in negation normal form.
fn instantiate(f: &Formula, env: &mut Env, n: DomainSize) -> Prop {
    match f {
        Formula::Const(b) => Prop::Const(*b),
        Formula::Atom(a) => match atom_value(a, env, n) {
            AtomValue::Fixed(b) => Prop::Const(b),
            AtomValue::Pref(lit) => Prop::Lit(lit),
        },
        Formula::Not(g) => match instantiate(g, env, n) {
            Prop::Const(b) => Prop::Const(!b),
            Prop::Lit(lit) => Prop::Lit(!lit),
            _ => unreachable!("negation only wraps atoms in normal form"),
        },
        Formula::And(a, b) => and(vec![instantiate(a, env, n), instantiate(b, env, n)]),
        Formula::Or(a, b) => or(vec![instantiate(a, env, n), instantiate(b, env, n)]),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut parts = Vec::new();
            for value in domain(v, n) {
                env.insert(v.id, value);
                parts.push(instantiate(body, env, n));
            }
            env.remove(&v.id);
            if matches!(f, Formula::Forall(..)) {
                and(parts)
            } else {
                or(parts)
            }
        }
        Formula::Implies(..) | Formula::Iff(..) => {
            unreachable!("connectives are eliminated by normalize")
        }
    }
}

/// Distributed size as `(clauses, literals)`, saturating.
fn cnf_size(p: &Prop) -> (f64, f64) {
    match p {
        Prop::Const(_) => (0.0, 0.0),
        Prop::Lit(_) => (1.0, 1.0),
        Prop::And(parts) => parts.iter().map(cnf_size).fold((0.0, 0.0), |acc, s| {
            (acc.0 + s.0, acc.1 + s.1)
        }),
        Prop::Or(parts) => {
            let mut clauses = 1.0;
            let mut lits = 0.0;
            for s in parts.iter().map(cnf_size) {
                lits = lits * s.0 + s.1 * clauses;
                clauses *= s.0;
            }
            (clauses, lits)
        }
    }
}

fn distribute(p: &Prop) -> Vec<Clause> {
    match p {
        Prop::Const(true) => Vec::new(),
        Prop::Const(false) => vec![Vec::new()],
        Prop::Lit(lit) => vec![vec![*lit]],
        Prop::And(parts) => parts.iter().flat_map(distribute).collect(),
        Prop::Or(parts) => {
            let mut acc: Vec<Clause> = vec![Vec::new()];
            for part in parts {
                let rhs = distribute(part);
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        let mut c = a.clone();
                        c.extend_from_slice(b);
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Positive-polarity definitional encoding: the returned literal implies `p`.
fn define(p: &Prop, next_var: &mut u32, out: &mut Vec<Clause>) -> Lit {
    match p {
        Prop::Lit(lit) => *lit,
        Prop::Const(_) => unreachable!("constants are folded away"),
        Prop::And(parts) | Prop::Or(parts) => {
            let children: Vec<Lit> = parts.iter().map(|c| define(c, next_var, out)).collect();
            *next_var += 1;
            let v = Var::new(*next_var).pos();
            if matches!(p, Prop::And(_)) {
                out.extend(children.into_iter().map(|c| vec![!v, c]));
            } else {
                let mut clause = vec![!v];
                clause.extend(children);
                out.push(clause);
            }
            v
        }
    }
}

pub fn ground(f: &Formula, n: DomainSize) -> Result<CnfFormula, GroundError> {
    ground_with(f, n, GroundConfig::default())
}

/// Expands quantifiers over the domain of size `n`, folds the fixed
/// predicates to constants, and converts the rest to CNF over the standard
/// variable layout. Auxiliary variables, when needed, are numbered above
/// `n² + (2ⁿ−1)²`. Tautological clauses are dropped.
pub fn ground_with(f: &Formula, n: DomainSize, cfg: GroundConfig) -> Result<CnfFormula, GroundError> {
    let free = f.free_vars();
    if !free.is_empty() {
        let names: Vec<_> = free.iter().map(|v| v.name.as_str()).collect();
        return Err(GroundError::NotClosed(names.join(", ")));
    }
    let prop = instantiate(&normalize(f), &mut Env::new(), n);
    let top = match prop {
        Prop::And(parts) => parts,
        other => vec![other],
    };
    let mut next_var = n.num_vars();
    let mut clauses = Vec::new();
    for part in &top {
        if cnf_size(part).1 <= cfg.literal_budget as f64 {
            clauses.extend(distribute(part));
        } else {
            let root = define(part, &mut next_var, &mut clauses);
            clauses.push(vec![root]);
        }
    }
    let mut cnf = CnfFormula::new(next_var);
    for c in clauses {
        if let Some(c) = normalize_clause(&c) {
            cnf.add_clause(c);
        }
    }
    Ok(cnf)
}

/// Truth of a closed formula in the structure given by `ord` and `rel`.
pub fn eval(f: &Formula, ord: &ElementOrder, rel: &SetRelation) -> bool {
    eval_in(f, &mut Env::new(), ord, rel)
}

fn eval_in(f: &Formula, env: &mut Env, ord: &ElementOrder, rel: &SetRelation) -> bool {
    let n = ord.domain();
    match f {
        Formula::Const(b) => *b,
        Formula::Atom(a) => {
            let v: Vec<u32> = a.args.iter().map(|t| term_value(t, env)).collect();
            let e = |c: u32| ElementCode::new(c as u8);
            let s = SetCode::new;
            match a.pred {
                Pred::LPref => ord.get(e(v[0]), e(v[1])),
                Pred::LStrict => ord.strict(e(v[0]), e(v[1])),
                Pred::WPref => rel.get(s(v[0]), s(v[1])),
                Pred::WStrict => rel.strict(s(v[0]), s(v[1])),
                _ => match atom_value(a, env, n) {
                    AtomValue::Fixed(b) => b,
                    AtomValue::Pref(_) => unreachable!(),
                },
            }
        }
        Formula::Not(g) => !eval_in(g, env, ord, rel),
        Formula::And(a, b) => eval_in(a, env, ord, rel) && eval_in(b, env, ord, rel),
        Formula::Or(a, b) => eval_in(a, env, ord, rel) || eval_in(b, env, ord, rel),
        Formula::Implies(a, b) => !eval_in(a, env, ord, rel) || eval_in(b, env, ord, rel),
        Formula::Iff(a, b) => eval_in(a, env, ord, rel) == eval_in(b, env, ord, rel),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for value in domain(v, n) {
                env.insert(v.id, value);
                if eval_in(body, env, ord, rel) != universal {
                    result = !universal;
                    break;
                }
            }
            env.remove(&v.id);
            result
        }
    }
}
