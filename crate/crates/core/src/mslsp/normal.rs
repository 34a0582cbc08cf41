//! Negation normal form and the syntactic existential set-guard check.

use std::fmt;

use super::ast::{Atom, Formula, Pred, Sort, Term};

/// Eliminates `->`, `<->` and the strict sugar, then pushes negations down
/// to atoms. The result contains only constants, possibly negated atoms over
/// the non-strict predicates, `and`, `or` and quantifiers. Idempotent.
pub fn normalize(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Const(b) => Formula::Const(*b == positive),
        Formula::Atom(a) => match a.pred {
            Pred::WStrict | Pred::LStrict => {
                let weak = if a.pred == Pred::WStrict {
                    Pred::WPref
                } else {
                    Pred::LPref
                };
                let fwd = Formula::atom(weak, a.args.clone());
                let back = Formula::atom(weak, vec![a.args[1].clone(), a.args[0].clone()]);
                nnf(&Formula::and(fwd, Formula::not(back)), positive)
            }
            _ if positive => Formula::Atom(a.clone()),
            _ => Formula::not(Formula::Atom(a.clone())),
        },
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(a, b) if positive => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if positive => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Implies(a, b) if positive => Formula::or(nnf(a, false), nnf(b, true)),
        Formula::Implies(a, b) => Formula::and(nnf(a, true), nnf(b, false)),
        Formula::Iff(a, b) if positive => Formula::and(
            Formula::or(nnf(a, false), nnf(b, true)),
            Formula::or(nnf(a, true), nnf(b, false)),
        ),
        Formula::Iff(a, b) => Formula::or(
            Formula::and(nnf(a, true), nnf(b, false)),
            Formula::and(nnf(a, false), nnf(b, true)),
        ),
        Formula::Forall(v, body) if positive => Formula::Forall(v.clone(), Box::new(nnf(body, true))),
        Formula::Forall(v, body) => Formula::Exists(v.clone(), Box::new(nnf(body, false))),
        Formula::Exists(v, body) if positive => Formula::Exists(v.clone(), Box::new(nnf(body, true))),
        Formula::Exists(v, body) => Formula::Forall(v.clone(), Box::new(nnf(body, false))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EsgVerdict {
    Esg,
    NotEsg { reason: String, offending: Formula },
}

impl EsgVerdict {
    pub fn is_esg(&self) -> bool {
        matches!(self, EsgVerdict::Esg)
    }
}

impl fmt::Display for EsgVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsgVerdict::Esg => f.write_str("ESG"),
            EsgVerdict::NotEsg { reason, offending } => {
                write!(f, "NotESG: {reason}: {offending}")
            }
        }
    }
}

/// Classifies the negation normal form of `f`.
///
/// Quantifier-free formulas are accepted, as are conjunctions, disjunctions
/// and universal quantifications of accepted formulas. An element
/// existential is accepted when its body is a conjunction with a conjunct
/// `in(y, t)`, `y` the bound variable and `t` free of `y`, and the remaining
/// conjuncts are accepted. Set existentials are always rejected.
pub fn classify_esg(f: &Formula) -> EsgVerdict {
    match check(&normalize(f)) {
        Ok(()) => EsgVerdict::Esg,
        Err((reason, offending)) => EsgVerdict::NotEsg { reason, offending },
    }
}

fn conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        other => out.push(other),
    }
}

fn check(f: &Formula) -> Result<(), (String, Formula)> {
    if f.is_quantifier_free() {
        return Ok(());
    }
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => {
            check(a)?;
            check(b)
        }
        Formula::Forall(_, body) => check(body),
        Formula::Exists(v, _) if v.sort == Sort::Set => {
            Err(("existential over sets".to_string(), f.clone()))
        }
        Formula::Exists(v, body) => {
            let mut parts = Vec::new();
            conjuncts(body, &mut parts);
            let guard = parts.iter().position(|p| match p {
                Formula::Atom(Atom {
                    pred: Pred::In,
                    args,
                }) => matches!(&args[0], Term::Var(y) if y == v) && !args[1].mentions(v),
                _ => false,
            });
            let Some(guard) = guard else {
                return Err((format!("unguarded existential over `{}`", v.name), f.clone()));
            };
            parts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != guard)
                .try_for_each(|(_, p)| check(p))
        }
        _ => Err(("not in negation normal form".to_string(), f.clone())),
    }
}
