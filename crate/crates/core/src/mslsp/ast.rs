use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Elem,
    Set,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Elem => "elem",
            Sort::Set => "set",
        })
    }
}

/// Bound variable. `id` is unique per binder within one parse, so shadowed
/// names stay distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub name: String,
    pub sort: Sort,
    pub id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Variable),
    Union(Box<Term>, Box<Term>),
    Sing(Box<Term>),
    ReplaceInBy(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort,
            _ => Sort::Set,
        }
    }

    pub fn free_vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Union(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Term::Sing(a) => a.free_vars(out),
            Term::ReplaceInBy(a, s, b) => {
                a.free_vars(out);
                s.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    pub fn mentions(&self, v: &Variable) -> bool {
        let mut vars = BTreeSet::new();
        self.free_vars(&mut vars);
        vars.contains(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pred {
    In,
    Subseteq,
    Disjoint,
    EvenCard,
    EqualCard,
    WPref,
    WStrict,
    LPref,
    LStrict,
    Eq,
}

impl Pred {
    pub fn name(self) -> &'static str {
        match self {
            Pred::In => "in",
            Pred::Subseteq => "subseteq",
            Pred::Disjoint => "disjoint",
            Pred::EvenCard => "evencard",
            Pred::EqualCard => "equalcard",
            Pred::WPref => "wpref",
            Pred::WStrict => "wstrict",
            Pred::LPref => "lpref",
            Pred::LStrict => "lstrict",
            Pred::Eq => "eq",
        }
    }

    pub fn from_name(name: &str) -> Option<Pred> {
        Some(match name {
            "in" => Pred::In,
            "subseteq" => Pred::Subseteq,
            "disjoint" => Pred::Disjoint,
            "evencard" => Pred::EvenCard,
            "equalcard" => Pred::EqualCard,
            "wpref" => Pred::WPref,
            "wstrict" => Pred::WStrict,
            "lpref" => Pred::LPref,
            "lstrict" => Pred::LStrict,
            "eq" => Pred::Eq,
            _ => return None,
        })
    }

    /// Argument sorts; `None` for `eq`, whose two arguments share a sort.
    pub fn signature(self) -> Option<&'static [Sort]> {
        use Sort::*;
        Some(match self {
            Pred::In => &[Elem, Set],
            Pred::Subseteq | Pred::Disjoint | Pred::EqualCard | Pred::WPref | Pred::WStrict => {
                &[Set, Set]
            }
            Pred::EvenCard => &[Set],
            Pred::LPref | Pred::LStrict => &[Elem, Elem],
            Pred::Eq => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Variable, Box<Formula>),
    Exists(Variable, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: Pred, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom { pred, args })
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| t.free_vars(out)),
            Formula::Not(f) => f.collect_free(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Atom(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Counts quantifiers by kind and sort: `(∀ε, ∀σ, ∃ε, ∃σ)`.
    pub fn quantifier_profile(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        self.count_quantifiers(&mut counts);
        counts
    }

    fn count_quantifiers(&self, counts: &mut [usize; 4]) {
        match self {
            Formula::Const(_) | Formula::Atom(_) => {}
            Formula::Not(f) => f.count_quantifiers(counts),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.count_quantifiers(counts);
                b.count_quantifiers(counts);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = match (self, v.sort) {
                    (Formula::Forall(..), Sort::Elem) => 0,
                    (Formula::Forall(..), Sort::Set) => 1,
                    (_, Sort::Elem) => 2,
                    (_, Sort::Set) => 3,
                };
                counts[slot] += 1;
                body.count_quantifiers(counts);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Union(a, b) => write!(f, "union({a}, {b})"),
            Term::Sing(a) => write!(f, "sing({a})"),
            Term::ReplaceInBy(a, s, b) => write!(f, "replaceInBy({a}, {s}, {b})"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred.name())?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// Prints in the surface syntax with full parenthesization, so the output
/// parses back to an equal formula up to variable ids.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{b}"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "not {}", Paren(g)),
            Formula::And(a, b) => write!(f, "{} and {}", Paren(a), Paren(b)),
            Formula::Or(a, b) => write!(f, "{} or {}", Paren(a), Paren(b)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Paren(a), Paren(b)),
            Formula::Iff(a, b) => write!(f, "{} <-> {}", Paren(a), Paren(b)),
            Formula::Forall(v, body) => {
                let kw = if v.sort == Sort::Elem { "forall_e" } else { "forall_s" };
                write!(f, "{kw} {}. {body}", v.name)
            }
            Formula::Exists(v, body) if v.sort == Sort::Set => write!(f, "exists_s {}. {body}", v.name),
            Formula::Exists(v, body) => match body.as_ref() {
                Formula::And(guard, rest) => match guard.as_ref() {
                    Formula::Atom(Atom { pred: Pred::In, args })
                        if matches!(&args[0], Term::Var(y) if y == v) && !args[1].mentions(v) =>
                    {
                        write!(f, "exists_e {} in {}. {rest}", v.name, args[1])
                    }
                    _ => write!(f, "exists_e_unguarded {}. {body}", v.name),
                },
                _ => write!(f, "exists_e_unguarded {}. {body}", v.name),
            },
        }
    }
}

struct Paren<'a>(&'a Formula);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Const(_) | Formula::Atom(_) => write!(f, "{}", self.0),
            other => write!(f, "({other})"),
        }
    }
}
