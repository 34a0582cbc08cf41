//! The twenty-axiom catalog: CNF generators, a direct semantic evaluator and
//! the closed-form clause counts of the generators.
//!
//! Strict comparisons never get their own variables: `A ≻ B` is compiled as
//! `w(A,B) ∧ ¬w(B,A)` and `x ≻̇ y` as `l(x,y) ∧ ¬l(y,x)`. Generators emit one
//! clause per quantifier instance and per consequent conjunct, so clause
//! counts follow the quantifier ranges exactly (tautological instances are
//! kept; the solver drops them on load).

use std::fmt;
use std::str::FromStr;

use setpref_sat::{CnfFormula, Lit};
use thiserror::Error;

use crate::model::{l, w, DomainSize, ElementCode, ElementOrder, SetCode, SetRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    LinE,
    ReflS,
    ComplS,
    TransS,
    Ext,
    SDom,
    Gf1,
    Gf2,
    Ind,
    StrictInd,
    SuaV,
    SuaP,
    STopMon,
    SBotMon,
    TopInd,
    BotInd,
    DisInd,
    IntInd,
    EvenExt,
    Mc,
}

use AxiomId::*;

impl AxiomId {
    /// Catalog order, which is also the bit order of [`AxiomSet`].
    pub const ALL: [AxiomId; 20] = [
        LinE, ReflS, ComplS, TransS, Ext, SDom, Gf1, Gf2, Ind, StrictInd, SuaV, SuaP, STopMon,
        SBotMon, TopInd, BotInd, DisInd, IntInd, EvenExt, Mc,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<AxiomId> {
        AxiomId::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            LinE => "LIN_E",
            ReflS => "REFL_S",
            ComplS => "COMPL_S",
            TransS => "TRANS_S",
            Ext => "EXT",
            SDom => "SDOM",
            Gf1 => "GF1",
            Gf2 => "GF2",
            Ind => "IND",
            StrictInd => "STRICT_IND",
            SuaV => "SUA_V",
            SuaP => "SUA_P",
            STopMon => "S_TOP_MON",
            SBotMon => "S_BOT_MON",
            TopInd => "TOP_IND",
            BotInd => "BOT_IND",
            DisInd => "DIS_IND",
            IntInd => "INT_IND",
            EvenExt => "EVEN_EXT",
            Mc => "MC",
        }
    }

    /// Conventional short label, e.g. `SUAv` or `strictIND`.
    pub fn label(self) -> &'static str {
        match self {
            LinE => "LINe",
            ReflS => "REFLs",
            ComplS => "COMPLs",
            TransS => "TRANSs",
            Ext => "EXT",
            SDom => "SDom",
            Gf1 => "GF1",
            Gf2 => "GF2",
            Ind => "IND",
            StrictInd => "strictIND",
            SuaV => "SUAv",
            SuaP => "SUAp",
            STopMon => "STopMon",
            SBotMon => "SBotMon",
            TopInd => "topIND",
            BotInd => "botIND",
            DisInd => "disIND",
            IntInd => "intIND",
            EvenExt => "evenExt",
            Mc => "MC",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownAxiom(pub String);

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| *c != '_' && *c != '-')
        .flat_map(char::to_lowercase)
        .collect()
}

impl FromStr for AxiomId {
    type Err = UnknownAxiom;

    /// Case-insensitive; underscores and dashes are ignored, so `SUAv`,
    /// `sua_v` and `SUA_V` are the same axiom. `LIN`, `REFL`, `COMPL` and
    /// `TRANS` name the order axioms.
    fn from_str(s: &str) -> Result<AxiomId, UnknownAxiom> {
        let key = squash(s.trim());
        let alias = match key.as_str() {
            "lin" | "linε" => Some(LinE),
            "refl" | "reflσ" => Some(ReflS),
            "compl" | "complσ" => Some(ComplS),
            "trans" | "transσ" => Some(TransS),
            _ => None,
        };
        alias
            .or_else(|| {
                AxiomId::ALL
                    .into_iter()
                    .find(|a| squash(a.name()) == key || squash(a.label()) == key)
            })
            .ok_or_else(|| UnknownAxiom(s.trim().to_string()))
    }
}

/// Subset of the catalog, bit `i` standing for `AxiomId::ALL[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AxiomSet(u32);

impl AxiomSet {
    pub const EMPTY: AxiomSet = AxiomSet(0);

    pub fn all() -> AxiomSet {
        AxiomSet((1 << AxiomId::ALL.len()) - 1)
    }

    pub fn from_mask(mask: u32) -> AxiomSet {
        AxiomSet(mask & AxiomSet::all().0)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, a: AxiomId) -> bool {
        self.0 & (1 << a.index()) != 0
    }

    pub fn with(self, a: AxiomId) -> AxiomSet {
        AxiomSet(self.0 | (1 << a.index()))
    }

    pub fn without(self, a: AxiomId) -> AxiomSet {
        AxiomSet(self.0 & !(1 << a.index()))
    }

    pub fn union(self, other: AxiomSet) -> AxiomSet {
        AxiomSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: AxiomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = AxiomId> {
        AxiomId::ALL.into_iter().filter(move |a| self.contains(*a))
    }

    /// Parses `all` or a comma-separated list of axiom names.
    pub fn parse_list(s: &str) -> Result<AxiomSet, UnknownAxiom> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(AxiomSet::all());
        }
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse::<AxiomId>)
            .collect()
    }
}

impl FromIterator<AxiomId> for AxiomSet {
    fn from_iter<I: IntoIterator<Item = AxiomId>>(iter: I) -> AxiomSet {
        iter.into_iter().fold(AxiomSet::EMPTY, AxiomSet::with)
    }
}

impl FromStr for AxiomSet {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<AxiomSet, UnknownAxiom> {
        AxiomSet::parse_list(s)
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(AxiomId::name).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    pub axioms: AxiomSet,
    pub n: DomainSize,
}

impl ProblemInstance {
    pub fn new(axioms: AxiomSet, n: DomainSize) -> ProblemInstance {
        ProblemInstance { axioms, n }
    }
}

struct Gen {
    n: DomainSize,
    cnf: CnfFormula,
}

impl Gen {
    fn new(n: DomainSize) -> Gen {
        Gen {
            n,
            cnf: CnfFormula::new(n.num_vars()),
        }
    }

    fn l(&self, x: ElementCode, y: ElementCode) -> Lit {
        l(self.n, x, y)
    }

    fn w(&self, a: SetCode, b: SetCode) -> Lit {
        w(self.n, a, b)
    }

    /// Literals of `¬(x ≻̇ y)`.
    fn not_lstrict(&self, x: ElementCode, y: ElementCode) -> [Lit; 2] {
        [!self.l(x, y), self.l(y, x)]
    }

    /// Literals of `¬(A ≻ B)`.
    fn not_wstrict(&self, a: SetCode, b: SetCode) -> [Lit; 2] {
        [!self.w(a, b), self.w(b, a)]
    }

    /// Emits `premise ∨ c` for each consequent literal `c`.
    fn implies(&mut self, premise: &[Lit], consequents: &[Lit]) {
        for &c in consequents {
            let mut clause = premise.to_vec();
            clause.push(c);
            self.cnf.add_clause(clause);
        }
    }

    /// Consequent literals of `A ≻ B`.
    fn wstrict(&self, a: SetCode, b: SetCode) -> [Lit; 2] {
        [self.w(a, b), !self.w(b, a)]
    }

    /// Consequent literals of `A ∼ B`.
    fn windiff(&self, a: SetCode, b: SetCode) -> [Lit; 2] {
        [self.w(a, b), self.w(b, a)]
    }
}

/// CNF of one axiom over the full variable layout for `n`.
pub fn clauses_for(axiom: AxiomId, n: DomainSize) -> CnfFormula {
    let mut g = Gen::new(n);
    let xs: Vec<ElementCode> = n.elements().collect();
    let sets: Vec<SetCode> = n.sets().collect();
    let single = SetCode::singleton;
    match axiom {
        LinE => {
            for &x in &xs {
                g.cnf.add_clause(vec![g.l(x, x)]);
            }
            for &x in &xs {
                for &y in &xs {
                    if x != y {
                        g.cnf.add_clause(vec![g.l(x, y), g.l(y, x)]);
                    }
                }
            }
            for &x in &xs {
                for &y in &xs {
                    for &z in &xs {
                        g.cnf.add_clause(vec![!g.l(x, y), !g.l(y, z), g.l(x, z)]);
                    }
                }
            }
            for &x in &xs {
                for &y in &xs {
                    if x != y {
                        g.cnf.add_clause(vec![!g.l(x, y), !g.l(y, x)]);
                    }
                }
            }
        }
        ReflS => {
            for &a in &sets {
                g.cnf.add_clause(vec![g.w(a, a)]);
            }
        }
        ComplS => {
            for &a in &sets {
                for &b in &sets {
                    if a != b {
                        g.cnf.add_clause(vec![g.w(a, b), g.w(b, a)]);
                    }
                }
            }
        }
        TransS => {
            for &a in &sets {
                for &b in &sets {
                    for &c in &sets {
                        g.cnf.add_clause(vec![!g.w(a, b), !g.w(b, c), g.w(a, c)]);
                    }
                }
            }
        }
        Ext => {
            for &x in &xs {
                for &y in &xs {
                    let (lxy, wxy) = (g.l(x, y), g.w(single(x), single(y)));
                    g.cnf.add_clause(vec![!lxy, wxy]);
                    g.cnf.add_clause(vec![lxy, !wxy]);
                }
            }
        }
        SDom => {
            for &x in &xs {
                for &y in &xs {
                    let (sx, sy, sxy) = (single(x), single(y), single(x).with(y));
                    let premise = g.not_lstrict(x, y);
                    let mut cons = g.wstrict(sx, sxy).to_vec();
                    cons.extend(g.wstrict(sxy, sy));
                    g.implies(&premise, &cons);
                }
            }
        }
        Gf1 | Gf2 => {
            for &a in &sets {
                for &x in &xs {
                    let ax = a.with(x);
                    let premise: Vec<Lit> = a
                        .elements()
                        .flat_map(|e| {
                            if axiom == Gf1 {
                                g.not_lstrict(x, e)
                            } else {
                                g.not_lstrict(e, x)
                            }
                        })
                        .collect();
                    let cons = if axiom == Gf1 {
                        g.wstrict(ax, a)
                    } else {
                        g.wstrict(a, ax)
                    };
                    g.implies(&premise, &cons);
                }
            }
        }
        Ind | StrictInd | TopInd | BotInd | DisInd => {
            for &a in &sets {
                for &b in &sets {
                    if axiom == DisInd && !a.is_disjoint(b) {
                        continue;
                    }
                    let ab = a.union(b);
                    for &x in &xs {
                        if ab.contains(x) {
                            continue;
                        }
                        let mut premise = g.not_wstrict(a, b).to_vec();
                        for y in ab.elements() {
                            match axiom {
                                TopInd => premise.extend(g.not_lstrict(x, y)),
                                BotInd => premise.extend(g.not_lstrict(y, x)),
                                _ => {}
                            }
                        }
                        let (ax, bx) = (a.with(x), b.with(x));
                        if axiom == StrictInd {
                            g.implies(&premise, &g.wstrict(ax, bx));
                        } else {
                            g.implies(&premise, &[g.w(ax, bx)]);
                        }
                    }
                }
            }
        }
        IntInd => {
            for &a in &sets {
                for &b in &sets {
                    let ab = a.union(b);
                    for &x in &xs {
                        for &y in &xs {
                            if x == y || ab.contains(x) || ab.contains(y) {
                                continue;
                            }
                            let mut premise = g.not_wstrict(a, b).to_vec();
                            for z in ab.elements() {
                                premise.extend(g.not_lstrict(x, z));
                                premise.extend(g.not_lstrict(z, y));
                            }
                            let cons = g.w(a.with(x).with(y), b.with(x).with(y));
                            g.implies(&premise, &[cons]);
                        }
                    }
                }
            }
        }
        SuaV | SuaP | STopMon | SBotMon => {
            for &x in &xs {
                for &y in &xs {
                    for &z in &xs {
                        let (sx, sy, sz) = (single(x), single(y), single(z));
                        let (premise, cons) = match axiom {
                            SuaV | SuaP => {
                                let mut p = g.not_lstrict(x, y).to_vec();
                                p.extend(g.not_lstrict(y, z));
                                let xz = sx.union(sz);
                                let c = if axiom == SuaV {
                                    g.wstrict(sy, xz)
                                } else {
                                    g.wstrict(xz, sy)
                                };
                                (p, c)
                            }
                            STopMon => {
                                let mut p = g.not_lstrict(x, y).to_vec();
                                p.extend(g.not_lstrict(x, z));
                                p.extend(g.not_lstrict(y, z));
                                (p, g.wstrict(sx.union(sz), sy.union(sz)))
                            }
                            _ => {
                                let mut p = g.not_lstrict(y, z).to_vec();
                                p.extend(g.not_lstrict(x, y));
                                p.extend(g.not_lstrict(x, z));
                                (p, g.wstrict(sx.union(sy), sx.union(sz)))
                            }
                        };
                        g.implies(&premise, &cons);
                    }
                }
            }
        }
        EvenExt => {
            for &a in &sets {
                if !a.is_even() {
                    continue;
                }
                for &x in &xs {
                    for &y in &xs {
                        if x == y || a.contains(x) || a.contains(y) {
                            continue;
                        }
                        let (sx, sy) = (single(x), single(y));
                        let mut premise = Vec::with_capacity(4);
                        for lit in g.windiff(a.with(x), sx).into_iter().chain(g.windiff(a.with(y), sy)) {
                            premise.push(!lit);
                        }
                        let sxy = sx.union(sy);
                        g.implies(&premise, &g.windiff(a.union(sxy), sxy));
                    }
                }
            }
        }
        Mc => {
            for &a in &sets {
                for &b in &sets {
                    g.cnf.add_clause(vec![!g.w(a, b), g.w(a.union(b), b)]);
                }
            }
        }
    }
    g.cnf
}

/// Conjunction of the member axioms over a shared layout.
pub fn instance_cnf(p: ProblemInstance) -> CnfFormula {
    let mut cnf = CnfFormula::new(p.n.num_vars());
    for a in p.axioms.iter() {
        cnf.extend(&clauses_for(a, p.n));
    }
    cnf
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of clauses [`clauses_for`] emits, in closed form.
pub fn clause_count(axiom: AxiomId, n: DomainSize) -> u64 {
    let k = u64::from(n.get());
    let s = u64::from(n.num_sets());
    let rest = (1u64 << (k - 1)) - 1;
    match axiom {
        LinE => k + 2 * k * (k - 1) + k * k * k,
        ReflS => s,
        ComplS => s * (s - 1),
        TransS => s * s * s,
        Ext => 2 * k * k,
        SDom => 4 * k * k,
        Gf1 | Gf2 => 2 * s * k,
        Ind | TopInd | BotInd => k * rest * rest,
        StrictInd => 2 * k * rest * rest,
        DisInd => k * (3u64.pow(n.get() - 1) + 1 - 2 * (1u64 << (k - 1))),
        IntInd => {
            if k < 3 {
                0
            } else {
                let r = (1u64 << (k - 2)) - 1;
                k * (k - 1) * r * r
            }
        }
        SuaV | SuaP | STopMon | SBotMon => 2 * k * k * k,
        EvenExt => (2..=k)
            .step_by(2)
            .map(|m| 2 * binom(k, m) * (k - m) * (k - m).saturating_sub(1))
            .sum(),
        Mc => s * s,
    }
}

/// Semantic evaluation of an axiom on a relation pair. Quantifiers become
/// loops; nothing here goes through CNF.
pub fn holds(axiom: AxiomId, ord: &ElementOrder, rel: &SetRelation) -> bool {
    let n = ord.domain();
    assert_eq!(n, rel.domain(), "relations over different domains");
    let xs: Vec<ElementCode> = n.elements().collect();
    let sets: Vec<SetCode> = n.sets().collect();
    let ge = |x, y| ord.get(x, y);
    let gt = |x, y| ord.strict(x, y);
    let single = SetCode::singleton;
    match axiom {
        LinE => ord.is_linear(),
        ReflS => sets.iter().all(|&a| rel.get(a, a)),
        ComplS => sets
            .iter()
            .all(|&a| sets.iter().all(|&b| a == b || rel.get(a, b) || rel.get(b, a))),
        TransS => sets.iter().all(|&a| {
            sets.iter().all(|&b| {
                !rel.get(a, b) || sets.iter().all(|&c| !rel.get(b, c) || rel.get(a, c))
            })
        }),
        Ext => xs
            .iter()
            .all(|&x| xs.iter().all(|&y| ge(x, y) == rel.get(single(x), single(y)))),
        SDom => xs.iter().all(|&x| {
            xs.iter().all(|&y| {
                let pair = single(x).with(y);
                !gt(x, y) || (rel.strict(single(x), pair) && rel.strict(pair, single(y)))
            })
        }),
        Gf1 => sets.iter().all(|&a| {
            xs.iter()
                .all(|&x| !a.elements().all(|e| gt(x, e)) || rel.strict(a.with(x), a))
        }),
        Gf2 => sets.iter().all(|&a| {
            xs.iter()
                .all(|&x| !a.elements().all(|e| gt(e, x)) || rel.strict(a, a.with(x)))
        }),
        Ind | StrictInd | TopInd | BotInd | DisInd => sets.iter().all(|&a| {
            sets.iter().all(|&b| {
                if !rel.strict(a, b) || (axiom == DisInd && !a.is_disjoint(b)) {
                    return true;
                }
                let ab = a.union(b);
                xs.iter().all(|&x| {
                    let applies = !ab.contains(x)
                        && match axiom {
                            TopInd => ab.elements().all(|y| gt(x, y)),
                            BotInd => ab.elements().all(|y| gt(y, x)),
                            _ => true,
                        };
                    if !applies {
                        return true;
                    }
                    if axiom == StrictInd {
                        rel.strict(a.with(x), b.with(x))
                    } else {
                        rel.get(a.with(x), b.with(x))
                    }
                })
            })
        }),
        IntInd => sets.iter().all(|&a| {
            sets.iter().all(|&b| {
                if !rel.strict(a, b) {
                    return true;
                }
                let ab = a.union(b);
                xs.iter().all(|&x| {
                    xs.iter().all(|&y| {
                        let applies = !ab.contains(x)
                            && !ab.contains(y)
                            && ab.elements().all(|z| gt(x, z) && gt(z, y));
                        !applies || rel.get(a.with(x).with(y), b.with(x).with(y))
                    })
                })
            })
        }),
        SuaV | SuaP => xs.iter().all(|&x| {
            xs.iter().all(|&y| {
                xs.iter().all(|&z| {
                    let xz = single(x).with(z);
                    let sy = single(y);
                    !(gt(x, y) && gt(y, z))
                        || if axiom == SuaV {
                            rel.strict(sy, xz)
                        } else {
                            rel.strict(xz, sy)
                        }
                })
            })
        }),
        STopMon => xs.iter().all(|&x| {
            xs.iter().all(|&y| {
                xs.iter().all(|&z| {
                    !(gt(x, y) && gt(x, z) && gt(y, z))
                        || rel.strict(single(x).with(z), single(y).with(z))
                })
            })
        }),
        SBotMon => xs.iter().all(|&x| {
            xs.iter().all(|&y| {
                xs.iter().all(|&z| {
                    !(gt(y, z) && gt(x, y) && gt(x, z))
                        || rel.strict(single(x).with(y), single(x).with(z))
                })
            })
        }),
        EvenExt => sets.iter().filter(|a| a.is_even()).all(|&a| {
            xs.iter().all(|&x| {
                xs.iter().all(|&y| {
                    if a.contains(x) || a.contains(y) {
                        return true;
                    }
                    let (sx, sy) = (single(x), single(y));
                    let pair = sx.union(sy);
                    !(rel.indifferent(a.with(x), sx) && rel.indifferent(a.with(y), sy))
                        || rel.indifferent(a.union(pair), pair)
                })
            })
        }),
        Mc => sets.iter().all(|&a| {
            sets.iter()
                .all(|&b| !rel.get(a, b) || rel.get(a.union(b), b))
        }),
    }
}

/// Members of `axioms` that hold on the pair.
pub fn satisfied(axioms: AxiomSet, ord: &ElementOrder, rel: &SetRelation) -> AxiomSet {
    axioms.iter().filter(|&a| holds(a, ord, rel)).collect()
}

/// `A ⪰ B ⇔ min(A) ≻̇ min(B) ∨ (min(A) = min(B) ∧ max(A) ⪰̇ max(B))`.
///
/// # Panics
/// If `ord` is not linear.
pub fn minmax_order(n: DomainSize, ord: &ElementOrder) -> SetRelation {
    assert_eq!(n, ord.domain());
    let mut rel = SetRelation::empty(n);
    for a in n.sets() {
        for b in n.sets() {
            let (min_a, min_b) = (ord.min_of(a).unwrap(), ord.min_of(b).unwrap());
            let (max_a, max_b) = (ord.max_of(a).unwrap(), ord.max_of(b).unwrap());
            let ge = ord.strict(min_a, min_b) || (min_a == min_b && ord.get(max_a, max_b));
            rel.set(a, b, ge);
        }
    }
    rel
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("unknown element `{0}` (expected x1..x{1})")]
    Element(String, u32),
    #[error("malformed set near `{0}`")]
    Set(String),
    #[error("set {0} listed twice")]
    Duplicate(String),
    #[error("chain lists {found} of {expected} sets")]
    Incomplete { found: usize, expected: usize },
}

/// Parses a ranking such as `{x1} > {x1, x2} ~ {x2}` into a weak order.
/// Elements are `x1..xn` (code `i−1`). `≻` and `∼` are accepted as well as
/// `>` and `~`. Every nonempty set must appear exactly once.
pub fn parse_chain(text: &str, n: DomainSize) -> Result<SetRelation, ChainError> {
    let mut ranks = vec![u32::MAX; n.num_sets() as usize];
    let mut rank = 0;
    let mut seen = 0;
    let mut rest = text.trim();
    loop {
        let open = rest.find('{').ok_or_else(|| ChainError::Set(rest.to_string()))?;
        let close = rest.find('}').ok_or_else(|| ChainError::Set(rest.to_string()))?;
        if close < open {
            return Err(ChainError::Set(rest.to_string()));
        }
        let mut mask = 0u32;
        for tok in rest[open + 1..close].split(',').map(str::trim) {
            let code = tok
                .strip_prefix('x')
                .and_then(|d| d.parse::<u32>().ok())
                .filter(|&d| d >= 1 && d <= n.get())
                .ok_or_else(|| ChainError::Element(tok.to_string(), n.get()))?;
            mask |= 1 << (code - 1);
        }
        let set = n.set(mask).map_err(|_| ChainError::Set(rest[..=close].to_string()))?;
        if ranks[set.index()] != u32::MAX {
            return Err(ChainError::Duplicate(set.to_string()));
        }
        ranks[set.index()] = rank;
        seen += 1;
        rest = rest[close + 1..].trim_start();
        if rest.is_empty() {
            break;
        }
        let sep = rest.chars().next().unwrap();
        match sep {
            '>' | '≻' => rank += 1,
            '~' | '∼' => {}
            _ => return Err(ChainError::Set(rest.to_string())),
        }
        rest = rest[sep.len_utf8()..].trim_start();
    }
    if seen != ranks.len() {
        return Err(ChainError::Incomplete {
            found: seen,
            expected: ranks.len(),
        });
    }
    Ok(SetRelation::from_ranks(n, &ranks))
}

/// Renders a weak order as a chain, best class first. `None` if `rel` is not
/// a weak order.
pub fn format_chain(rel: &SetRelation, strict: &str, indiff: &str) -> Option<String> {
    let classes = rel.classes()?;
    let parts: Vec<String> = classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(&format!(" {indiff} "))
        })
        .collect();
    Some(parts.join(&format!(" {strict} ")))
}

/// Renders a linear element order as `x1 ≻ x2 ≻ …`.
pub fn format_ranking(ord: &ElementOrder, strict: &str) -> Option<String> {
    let ranking = ord.ranking()?;
    let names: Vec<String> = ranking.iter().map(ToString::to_string).collect();
    Some(names.join(&format!(" {strict} ")))
}

const FIXTURE_CHAINS: [(&str, &str); 4] = [
    (
        "fixture-1",
        "{x1} > {x2} > {x3} > {x4} > {x1, x2} > {x1, x3} > {x2, x3} > {x1, x4} > {x2, x4} \
         > {x3, x4} > {x1, x2, x3} > {x1, x2, x4} > {x1, x3, x4} > {x2, x3, x4} > {x1, x2, x3, x4}",
    ),
    (
        "fixture-2",
        "{x1} > {x1, x2} > {x2} > {x1, x3} > {x2, x3} > {x3} > {x1, x2, x3} > {x1, x4} \
         > {x2, x4} > {x1, x2, x4} > {x3, x4} > {x4} > {x1, x3, x4} > {x2, x3, x4} > {x1, x2, x3, x4}",
    ),
    (
        "fixture-3",
        "{x1} > {x1, x2} > {x1, x3} ~ {x1, x2, x3} > {x2} > {x2, x3} > {x3} > {x1, x4} \
         ~ {x1, x2, x4} ~ {x1, x3, x4} ~ {x1, x2, x3, x4} > {x2, x4} ~ {x2, x3, x4} > {x3, x4} > {x4}",
    ),
    (
        "fixture-4",
        "{x1} > {x1, x2} > {x2} > {x1, x3} ~ {x1, x2, x3} > {x2, x3} > {x3} > {x1, x4} \
         ~ {x1, x3, x4} ~ {x2, x4} ~ {x1, x2, x4} ~ {x2, x3, x4} ~ {x1, x2, x3, x4} > {x3, x4} > {x4}",
    ),
];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub ord: ElementOrder,
    pub rel: SetRelation,
}

/// Four weak orders on four elements under `x1 ≻̇ x2 ≻̇ x3 ≻̇ x4`, each
/// separating one of SDOM, IND, SUA_V, S_TOP_MON from the other three.
pub fn fixture_witnesses() -> Vec<Fixture> {
    let n = DomainSize::new(4).unwrap();
    FIXTURE_CHAINS
        .iter()
        .map(|&(name, chain)| Fixture {
            name,
            ord: ElementOrder::canonical(n),
            rel: parse_chain(chain, n).expect("fixture chains are well formed"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in AxiomId::ALL {
            assert_eq!(a.name().parse::<AxiomId>().unwrap(), a);
            assert_eq!(a.label().parse::<AxiomId>().unwrap(), a);
            assert_eq!(AxiomId::from_index(a.index()), Some(a));
        }
        assert_eq!("suav".parse::<AxiomId>().unwrap(), SuaV);
        assert_eq!("StopMon".parse::<AxiomId>().unwrap(), STopMon);
        assert!("NEU".parse::<AxiomId>().is_err());
    }

    #[test]
    fn set_parsing() {
        let s = AxiomSet::parse_list("LIN_E, SUAv,SUA_P").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "LIN_E,SUA_V,SUA_P");
        assert_eq!(AxiomSet::parse_list("all").unwrap(), AxiomSet::all());
        assert!(AxiomSet::parse_list("LIN_E,foo").is_err());
    }

    #[test]
    fn small_counts() {
        let n2 = DomainSize::new(2).unwrap();
        let n3 = DomainSize::new(3).unwrap();
        assert_eq!(clauses_for(TransS, n3).num_clauses(), 343);
        assert_eq!(clauses_for(Gf1, n3).num_clauses(), 42);
        let refl = clauses_for(ReflS, n2);
        assert_eq!(refl.num_clauses(), 3);
        assert!(refl.clauses().iter().all(|c| c.len() == 1 && c[0].is_positive()));
    }

    #[test]
    fn chain_round_trip() {
        let n = DomainSize::new(3).unwrap();
        let text = "{x1} > {x2} ~ {x1, x2} > {x1, x3} > {x1, x2, x3} > {x2, x3} > {x3}";
        let rel = parse_chain(text, n).unwrap();
        assert_eq!(format_chain(&rel, ">", "~").unwrap(), text);
        assert!(matches!(
            parse_chain("{x1} > {x2}", n),
            Err(ChainError::Incomplete { .. })
        ));
        assert!(matches!(parse_chain("{x9}", n), Err(ChainError::Element(..))));
    }
}
