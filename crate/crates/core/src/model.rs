//! Element and set coding, bit-mask set algebra, the propositional variable
//! layout, and decoding of solver models into relation pairs.
//!
//! Elements carry codes `0..n`. A nonempty subset is its characteristic
//! function read as a binary number, so `0b101` is `{x0, x2}`. Variables are
//! laid out row-major: `l(x, y)` occupies `1..=n²`, then `w(A, B)` occupies
//! `n²+1 ..= n²+(2ⁿ−1)²`.

use std::fmt;

use setpref_sat::{Lit, Var};
use thiserror::Error;

/// DIMACS variable identifier.
pub type VarId = Var;

/// Default upper bound on the domain size.
pub const DEFAULT_MAX_N: u32 = 8;
/// Largest domain size for which the variable layout fits in 32 bits.
pub const HARD_MAX_N: u32 = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain size {n} outside 1..={max}")]
    DomainSize { n: u32, max: u32 },
    #[error("element code {code} out of range for n = {n}")]
    Element { code: u32, n: u32 },
    #[error("set code {mask:#b} out of range for n = {n}")]
    Set { mask: u32, n: u32 },
    #[error("assignment covers {found} variables, layout needs {expected}")]
    PartialAssignment { expected: usize, found: usize },
    #[error("element relation is not a linear order")]
    NotLinear,
}

/// Number of elements `n`.
///
/// Values from 1 up to the configured bound are accepted. Search and the CLI
/// additionally require `n ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainSize(u32);

impl DomainSize {
    pub fn new(n: u32) -> Result<DomainSize, ModelError> {
        DomainSize::with_bound(n, DEFAULT_MAX_N)
    }

    pub fn with_bound(n: u32, max: u32) -> Result<DomainSize, ModelError> {
        let max = max.min(HARD_MAX_N);
        if n == 0 || n > max {
            return Err(ModelError::DomainSize { n, max });
        }
        Ok(DomainSize(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `2ⁿ − 1`, the number of nonempty subsets.
    pub fn num_sets(self) -> u32 {
        (1u32 << self.0) - 1
    }

    /// Mask of the whole domain.
    pub fn full_mask(self) -> u32 {
        self.num_sets()
    }

    pub fn num_l_vars(self) -> u32 {
        self.0 * self.0
    }

    /// `n² + (2ⁿ−1)²`.
    pub fn num_vars(self) -> u32 {
        let s = self.num_sets();
        self.num_l_vars() + s * s
    }

    pub fn elements(self) -> impl Iterator<Item = ElementCode> + Clone {
        (0..self.0).map(|c| ElementCode(c as u8))
    }

    pub fn sets(self) -> impl Iterator<Item = SetCode> + Clone {
        (1..=self.num_sets()).map(SetCode)
    }

    pub fn element(self, code: u32) -> Result<ElementCode, ModelError> {
        if code < self.0 {
            Ok(ElementCode(code as u8))
        } else {
            Err(ModelError::Element { code, n: self.0 })
        }
    }

    pub fn set(self, mask: u32) -> Result<SetCode, ModelError> {
        if mask != 0 && mask <= self.num_sets() {
            Ok(SetCode(mask))
        } else {
            Err(ModelError::Set { mask, n: self.0 })
        }
    }

    /// Singleton `{x}`; fails when `x ≥ n`.
    pub fn singleton(self, x: u32) -> Result<SetCode, ModelError> {
        self.element(x).map(SetCode::singleton)
    }
}

impl fmt::Display for DomainSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementCode(u8);

impl ElementCode {
    /// Unchecked constructor; range is validated by [`DomainSize::element`].
    pub const fn new(code: u8) -> ElementCode {
        ElementCode(code)
    }

    pub fn code(self) -> u32 {
        u32::from(self.0)
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    fn bit(self) -> u32 {
        1 << self.0
    }
}

impl fmt::Display for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// Nonempty subset as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetCode(u32);

impl SetCode {
    /// Unchecked constructor; panics on the empty mask.
    pub fn new(mask: u32) -> SetCode {
        assert!(mask != 0, "the empty set has no code");
        SetCode(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn singleton(x: ElementCode) -> SetCode {
        SetCode(x.bit())
    }

    pub fn union(self, other: SetCode) -> SetCode {
        SetCode(self.0 | other.0)
    }

    pub fn with(self, x: ElementCode) -> SetCode {
        SetCode(self.0 | x.bit())
    }

    /// `(A ∖ {a}) ∪ {b}`, total even when `a ∉ A`.
    pub fn replace_in_by(a: ElementCode, set: SetCode, b: ElementCode) -> SetCode {
        SetCode((set.0 & !a.bit()) | b.bit())
    }

    pub fn contains(self, x: ElementCode) -> bool {
        self.0 & x.bit() != 0
    }

    pub fn is_subset_of(self, other: SetCode) -> bool {
        self.0 | other.0 == other.0
    }

    pub fn is_disjoint(self, other: SetCode) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_even(self) -> bool {
        self.len() % 2 == 0
    }

    pub fn equal_card(self, other: SetCode) -> bool {
        self.len() == other.len()
    }

    pub fn elements(self) -> impl Iterator<Item = ElementCode> + Clone {
        let mask = self.0;
        (0..32u8).filter(move |&i| mask & (1 << i) != 0).map(ElementCode)
    }
}

impl fmt::Display for SetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

pub fn var_l(n: DomainSize, x: ElementCode, y: ElementCode) -> VarId {
    Var::new(1 + x.code() * n.get() + y.code())
}

pub fn var_w(n: DomainSize, a: SetCode, b: SetCode) -> VarId {
    let sets = n.num_sets();
    Var::new(n.num_l_vars() + 1 + (a.mask() - 1) * sets + (b.mask() - 1))
}

/// Positive literal `x ⪰̇ y`.
pub fn l(n: DomainSize, x: ElementCode, y: ElementCode) -> Lit {
    var_l(n, x, y).pos()
}

/// Positive literal `A ⪰ B`.
pub fn w(n: DomainSize, a: SetCode, b: SetCode) -> Lit {
    var_w(n, a, b).pos()
}

/// Unit literals fixing every `l` variable to `ord`.
pub fn order_units(ord: &ElementOrder) -> Vec<Lit> {
    let n = ord.domain();
    n.elements()
        .flat_map(|x| n.elements().map(move |y| (x, y)))
        .map(|(x, y)| Lit::new(var_l(n, x, y), ord.get(x, y)))
        .collect()
}

/// Relation `⪰̇` on elements as a dense boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementOrder {
    n: DomainSize,
    rel: Vec<bool>,
}

impl ElementOrder {
    pub fn empty(n: DomainSize) -> ElementOrder {
        ElementOrder {
            n,
            rel: vec![false; (n.get() * n.get()) as usize],
        }
    }

    /// Linear order listing codes from best to worst.
    pub fn from_ranking(n: DomainSize, best_first: &[ElementCode]) -> ElementOrder {
        assert_eq!(best_first.len(), n.get() as usize, "ranking must list every element");
        let mut ord = ElementOrder::empty(n);
        for (i, &x) in best_first.iter().enumerate() {
            for &y in &best_first[i..] {
                ord.set(x, y, true);
            }
        }
        ord
    }

    /// `x0 ≻̇ x1 ≻̇ … ≻̇ x(n−1)`.
    pub fn canonical(n: DomainSize) -> ElementOrder {
        let ranking: Vec<_> = n.elements().collect();
        ElementOrder::from_ranking(n, &ranking)
    }

    pub fn domain(&self) -> DomainSize {
        self.n
    }

    fn idx(&self, x: ElementCode, y: ElementCode) -> usize {
        x.index() * self.n.get() as usize + y.index()
    }

    pub fn get(&self, x: ElementCode, y: ElementCode) -> bool {
        self.rel[self.idx(x, y)]
    }

    pub fn set(&mut self, x: ElementCode, y: ElementCode, value: bool) {
        let i = self.idx(x, y);
        self.rel[i] = value;
    }

    /// `x ≻̇ y`.
    pub fn strict(&self, x: ElementCode, y: ElementCode) -> bool {
        self.get(x, y) && !self.get(y, x)
    }

    pub fn is_linear(&self) -> bool {
        let xs: Vec<_> = self.n.elements().collect();
        for &x in &xs {
            if !self.get(x, x) {
                return false;
            }
            for &y in &xs {
                if x != y && self.get(x, y) == self.get(y, x) {
                    return false;
                }
                for &z in &xs {
                    if self.get(x, y) && self.get(y, z) && !self.get(x, z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Elements best first; `None` unless the relation is linear.
    pub fn ranking(&self) -> Option<Vec<ElementCode>> {
        if !self.is_linear() {
            return None;
        }
        let mut xs: Vec<_> = self.n.elements().collect();
        let score = |x: ElementCode| self.n.elements().filter(|&y| self.get(x, y)).count();
        xs.sort_by_key(|&x| std::cmp::Reverse(score(x)));
        Some(xs)
    }

    pub fn max_of(&self, set: SetCode) -> Result<ElementCode, ModelError> {
        self.extreme(set, true)
    }

    pub fn min_of(&self, set: SetCode) -> Result<ElementCode, ModelError> {
        self.extreme(set, false)
    }

    fn extreme(&self, set: SetCode, top: bool) -> Result<ElementCode, ModelError> {
        if !self.is_linear() {
            return Err(ModelError::NotLinear);
        }
        let mut best = None;
        for x in set.elements() {
            best = match best {
                None => Some(x),
                Some(b) if (top && self.strict(x, b)) || (!top && self.strict(b, x)) => Some(x),
                keep => keep,
            };
        }
        Ok(best.expect("sets are nonempty"))
    }
}

/// Relation `⪰` on nonempty subsets as a dense boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetRelation {
    n: DomainSize,
    rel: Vec<bool>,
}

impl SetRelation {
    pub fn empty(n: DomainSize) -> SetRelation {
        let s = n.num_sets() as usize;
        SetRelation {
            n,
            rel: vec![false; s * s],
        }
    }

    pub fn full(n: DomainSize) -> SetRelation {
        let s = n.num_sets() as usize;
        SetRelation {
            n,
            rel: vec![true; s * s],
        }
    }

    /// Weak order induced by ranks, smaller rank meaning better. `ranks` is
    /// indexed by [`SetCode::index`].
    pub fn from_ranks(n: DomainSize, ranks: &[u32]) -> SetRelation {
        assert_eq!(ranks.len(), n.num_sets() as usize);
        let mut rel = SetRelation::empty(n);
        for a in n.sets() {
            for b in n.sets() {
                rel.set(a, b, ranks[a.index()] <= ranks[b.index()]);
            }
        }
        rel
    }

    pub fn domain(&self) -> DomainSize {
        self.n
    }

    fn idx(&self, a: SetCode, b: SetCode) -> usize {
        a.index() * self.n.num_sets() as usize + b.index()
    }

    pub fn get(&self, a: SetCode, b: SetCode) -> bool {
        self.rel[self.idx(a, b)]
    }

    pub fn set(&mut self, a: SetCode, b: SetCode, value: bool) {
        let i = self.idx(a, b);
        self.rel[i] = value;
    }

    /// `A ≻ B`.
    pub fn strict(&self, a: SetCode, b: SetCode) -> bool {
        self.get(a, b) && !self.get(b, a)
    }

    /// `A ∼ B`.
    pub fn indifferent(&self, a: SetCode, b: SetCode) -> bool {
        self.get(a, b) && self.get(b, a)
    }

    /// Reflexive, complete and transitive.
    pub fn is_weak_order(&self) -> bool {
        let sets: Vec<_> = self.n.sets().collect();
        for &a in &sets {
            for &b in &sets {
                if !self.get(a, b) && !self.get(b, a) {
                    return false;
                }
                if !self.get(a, b) {
                    continue;
                }
                for &c in &sets {
                    if self.get(b, c) && !self.get(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Indifference classes from best to worst; `None` unless a weak order.
    pub fn classes(&self) -> Option<Vec<Vec<SetCode>>> {
        if !self.is_weak_order() {
            return None;
        }
        let mut sets: Vec<_> = self.n.sets().collect();
        let below = |a: SetCode| self.n.sets().filter(|&b| self.get(a, b)).count();
        sets.sort_by_key(|&a| (std::cmp::Reverse(below(a)), a.len(), a.mask()));
        let mut classes: Vec<Vec<SetCode>> = Vec::new();
        for a in sets {
            match classes.last_mut() {
                Some(class) if self.indifferent(class[0], a) => class.push(a),
                _ => classes.push(vec![a]),
            }
        }
        Some(classes)
    }
}

/// Writes the relation pair as a truth assignment indexed by `Var::index`.
pub fn encode_model(ord: &ElementOrder, rel: &SetRelation) -> Vec<bool> {
    let n = ord.domain();
    assert_eq!(n, rel.domain(), "relations over different domains");
    let mut values = vec![false; n.num_vars() as usize];
    for x in n.elements() {
        for y in n.elements() {
            values[var_l(n, x, y).index()] = ord.get(x, y);
        }
    }
    for a in n.sets() {
        for b in n.sets() {
            values[var_w(n, a, b).index()] = rel.get(a, b);
        }
    }
    values
}

/// Reads both relations off an assignment. Extra trailing variables, such as
/// definitional ones, are ignored.
pub fn decode_model(
    assignment: &[bool],
    n: DomainSize,
) -> Result<(ElementOrder, SetRelation), ModelError> {
    let expected = n.num_vars() as usize;
    if assignment.len() < expected {
        return Err(ModelError::PartialAssignment {
            expected,
            found: assignment.len(),
        });
    }
    let mut ord = ElementOrder::empty(n);
    for x in n.elements() {
        for y in n.elements() {
            ord.set(x, y, assignment[var_l(n, x, y).index()]);
        }
    }
    let mut rel = SetRelation::empty(n);
    for a in n.sets() {
        for b in n.sets() {
            rel.set(a, b, assignment[var_w(n, a, b).index()]);
        }
    }
    Ok((ord, rel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: u8) -> ElementCode {
        ElementCode::new(c)
    }

    #[test]
    fn set_algebra() {
        assert_eq!(SetCode::new(0b011).union(SetCode::new(0b100)).mask(), 0b111);
        assert_eq!(SetCode::new(0b010).union(SetCode::new(0b010)).mask(), 0b010);
        assert_eq!(SetCode::new(0b001).union(SetCode::new(0b011)).mask(), 0b011);
        assert_eq!(SetCode::singleton(e(0)).mask(), 0b001);
        assert_eq!(SetCode::singleton(e(2)).mask(), 0b100);
        let n = DomainSize::new(5).unwrap();
        assert_eq!(n.singleton(4).unwrap().mask(), 0b10000);
        assert!(n.singleton(5).is_err());
        assert_eq!(SetCode::replace_in_by(e(0), SetCode::new(0b001), e(1)).mask(), 0b010);
        assert_eq!(SetCode::replace_in_by(e(0), SetCode::new(0b011), e(2)).mask(), 0b110);
        assert_eq!(SetCode::replace_in_by(e(2), SetCode::new(0b011), e(2)).mask(), 0b111);
        assert!(SetCode::new(0b001).is_disjoint(SetCode::new(0b110)));
        assert!(SetCode::new(0b101).is_even());
        assert!(SetCode::new(0b011).equal_card(SetCode::new(0b101)));
        assert!(SetCode::new(0b010).is_subset_of(SetCode::new(0b110)));
        assert!(!SetCode::new(0b011).is_subset_of(SetCode::new(0b110)));
        assert_eq!(SetCode::new(0b101).to_string(), "{x1, x3}");
    }

    #[test]
    fn variable_layout() {
        let n = DomainSize::new(6).unwrap();
        assert_eq!(var_l(n, e(0), e(0)).id(), 1);
        assert_eq!(var_l(n, e(5), e(5)).id(), 36);
        assert_eq!(var_w(n, SetCode::new(1), SetCode::new(1)).id(), 37);
        assert_eq!(var_w(n, SetCode::new(63), SetCode::new(63)).id(), 4005);
        assert_eq!(n.num_vars(), 4005);
    }

    #[test]
    fn layout_is_a_bijection() {
        for k in 1..=5 {
            let n = DomainSize::new(k).unwrap();
            let mut seen = vec![false; n.num_vars() as usize + 1];
            for x in n.elements() {
                for y in n.elements() {
                    let id = var_l(n, x, y).id() as usize;
                    assert!(id <= n.num_l_vars() as usize && !seen[id]);
                    seen[id] = true;
                }
            }
            for a in n.sets() {
                for b in n.sets() {
                    let id = var_w(n, a, b).id() as usize;
                    assert!(!seen[id]);
                    seen[id] = true;
                }
            }
            assert!(seen[1..].iter().all(|&s| s));
        }
    }

    #[test]
    fn domain_bounds() {
        assert!(DomainSize::new(0).is_err());
        assert!(DomainSize::new(9).is_err());
        assert!(DomainSize::with_bound(9, 10).is_ok());
        assert!(DomainSize::with_bound(16, 20).is_err());
    }

    #[test]
    fn decode_round_trip_and_partial() {
        let n = DomainSize::new(3).unwrap();
        let mut ord = ElementOrder::empty(n);
        let mut rel = SetRelation::empty(n);
        for x in n.elements() {
            ord.set(x, x, true);
        }
        for a in n.sets() {
            rel.set(a, a, true);
        }
        let values = encode_model(&ord, &rel);
        assert_eq!(decode_model(&values, n).unwrap(), (ord, rel));
        assert!(matches!(
            decode_model(&values[..10], n),
            Err(ModelError::PartialAssignment { .. })
        ));
        let (o, r) = decode_model(&vec![true; n.num_vars() as usize], n).unwrap();
        assert!(n.elements().all(|x| n.elements().all(|y| o.get(x, y))));
        assert_eq!(r, SetRelation::full(n));
    }

    #[test]
    fn extremes_of_canonical_order() {
        let n = DomainSize::new(3).unwrap();
        let ord = ElementOrder::canonical(n);
        assert!(ord.is_linear());
        let a = SetCode::new(0b101);
        assert_eq!(ord.max_of(a).unwrap(), e(0));
        assert_eq!(ord.min_of(a).unwrap(), e(2));
        for x in n.elements() {
            let s = SetCode::singleton(x);
            assert_eq!(ord.max_of(s).unwrap(), x);
            assert_eq!(ord.min_of(s).unwrap(), x);
        }
        assert_eq!(
            ElementOrder::empty(n).max_of(a),
            Err(ModelError::NotLinear)
        );
    }

    #[test]
    fn weak_order_classes() {
        let n = DomainSize::new(2).unwrap();
        let rel = SetRelation::from_ranks(n, &[0, 1, 0]);
        assert!(rel.is_weak_order());
        let classes = rel.classes().unwrap();
        assert_eq!(classes, vec![vec![SetCode::new(1), SetCode::new(3)], vec![SetCode::new(2)]]);
        assert!(SetRelation::empty(n).classes().is_none());
    }
}
