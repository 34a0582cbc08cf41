//! Solver-free consistency check at three elements, by enumerating every
//! weak order on the seven nonempty sets.

use std::sync::OnceLock;

use thiserror::Error;

use super::lattice::Status;
use crate::axioms::{satisfied, AxiomId, AxiomSet};
use crate::model::{DomainSize, ElementCode, ElementOrder, SetRelation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle covers n=3 only, not n={0}")]
    Size(u32),
    #[error("{0} lacks REFL_S, COMPL_S or TRANS_S, so weak orders do not cover its models")]
    NotWeakOrder(AxiomSet),
}

/// Ordered Bell numbers `a(0..=k)` by the recurrence
/// `a(m) = Σ_{i=1..m} C(m, i) a(m-i)`.
pub fn fubini(k: usize) -> Vec<u64> {
    let mut binom = vec![vec![0u64; k + 1]; k + 1];
    for m in 0..=k {
        binom[m][0] = 1;
        for i in 1..=m {
            binom[m][i] = binom[m - 1][i - 1] + if i < m { binom[m - 1][i] } else { 0 };
        }
    }
    let mut a = vec![0u64; k + 1];
    a[0] = 1;
    for m in 1..=k {
        a[m] = (1..=m).map(|i| binom[m][i] * a[m - i]).sum();
    }
    a
}

/// Every weak order on `items` objects as a rank vector, smaller rank
/// better, ranks forming `0..k` for some `k`.
pub fn weak_orders(items: usize) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, items: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == items {
            let top = prefix.iter().max().map_or(0, |&m| m + 1);
            let mut seen = vec![false; top as usize];
            for &r in prefix.iter() {
                seen[r as usize] = true;
            }
            if seen.iter().all(|&s| s) {
                out.push(prefix.clone());
            }
            return;
        }
        for r in 0..items as u32 {
            prefix.push(r);
            extend(prefix, items, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(items), items, &mut out);
    out
}

const N: u32 = 3;

/// Element relations on three elements, one per orbit under renaming.
fn element_relation_orbits() -> Vec<ElementOrder> {
    let n = DomainSize::new(N).unwrap();
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let permute = |bits: u32, p: &[usize; 3]| {
        let mut out = 0;
        for x in 0..3 {
            for y in 0..3 {
                if bits >> (3 * x + y) & 1 == 1 {
                    out |= 1 << (3 * p[x] + p[y]);
                }
            }
        }
        out
    };
    (0u32..512)
        .filter(|&bits| perms.iter().all(|p| permute(bits, p) >= bits))
        .map(|bits| {
            let mut ord = ElementOrder::empty(n);
            for x in 0..3u8 {
                for y in 0..3u8 {
                    let v = bits >> (3 * u32::from(x) + u32::from(y)) & 1 == 1;
                    ord.set(ElementCode::new(x), ElementCode::new(y), v);
                }
            }
            ord
        })
        .collect()
}

/// For every axiom set over the full catalog, whether some pair of an
/// element relation and a weak order on sets satisfies all of it.
pub struct OracleTable {
    consistent: Vec<bool>,
    /// Distinct satisfied-axiom masks seen during enumeration.
    pub patterns: usize,
    pub pairs_checked: u64,
}

impl OracleTable {
    /// Enumerates all weak orders on the sets against one representative of
    /// each element-relation orbit (every catalog axiom is invariant under
    /// renaming elements), records the set of satisfied axioms of each
    /// pair, then closes downward with a subset-sum pass.
    pub fn build() -> OracleTable {
        let n = DomainSize::new(N).unwrap();
        let orders = weak_orders(n.num_sets() as usize);
        let relations: Vec<SetRelation> = orders.iter().map(|r| SetRelation::from_ranks(n, r)).collect();
        let mut seen = vec![false; 1 << AxiomId::ALL.len()];
        let mut pairs = 0u64;
        for ord in element_relation_orbits() {
            for rel in &relations {
                seen[satisfied(AxiomSet::all(), &ord, rel).mask() as usize] = true;
                pairs += 1;
            }
        }
        let patterns = seen.iter().filter(|&&s| s).count();
        let mut consistent = seen;
        for bit in 0..AxiomId::ALL.len() {
            for s in 0..consistent.len() {
                if s >> bit & 1 == 0 && consistent[s | 1 << bit] {
                    consistent[s] = true;
                }
            }
        }
        OracleTable {
            consistent,
            patterns,
            pairs_checked: pairs,
        }
    }

    pub fn query(&self, axioms: AxiomSet) -> Result<Status, OracleError> {
        let weak = AxiomSet::EMPTY
            .with(AxiomId::ReflS)
            .with(AxiomId::ComplS)
            .with(AxiomId::TransS);
        if !weak.is_subset_of(axioms) {
            return Err(OracleError::NotWeakOrder(axioms));
        }
        Ok(if self.consistent[axioms.mask() as usize] {
            Status::Possible
        } else {
            Status::Impossible
        })
    }
}

fn table() -> &'static OracleTable {
    static TABLE: OnceLock<OracleTable> = OnceLock::new();
    TABLE.get_or_init(OracleTable::build)
}

/// Consistency of `axioms` at `n = 3` without a SAT solver. The first call
/// builds a table shared by all later calls.
pub fn brute_force_oracle(axioms: AxiomSet, n: u32) -> Result<Status, OracleError> {
    if n != N {
        return Err(OracleError::Size(n));
    }
    table().query(axioms)
}
