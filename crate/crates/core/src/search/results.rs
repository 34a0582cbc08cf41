use super::lattice::{Lattice, Status};
use crate::axioms::AxiomSet;

/// An axiom set that is inconsistent at `size`, while each of its proper
/// subsets is consistent at `size` and the set itself is consistent at
/// `size - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinimalImpossibility {
    pub axioms: AxiomSet,
    pub size: u32,
}

fn sort(list: &mut [MinimalImpossibility]) {
    list.sort_by_key(|m| (m.size, m.axioms.len(), m.axioms.mask()));
}

enum Check {
    Minimal,
    NotMinimal,
    /// Some cell needed for the decision is unknown or timed out.
    Blocked,
}

fn check(lattice: &Lattice, c: u32, n: u32) -> Check {
    let mut blocked = false;
    let mut look = |status: Status| match status {
        Status::Possible => true,
        Status::Impossible => false,
        Status::Unknown | Status::Timeout => {
            blocked = true;
            true
        }
    };
    if n > lattice.min_n() && !look(lattice.status_dense(c, n - 1)) {
        return Check::NotMinimal;
    }
    let mut bits = c;
    while bits != 0 {
        let b = bits & bits.wrapping_neg();
        bits ^= b;
        if !look(lattice.status_dense(c ^ b, n)) {
            return Check::NotMinimal;
        }
    }
    if blocked {
        Check::Blocked
    } else {
        Check::Minimal
    }
}

fn collect(lattice: &Lattice, want_blocked: bool) -> Vec<MinimalImpossibility> {
    let mut out = Vec::new();
    for n in lattice.sizes() {
        for c in lattice.cells_with(n, Status::Impossible) {
            let keep = match check(lattice, c, n) {
                Check::Minimal => !want_blocked,
                Check::Blocked => want_blocked,
                Check::NotMinimal => false,
            };
            if keep {
                out.push(MinimalImpossibility {
                    axioms: lattice.universe().expand(c),
                    size: n,
                });
            }
        }
    }
    sort(&mut out);
    out
}

/// Doubly minimal impossibilities, ordered by size, then number of axioms,
/// then axiom mask. Candidates whose minimality hinges on an unknown or
/// timed-out cell are left out; see [`unconfirmed_impossibilities`].
pub fn minimal_impossibilities(lattice: &Lattice) -> Vec<MinimalImpossibility> {
    collect(lattice, false)
}

/// Impossible cells that would be minimal if every unresolved neighbour
/// turned out possible.
pub fn unconfirmed_impossibilities(lattice: &Lattice) -> Vec<MinimalImpossibility> {
    collect(lattice, true)
}

/// Number of axiom sets inconsistent at some searched size.
pub fn count_inconsistent(lattice: &Lattice) -> u64 {
    let cells = lattice.universe().num_cells() as u32;
    (0..cells)
        .filter(|&c| lattice.sizes().any(|n| lattice.status_dense(c, n) == Status::Impossible))
        .count() as u64
}
