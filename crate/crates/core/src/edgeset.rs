//! Ordered edge sets between two finite vertex sets.
//!
//! An edge set is stored fiber by fiber: for every target vertex the list
//! of sources of its incoming edges, in increasing order. The edge itself
//! is identified by `(target, position)`. This is exactly the data an
//! order-preserving, source/range-intertwining bijection has to respect,
//! so two ordered edge sets are isomorphic iff their fibers are equal.

use num_bigint::BigInt;

use crate::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    sources: usize,
    fibers: Vec<Vec<usize>>,
}

impl EdgeSet {
    /// `fibers[w]` lists the sources of the edges into `w`, smallest first.
    pub fn new(sources: usize, fibers: Vec<Vec<usize>>) -> Self {
        debug_assert!(fibers.iter().flatten().all(|&s| s < sources));
        EdgeSet { sources, fibers }
    }

    /// The formal identity edge set `{(v, v)}`.
    pub fn identity(n: usize) -> Self {
        EdgeSet { sources: n, fibers: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn source_count(&self) -> usize {
        self.sources
    }

    pub fn target_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, target: usize) -> &[usize] {
        &self.fibers[target]
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn len(&self) -> usize {
        self.fibers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry `(w, v)` counts edges from `v` to `w`.
    pub fn multiplicity_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.fibers.len(), self.sources);
        for (w, fiber) in self.fibers.iter().enumerate() {
            for &v in fiber {
                *m.get_mut(w, v) += BigInt::from(1);
            }
        }
        m
    }

    /// Paths `self` then `next`, ordered lexicographically with the edge of
    /// `next` as the most significant letter.
    ///
    /// # Panics
    /// Panics if `next` does not start where `self` ends.
    pub fn then(&self, next: &EdgeSet) -> EdgeSet {
        assert_eq!(self.target_count(), next.source_count(), "edge sets do not compose");
        let fibers = next
            .fibers
            .iter()
            .map(|fiber| fiber.iter().flat_map(|&mid| self.fibers[mid].iter().copied()).collect())
            .collect();
        EdgeSet { sources: self.sources, fibers }
    }

    /// Isomorphic ignoring order: same multiplicities between every pair.
    pub fn same_counts(&self, other: &EdgeSet) -> bool {
        if self.sources != other.sources || self.fibers.len() != other.fibers.len() {
            return false;
        }
        self.fibers.iter().zip(&other.fibers).all(|(a, b)| {
            let mut a = a.clone();
            let mut b = b.clone();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }

    /// Isomorphic as ordered edge sets.
    pub fn order_isomorphic(&self, other: &EdgeSet) -> bool {
        self == other
    }

    /// Isomorphism in the requested sense.
    pub fn isomorphic(&self, other: &EdgeSet, ordered: bool) -> bool {
        if ordered {
            self.order_isomorphic(other)
        } else {
            self.same_counts(other)
        }
    }

    /// Positions of the unique order-preserving, source/range-intertwining
    /// bijection to `other`: `(target, position)` maps to the same pair.
    /// Returns the first `(target, position)` where sources disagree.
    pub fn first_order_mismatch(&self, other: &EdgeSet) -> Option<(usize, usize)> {
        for (w, (a, b)) in self.fibers.iter().zip(&other.fibers).enumerate() {
            if a.len() != b.len() {
                return Some((w, a.len().min(b.len())));
            }
            if let Some(pos) = a.iter().zip(b).position(|(x, y)| x != y) {
                return Some((w, pos));
            }
        }
        if self.fibers.len() != other.fibers.len() {
            return Some((self.fibers.len().min(other.fibers.len()), 0));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts_match_matrix_product() {
        let a = EdgeSet::new(2, vec![vec![0, 1], vec![0]]);
        let b = EdgeSet::new(2, vec![vec![0, 1], vec![0]]);
        let ab = a.then(&b);
        assert_eq!(ab.multiplicity_matrix(), b.multiplicity_matrix().mul(&a.multiplicity_matrix()));
        // later letter most significant: via 0 first, then via 1
        assert_eq!(ab.fiber(0), &[0, 1, 0]);
    }

    #[test]
    fn ordered_vs_unordered_isomorphism() {
        let a = EdgeSet::new(2, vec![vec![0, 1]]);
        let b = EdgeSet::new(2, vec![vec![1, 0]]);
        assert!(a.isomorphic(&b, false));
        assert!(!a.isomorphic(&b, true));
        assert_eq!(a.first_order_mismatch(&b), Some((0, 0)));
    }

    #[test]
    fn identity_is_neutral() {
        let a = EdgeSet::new(3, vec![vec![0, 2], vec![1, 1, 0]]);
        assert_eq!(EdgeSet::identity(3).then(&a), a);
        assert_eq!(a.then(&EdgeSet::identity(2)), a);
    }
}
