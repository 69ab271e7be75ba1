//! Independence-oracle interface shared by all instances and solvers.

use crate::ground::{ElemSet, Element};

/// A matroid given by an independence oracle over a fixed ground set.
///
/// Implementations must satisfy the independence axioms on `ground()`:
/// the empty set is independent, independence is downward closed, and the
/// exchange axiom holds. Queries outside the ground set return `false`.
pub trait MatroidOracle {
    fn ground(&self) -> ElemSet;

    fn rank(&self) -> usize;

    fn is_independent(&self, set: ElemSet) -> bool;

    fn is_basis(&self, set: ElemSet) -> bool {
        set.len() == self.rank() && self.is_independent(set)
    }

    fn label(&self, e: Element) -> String {
        format!("e{}", e.id())
    }
}

impl<T: MatroidOracle + ?Sized> MatroidOracle for &T {
    fn ground(&self) -> ElemSet {
        (**self).ground()
    }
    fn rank(&self) -> usize {
        (**self).rank()
    }
    fn is_independent(&self, set: ElemSet) -> bool {
        (**self).is_independent(set)
    }
    fn label(&self, e: Element) -> String {
        (**self).label(e)
    }
}

/// Rank of a subset, computed greedily through the oracle.
pub fn subset_rank<M: MatroidOracle + ?Sized>(m: &M, set: ElemSet) -> usize {
    let mut indep = ElemSet::EMPTY;
    for e in set {
        if m.is_independent(indep.with(e)) {
            indep = indep.with(e);
        }
    }
    indep.len()
}

/// The matroid obtained by deleting one element. Ids of the remaining
/// elements are unchanged; the deleted element is simply removed from the
/// ground set.
#[derive(Clone, Debug)]
pub struct DeletionView<M> {
    base: M,
    deleted: Element,
    rank: usize,
}

impl<M: MatroidOracle> DeletionView<M> {
    pub fn new(base: M, deleted: Element) -> Self {
        let ground = base.ground().without(deleted);
        let rank = subset_rank(&base, ground);
        DeletionView {
            base,
            deleted,
            rank,
        }
    }

    pub fn deleted(&self) -> Element {
        self.deleted
    }

    pub fn base(&self) -> &M {
        &self.base
    }
}

impl<M: MatroidOracle> MatroidOracle for DeletionView<M> {
    fn ground(&self) -> ElemSet {
        self.base.ground().without(self.deleted)
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        !set.contains(self.deleted) && self.base.is_independent(set)
    }

    fn label(&self, e: Element) -> String {
        self.base.label(e)
    }
}
