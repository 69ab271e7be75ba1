//! Ground-set elements and small element sets.
//!
//! Every instance in this crate lives on a ground set of at most 32 elements
//! with dense ids `0..n`, so sets are plain bitmasks. All set operations are
//! O(1) and allocation-free, which matters inside the exhaustive sweeps.

use std::fmt;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 32;

/// A ground-set element, identified by a dense id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub fn new(id: usize) -> Self {
        assert!(id < MAX_GROUND, "element id {id} out of range");
        Element(id as u32)
    }

    pub fn id(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A subset of the ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElemSet(u32);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            ElemSet(u32::MAX)
        } else {
            ElemSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(e: Element) -> Self {
        ElemSet(1 << e.0)
    }

    pub fn from_bits(bits: u32) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: Element) -> bool {
        self.0 & (1 << e.0) != 0
    }

    pub fn with(self, e: Element) -> Self {
        ElemSet(self.0 | (1 << e.0))
    }

    pub fn without(self, e: Element) -> Self {
        ElemSet(self.0 & !(1 << e.0))
    }

    pub fn is_subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<Element> {
        if self.0 == 0 {
            None
        } else {
            Some(Element(self.0.trailing_zeros()))
        }
    }

    /// Iterate elements in ascending id order.
    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }
}

impl FromIterator<Element> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s = s.with(e);
        }
        s
    }
}

impl IntoIterator for ElemSet {
    type Item = Element;
    type IntoIter = ElemIter;
    fn into_iter(self) -> ElemIter {
        self.iter()
    }
}

pub struct ElemIter(u32);

impl Iterator for ElemIter {
    type Item = Element;
    fn next(&mut self) -> Option<Element> {
        if self.0 == 0 {
            None
        } else {
            let id = self.0.trailing_zeros();
            self.0 &= self.0 - 1;
            Some(Element(id))
        }
    }
}

impl std::ops::BitOr for ElemSet {
    type Output = ElemSet;
    fn bitor(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for ElemSet {
    type Output = ElemSet;
    fn bitand(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 & rhs.0)
    }
}

/// Symmetric difference.
impl std::ops::BitXor for ElemSet {
    type Output = ElemSet;
    fn bitxor(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 ^ rhs.0)
    }
}

/// Set difference.
impl std::ops::Sub for ElemSet {
    type Output = ElemSet;
    fn sub(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 & !rhs.0)
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A bijective relabeling of element ids, used to realize the index
/// normalizations of the solvers as explicit invertible maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    map: Vec<u32>,
}

#[allow(clippy::len_without_is_empty)]
impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel {
            map: (0..n as u32).collect(),
        }
    }

    /// Build from a forward map `old id -> new id`. Must be a permutation.
    pub fn from_map(map: Vec<u32>) -> Self {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            assert!(
                (v as usize) < map.len() && !seen[v as usize],
                "not a permutation"
            );
            seen[v as usize] = true;
        }
        Relabel { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, e: Element) -> Element {
        Element(self.map[e.id()])
    }

    pub fn apply_set(&self, s: ElemSet) -> ElemSet {
        s.iter().map(|e| self.apply(e)).collect()
    }

    pub fn inverse(&self) -> Relabel {
        let mut inv = vec![0u32; self.map.len()];
        for (old, &new) in self.map.iter().enumerate() {
            inv[new as usize] = old as u32;
        }
        Relabel { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a: ElemSet = [0, 2, 3].iter().map(|&i| Element::new(i)).collect();
        let b: ElemSet = [2, 4].iter().map(|&i| Element::new(i)).collect();
        assert_eq!((a | b).len(), 4);
        assert_eq!((a & b).len(), 1);
        assert_eq!((a ^ b).len(), 3);
        assert_eq!((a - b).len(), 2);
        assert!(a.contains(Element::new(3)));
        assert!(!a.contains(Element::new(1)));
        let ids: Vec<usize> = a.iter().map(|e| e.id()).collect();
        assert_eq!(ids, vec![0, 2, 3]);
    }

    #[test]
    fn relabel_roundtrip() {
        let r = Relabel::from_map(vec![2, 0, 1, 3]);
        let s: ElemSet = [0, 1].iter().map(|&i| Element::new(i)).collect();
        let t = r.apply_set(s);
        assert_eq!(r.inverse().apply_set(t), s);
        assert!(Relabel::identity(5).is_identity());
    }
}
