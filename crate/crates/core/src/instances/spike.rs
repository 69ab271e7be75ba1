//! Spikes: rank-`r` matroids on `2r + 1` elements with a tip and `r` legs.
//!
//! Circuits come in four families: tip plus a full leg, two full legs,
//! a chosen family `C3` of leg transversals, and all remaining minimal
//! dependent sets of size `r + 1`. Since an independent set has size at
//! most `r`, independence reduces to avoiding the first three families.

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, MAX_GROUND};
use crate::matroid::{DeletionView, MatroidOracle};
use crate::pairs::BasisPair;

/// The transversal circuit family of a spike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum C3Spec {
    /// An explicit list of leg transversals (possibly empty).
    Explicit(Vec<ElemSet>),
    /// Transversals containing an odd number of `x`-elements. This is the
    /// circuit family of the rank-`r` binary spike.
    OddXParity,
}

#[derive(Clone, Debug)]
pub struct SpikeInstance {
    r: usize,
    c3: C3Spec,
}

impl SpikeInstance {
    pub fn new(r: usize, c3: C3Spec) -> Result<Self> {
        if r < 3 {
            return Err(Error::Domain(format!("spike needs r >= 3, got {r}")));
        }
        if 2 * r + 1 > MAX_GROUND {
            return Err(Error::Domain(format!(
                "spike({r}) exceeds the ground limit"
            )));
        }
        let spike = SpikeInstance { r, c3 };
        if let C3Spec::Explicit(members) = &spike.c3 {
            for m in members {
                if !spike.is_transversal(*m) {
                    return Err(Error::Domain(format!(
                        "C3 member {m:?} is not a leg transversal"
                    )));
                }
            }
        }
        Ok(spike)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn tip(&self) -> Element {
        Element::new(0)
    }

    /// `x_i`, `1 <= i <= r`.
    pub fn x(&self, i: usize) -> Element {
        debug_assert!(1 <= i && i <= self.r);
        Element::new(2 * i - 1)
    }

    /// `y_i`, `1 <= i <= r`.
    pub fn y(&self, i: usize) -> Element {
        debug_assert!(1 <= i && i <= self.r);
        Element::new(2 * i)
    }

    pub fn leg(&self, i: usize) -> ElemSet {
        ElemSet::singleton(self.x(i)).with(self.y(i))
    }

    /// Leg index of a non-tip element.
    pub fn leg_of(&self, e: Element) -> Option<usize> {
        (e.id() > 0).then(|| e.id().div_ceil(2))
    }

    /// The other element of `e`'s leg.
    pub fn partner(&self, e: Element) -> Option<Element> {
        let leg = self.leg_of(e)?;
        let (x, y) = (self.x(leg), self.y(leg));
        Some(if e == x { y } else { x })
    }

    pub fn all_x(&self) -> ElemSet {
        (1..=self.r).map(|i| self.x(i)).collect()
    }

    /// One element per leg, tip excluded.
    pub fn is_transversal(&self, set: ElemSet) -> bool {
        !set.contains(self.tip()) && (1..=self.r).all(|i| (set & self.leg(i)).len() == 1)
    }

    fn c3_contains(&self, set: ElemSet) -> bool {
        match &self.c3 {
            C3Spec::Explicit(members) => members.contains(&set),
            C3Spec::OddXParity => self.is_transversal(set) && (set & self.all_x()).len() % 2 == 1,
        }
    }

    /// Materialize the transversal circuit family.
    pub fn c3_members(&self) -> Vec<ElemSet> {
        match &self.c3 {
            C3Spec::Explicit(members) => members.clone(),
            C3Spec::OddXParity => self
                .transversals()
                .into_iter()
                .filter(|t| (*t & self.all_x()).len() % 2 == 1)
                .collect(),
        }
    }

    fn transversals(&self) -> Vec<ElemSet> {
        let mut out = Vec::with_capacity(1 << self.r);
        for bits in 0u32..(1 << self.r) {
            let mut t = ElemSet::EMPTY;
            for i in 1..=self.r {
                t = t.with(if bits & (1 << (i - 1)) != 0 {
                    self.x(i)
                } else {
                    self.y(i)
                });
            }
            out.push(t);
        }
        out
    }

    /// All circuits, materialized. Intended for desk-scale validation.
    pub fn circuits(&self) -> Vec<ElemSet> {
        let mut circuits = Vec::new();
        for i in 1..=self.r {
            circuits.push(self.leg(i).with(self.tip()));
        }
        for i in 1..=self.r {
            for j in i + 1..=self.r {
                circuits.push(self.leg(i) | self.leg(j));
            }
        }
        circuits.extend(self.c3_members());
        let n = 2 * self.r + 1;
        let small = circuits.clone();
        for bits in 0u32..(1u32 << n) {
            if bits.count_ones() as usize != self.r + 1 {
                continue;
            }
            let c = ElemSet::from_bits(bits);
            if !small.iter().any(|s| s.is_subset_of(c)) {
                circuits.push(c);
            }
        }
        circuits
    }

    /// Structural checks, plus an exhaustive circuit-axiom check for
    /// `r <= 5`. Instances failing the axiom check are rejected rather
    /// than assumed to define a matroid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let C3Spec::Explicit(members) = &self.c3 {
            for m in members {
                if !self.is_transversal(*m) {
                    out.push(format!("C3 member {m:?} is not a leg transversal"));
                }
            }
            let mut sorted: Vec<ElemSet> = members.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != members.len() {
                out.push("C3 contains duplicate members".into());
            }
        }
        if !out.is_empty() || self.r > 5 {
            return out;
        }

        let circuits = self.circuits();
        for (i, c) in circuits.iter().enumerate() {
            for (j, d) in circuits.iter().enumerate() {
                if i != j && c.is_subset_of(*d) {
                    out.push(format!("circuit {c:?} is contained in circuit {d:?}"));
                    return out;
                }
            }
        }
        // Elimination: distinct circuits C, D and e in their intersection
        // must leave a circuit inside (C ∪ D) - e.
        for (i, &c) in circuits.iter().enumerate() {
            for &d in circuits.iter().skip(i + 1) {
                for e in c & d {
                    let target = (c | d).without(e);
                    if !circuits.iter().any(|cc| cc.is_subset_of(target)) {
                        out.push(format!(
                            "circuit elimination fails for {c:?}, {d:?} at {e:?}"
                        ));
                        return out;
                    }
                }
            }
        }
        out
    }
}

impl MatroidOracle for SpikeInstance {
    fn ground(&self) -> ElemSet {
        ElemSet::full(2 * self.r + 1)
    }

    fn rank(&self) -> usize {
        self.r
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        if !set.is_subset_of(self.ground()) || set.len() > self.r {
            return false;
        }
        let mut full_legs = 0;
        for i in 1..=self.r {
            if self.leg(i).is_subset_of(set) {
                full_legs += 1;
                if full_legs >= 2 || set.contains(self.tip()) {
                    return false;
                }
            }
        }
        !(set.len() == self.r && self.c3_contains(set))
    }

    fn label(&self, e: Element) -> String {
        if e == self.tip() {
            "t".into()
        } else {
            let leg = self.leg_of(e).unwrap();
            if e == self.x(leg) {
                format!("x{leg}")
            } else {
                format!("y{leg}")
            }
        }
    }
}

/// The free spike: no transversal circuits.
pub fn free_spike(r: usize) -> Result<SpikeInstance> {
    SpikeInstance::new(r, C3Spec::Explicit(Vec::new()))
}

/// The binary spike: transversals with an odd number of `x`-elements are
/// circuits.
pub fn binary_spike(r: usize) -> Result<SpikeInstance> {
    SpikeInstance::new(r, C3Spec::OddXParity)
}

/// The `2^{r-2}` distinguished colorings of the binary spike with `x_1`
/// deleted: `y_1` red, `t` blue, one element per remaining leg on each side,
/// and an even number of red `x`-elements among legs `2..r`. No strictly
/// monotone exchange sequence exists between any two of them.
pub fn binary_spike_pairs(r: usize) -> Result<Vec<BasisPair>> {
    let spike = binary_spike(r)?;
    let view = DeletionView::new(&spike, spike.x(1));
    let mut out = Vec::new();
    for bits in 0u32..(1 << (r - 1)) {
        if !(bits.count_ones() as usize).is_multiple_of(2) {
            continue;
        }
        let mut red = ElemSet::singleton(spike.y(1));
        let mut blue = ElemSet::singleton(spike.tip());
        for i in 2..=r {
            if bits & (1 << (i - 2)) != 0 {
                red = red.with(spike.x(i));
                blue = blue.with(spike.y(i));
            } else {
                red = red.with(spike.y(i));
                blue = blue.with(spike.x(i));
            }
        }
        let p = BasisPair::new(red, blue);
        p.validate(&view)
            .map_err(|_| Error::InternalBound("distinguished pair is not a coloring".into()))?;
        out.push(p);
    }
    debug_assert_eq!(out.len(), 1 << (r - 2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independence_families() {
        let free = free_spike(3).unwrap();
        // Tip plus a full leg is a circuit.
        let c1: ElemSet = [free.tip(), free.x(1), free.y(1)].into_iter().collect();
        assert!(!free.is_independent(c1));
        // A doubled leg with a single element elsewhere is fine.
        let ok: ElemSet = [free.x(1), free.y(1), free.x(2)].into_iter().collect();
        assert!(free.is_independent(ok));
        // Two full legs are a circuit even below full rank bound.
        let c2 = free.leg(1) | free.leg(2);
        assert!(!free.is_independent(c2));

        let binary = binary_spike(3).unwrap();
        // One x among three legs: odd, a transversal circuit.
        let odd: ElemSet = [binary.x(1), binary.y(2), binary.y(3)]
            .into_iter()
            .collect();
        assert!(!binary.is_independent(odd));
        let even: ElemSet = [binary.x(1), binary.x(2), binary.y(3)]
            .into_iter()
            .collect();
        assert!(binary.is_independent(even));
    }

    #[test]
    fn binary_c3_has_four_members_at_rank_3() {
        let binary = binary_spike(3).unwrap();
        assert_eq!(binary.c3_members().len(), 4);
    }

    #[test]
    fn validation_accepts_built_ins() {
        assert!(free_spike(3).unwrap().validate().is_empty());
        assert!(binary_spike(3).unwrap().validate().is_empty());
        assert!(binary_spike(4).unwrap().validate().is_empty());
        assert!(free_spike(4).unwrap().validate().is_empty());
    }

    #[test]
    fn rejects_r_below_3_and_bad_members() {
        assert!(free_spike(2).is_err());
        let free = free_spike(3).unwrap();
        let not_transversal: ElemSet = [free.tip(), free.x(2), free.y(3)].into_iter().collect();
        assert!(SpikeInstance::new(3, C3Spec::Explicit(vec![not_transversal])).is_err());
    }

    #[test]
    fn deleting_any_element_leaves_two_disjoint_bases() {
        for spike in [free_spike(3).unwrap(), binary_spike(3).unwrap()] {
            for e in spike.ground() {
                let view = DeletionView::new(&spike, e);
                assert_eq!(view.rank(), 3);
                let rest = view.ground();
                let found = rest_splits(&view, rest);
                assert!(found, "no disjoint basis pair after deleting {e:?}");
            }
        }
    }

    fn rest_splits(view: &DeletionView<&SpikeInstance>, rest: ElemSet) -> bool {
        let elems: Vec<Element> = rest.iter().collect();
        for bits in 0u32..(1 << elems.len()) {
            if bits.count_ones() as usize != view.rank() {
                continue;
            }
            let set: ElemSet = elems
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            if view.is_basis(set) && view.is_basis(rest - set) {
                return true;
            }
        }
        false
    }

    #[test]
    fn distinguished_pairs_count() {
        assert_eq!(binary_spike_pairs(3).unwrap().len(), 2);
        assert_eq!(binary_spike_pairs(4).unwrap().len(), 4);
        assert_eq!(binary_spike_pairs(5).unwrap().len(), 8);
    }

    #[test]
    fn labels() {
        let s = free_spike(3).unwrap();
        assert_eq!(s.label(s.tip()), "t");
        assert_eq!(s.label(s.x(2)), "x2");
        assert_eq!(s.label(s.y(3)), "y3");
    }
}
