//! Exchange sequences for compatible pairs of a spike missing one element.
//!
//! Every case analysis here first normalizes the input with an explicit
//! invertible relabeling (leg permutation, per-leg x/y swaps, color swap,
//! pair-role swap), constructs the sequence in the normalized labels, and
//! maps it back. Feasibility questions that depend on the transversal
//! circuit family are settled by direct oracle queries.

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, Relabel};
use crate::instances::SpikeInstance;
use crate::matroid::{DeletionView, MatroidOracle};
use crate::pairs::{
    is_feasible_exchange, verify_sequence, BasisPair, Exchange, ExchangeSequence, Replayer,
};
use crate::weight::WeightFn;

/// Structure of a basis of a spike with one element deleted.
///
/// With the tip deleted, a basis either meets every leg once (transversal)
/// or doubles one leg and misses another. With a leg element deleted, the
/// four cases are determined by whether the tip and the deleted element's
/// partner are present.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisClass {
    Transversal,
    NonTransversal { doubled: usize, empty: usize },
    TipAndPartner { empty: usize },
    TipOnly,
    PartnerOnly,
    DoubledLeg { doubled: usize },
}

/// Classify a basis of the spike with `missing` deleted.
pub fn classify_basis(k: &SpikeInstance, missing: Element, z: ElemSet) -> Result<BasisClass> {
    let view = DeletionView::new(k, missing);
    if !view.is_basis(z) {
        return Err(Error::NotABasis);
    }
    let r = k.r();
    if missing == k.tip() {
        let doubled = (1..=r).find(|&i| k.leg(i).is_subset_of(z));
        match doubled {
            None => Ok(BasisClass::Transversal),
            Some(d) => {
                let empty = (1..=r)
                    .find(|&i| (z & k.leg(i)).is_empty())
                    .ok_or(Error::NotABasis)?;
                Ok(BasisClass::NonTransversal { doubled: d, empty })
            }
        }
    } else {
        let home = k.leg_of(missing).unwrap();
        let partner = k.partner(missing).unwrap();
        match (z.contains(k.tip()), z.contains(partner)) {
            (true, true) => {
                let empty = (1..=r)
                    .find(|&i| i != home && (z & k.leg(i)).is_empty())
                    .ok_or(Error::NotABasis)?;
                Ok(BasisClass::TipAndPartner { empty })
            }
            (true, false) => Ok(BasisClass::TipOnly),
            (false, true) => Ok(BasisClass::PartnerOnly),
            (false, false) => {
                let doubled = (1..=r)
                    .find(|&i| i != home && k.leg(i).is_subset_of(z))
                    .ok_or(Error::NotABasis)?;
                Ok(BasisClass::DoubledLeg { doubled })
            }
        }
    }
}

/// An invertible normalization of a spike problem: a leg permutation with
/// per-leg x/y swaps (an element-level bijection fixing the tip), plus
/// optional color and pair-role swaps. The three parts commute, so the
/// inverse keeps the flags and inverts the element map.
#[derive(Clone, Debug)]
pub struct SpikeRelabeling {
    perm: Relabel,
    pub color_swap: bool,
    pub role_swap: bool,
}

impl SpikeRelabeling {
    pub fn identity(k: &SpikeInstance) -> Self {
        SpikeRelabeling {
            perm: Relabel::identity(2 * k.r() + 1),
            color_swap: false,
            role_swap: false,
        }
    }

    /// `leg_targets[i-1]` is the destination position of source leg `i`;
    /// `xy_swaps[i-1]` sends `x_i` to the destination `y` instead of `x`.
    pub fn from_parts(
        k: &SpikeInstance,
        leg_targets: &[usize],
        xy_swaps: &[bool],
        color_swap: bool,
        role_swap: bool,
    ) -> Self {
        let r = k.r();
        assert_eq!(leg_targets.len(), r);
        assert_eq!(xy_swaps.len(), r);
        let mut map = vec![0u32; 2 * r + 1];
        map[k.tip().id()] = k.tip().id() as u32;
        for i in 1..=r {
            let t = leg_targets[i - 1];
            let (xt, yt) = if xy_swaps[i - 1] {
                (k.y(t), k.x(t))
            } else {
                (k.x(t), k.y(t))
            };
            map[k.x(i).id()] = xt.id() as u32;
            map[k.y(i).id()] = yt.id() as u32;
        }
        SpikeRelabeling {
            perm: Relabel::from_map(map),
            color_swap,
            role_swap,
        }
    }

    pub fn perm(&self) -> &Relabel {
        &self.perm
    }

    pub fn inverse(&self) -> SpikeRelabeling {
        SpikeRelabeling {
            perm: self.perm.inverse(),
            color_swap: self.color_swap,
            role_swap: self.role_swap,
        }
    }

    /// Normalized view of a pair of pairs.
    pub fn apply_pairs(&self, p1: &BasisPair, p2: &BasisPair) -> (BasisPair, BasisPair) {
        let mut q1 = p1.relabeled(&self.perm);
        let mut q2 = p2.relabeled(&self.perm);
        if self.color_swap {
            q1 = q1.swapped();
            q2 = q2.swapped();
        }
        if self.role_swap {
            std::mem::swap(&mut q1, &mut q2);
        }
        (q1, q2)
    }

    /// Forward transform of a sequence.
    pub fn apply_sequence(&self, seq: &ExchangeSequence) -> ExchangeSequence {
        let mut out = seq.relabeled(&self.perm);
        if self.color_swap {
            out = out.swapped_colors();
        }
        if self.role_swap {
            out = out.reversed();
        }
        out
    }

    /// Map a sequence built in the normalized labels back to the original
    /// problem.
    pub fn pull_back(&self, seq: &ExchangeSequence) -> ExchangeSequence {
        self.inverse().apply_sequence(seq)
    }
}

/// Independence oracle of the relabeled spike: a query is answered by
/// mapping the set back to the base labels. Needed because leg permutations
/// and x/y swaps do not fix the transversal circuit family in general.
struct RelabeledSpike<'a> {
    base: &'a SpikeInstance,
    to_base: Relabel,
}

impl MatroidOracle for RelabeledSpike<'_> {
    fn ground(&self) -> ElemSet {
        self.base.ground()
    }

    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        self.base.is_independent(self.to_base.apply_set(set))
    }
}

fn single_red(p: &BasisPair, leg: ElemSet) -> Result<Element> {
    let inter = p.r & leg;
    if inter.len() != 1 {
        return Err(Error::InternalBound(format!(
            "expected one red element in {leg:?}, found {inter:?}"
        )));
    }
    Ok(inter.first().unwrap())
}

fn leg_differs(k: &SpikeInstance, a: &BasisPair, b: &BasisPair, i: usize) -> bool {
    (a.r & k.leg(i)) != (b.r & k.leg(i))
}

/// Fill a leg-target assignment: fixed positions first, the remaining legs
/// ascending into the remaining positions.
fn leg_targets(r: usize, fixed: &[(usize, usize)]) -> Vec<usize> {
    let mut targets = vec![0usize; r];
    let mut taken = vec![false; r + 1];
    for &(src, dst) in fixed {
        targets[src - 1] = dst;
        taken[dst] = true;
    }
    let mut free: Vec<usize> = (1..=r).filter(|&d| !taken[d]).collect();
    free.reverse();
    for t in targets.iter_mut() {
        if *t == 0 {
            *t = free.pop().expect("position available");
        }
    }
    targets
}

/// Want the given element of a source leg to become the `x` of its target.
fn swap_for(k: &SpikeInstance, leg: usize, wanted_x: Element) -> bool {
    wanted_x == k.y(leg)
}

fn bounds_check<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    seq: &ExchangeSequence,
    w: &WeightFn,
    rank: usize,
) -> Result<()> {
    let report = verify_sequence(m, p1, p2, seq, w)?;
    if !report.valid {
        return Err(Error::InternalBound(format!(
            "spike sequence does not replay: {:?}",
            report.failure
        )));
    }
    if report.length > rank {
        return Err(Error::InternalBound(format!(
            "spike sequence length {} exceeds rank {rank}",
            report.length
        )));
    }
    if report.weight > w.total(p1.union()) {
        return Err(Error::InternalBound(
            "spike sequence exceeds the union weight".into(),
        ));
    }
    if report.max_usage > 2 {
        return Err(Error::InternalBound(
            "spike sequence uses an element more than twice".into(),
        ));
    }
    Ok(())
}

/// Exchange sequence between compatible pairs of the spike missing the tip:
/// length at most `r`, weight at most `w(S - t)`, each element used at most
/// twice.
pub fn solve_missing_tip(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    let view = DeletionView::new(k, k.tip());
    p1.validate(&view)?;
    p2.validate(&view)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    if p1 == p2 {
        return Ok(ExchangeSequence::empty());
    }
    let c1 = classify_basis(k, k.tip(), p1.r)?;
    let c2 = classify_basis(k, k.tip(), p2.r)?;

    let seq = match (c1, c2) {
        (
            BasisClass::NonTransversal {
                doubled: d1,
                empty: e1,
            },
            BasisClass::NonTransversal { .. },
        ) => tip_both_nontransversal(k, p1, p2, w, d1, e1)?,
        (BasisClass::Transversal, BasisClass::Transversal) => tip_both_transversal(k, p1, p2)?,
        (BasisClass::NonTransversal { doubled, empty }, BasisClass::Transversal) => {
            tip_mixed(k, p1, p2, doubled, empty, false)?
        }
        (BasisClass::Transversal, BasisClass::NonTransversal { .. }) => {
            let BasisClass::NonTransversal { doubled, empty } = classify_basis(k, k.tip(), p2.r)?
            else {
                unreachable!()
            };
            tip_mixed(k, p1, p2, doubled, empty, true)?
        }
        _ => {
            return Err(Error::InternalBound(
                "tip-deleted basis classified as a leg-deleted type".into(),
            ))
        }
    };
    bounds_check(&view, p1, p2, &seq, w, k.r())?;
    Ok(seq)
}

/// Both classes non-transversal: relabel the doubled leg of the source to
/// position 1 and its empty leg to position `r`, then follow the case split
/// on where the target's doubled and empty legs land.
fn tip_both_nontransversal(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
    d1: usize,
    e1: usize,
) -> Result<ExchangeSequence> {
    let r = k.r();
    let targets = leg_targets(r, &[(d1, 1), (e1, r)]);
    let BasisClass::NonTransversal {
        doubled: d2,
        empty: e2,
    } = classify_basis(k, k.tip(), p2.r)?
    else {
        return Err(Error::InternalBound("classification changed".into()));
    };
    let kk = targets[d2 - 1];
    let ll = targets[e2 - 1];

    let mut swaps = vec![false; r];
    if (2..r).contains(&kk) {
        // Normalize so that in the new labels x_1 and x_r are blue in the
        // target and x_k is red in the source.
        if ll != 1 {
            let blue2 = single_red(&p2.swapped(), k.leg(d1))?;
            swaps[d1 - 1] = swap_for(k, d1, blue2);
        }
        if ll != r {
            let blue2 = single_red(&p2.swapped(), k.leg(e1))?;
            swaps[e1 - 1] = swap_for(k, e1, blue2);
        }
        let red1 = single_red(p1, k.leg(d2))?;
        swaps[d2 - 1] = swap_for(k, d2, red1);
    } else if kk == r && ll == 1 {
        // Either some middle leg differs (normalize its source-red element
        // to x), or all agree (normalize every middle leg that way).
        let mid_diff = (1..=r)
            .filter(|&i| i != d1 && i != e1 && leg_differs(k, p1, p2, i))
            .min_by_key(|&i| targets[i - 1]);
        match mid_diff {
            Some(j) => {
                let red1 = single_red(p1, k.leg(j))?;
                swaps[j - 1] = swap_for(k, j, red1);
            }
            None => {
                for i in 1..=r {
                    if i != d1 && i != e1 {
                        let red1 = single_red(p1, k.leg(i))?;
                        swaps[i - 1] = swap_for(k, i, red1);
                    }
                }
            }
        }
    }

    let rel = SpikeRelabeling::from_parts(k, &targets, &swaps, false, false);
    let (v1, v2) = rel.apply_pairs(p1, p2);
    let oracle = RelabeledSpike {
        base: k,
        to_base: rel.perm().inverse(),
    };
    let view = DeletionView::new(&oracle, k.tip());
    let wv = w.relabeled(rel.perm());
    let mut rep = Replayer::new(&view, v1);

    match (kk, ll) {
        (1, _) => {
            for i in 2..r {
                if i != ll && leg_differs(k, &v1, &v2, i) {
                    rep.push_swap(k.x(i), k.y(i))?;
                }
            }
            if ll != r {
                let out = single_red(&rep.cur, k.leg(ll))?;
                let inn = single_red(&v2, k.leg(r))?;
                rep.push_swap(out, inn)?;
            }
        }
        (_, _) if (2..r).contains(&kk) => {
            rep.push_swap(k.x(1), k.y(kk))?;
            for i in 2..r {
                if i != kk && i != ll && leg_differs(k, &v1, &v2, i) {
                    rep.push_swap(k.x(i), k.y(i))?;
                }
            }
            if ll != r {
                let out = single_red(&rep.cur, k.leg(ll))?;
                rep.push_swap(out, k.y(r))?;
            }
        }
        (_, _) if kk == r && (2..r).contains(&ll) => {
            let out = single_red(&rep.cur, k.leg(ll))?;
            rep.push_swap(out, k.x(r))?;
            for i in 2..r {
                if i != ll && leg_differs(k, &v1, &v2, i) {
                    rep.push_swap(k.x(i), k.y(i))?;
                }
            }
            let out = single_red(&v2.swapped(), k.leg(1))?;
            rep.push_swap(out, k.y(r))?;
        }
        (_, _) if kk == r && ll == 1 => {
            let mid_diff = (2..r).find(|&i| leg_differs(k, &v1, &v2, i));
            match mid_diff {
                Some(j) => {
                    rep.push_swap(k.x(1), k.y(j))?;
                    for i in 2..r {
                        if i != j && leg_differs(k, &v1, &v2, i) {
                            rep.push_swap(k.x(i), k.y(i))?;
                        }
                    }
                    rep.push_swap(k.y(1), k.x(r))?;
                    rep.push_swap(k.x(j), k.y(r))?;
                }
                None => {
                    // The doubled and empty legs trade places while every
                    // middle leg keeps its colors; one middle element must
                    // be borrowed twice. Reuse the cheaper element of leg 2;
                    // every intermediate state keeps a doubled and an empty
                    // leg, so feasibility is independent of the circuit
                    // family.
                    if wv.get(k.y(2)) <= wv.get(k.x(2)) {
                        rep.push_swap(k.x(1), k.y(2))?;
                        rep.push_swap(k.y(1), k.x(r))?;
                        rep.push_swap(k.y(2), k.y(r))?;
                    } else {
                        rep.push_swap(k.x(2), k.x(r))?;
                        rep.push_swap(k.x(1), k.y(r))?;
                        rep.push_swap(k.y(1), k.x(2))?;
                    }
                }
            }
        }
        _ => {
            return Err(Error::InternalBound(format!(
                "unexpected target shape k = {kk}, l = {ll}"
            )))
        }
    }

    if rep.cur != v2 {
        return Err(Error::InternalBound(
            "non-transversal case missed the target".into(),
        ));
    }
    Ok(rel.pull_back(&rep.into_sequence()))
}

/// Both classes transversal: differing legs are swapped in place, going
/// through a doubled-leg state when more than one leg differs.
fn tip_both_transversal(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
) -> Result<ExchangeSequence> {
    let r = k.r();
    let diff: Vec<usize> = (1..=r).filter(|&i| leg_differs(k, p1, p2, i)).collect();
    let view = DeletionView::new(k, k.tip());
    match diff.len() {
        0 => Ok(ExchangeSequence::empty()),
        1 => {
            let mut rep = Replayer::new(&view, *p1);
            rep.push_swap(k.x(diff[0]), k.y(diff[0]))?;
            Ok(rep.into_sequence())
        }
        _ => {
            let (a, b) = (diff[0], diff[1]);
            let targets = leg_targets(r, &[(a, 1), (b, 2)]);
            let mut swaps = vec![false; r];
            swaps[a - 1] = swap_for(k, a, single_red(p1, k.leg(a))?);
            swaps[b - 1] = swap_for(k, b, single_red(p1, k.leg(b))?);
            let rel = SpikeRelabeling::from_parts(k, &targets, &swaps, false, false);
            let (v1, v2) = rel.apply_pairs(p1, p2);
            let oracle = RelabeledSpike {
                base: k,
                to_base: rel.perm().inverse(),
            };
            let vview = DeletionView::new(&oracle, k.tip());
            let mut rep = Replayer::new(&vview, v1);
            rep.push_swap(k.x(1), k.y(2))?;
            for i in 3..=r {
                if leg_differs(k, &v1, &v2, i) {
                    rep.push_swap(k.x(i), k.y(i))?;
                }
            }
            rep.push_swap(k.x(2), k.y(1))?;
            if rep.cur != v2 {
                return Err(Error::InternalBound(
                    "transversal case missed the target".into(),
                ));
            }
            Ok(rel.pull_back(&rep.into_sequence()))
        }
    }
}

/// Exactly one class transversal. With the non-transversal side as the
/// source (role-swapping if needed), middle legs are aligned and one final
/// exchange fixes the doubled and empty legs.
fn tip_mixed(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    doubled: usize,
    empty: usize,
    role_swap: bool,
) -> Result<ExchangeSequence> {
    let r = k.r();
    let targets = leg_targets(r, &[(doubled, 1), (empty, r)]);
    let rel = SpikeRelabeling::from_parts(k, &targets, &vec![false; r], false, role_swap);
    let (v1, v2) = rel.apply_pairs(p1, p2);
    let oracle = RelabeledSpike {
        base: k,
        to_base: rel.perm().inverse(),
    };
    let view = DeletionView::new(&oracle, k.tip());
    let mut rep = Replayer::new(&view, v1);
    for i in 2..r {
        if leg_differs(k, &v1, &v2, i) {
            rep.push_swap(k.x(i), k.y(i))?;
        }
    }
    let out = single_red(&v2.swapped(), k.leg(1))?;
    let inn = single_red(&v2, k.leg(r))?;
    rep.push_swap(out, inn)?;
    if rep.cur != v2 {
        return Err(Error::InternalBound("mixed case missed the target".into()));
    }
    Ok(rel.pull_back(&rep.into_sequence()))
}

/// Exchange sequence between compatible pairs of the spike missing a leg
/// element: length at most `r`, weight at most `w(S - x)`, each element
/// used at most twice.
pub fn solve_missing_leg_element(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    let union = p1.union();
    let missing_set = k.ground() - union;
    let missing = match (missing_set.len(), missing_set.first()) {
        (1, Some(e)) if e != k.tip() => e,
        _ => {
            return Err(Error::Precondition(
                "pairs must miss exactly one leg element".into(),
            ))
        }
    };
    let view = DeletionView::new(k, missing);
    p1.validate(&view)?;
    p2.validate(&view)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    if p1 == p2 {
        return Ok(ExchangeSequence::empty());
    }

    let home = k.leg_of(missing).unwrap();
    let partner = k.partner(missing).unwrap();
    let same = |p: &BasisPair| p.r.contains(k.tip()) == p.r.contains(partner);

    let seq = if same(p1) || same(p2) {
        leg_same_color_case(k, p1, p2, w, missing, home, !same(p1))?
    } else {
        leg_split_color_case(k, p1, p2, w, missing, home, partner)?
    };
    bounds_check(&view, p1, p2, &seq, w, k.r())?;
    Ok(seq)
}

/// The tip and the partner of the missing element share a color in the
/// source pair (role-swapping first if only the target qualifies).
#[allow(clippy::too_many_arguments)]
fn leg_same_color_case(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
    missing: Element,
    home: usize,
    role_swap: bool,
) -> Result<ExchangeSequence> {
    let r = k.r();
    let (a1, a2) = if role_swap { (*p2, *p1) } else { (*p1, *p2) };
    let color_swap = a1.b.contains(k.tip());
    let (b1, b2) = if color_swap {
        (a1.swapped(), a2.swapped())
    } else {
        (a1, a2)
    };
    // b1 holds tip and partner in red: it has a unique empty leg.
    let BasisClass::TipAndPartner { empty: e1 } = classify_basis(k, missing, b1.r)? else {
        return Err(Error::InternalBound("source class mismatch".into()));
    };
    let targets = leg_targets(r, &[(home, 1), (e1, r)]);
    let mut swaps = vec![false; r];
    swaps[home - 1] = swap_for(k, home, missing);

    // Sub-case from the target's class determines extra x/y normalizations.
    let c2 = classify_basis(k, missing, b2.r)?;
    if let BasisClass::DoubledLeg { doubled } = c2 {
        if targets[doubled - 1] != r {
            swaps[doubled - 1] = swap_for(k, doubled, single_red(&b1, k.leg(doubled))?);
            swaps[e1 - 1] = swap_for(k, e1, single_red(&b2, k.leg(e1))?);
        }
    }

    let rel = SpikeRelabeling::from_parts(k, &targets, &swaps, color_swap, role_swap);
    let (v1, v2) = rel.apply_pairs(p1, p2);
    let oracle = RelabeledSpike {
        base: k,
        to_base: rel.perm().inverse(),
    };
    let view = DeletionView::new(&oracle, k.x(1));
    let wv = w.relabeled(rel.perm());
    let mut rep = Replayer::new(&view, v1);

    // Align middle legs that are split in the target.
    for i in 2..r {
        if (v2.r & k.leg(i)).len() == 1 && leg_differs(k, &v1, &v2, i) {
            rep.push_swap(k.x(i), k.y(i))?;
        }
    }

    let t = k.tip();
    let y1 = k.y(1);
    match (v2.r.contains(t), v2.r.contains(y1)) {
        (true, true) => {
            let BasisClass::TipAndPartner { empty: l } = classify_basis(k, k.x(1), v2.r)? else {
                return Err(Error::InternalBound("target class mismatch".into()));
            };
            if l != r {
                let out = single_red(&rep.cur, k.leg(l))?;
                let inn = single_red(&v2, k.leg(r))?;
                rep.push_swap(out, inn)?;
            }
        }
        (true, false) | (false, true) => {
            let out = if v2.b.contains(t) { t } else { y1 };
            let inn = single_red(&v2, k.leg(r))?;
            rep.push_swap(out, inn)?;
        }
        (false, false) => {
            let BasisClass::DoubledLeg { doubled: l } = classify_basis(k, k.x(1), v2.r)? else {
                return Err(Error::InternalBound("target class mismatch".into()));
            };
            if l == r {
                // Two candidate two-step finishes; at most one of the two
                // transversal intermediates is a circuit.
                if is_feasible_exchange(&view, &rep.cur, Exchange::new(y1, k.x(r))) {
                    rep.push_swap(y1, k.x(r))?;
                    rep.push_swap(t, k.y(r))?;
                } else {
                    rep.push_swap(y1, k.y(r))?;
                    rep.push_swap(t, k.x(r))?;
                }
            } else {
                // Normalized: x_l is red in the source, x_r red in the
                // target. The monotone finish needs (y_1, x_r) feasible;
                // otherwise one element is reused, picking the cheaper of
                // x_l and y_r.
                if is_feasible_exchange(&view, &rep.cur, Exchange::new(y1, k.x(r))) {
                    rep.push_swap(y1, k.x(r))?;
                    rep.push_swap(t, k.y(l))?;
                } else if wv.get(k.x(l)) >= wv.get(k.y(r)) {
                    rep.push_swap(y1, k.y(r))?;
                    rep.push_swap(t, k.y(l))?;
                    rep.push_swap(k.y(r), k.x(r))?;
                } else {
                    rep.push_swap(k.x(l), k.x(r))?;
                    rep.push_swap(y1, k.y(l))?;
                    rep.push_swap(t, k.x(l))?;
                }
            }
        }
    }

    if rep.cur != v2 {
        return Err(Error::InternalBound(
            "same-color case missed the target".into(),
        ));
    }
    Ok(rel.pull_back(&rep.into_sequence()))
}

/// The tip and the partner have different colors in both pairs.
fn leg_split_color_case(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
    missing: Element,
    home: usize,
    partner: Element,
) -> Result<ExchangeSequence> {
    let r = k.r();
    let color_swap = p1.b.contains(partner);
    let (b1, b2) = if color_swap {
        (p1.swapped(), p2.swapped())
    } else {
        (*p1, *p2)
    };
    debug_assert!(b1.r.contains(partner) && b1.b.contains(k.tip()));

    let diff = (1..=r).find(|&i| i != home && leg_differs(k, &b1, &b2, i));
    let Some(d) = diff else {
        // Every leg agrees; only the tip and the partner can differ, and
        // they do since the pairs are distinct.
        let rel = SpikeRelabeling::from_parts(
            k,
            &leg_targets(r, &[(home, 1)]),
            &{
                let mut s = vec![false; r];
                s[home - 1] = swap_for(k, home, missing);
                s
            },
            color_swap,
            false,
        );
        let (v1, v2) = rel.apply_pairs(p1, p2);
        let oracle = RelabeledSpike {
            base: k,
            to_base: rel.perm().inverse(),
        };
        let view = DeletionView::new(&oracle, k.x(1));
        let mut rep = Replayer::new(&view, v1);
        rep.push_swap(k.y(1), k.tip())?;
        if rep.cur != v2 {
            return Err(Error::InternalBound(
                "aligned case missed the target".into(),
            ));
        }
        return Ok(rel.pull_back(&rep.into_sequence()));
    };

    let targets = leg_targets(r, &[(home, 1), (d, 2)]);
    let mut swaps = vec![false; r];
    swaps[home - 1] = swap_for(k, home, missing);
    // x_2 is the element that is blue in the source and red in the target.
    swaps[d - 1] = swap_for(k, d, single_red(&b1.swapped(), k.leg(d))?);

    let rel = SpikeRelabeling::from_parts(k, &targets, &swaps, color_swap, false);
    let (v1, v2) = rel.apply_pairs(p1, p2);
    let oracle = RelabeledSpike {
        base: k,
        to_base: rel.perm().inverse(),
    };
    let view = DeletionView::new(&oracle, k.x(1));
    let wv = w.relabeled(rel.perm());
    let mut rep = Replayer::new(&view, v1);

    let t = k.tip();
    let y1 = k.y(1);
    let mids = |rep: &mut Replayer<DeletionView<&RelabeledSpike>>| -> Result<()> {
        for i in 3..=r {
            if leg_differs(k, &v1, &v2, i) {
                rep.push_swap(k.x(i), k.y(i))?;
            }
        }
        Ok(())
    };
    if v2.r.contains(t) {
        // Tip and partner trade colors.
        rep.push_swap(y1, k.x(2))?;
        mids(&mut rep)?;
        rep.push_swap(k.y(2), t)?;
    } else if wv.get(y1) <= wv.get(t) {
        rep.push_swap(y1, k.x(2))?;
        mids(&mut rep)?;
        rep.push_swap(k.y(2), y1)?;
    } else {
        rep.push_swap(k.y(2), t)?;
        mids(&mut rep)?;
        rep.push_swap(t, k.x(2))?;
    }

    if rep.cur != v2 {
        return Err(Error::InternalBound(
            "split-color case missed the target".into(),
        ));
    }
    Ok(rel.pull_back(&rep.into_sequence()))
}

/// Solve a spike pair problem, dispatching on the missing element.
pub fn solve_spike(
    k: &SpikeInstance,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    let union = p1.union();
    let missing_set = k.ground() - union;
    let missing = match (missing_set.len(), missing_set.first()) {
        (1, Some(e)) => e,
        _ => {
            return Err(Error::Precondition(
                "pairs must cover all but one element of the spike".into(),
            ))
        }
    };
    if missing == k.tip() {
        solve_missing_tip(k, p1, p2, w)
    } else {
        solve_missing_leg_element(k, p1, p2, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{binary_spike, free_spike};
    use crate::oracle::{exists_monotone_sequence, Limits};
    use crate::weight::Weight;

    fn set(elems: &[Element]) -> ElemSet {
        elems.iter().copied().collect()
    }

    #[test]
    fn classification_examples() {
        let free = free_spike(3).unwrap();
        let z = set(&[free.x(1), free.y(1), free.x(2)]);
        assert_eq!(
            classify_basis(&free, free.tip(), z).unwrap(),
            BasisClass::NonTransversal {
                doubled: 1,
                empty: 3
            }
        );
        let z = set(&[free.x(1), free.x(2), free.x(3)]);
        assert_eq!(
            classify_basis(&free, free.tip(), z).unwrap(),
            BasisClass::Transversal
        );
        let z = set(&[free.tip(), free.y(2), free.x(3)]);
        assert_eq!(
            classify_basis(&free, free.x(1), z).unwrap(),
            BasisClass::TipOnly
        );
        let not_basis = set(&[free.tip(), free.x(2), free.y(2)]);
        assert_eq!(
            classify_basis(&free, free.x(1), not_basis),
            Err(Error::NotABasis)
        );
    }

    #[test]
    fn classification_is_total_and_unique() {
        for k in [free_spike(3).unwrap(), binary_spike(4).unwrap()] {
            for missing in k.ground() {
                let view = DeletionView::new(&k, missing);
                for z in crate::oracle::enumerate_bases(&view, &Limits::default()).unwrap() {
                    classify_basis(&k, missing, z).unwrap();
                }
            }
        }
    }

    #[test]
    fn relabeling_roundtrip() {
        let k = binary_spike(4).unwrap();
        let rel =
            SpikeRelabeling::from_parts(&k, &[3, 1, 4, 2], &[true, false, true, false], true, true);
        let view = DeletionView::new(&k, k.tip());
        let p1 = BasisPair::new(
            set(&[k.x(1), k.y(1), k.x(2), k.x(3)]),
            set(&[k.y(2), k.y(3), k.x(4), k.y(4)]),
        );
        p1.validate(&view).unwrap();
        let seq = ExchangeSequence::new(vec![
            Exchange::new(k.x(1), k.y(2)),
            Exchange::new(k.y(1), k.x(4)),
        ]);
        let back = rel.inverse().apply_sequence(&rel.apply_sequence(&seq));
        assert_eq!(back, seq);
        let (q1, _q2) = rel.apply_pairs(&p1, &p1);
        let (r1, _r2) = rel.inverse().apply_pairs(&q1, &q1);
        assert_eq!(r1, p1);
    }

    #[test]
    fn tip_case_monotone_example() {
        let k = free_spike(3).unwrap();
        let unit = WeightFn::unit(7);
        let p1 = BasisPair::new(
            set(&[k.x(1), k.y(1), k.x(2)]),
            set(&[k.y(2), k.x(3), k.y(3)]),
        );
        let p2 = BasisPair::new(
            set(&[k.x(2), k.y(2), k.y(3)]),
            set(&[k.x(1), k.y(1), k.x(3)]),
        );
        let seq = solve_missing_tip(&k, &p1, &p2, &unit).unwrap();
        assert_eq!(
            seq.steps,
            vec![Exchange::new(k.x(1), k.y(2)), Exchange::new(k.y(1), k.y(3)),]
        );
        let view = DeletionView::new(&k, k.tip());
        let rep = verify_sequence(&view, &p1, &p2, &seq, &unit).unwrap();
        assert!(rep.valid && rep.monotone);
        assert_eq!(rep.length, 2);
    }

    #[test]
    fn tip_identity() {
        let k = free_spike(3).unwrap();
        let unit = WeightFn::unit(7);
        let p1 = BasisPair::new(
            set(&[k.x(1), k.y(1), k.x(2)]),
            set(&[k.y(2), k.x(3), k.y(3)]),
        );
        assert!(solve_missing_tip(&k, &p1, &p1, &unit).unwrap().is_empty());
    }

    #[test]
    fn tip_all_aligned_middles_reuses_cheaper_leg2_element() {
        let k = free_spike(4).unwrap();
        let view = DeletionView::new(&k, k.tip());
        // Doubled leg 1 and empty leg 4 trade places; legs 2 and 3 agree.
        let p1 = BasisPair::new(
            set(&[k.x(1), k.y(1), k.x(2), k.x(3)]),
            set(&[k.y(2), k.y(3), k.x(4), k.y(4)]),
        );
        let p2 = BasisPair::new(
            set(&[k.x(2), k.x(3), k.x(4), k.y(4)]),
            set(&[k.x(1), k.y(1), k.y(2), k.y(3)]),
        );
        let mut w = WeightFn::unit(9);
        w.set(k.y(2), Weight::new(1.into(), 2.into())).unwrap();
        let seq = solve_missing_tip(&k, &p1, &p2, &w).unwrap();
        assert_eq!(seq.len(), 3);
        let usage = seq.usage_counts(9);
        assert_eq!(usage[k.y(2).id()], 2);
        assert_eq!(usage[k.x(2).id()], 0);

        // With the mirrored weights the other leg-2 element is reused.
        let mut w = WeightFn::unit(9);
        w.set(k.x(2), Weight::new(1.into(), 2.into())).unwrap();
        let seq = solve_missing_tip(&k, &p1, &p2, &w).unwrap();
        let usage = seq.usage_counts(9);
        assert_eq!(usage[k.x(2).id()], 2);
        assert_eq!(usage[k.y(2).id()], 0);
        let rep = verify_sequence(&view, &p1, &p2, &seq, &w).unwrap();
        assert!(rep.valid);
    }

    #[test]
    fn leg_identity_and_single_exchange() {
        let k = free_spike(3).unwrap();
        let unit = WeightFn::unit(7);
        let p1 = BasisPair::new(
            set(&[k.y(1), k.x(2), k.x(3)]),
            set(&[k.tip(), k.y(2), k.y(3)]),
        );
        assert!(solve_missing_leg_element(&k, &p1, &p1, &unit)
            .unwrap()
            .is_empty());

        // All legs aligned, tip and partner traded: one exchange.
        let p2 = BasisPair::new(
            set(&[k.tip(), k.x(2), k.x(3)]),
            set(&[k.y(1), k.y(2), k.y(3)]),
        );
        let seq = solve_missing_leg_element(&k, &p1, &p2, &unit).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.steps[0], Exchange::new(k.y(1), k.tip()));
    }

    #[test]
    fn leg_case_on_binary_spike_without_monotone_route() {
        let k = binary_spike(3).unwrap();
        let view = DeletionView::new(&k, k.x(1));
        let unit = WeightFn::unit(7);
        let p1 = BasisPair::new(
            set(&[k.y(1), k.x(2), k.x(3)]),
            set(&[k.tip(), k.y(2), k.y(3)]),
        );
        let p2 = BasisPair::new(
            set(&[k.y(1), k.y(2), k.y(3)]),
            set(&[k.tip(), k.x(2), k.x(3)]),
        );
        assert!(!exists_monotone_sequence(&view, &p1, &p2, &Limits::default()).unwrap());
        let seq = solve_missing_leg_element(&k, &p1, &p2, &unit).unwrap();
        let rep = verify_sequence(&view, &p1, &p2, &seq, &unit).unwrap();
        assert!(rep.valid);
        assert!(rep.length <= 3);
        assert_eq!(rep.max_usage, 2);
    }
}
