//! Exact ground truth at desk scale: basis and pair enumeration, BFS and
//! Dijkstra over the implicit pair graph, monotone-sequence search, bound
//! sweeps, and the extremal witness searches.
//!
//! Pair-graph nodes are identified by the red class alone (the blue class
//! is the complement within the fixed union), so a node is a single bitmask
//! and neighbors are generated lazily by scanning feasible exchanges.

use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element};
use crate::instances::WheelInstance;
use crate::matroid::MatroidOracle;
use crate::pairs::{is_feasible_exchange, BasisPair, Exchange};
use crate::weight::{Weight, WeightFn};
use crate::wheel::{decompose, Orientation};

/// Hard guards converting accidentally large inputs into errors.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_ground: usize,
    pub max_rank: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ground: 16,
            max_rank: 8,
        }
    }
}

impl Limits {
    pub fn check<M: MatroidOracle + ?Sized>(&self, m: &M) -> Result<()> {
        let ground = m.ground().len();
        if ground > self.max_ground {
            return Err(Error::TooLarge {
                size: ground,
                limit: self.max_ground,
            });
        }
        if m.rank() > self.max_rank {
            return Err(Error::TooLarge {
                size: m.rank(),
                limit: self.max_rank,
            });
        }
        Ok(())
    }
}

/// A search result that distinguishes "no route exists" from errors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reach<T> {
    Reached(T),
    Unreachable,
}

impl<T> Reach<T> {
    pub fn reached(self) -> Option<T> {
        match self {
            Reach::Reached(t) => Some(t),
            Reach::Unreachable => None,
        }
    }
}

/// All bases, by exhaustive subset enumeration.
pub fn enumerate_bases<M: MatroidOracle + ?Sized>(m: &M, limits: &Limits) -> Result<Vec<ElemSet>> {
    limits.check(m)?;
    let ground: Vec<Element> = m.ground().iter().collect();
    let r = m.rank();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << ground.len()) {
        if bits.count_ones() as usize != r {
            continue;
        }
        let set: ElemSet = ground
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if m.is_independent(set) {
            out.push(set);
        }
    }
    Ok(out)
}

/// All ordered pairs `(R, union \ R)` with both classes bases.
pub fn enumerate_compatible_pairs<M: MatroidOracle + ?Sized>(
    m: &M,
    union: ElemSet,
    limits: &Limits,
) -> Result<Vec<BasisPair>> {
    limits.check(m)?;
    if !union.is_subset_of(m.ground()) {
        return Err(Error::Domain("union leaves the ground set".into()));
    }
    let out = enumerate_bases(m, limits)?
        .into_iter()
        .filter(|r| r.is_subset_of(union))
        .map(|r| BasisPair::new(r, union - r))
        .filter(|p| m.is_basis(p.b))
        .collect();
    Ok(out)
}

/// Feasible exchanges out of a pair, in ascending `(red, blue)` order.
pub fn feasible_exchanges<M: MatroidOracle + ?Sized>(m: &M, p: &BasisPair) -> Vec<Exchange> {
    let mut out = Vec::new();
    for e in p.r {
        for f in p.b {
            let x = Exchange::new(e, f);
            if is_feasible_exchange(m, p, x) {
                out.push(x);
            }
        }
    }
    out
}

/// BFS distances from `start` to every reachable pair with the same union.
pub fn bfs_distances<M: MatroidOracle + ?Sized>(
    m: &M,
    start: &BasisPair,
) -> HashMap<ElemSet, usize> {
    let union = start.union();
    let mut dist: HashMap<ElemSet, usize> = HashMap::new();
    dist.insert(start.r, 0);
    let mut queue = VecDeque::new();
    queue.push_back(start.r);
    while let Some(r) = queue.pop_front() {
        let d = dist[&r];
        let p = BasisPair::new(r, union - r);
        for x in feasible_exchanges(m, &p) {
            let nr = r.without(x.red).with(x.blue);
            dist.entry(nr).or_insert_with(|| {
                queue.push_back(nr);
                d + 1
            });
        }
    }
    dist
}

/// Minimum number of symmetric exchanges transforming `p1` into `p2`.
pub fn exchange_distance<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    limits: &Limits,
) -> Result<Reach<usize>> {
    limits.check(m)?;
    p1.validate(m)?;
    p2.validate(m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    Ok(match bfs_distances(m, p1).get(&p2.r) {
        Some(&d) => Reach::Reached(d),
        None => Reach::Unreachable,
    })
}

/// Dijkstra weights from `start`, with arc weight `w(e) + w(f)` per exchange.
pub fn dijkstra_distances<M: MatroidOracle + ?Sized>(
    m: &M,
    start: &BasisPair,
    w: &WeightFn,
) -> HashMap<ElemSet, Weight> {
    let union = start.union();
    let mut dist: HashMap<ElemSet, Weight> = HashMap::new();
    dist.insert(start.r, Weight::zero());
    let mut heap: BinaryHeap<(std::cmp::Reverse<Weight>, u32)> = BinaryHeap::new();
    heap.push((std::cmp::Reverse(Weight::zero()), start.r.bits()));
    while let Some((std::cmp::Reverse(d), bits)) = heap.pop() {
        let r = ElemSet::from_bits(bits);
        if dist.get(&r).is_none_or(|best| *best < d) {
            continue;
        }
        let p = BasisPair::new(r, union - r);
        for x in feasible_exchanges(m, &p) {
            let nd = d + w.get(x.red) + w.get(x.blue);
            let nr = r.without(x.red).with(x.blue);
            if dist.get(&nr).is_none_or(|best| nd < *best) {
                dist.insert(nr, nd);
                heap.push((std::cmp::Reverse(nd), nr.bits()));
            }
        }
    }
    dist
}

/// Minimum total weight of a transforming sequence.
pub fn weighted_exchange_distance<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    w: &WeightFn,
    limits: &Limits,
) -> Result<Reach<Weight>> {
    limits.check(m)?;
    p1.validate(m)?;
    p2.validate(m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    Ok(match dijkstra_distances(m, p1, w).get(&p2.r) {
        Some(&d) => Reach::Reached(d),
        None => Reach::Unreachable,
    })
}

/// Does a strictly monotone sequence from `p1` to `p2` exist? The search
/// only draws exchanges from `(R1 ∩ B2) × (B1 ∩ R2)`, never reusing an
/// element, with memoization on failed states.
pub fn exists_monotone_sequence<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    limits: &Limits,
) -> Result<bool> {
    limits.check(m)?;
    p1.validate(m)?;
    p2.validate(m)?;
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    let mut failed: HashSet<ElemSet> = HashSet::new();
    fn dfs<M: MatroidOracle + ?Sized>(
        m: &M,
        cur: ElemSet,
        union: ElemSet,
        target: &BasisPair,
        failed: &mut HashSet<ElemSet>,
    ) -> bool {
        if cur == target.r {
            return true;
        }
        if failed.contains(&cur) {
            return false;
        }
        let p = BasisPair::new(cur, union - cur);
        for e in cur & target.b {
            for f in (union - cur) & target.r {
                let x = Exchange::new(e, f);
                if is_feasible_exchange(m, &p, x)
                    && dfs(m, cur.without(e).with(f), union, target, failed)
                {
                    return true;
                }
            }
        }
        failed.insert(cur);
        false
    }
    Ok(dfs(m, p1.r, p1.union(), p2, &mut failed))
}

/// A single checked pair in a sweep report.
#[derive(Clone, Debug)]
pub struct SweepWitness {
    pub p1: BasisPair,
    pub p2: BasisPair,
    pub detail: String,
}

/// Outcome of a bound sweep over all compatible pairs of an instance.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub pairs_checked: usize,
    pub samples: usize,
    pub violations: Vec<SweepWitness>,
    /// Largest unweighted distance seen, with a witness.
    pub max_distance: usize,
    pub max_distance_witness: Option<(BasisPair, BasisPair)>,
    /// Largest `weighted distance / w(union)` over pairs and samples with
    /// `w(union) > 0`.
    pub max_weight_ratio: Option<Weight>,
}

/// For every compatible pair over every `2r`-element union, and every
/// sampled weight function, check that the unweighted distance is at most
/// the rank and the weighted distance at most `w(union)`.
pub fn conjecture_sweep<M: MatroidOracle + Sync + ?Sized>(
    m: &M,
    weight_samples: &[WeightFn],
    limits: &Limits,
) -> Result<SweepReport> {
    sweep_impl(m, weight_samples, limits, false)
}

/// Sequential variant of [`conjecture_sweep`]; reports are identical.
pub fn conjecture_sweep_serial<M: MatroidOracle + Sync + ?Sized>(
    m: &M,
    weight_samples: &[WeightFn],
    limits: &Limits,
) -> Result<SweepReport> {
    sweep_impl(m, weight_samples, limits, true)
}

fn sweep_impl<M: MatroidOracle + Sync + ?Sized>(
    m: &M,
    weight_samples: &[WeightFn],
    limits: &Limits,
    force_serial: bool,
) -> Result<SweepReport> {
    limits.check(m)?;
    let r = m.rank();
    let ground: Vec<Element> = m.ground().iter().collect();
    let extra = ground
        .len()
        .checked_sub(2 * r)
        .ok_or_else(|| Error::Domain("ground set smaller than twice the rank".into()))?;

    // Unions are the 2r-element subsets of the ground set.
    let mut unions = Vec::new();
    for bits in 0u32..(1u32 << ground.len()) {
        if bits.count_ones() as usize == ground.len() - extra {
            let u: ElemSet = ground
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            unions.push(u);
        }
    }

    let mut tasks: Vec<(BasisPair, Vec<BasisPair>)> = Vec::new();
    for u in unions {
        let pairs = enumerate_compatible_pairs(m, u, limits)?;
        for p1 in &pairs {
            tasks.push((*p1, pairs.clone()));
        }
    }

    let work = |(p1, targets): (BasisPair, Vec<BasisPair>)| -> PartialSweep {
        let mut part = PartialSweep::default();
        let unweighted = bfs_distances(m, &p1);
        for p2 in &targets {
            part.pairs += 1;
            match unweighted.get(&p2.r) {
                Some(&d) => {
                    if d > part.max_distance {
                        part.max_distance = d;
                        part.max_distance_witness = Some((p1, *p2));
                    }
                    if d > r {
                        part.violations.push(SweepWitness {
                            p1,
                            p2: *p2,
                            detail: format!("unweighted distance {d} exceeds rank {r}"),
                        });
                    }
                }
                None => part.violations.push(SweepWitness {
                    p1,
                    p2: *p2,
                    detail: "pair unreachable".into(),
                }),
            }
        }
        for w in weight_samples {
            let weighted = dijkstra_distances(m, &p1, w);
            for p2 in &targets {
                let bound = w.total(p1.union());
                match weighted.get(&p2.r) {
                    Some(&d) => {
                        if d > bound {
                            part.violations.push(SweepWitness {
                                p1,
                                p2: *p2,
                                detail: format!("weighted distance {d} exceeds w(union) = {bound}"),
                            });
                        }
                        if bound > Weight::zero() {
                            let ratio = d / bound;
                            if part.max_ratio.is_none_or(|m| ratio > m) {
                                part.max_ratio = Some(ratio);
                            }
                        }
                    }
                    None => part.violations.push(SweepWitness {
                        p1,
                        p2: *p2,
                        detail: "pair unreachable under weights".into(),
                    }),
                }
            }
        }
        part
    };

    let parts = if force_serial {
        crate::par::ordered_map_serial(tasks, work)
    } else {
        crate::par::ordered_map(tasks, work)
    };

    let mut report = SweepReport {
        pairs_checked: 0,
        samples: weight_samples.len(),
        violations: Vec::new(),
        max_distance: 0,
        max_distance_witness: None,
        max_weight_ratio: None,
    };
    for part in parts {
        report.pairs_checked += part.pairs;
        report.violations.extend(part.violations);
        if part.max_distance > report.max_distance {
            report.max_distance = part.max_distance;
            report.max_distance_witness = part.max_distance_witness;
        }
        if let Some(r) = part.max_ratio {
            if report.max_weight_ratio.is_none_or(|m| r > m) {
                report.max_weight_ratio = Some(r);
            }
        }
    }
    Ok(report)
}

#[derive(Default)]
struct PartialSweep {
    pairs: usize,
    violations: Vec<SweepWitness>,
    max_distance: usize,
    max_distance_witness: Option<(BasisPair, BasisPair)>,
    max_ratio: Option<Weight>,
}

/// A pair of opposite-orientation wheel colorings whose exchange distance
/// exceeds the trivial bound.
#[derive(Clone, Debug)]
pub struct GapWitness {
    pub p1: BasisPair,
    pub p2: BasisPair,
    pub lower_bound: usize,
    pub distance: usize,
}

/// Search a wheel for an opposite-orientation pair with trivial lower bound
/// exactly two and BFS distance at least `ceil((n-1)/4)`.
///
/// Reversing an orientation forces the sequence through a two-interval
/// coloring, so colorings with many intervals are far apart even when their
/// symmetric difference is small. Sources are scanned many-intervals-first.
pub fn gap_search(w: &WheelInstance) -> Result<GapWitness> {
    if w.n() > 13 {
        return Err(Error::TooLarge {
            size: w.n(),
            limit: 13,
        });
    }
    let m = w.num_spokes();
    let threshold = m.div_ceil(4);
    let colorings = w.colorings();
    let mut sources: Vec<(usize, BasisPair, Orientation)> = colorings
        .iter()
        .map(|p| {
            let d = decompose(w, p).expect("enumerated colorings are valid");
            (d.num_intervals(), *p, d.orientation)
        })
        .collect();
    sources.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.r.cmp(&b.1.r)));

    for (_, p1, o1) in &sources {
        // Candidate targets: opposite orientation, symmetric difference 4.
        let targets: Vec<&(usize, BasisPair, Orientation)> = sources
            .iter()
            .filter(|(_, p2, o2)| o2 != o1 && (p1.r ^ p2.r).len() == 4)
            .collect();
        if targets.is_empty() {
            continue;
        }
        let dist = bfs_distances(w, p1);
        let mut hits: Vec<GapWitness> = targets
            .iter()
            .filter_map(|(_, p2, _)| {
                dist.get(&p2.r).and_then(|&d| {
                    (d >= threshold).then_some(GapWitness {
                        p1: *p1,
                        p2: *p2,
                        lower_bound: 2,
                        distance: d,
                    })
                })
            })
            .collect();
        hits.sort_by_key(|h| h.p2.r);
        if let Some(hit) = hits.into_iter().next() {
            return Ok(hit);
        }
    }
    Err(Error::NotFound)
}

/// A compatible pair plus two elements such that every transforming
/// sequence uses at least one of the two elements twice.
#[derive(Clone, Debug)]
pub struct TwoWeightWitness {
    pub p1: BasisPair,
    pub p2: BasisPair,
    pub elements: (Element, Element),
}

/// Search for a pair of colorings and elements `{b, e}` that defeat any
/// two-weight bound: no transforming sequence uses both at most once.
///
/// Soundness of the exhaustive check: a sequence using `b` and `e` at most
/// once each projects to a path in the finite graph of states
/// `(R, used_b, used_e)`; if no such path reaches the target, no such
/// sequence of any length exists.
pub fn two_weight_counterexample<M: MatroidOracle + ?Sized>(
    m: &M,
    limits: &Limits,
) -> Result<TwoWeightWitness> {
    limits.check(m)?;
    let ground: Vec<Element> = m.ground().iter().collect();
    let r = m.rank();
    if ground.len() < 2 * r {
        return Err(Error::NotFound);
    }

    let mut unions = Vec::new();
    for bits in 0u32..(1u32 << ground.len()) {
        if bits.count_ones() as usize == 2 * r {
            unions.push(
                ground
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect::<ElemSet>(),
            );
        }
    }

    for union in unions {
        let pairs = enumerate_compatible_pairs(m, union, limits)?;
        for p1 in &pairs {
            let reachable = bfs_distances(m, p1);
            for p2 in &pairs {
                if p1 == p2 || !reachable.contains_key(&p2.r) {
                    continue;
                }
                for (i, &b) in ground.iter().enumerate() {
                    for &e in ground.iter().skip(i + 1) {
                        if !union.contains(b) || !union.contains(e) {
                            continue;
                        }
                        if !capped_usage_reachable(m, p1, p2, b, e) {
                            return Ok(TwoWeightWitness {
                                p1: *p1,
                                p2: *p2,
                                elements: (b, e),
                            });
                        }
                    }
                }
            }
        }
    }
    Err(Error::NotFound)
}

/// Is the target reachable using each of `b`, `e` at most once?
pub fn capped_usage_reachable<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    b: Element,
    e: Element,
) -> bool {
    let union = p1.union();
    // State: red class plus how often b and e were used (0 or 1 each).
    let mut seen: HashSet<(ElemSet, u8)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((p1.r, 0));
    queue.push_back((p1.r, 0u8));
    while let Some((r, used)) = queue.pop_front() {
        if r == p2.r {
            return true;
        }
        let p = BasisPair::new(r, union - r);
        for x in feasible_exchanges(m, &p) {
            let mut next = used;
            if x.red == b || x.blue == b {
                if used & 1 != 0 {
                    continue;
                }
                next |= 1;
            }
            if x.red == e || x.blue == e {
                if used & 2 != 0 {
                    continue;
                }
                next |= 2;
            }
            let nr = r.without(x.red).with(x.blue);
            if seen.insert((nr, next)) {
                queue.push_back((nr, next));
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{binary_spike, k4_graph, wheel, UniformInstance};
    use crate::matroid::DeletionView;
    use crate::pairs::lower_bounds;

    #[test]
    fn enumerate_counts() {
        let limits = Limits::default();
        let k4 = k4_graph();
        assert_eq!(enumerate_bases(&k4, &limits).unwrap().len(), 16);
        let u24 = UniformInstance::new(4, 2).unwrap();
        assert_eq!(enumerate_bases(&u24, &limits).unwrap().len(), 6);
        let w4 = wheel(4).unwrap();
        let pairs = enumerate_compatible_pairs(&w4, w4.ground(), &limits).unwrap();
        assert!(!pairs.is_empty());
        // Wheel colorings enumerate the same pairs.
        let mut from_masks: Vec<ElemSet> = w4.colorings().iter().map(|p| p.r).collect();
        let mut from_oracle: Vec<ElemSet> = pairs.iter().map(|p| p.r).collect();
        from_masks.sort();
        from_oracle.sort();
        assert_eq!(from_masks, from_oracle);
    }

    #[test]
    fn distances_on_wheel5() {
        let limits = Limits::default();
        let w = wheel(5).unwrap();
        let a = BasisPair::new(
            [w.spoke(1), w.spoke(2), w.rim(2), w.rim(3)]
                .into_iter()
                .collect(),
            [w.spoke(3), w.spoke(4), w.rim(4), w.rim(1)]
                .into_iter()
                .collect(),
        );
        let b = BasisPair::new(
            [w.spoke(1), w.spoke(2), w.rim(4), w.rim(3)]
                .into_iter()
                .collect(),
            [w.spoke(3), w.spoke(4), w.rim(2), w.rim(1)]
                .into_iter()
                .collect(),
        );
        assert_eq!(
            exchange_distance(&w, &a, &a, &limits).unwrap(),
            Reach::Reached(0)
        );
        assert_eq!(
            exchange_distance(&w, &a, &b, &limits).unwrap(),
            Reach::Reached(1)
        );
        // Unit-weight Dijkstra doubles the BFS distance.
        let unit = WeightFn::unit(8);
        let wd = weighted_exchange_distance(&w, &a, &b, &unit, &limits).unwrap();
        assert_eq!(wd, Reach::Reached(Weight::from_integer(2)));
    }

    #[test]
    fn monotone_existence() {
        let limits = Limits::default();
        let w = wheel(5).unwrap();
        let a = w.coloring(0b0011, Orientation::Positive).unwrap();
        let c = w.coloring(0b0110, Orientation::Positive).unwrap();
        assert!(exists_monotone_sequence(&w, &a, &c, &limits).unwrap());
        assert!(exists_monotone_sequence(&w, &a, &a, &limits).unwrap());

        let spike = binary_spike(4).unwrap();
        let view = DeletionView::new(&spike, spike.x(1));
        let pairs = crate::instances::binary_spike_pairs(4).unwrap();
        assert_eq!(pairs.len(), 4);
        for p in &pairs {
            for q in &pairs {
                if p != q {
                    assert!(!exists_monotone_sequence(&view, p, q, &limits).unwrap());
                }
            }
        }
    }

    #[test]
    fn sweep_wheel4_clean() {
        let limits = Limits::default();
        let w = wheel(4).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let samples: Vec<WeightFn> = (0..3)
            .map(|_| WeightFn::sample(&mut rng, 6, 10, 10))
            .collect();
        let report = conjecture_sweep(&w, &samples, &limits).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.pairs_checked > 0);
        let serial = conjecture_sweep_serial(&w, &samples, &limits).unwrap();
        assert_eq!(serial.pairs_checked, report.pairs_checked);
        assert_eq!(serial.max_distance, report.max_distance);
    }

    #[test]
    fn gap_search_wheel9() {
        let w = wheel(9).unwrap();
        let witness = gap_search(&w).unwrap();
        assert_eq!(witness.lower_bound, 2);
        assert!(witness.distance >= 2);
        let unit = WeightFn::unit(16);
        assert_eq!(lower_bounds(&witness.p1, &witness.p2, &unit).unwrap().0, 2);
    }

    #[test]
    fn guards_reject_large_instances() {
        let limits = Limits::default();
        let w10 = wheel(10).unwrap();
        assert!(matches!(
            enumerate_bases(&w10, &limits),
            Err(Error::TooLarge { .. })
        ));
        // The limit is overridable.
        let loose = Limits {
            max_ground: 20,
            max_rank: 9,
        };
        assert!(enumerate_bases(&w10, &loose).is_ok());
    }

    #[test]
    fn two_weight_on_k4_and_uniform() {
        let limits = Limits::default();
        let k4 = k4_graph();
        let witness = two_weight_counterexample(&k4, &limits).unwrap();
        let (b, e) = witness.elements;
        assert!(!capped_usage_reachable(&k4, &witness.p1, &witness.p2, b, e));

        let u24 = UniformInstance::new(4, 2).unwrap();
        assert!(matches!(
            two_weight_counterexample(&u24, &limits),
            Err(Error::NotFound)
        ));
    }
}
