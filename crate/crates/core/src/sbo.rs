//! Exchange sequences for strongly base orderable matroids.
//!
//! Given exchange bijections `phi1: R1 -> B1` and `phi2: R2 -> B2`, the
//! union of the two matchings 2-colors into classes `S` and `T`, both bases.
//! Routing through `S` or through `T` gives two candidate sequences whose
//! weights sum to `w(R1) + w(B1) + w(R2) + w(B2)`, so the cheaper one costs
//! at most `w(R1 ∪ B1)`.
//!
//! Bijections are inputs rather than derived from the oracle: exchange
//! certificates are not computable from independence queries in general.
//! Partition matroids get a built-in constructor. Every step is still
//! oracle-checked at replay.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element};
use crate::matroid::MatroidOracle;
use crate::pairs::{BasisPair, Exchange, ExchangeSequence, Replayer};
use crate::weight::{Weight, WeightFn};

/// Exchange bijections for the two pairs, stored as id-indexed maps.
#[derive(Clone, Debug)]
pub struct SboBijections {
    phi1: Vec<Option<Element>>,
    phi2: Vec<Option<Element>>,
}

impl SboBijections {
    pub fn new(n: usize, phi1: &[(Element, Element)], phi2: &[(Element, Element)]) -> Self {
        let build = |pairs: &[(Element, Element)]| {
            let mut map = vec![None; n];
            for &(from, to) in pairs {
                map[from.id()] = Some(to);
            }
            map
        };
        SboBijections {
            phi1: build(phi1),
            phi2: build(phi2),
        }
    }

    pub fn phi1(&self, e: Element) -> Option<Element> {
        self.phi1.get(e.id()).copied().flatten()
    }

    pub fn phi2(&self, e: Element) -> Option<Element> {
        self.phi2.get(e.id()).copied().flatten()
    }

    /// Check that `phi1` maps `R1` bijectively onto `B1` and `phi2` maps
    /// `R2` onto `B2`.
    pub fn validate(&self, p1: &BasisPair, p2: &BasisPair) -> Result<()> {
        for (name, map, pair) in [("phi1", &self.phi1, p1), ("phi2", &self.phi2, p2)] {
            let mut image = ElemSet::EMPTY;
            for e in pair.r {
                let Some(f) = map.get(e.id()).copied().flatten() else {
                    return Err(Error::Domain(format!("{name} undefined on {e:?}")));
                };
                if !pair.b.contains(f) {
                    return Err(Error::Domain(format!(
                        "{name}({e:?}) = {f:?} is not in the blue class"
                    )));
                }
                image = image.with(f);
            }
            if image != pair.b {
                return Err(Error::Domain(format!("{name} is not a bijection")));
            }
        }
        Ok(())
    }
}

/// The two color classes of the matching-union graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SboBipartition {
    pub s: ElemSet,
    pub t: ElemSet,
}

/// 2-color the union of the two matchings. Each connected component puts
/// its smallest element into `S`. Fails only when the supplied maps are not
/// matchings (an odd closed walk appears).
pub fn sbo_bipartition(
    p1: &BasisPair,
    p2: &BasisPair,
    bij: &SboBijections,
) -> Result<SboBipartition> {
    if !p1.compatible_with(p2) {
        return Err(Error::IncompatiblePairs);
    }
    bij.validate(p1, p2)?;
    let union = p1.union();
    let neighbors = |v: Element| -> Vec<Element> {
        let mut out = Vec::new();
        for (map_r, map_pair) in [(&bij.phi1, p1), (&bij.phi2, p2)] {
            if map_pair.r.contains(v) {
                if let Some(u) = map_r.get(v.id()).copied().flatten() {
                    out.push(u);
                }
            } else {
                for e in map_pair.r {
                    if map_r.get(e.id()).copied().flatten() == Some(v) {
                        out.push(e);
                    }
                }
            }
        }
        out
    };

    let mut side = [None::<bool>; crate::ground::MAX_GROUND];
    let mut s = ElemSet::EMPTY;
    let mut t = ElemSet::EMPTY;
    for root in union {
        if side[root.id()].is_some() {
            continue;
        }
        side[root.id()] = Some(true);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let v_side = side[v.id()].unwrap();
            for u in neighbors(v) {
                match side[u.id()] {
                    None => {
                        side[u.id()] = Some(!v_side);
                        queue.push_back(u);
                    }
                    Some(u_side) if u_side == v_side => return Err(Error::NotBipartite),
                    Some(_) => {}
                }
            }
        }
    }
    for v in union {
        if side[v.id()].unwrap() {
            s = s.with(v);
        } else {
            t = t.with(v);
        }
    }
    Ok(SboBipartition { s, t })
}

/// One candidate route: transform `p1` into `(mid, union - mid)` along
/// `phi1`, then into `p2` along `phi2`. Phase one moves the red elements
/// leaving `mid` in ascending order; phase two admits the red elements of
/// the target in ascending order.
fn route_via<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    bij: &SboBijections,
    mid: ElemSet,
) -> Result<ExchangeSequence> {
    let mut rep = Replayer::new(m, *p1);
    for e in p1.r - mid {
        let f = bij.phi1(e).ok_or(Error::Domain("phi1 gap".into()))?;
        rep.push(Exchange::new(e, f))?;
    }
    if rep.cur.r != mid {
        return Err(Error::InternalBound(
            "route did not reach the middle basis".into(),
        ));
    }
    for f in p2.r - mid {
        let e = bij.phi2(f).ok_or(Error::Domain("phi2 gap".into()))?;
        rep.push(Exchange::new(e, f))?;
    }
    if rep.cur != *p2 {
        return Err(Error::InternalBound("route missed the target".into()));
    }
    Ok(rep.into_sequence())
}

/// Both candidate sequences with their weights, in `(via S, via T)` order.
pub fn candidate_routes<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    bij: &SboBijections,
    w: &WeightFn,
) -> Result<[(ExchangeSequence, Weight); 2]> {
    p1.validate(m)?;
    p2.validate(m)?;
    let classes = sbo_bipartition(p1, p2, bij)?;
    let via_s = route_via(m, p1, p2, bij, classes.s)?;
    let via_t = route_via(m, p1, p2, bij, classes.t)?;
    let weight = |mid: ElemSet| w.total(p1.r ^ mid) + w.total(p2.r ^ mid);
    Ok([(via_s, weight(classes.s)), (via_t, weight(classes.t))])
}

/// The cheaper of the two candidate routes (the `S` route on ties):
/// weight at most `w(R1 ∪ B1)`, each element used at most twice.
pub fn solve_sbo<M: MatroidOracle + ?Sized>(
    m: &M,
    p1: &BasisPair,
    p2: &BasisPair,
    bij: &SboBijections,
    w: &WeightFn,
) -> Result<ExchangeSequence> {
    let [(via_s, ws), (via_t, wt)] = candidate_routes(m, p1, p2, bij, w)?;
    let (seq, weight) = if ws <= wt { (via_s, ws) } else { (via_t, wt) };
    debug_assert_eq!(seq.weight(w), weight);
    if weight > w.total(p1.union()) || seq.max_usage(w.len()) > 2 {
        return Err(Error::InternalBound(
            "cheaper route breaks its bound".into(),
        ));
    }
    Ok(seq)
}

/// Exchange bijections for a partition matroid: within each part, red
/// elements are matched to blue elements in ascending index order. The
/// per-part counts make any subset exchange feasible.
pub fn partition_bijection(
    parts: &crate::instances::PartitionInstance,
    p1: &BasisPair,
    p2: &BasisPair,
) -> Result<SboBijections> {
    let n = parts.ground().len();
    let mut phi1 = Vec::new();
    let mut phi2 = Vec::new();
    for (pair, out) in [(p1, &mut phi1), (p2, &mut phi2)] {
        for part in parts.parts() {
            let reds: Vec<Element> = (pair.r & *part).iter().collect();
            let blues: Vec<Element> = (pair.b & *part).iter().collect();
            if reds.len() != blues.len() {
                return Err(Error::Domain(format!(
                    "part {part:?} has {} red but {} blue elements",
                    reds.len(),
                    blues.len()
                )));
            }
            out.extend(reds.into_iter().zip(blues));
        }
    }
    Ok(SboBijections::new(n, &phi1, &phi2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{PartitionInstance, UniformInstance};

    fn e(i: usize) -> Element {
        Element::new(i)
    }

    fn parts_2x2() -> PartitionInstance {
        PartitionInstance::new(
            vec![
                [e(0), e(1)].into_iter().collect(),
                [e(2), e(3)].into_iter().collect(),
            ],
            vec![1, 1],
        )
        .unwrap()
    }

    #[test]
    fn bipartition_example() {
        let p1 = BasisPair::new(
            [e(0), e(2)].into_iter().collect(),
            [e(1), e(3)].into_iter().collect(),
        );
        let p2 = BasisPair::new(
            [e(1), e(3)].into_iter().collect(),
            [e(0), e(2)].into_iter().collect(),
        );
        let bij = SboBijections::new(
            4,
            &[(e(0), e(1)), (e(2), e(3))],
            &[(e(1), e(0)), (e(3), e(2))],
        );
        let classes = sbo_bipartition(&p1, &p2, &bij).unwrap();
        assert_eq!(classes.s, [e(0), e(2)].into_iter().collect());
        assert_eq!(classes.t, [e(1), e(3)].into_iter().collect());
    }

    #[test]
    fn identity_pair_gives_empty_route() {
        let m = parts_2x2();
        let p1 = BasisPair::new(
            [e(0), e(2)].into_iter().collect(),
            [e(1), e(3)].into_iter().collect(),
        );
        let bij = partition_bijection(&m, &p1, &p1).unwrap();
        let seq = solve_sbo(&m, &p1, &p1, &bij, &WeightFn::unit(4)).unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn full_swap_uses_each_element_at_most_twice() {
        let m = parts_2x2();
        let unit = WeightFn::unit(4);
        let p1 = BasisPair::new(
            [e(0), e(2)].into_iter().collect(),
            [e(1), e(3)].into_iter().collect(),
        );
        let p2 = p1.swapped();
        let bij = partition_bijection(&m, &p1, &p2).unwrap();
        let [(s_route, ws), (t_route, wt)] = candidate_routes(&m, &p1, &p2, &bij, &unit).unwrap();
        assert_eq!(ws + wt, Weight::from_integer(8));
        assert_eq!(s_route.len() + t_route.len(), 4);
        let seq = solve_sbo(&m, &p1, &p2, &bij, &unit).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(seq.max_usage(4) <= 2);
    }

    #[test]
    fn uniform_crossing_bijections() {
        let m = UniformInstance::new(4, 2).unwrap();
        let p1 = BasisPair::new(
            [e(0), e(1)].into_iter().collect(),
            [e(2), e(3)].into_iter().collect(),
        );
        let p2 = BasisPair::new(
            [e(2), e(3)].into_iter().collect(),
            [e(0), e(1)].into_iter().collect(),
        );
        let bij = SboBijections::new(
            4,
            &[(e(0), e(3)), (e(1), e(2))],
            &[(e(2), e(1)), (e(3), e(0))],
        );
        let classes = sbo_bipartition(&p1, &p2, &bij).unwrap();
        assert!(m.is_basis(classes.s));
        assert!(m.is_basis(classes.t));
        let seq = solve_sbo(&m, &p1, &p2, &bij, &WeightFn::unit(4)).unwrap();
        let rep = crate::pairs::verify_sequence(&m, &p1, &p2, &seq, &WeightFn::unit(4)).unwrap();
        assert!(rep.valid);
    }

    #[test]
    fn partition_bijection_is_forced_and_has_the_exchange_property() {
        let m = parts_2x2();
        let p1 = BasisPair::new(
            [e(0), e(2)].into_iter().collect(),
            [e(1), e(3)].into_iter().collect(),
        );
        let bij = partition_bijection(&m, &p1, &p1.swapped()).unwrap();
        // One element per class per part: the matching is forced.
        assert_eq!(bij.phi1(e(0)), Some(e(1)));
        assert_eq!(bij.phi1(e(2)), Some(e(3)));
        assert_eq!(bij.phi2(e(1)), Some(e(0)));
        assert_eq!(bij.phi2(e(3)), Some(e(2)));

        // Three parts of two: (R \ X) + phi(X) is a basis for every X.
        let m3 = PartitionInstance::new(
            vec![
                [e(0), e(1)].into_iter().collect(),
                [e(2), e(3)].into_iter().collect(),
                [e(4), e(5)].into_iter().collect(),
            ],
            vec![1, 1, 1],
        )
        .unwrap();
        let q1 = BasisPair::new(
            [e(0), e(3), e(4)].into_iter().collect(),
            [e(1), e(2), e(5)].into_iter().collect(),
        );
        let bij = partition_bijection(&m3, &q1, &q1.swapped()).unwrap();
        let reds: Vec<Element> = q1.r.iter().collect();
        for bits in 0u32..8 {
            let x: ElemSet = reds
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &el)| el)
                .collect();
            let image: ElemSet = x.iter().map(|el| bij.phi1(el).unwrap()).collect();
            assert!(m3.is_basis((q1.r - x) | image));
        }
    }

    #[test]
    fn mismatched_part_occupancy_is_rejected() {
        let m = PartitionInstance::new(
            vec![
                [e(0), e(1), e(2)].into_iter().collect(),
                [e(3)].into_iter().collect(),
            ],
            vec![2, 1],
        )
        .unwrap();
        let p1 = BasisPair::new(
            [e(0), e(1), e(3)].into_iter().collect(),
            [e(2)].into_iter().collect(),
        );
        assert!(matches!(
            partition_bijection(&m, &p1, &p1),
            Err(Error::Domain(_))
        ));
    }
}
