//! Uniform, partition, elementary split, and split direct-sum matroids.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, MAX_GROUND};
use crate::matroid::MatroidOracle;

/// The uniform matroid `U(r, n)`: every set of size at most `r` independent.
#[derive(Clone, Debug)]
pub struct UniformInstance {
    ground_size: usize,
    rank: usize,
}

impl UniformInstance {
    pub fn new(ground_size: usize, rank: usize) -> Result<Self> {
        if ground_size > MAX_GROUND || rank > ground_size {
            return Err(Error::Domain(format!(
                "uniform({rank}, {ground_size}) out of range"
            )));
        }
        Ok(UniformInstance { ground_size, rank })
    }
}

impl MatroidOracle for UniformInstance {
    fn ground(&self) -> ElemSet {
        ElemSet::full(self.ground_size)
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        set.is_subset_of(self.ground()) && set.len() <= self.rank
    }
}

/// A partition matroid: at most `cap_i` elements from part `i`.
/// Parts must partition the ground set.
#[derive(Clone, Debug)]
pub struct PartitionInstance {
    parts: Vec<ElemSet>,
    caps: Vec<usize>,
    ground: ElemSet,
    rank: usize,
}

impl PartitionInstance {
    pub fn new(parts: Vec<ElemSet>, caps: Vec<usize>) -> Result<Self> {
        if parts.len() != caps.len() {
            return Err(Error::Domain("parts/caps length mismatch".into()));
        }
        let mut ground = ElemSet::EMPTY;
        for p in &parts {
            if !(*p & ground).is_empty() {
                return Err(Error::Domain("parts overlap".into()));
            }
            ground = ground | *p;
        }
        let expected = ElemSet::full(ground.len());
        if ground != expected {
            return Err(Error::Domain("parts must cover dense ids 0..n".into()));
        }
        let rank = caps.iter().zip(&parts).map(|(&c, p)| c.min(p.len())).sum();
        Ok(PartitionInstance {
            parts,
            caps,
            ground,
            rank,
        })
    }

    pub fn parts(&self) -> &[ElemSet] {
        &self.parts
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }
}

impl MatroidOracle for PartitionInstance {
    fn ground(&self) -> ElemSet {
        self.ground
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        set.is_subset_of(self.ground)
            && self
                .parts
                .iter()
                .zip(&self.caps)
                .all(|(p, &c)| (set & *p).len() <= c)
    }
}

/// An elementary split matroid of rank `r`: sets of size at most `r`
/// meeting each hyperedge `H_i` in at most `r_i` elements, subject to
/// `|H_i ∩ H_j| <= r_i + r_j - r` and `|S \ H_i| + r_i >= r`.
#[derive(Clone, Debug)]
pub struct ElementarySplitInstance {
    ground: ElemSet,
    rank: usize,
    hyperedges: Vec<ElemSet>,
    bounds: Vec<usize>,
}

impl ElementarySplitInstance {
    pub fn new(
        ground_size: usize,
        rank: usize,
        hyperedges: Vec<ElemSet>,
        bounds: Vec<usize>,
    ) -> Result<Self> {
        if ground_size > MAX_GROUND {
            return Err(Error::Domain("ground set too large".into()));
        }
        Self::on_ground(ElemSet::full(ground_size), rank, hyperedges, bounds)
    }

    /// Variant with an explicit (possibly non-dense) ground set, used for
    /// components embedded in a direct sum.
    pub fn on_ground(
        ground: ElemSet,
        rank: usize,
        hyperedges: Vec<ElemSet>,
        bounds: Vec<usize>,
    ) -> Result<Self> {
        if hyperedges.len() != bounds.len() {
            return Err(Error::Domain("hyperedges/bounds length mismatch".into()));
        }
        let inst = ElementarySplitInstance {
            ground,
            rank,
            hyperedges,
            bounds,
        };
        let violations = inst.validate();
        if !violations.is_empty() {
            return Err(Error::Domain(violations.join("; ")));
        }
        Ok(inst)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.ground.len() < self.rank {
            out.push("ground set smaller than the rank".into());
        }
        for (i, h) in self.hyperedges.iter().enumerate() {
            if !h.is_subset_of(self.ground) {
                out.push(format!("hyperedge {i} leaves the ground set"));
            }
            if (self.ground - *h).len() + self.bounds[i] < self.rank {
                out.push(format!("hyperedge {i} violates |S \\ H| + r_H >= r"));
            }
        }
        for i in 0..self.hyperedges.len() {
            for j in i + 1..self.hyperedges.len() {
                let inter = (self.hyperedges[i] & self.hyperedges[j]).len();
                let rhs = (self.bounds[i] + self.bounds[j]).saturating_sub(self.rank);
                if inter > rhs {
                    out.push(format!(
                        "hyperedges {i},{j} violate |H_i ∩ H_j| <= r_i + r_j - r"
                    ));
                }
            }
        }
        out
    }

    pub fn hyperedges(&self) -> &[ElemSet] {
        &self.hyperedges
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// Indices of hyperedges that a size-`r` set meets with equality.
    pub fn tight_sets(&self, set: ElemSet) -> TightSets {
        TightSets {
            indices: self
                .hyperedges
                .iter()
                .zip(&self.bounds)
                .enumerate()
                .filter(|(_, (h, &b))| (set & **h).len() == b)
                .map(|(i, _)| i)
                .collect(),
        }
    }
}

/// Hyperedge indices met with equality by a given size-`r` set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightSets {
    pub indices: Vec<usize>,
}

impl MatroidOracle for ElementarySplitInstance {
    fn ground(&self) -> ElemSet {
        self.ground
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        set.is_subset_of(self.ground)
            && set.len() <= self.rank
            && self
                .hyperedges
                .iter()
                .zip(&self.bounds)
                .all(|(h, &b)| (set & *h).len() <= b)
    }
}

/// One uniform component of a split direct sum.
#[derive(Clone, Debug)]
pub struct UniformComponent {
    pub elements: ElemSet,
    pub rank: usize,
}

/// A split matroid: direct sum of at most one elementary split component
/// and any number of uniform components, whose ground sets partition `S`.
#[derive(Clone, Debug)]
pub struct SplitDirectSum {
    elementary: Option<ElementarySplitInstance>,
    uniforms: Vec<UniformComponent>,
    ground: ElemSet,
    rank: usize,
}

impl SplitDirectSum {
    pub fn new(
        elementary: Option<ElementarySplitInstance>,
        uniforms: Vec<UniformComponent>,
    ) -> Result<Self> {
        let mut ground = ElemSet::EMPTY;
        let mut rank = 0;
        if let Some(e) = &elementary {
            ground = e.ground();
            rank = e.rank();
        }
        for u in &uniforms {
            if !(u.elements & ground).is_empty() {
                return Err(Error::Domain("component ground sets overlap".into()));
            }
            if u.rank > u.elements.len() {
                return Err(Error::Domain("uniform component rank too large".into()));
            }
            ground = ground | u.elements;
            rank += u.rank;
        }
        if ground != ElemSet::full(ground.len()) {
            return Err(Error::Domain(
                "component ground sets must cover dense ids 0..n".into(),
            ));
        }
        Ok(SplitDirectSum {
            elementary,
            uniforms,
            ground,
            rank,
        })
    }

    /// A sum with a single elementary component.
    pub fn elementary_only(e: ElementarySplitInstance) -> Self {
        SplitDirectSum {
            ground: e.ground(),
            rank: e.rank(),
            elementary: Some(e),
            uniforms: Vec::new(),
        }
    }

    pub fn elementary(&self) -> Option<&ElementarySplitInstance> {
        self.elementary.as_ref()
    }

    pub fn uniforms(&self) -> &[UniformComponent] {
        &self.uniforms
    }

    pub fn validate(&self) -> Vec<String> {
        self.elementary
            .as_ref()
            .map(|e| e.validate())
            .unwrap_or_default()
    }
}

impl MatroidOracle for SplitDirectSum {
    fn ground(&self) -> ElemSet {
        self.ground
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        if !set.is_subset_of(self.ground) {
            return false;
        }
        if let Some(e) = &self.elementary {
            if !e.is_independent(set & e.ground()) {
                return false;
            }
        }
        self.uniforms
            .iter()
            .all(|u| (set & u.elements).len() <= u.rank)
    }
}

/// The graphic matroid of `K4` encoded as a rank-3 elementary split matroid:
/// the four triangles are hyperedges with bound 2. Element ids and labels
/// match `k4_graph`.
pub fn k4_as_split() -> ElementarySplitInstance {
    let h = |ids: [usize; 3]| ids.iter().map(|&i| Element::new(i)).collect::<ElemSet>();
    ElementarySplitInstance::new(
        6,
        3,
        vec![h([0, 1, 3]), h([1, 2, 4]), h([0, 2, 5]), h([3, 4, 5])],
        vec![2, 2, 2, 2],
    )
    .unwrap()
}

/// Sample a valid elementary split instance by rejection. The instance is
/// guaranteed to admit at least one pair of disjoint bases covering a
/// `2r`-subset of the ground set.
pub fn random_elementary_split<R: Rng>(
    rng: &mut R,
    ground_size: usize,
    rank: usize,
) -> ElementarySplitInstance {
    assert!(ground_size >= 2 * rank && rank >= 1);
    loop {
        let q = rng.gen_range(1..=3);
        let mut hyperedges = Vec::new();
        let mut bounds = Vec::new();
        for _ in 0..q {
            let size = rng.gen_range(rank..=ground_size.saturating_sub(1).max(rank));
            let mut h = ElemSet::EMPTY;
            while h.len() < size {
                h = h.with(Element::new(rng.gen_range(0..ground_size)));
            }
            hyperedges.push(h);
            bounds.push(rng.gen_range(1..rank.max(2)).min(rank - 1).max(1));
        }
        let Ok(inst) = ElementarySplitInstance::new(ground_size, rank, hyperedges, bounds) else {
            continue;
        };
        // Must have full rank and at least one disjoint-basis pair.
        if crate::matroid::subset_rank(&inst, inst.ground()) < rank {
            continue;
        }
        if has_disjoint_basis_pair(&inst) {
            return inst;
        }
    }
}

fn has_disjoint_basis_pair<M: MatroidOracle>(m: &M) -> bool {
    let ground: Vec<Element> = m.ground().iter().collect();
    let r = m.rank();
    if ground.len() < 2 * r {
        return false;
    }
    // Scan size-r subsets for one whose complement contains a basis.
    for bits in 0u32..(1 << ground.len()) {
        if bits.count_ones() as usize != r {
            continue;
        }
        let set: ElemSet = ground
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if m.is_basis(set) && crate::matroid::subset_rank(m, m.ground() - set) == r {
            return true;
        }
    }
    false
}

/// Sample a partition matroid with `num_parts` parts of size `2 * cap`, so
/// the ground set always splits into two disjoint bases.
pub fn random_partition<R: Rng>(rng: &mut R, num_parts: usize) -> PartitionInstance {
    let mut parts = Vec::new();
    let mut caps = Vec::new();
    let mut next = 0usize;
    for _ in 0..num_parts {
        let cap = rng.gen_range(1..=2);
        let size = 2 * cap;
        if next + size > MAX_GROUND {
            break;
        }
        parts.push((next..next + size).map(Element::new).collect());
        caps.push(cap);
        next += size;
    }
    PartitionInstance::new(parts, caps).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::k4_graph;

    #[test]
    fn split_independence() {
        let k4 = k4_as_split();
        assert!(k4.validate().is_empty());
        assert!(k4.is_independent(ElemSet::EMPTY));
        // A full triangle meets its hyperedge in 3 > 2 elements.
        let tri: ElemSet = [0, 1, 3].iter().map(|&i| Element::new(i)).collect();
        assert!(!k4.is_independent(tri));
        // A spanning star meets each triangle in at most 2 edges.
        let star: ElemSet = [0, 1, 2].iter().map(|&i| Element::new(i)).collect();
        assert!(k4.is_independent(star));
    }

    #[test]
    fn k4_split_equals_k4_graph() {
        let split = k4_as_split();
        let graph = k4_graph();
        for bits in 0u32..64 {
            let s = ElemSet::from_bits(bits);
            assert_eq!(split.is_independent(s), graph.is_independent(s), "{s:?}");
        }
    }

    #[test]
    fn invalid_overlap_is_reported() {
        let h = |ids: &[usize]| ids.iter().map(|&i| Element::new(i)).collect::<ElemSet>();
        let bad = ElementarySplitInstance::new(
            6,
            3,
            vec![h(&[0, 1, 2, 3]), h(&[1, 2, 3, 4])],
            vec![2, 2],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn direct_sum_partitions_ground() {
        let e = ElementarySplitInstance::on_ground(ElemSet::from_bits(0b001111), 2, vec![], vec![])
            .unwrap();
        let sum = SplitDirectSum::new(
            Some(e),
            vec![UniformComponent {
                elements: ElemSet::from_bits(0b110000),
                rank: 1,
            }],
        )
        .unwrap();
        assert_eq!(sum.rank(), 3);
        assert_eq!(sum.ground().len(), 6);
    }

    #[test]
    fn tight_sets_on_k4() {
        let k4 = k4_as_split();
        // The spanning star {a, b, c} meets triangles abd, bce, acf in 2.
        let star: ElemSet = [0, 1, 2].iter().map(|&i| Element::new(i)).collect();
        assert_eq!(k4.tight_sets(star).indices, vec![0, 1, 2]);
    }

    #[test]
    fn samplers_produce_valid_instances() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let inst = random_elementary_split(&mut rng, 7, 3);
            assert!(inst.validate().is_empty());
            assert!(has_disjoint_basis_pair(&inst));
        }
        let p = random_partition(&mut rng, 3);
        assert_eq!(p.ground().len(), 2 * p.rank());
    }
}
