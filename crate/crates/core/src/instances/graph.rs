//! Graphic matroids, including wheels.

use crate::error::{Error, Result};
use crate::ground::{ElemSet, Element, MAX_GROUND};
use crate::matroid::MatroidOracle;
use crate::pairs::BasisPair;
use crate::wheel::Orientation;

const MAX_VERTICES: usize = 32;

/// A connected graph; independence of an edge set means acyclicity.
/// Parallel edges are allowed, self-loops are not.
#[derive(Clone, Debug)]
pub struct GraphInstance {
    num_vertices: usize,
    edges: Vec<(u32, u32)>,
    labels: Vec<String>,
}

impl GraphInstance {
    pub fn new(num_vertices: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let labels = (0..edges.len()).map(|i| format!("e{i}")).collect();
        Self::with_labels(num_vertices, edges, labels)
    }

    pub fn with_labels(
        num_vertices: usize,
        edges: Vec<(u32, u32)>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if !(2..=MAX_VERTICES).contains(&num_vertices) {
            return Err(Error::Domain(format!(
                "vertex count {num_vertices} out of range"
            )));
        }
        if edges.len() > MAX_GROUND {
            return Err(Error::Domain(format!("too many edges ({})", edges.len())));
        }
        if labels.len() != edges.len() {
            return Err(Error::Domain("labels/edges length mismatch".into()));
        }
        let g = GraphInstance {
            num_vertices,
            edges,
            labels,
        };
        let violations = g.validate();
        if !violations.is_empty() {
            return Err(Error::Domain(violations.join("; ")));
        }
        Ok(g)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u as usize >= self.num_vertices || v as usize >= self.num_vertices {
                out.push(format!("edge {i} has an endpoint out of range"));
            }
            if u == v {
                out.push(format!("edge {i} is a self-loop"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut uf = UnionFind::new(self.num_vertices);
        for &(u, v) in &self.edges {
            uf.union(u as usize, v as usize);
        }
        let root = uf.find(0);
        if (1..self.num_vertices).any(|v| uf.find(v) != root) {
            out.push("graph is not connected".into());
        }
        out
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: Element) -> (u32, u32) {
        self.edges[e.id()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl MatroidOracle for GraphInstance {
    fn ground(&self) -> ElemSet {
        ElemSet::full(self.edges.len())
    }

    fn rank(&self) -> usize {
        self.num_vertices - 1
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        if !set.is_subset_of(self.ground()) {
            return false;
        }
        let mut uf = UnionFind::new(self.num_vertices);
        for e in set {
            let (u, v) = self.edges[e.id()];
            if !uf.union(u as usize, v as usize) {
                return false;
            }
        }
        true
    }

    fn label(&self, e: Element) -> String {
        self.labels[e.id()].clone()
    }
}

/// Union-find with path halving, sized for the oracle's hot loop.
struct UnionFind {
    parent: [u8; MAX_VERTICES],
    len: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        let mut parent = [0u8; MAX_VERTICES];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        UnionFind { parent, len: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        debug_assert!(x < self.len);
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    /// Returns false when `x` and `y` were already connected.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry as u8;
        true
    }
}

/// The wheel on `n` vertices: a center joined to an outer cycle of length
/// `n - 1`. Spoke `s_i` joins the center to cycle vertex `i`; rim `r_i`
/// joins cycle vertices `i` and `i + 1` (cyclically). All interval and
/// orientation arithmetic in the wheel solver relies on this labeling.
#[derive(Clone, Debug)]
pub struct WheelInstance {
    n: usize,
    graph: GraphInstance,
}

impl WheelInstance {
    /// Number of vertices (center included). The wheel has `n - 1` spokes,
    /// `n - 1` rim edges, and rank `n - 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spoke count, equal to the rank.
    pub fn num_spokes(&self) -> usize {
        self.n - 1
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }

    /// Spoke `s_i`, `1 <= i <= n-1`.
    pub fn spoke(&self, i: usize) -> Element {
        debug_assert!(1 <= i && i <= self.num_spokes());
        Element::new(i - 1)
    }

    /// Rim edge `r_i`, `1 <= i <= n-1`.
    pub fn rim(&self, i: usize) -> Element {
        debug_assert!(1 <= i && i <= self.num_spokes());
        Element::new(self.num_spokes() + i - 1)
    }

    pub fn as_spoke(&self, e: Element) -> Option<usize> {
        (e.id() < self.num_spokes()).then(|| e.id() + 1)
    }

    pub fn as_rim(&self, e: Element) -> Option<usize> {
        let m = self.num_spokes();
        (m..2 * m).contains(&e.id()).then(|| e.id() - m + 1)
    }

    /// Cyclic successor of a spoke or rim index.
    pub fn next_idx(&self, i: usize) -> usize {
        i % self.num_spokes() + 1
    }

    /// Cyclic predecessor of a spoke or rim index.
    pub fn prev_idx(&self, i: usize) -> usize {
        if i == 1 {
            self.num_spokes()
        } else {
            i - 1
        }
    }

    /// The rim edge adjacent to spoke `i` against the orientation. For a
    /// positively oriented coloring this is `r_{i-1}`; exchanging a spoke
    /// with this rim edge is always feasible while both spoke classes stay
    /// nonempty.
    pub fn phi_minus(&self, o: Orientation, spoke_idx: usize) -> usize {
        match o {
            Orientation::Positive => self.prev_idx(spoke_idx),
            Orientation::Negative => spoke_idx,
        }
    }

    /// The other rim edge adjacent to spoke `i`.
    pub fn phi_plus(&self, o: Orientation, spoke_idx: usize) -> usize {
        match o {
            Orientation::Positive => spoke_idx,
            Orientation::Negative => self.prev_idx(spoke_idx),
        }
    }

    /// Build the coloring with the given set of red spoke indices (bit `i-1`
    /// for spoke `i`) and orientation. Rim colors are forced: a rim between
    /// same-colored spokes takes the other color; a boundary rim takes the
    /// color of the interval it follows in the orientation's direction.
    pub fn coloring(&self, red_spokes: u32, orientation: Orientation) -> Result<BasisPair> {
        let m = self.num_spokes();
        if red_spokes == 0 || red_spokes >= (1u32 << m) - 1 {
            return Err(Error::NotAColoring);
        }
        let spoke_red = |i: usize| red_spokes & (1 << (i - 1)) != 0;
        let mut r = ElemSet::EMPTY;
        for i in 1..=m {
            if spoke_red(i) {
                r = r.with(self.spoke(i));
            }
            let j = self.next_idx(i);
            let rim_red = if spoke_red(i) == spoke_red(j) {
                !spoke_red(i)
            } else {
                match orientation {
                    Orientation::Positive => spoke_red(i),
                    Orientation::Negative => spoke_red(j),
                }
            };
            if rim_red {
                r = r.with(self.rim(i));
            }
        }
        let b = self.ground() - r;
        let p = BasisPair::new(r, b);
        debug_assert!(p.validate(self).is_ok());
        Ok(p)
    }

    /// All colorings of the wheel, in a fixed order: red spoke masks
    /// ascending, positive orientation before negative.
    pub fn colorings(&self) -> Vec<BasisPair> {
        let m = self.num_spokes();
        let mut out = Vec::new();
        for mask in 1..(1u32 << m) - 1 {
            for o in [Orientation::Positive, Orientation::Negative] {
                out.push(self.coloring(mask, o).unwrap());
            }
        }
        out
    }

    /// Detect whether `g` is a wheel under some vertex ordering. On success
    /// returns the wheel plus the element map from `g`'s edge ids to wheel
    /// edge ids.
    pub fn match_graph(g: &GraphInstance) -> Option<(WheelInstance, crate::ground::Relabel)> {
        let n = g.num_vertices();
        if n < 4 || g.num_edges() != 2 * (n - 1) {
            return None;
        }
        let mut adj = vec![Vec::new(); n];
        for id in 0..g.num_edges() {
            let (u, v) = g.endpoints(Element::new(id));
            adj[u as usize].push((v as usize, id));
            adj[v as usize].push((u as usize, id));
        }
        // The center is adjacent to every other vertex exactly once.
        let center = (0..n).find(|&c| {
            adj[c].len() == n - 1 && {
                let mut seen = vec![false; n];
                adj[c].iter().all(|&(v, _)| {
                    let fresh = !seen[v] && v != c;
                    seen[v] = true;
                    fresh
                })
            }
        })?;
        // Walk the outer cycle starting from the smallest neighbor.
        let others: Vec<usize> = (0..n).filter(|&v| v != center).collect();
        let start = *others.iter().min().unwrap();
        let mut order = vec![start];
        let mut prev = usize::MAX;
        while order.len() < n - 1 {
            let cur = *order.last().unwrap();
            let nexts: Vec<usize> = adj[cur]
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| v != center && v != prev && !order.contains(&v))
                .collect();
            let next = match order.len() {
                1 => *nexts.iter().min()?,
                _ => match nexts.len() {
                    1 => nexts[0],
                    _ => return None,
                },
            };
            prev = cur;
            order.push(next);
        }
        // Every rim vertex must have degree 3 (center + two cycle neighbors).
        if others.iter().any(|&v| adj[v].len() != 3) {
            return None;
        }
        let pos = |v: usize| order.iter().position(|&x| x == v).map(|i| i + 1);
        let wheel = wheel(n).ok()?;
        let mut map = Vec::with_capacity(g.num_edges());
        for id in 0..g.num_edges() {
            let (u, v) = g.endpoints(Element::new(id));
            let (u, v) = (u as usize, v as usize);
            let target = if u == center {
                wheel.spoke(pos(v)?)
            } else if v == center {
                wheel.spoke(pos(u)?)
            } else {
                let (i, j) = (pos(u)?, pos(v)?);
                if wheel.next_idx(i) == j {
                    wheel.rim(i)
                } else if wheel.next_idx(j) == i {
                    wheel.rim(j)
                } else {
                    return None;
                }
            };
            map.push(target.id() as u32);
        }
        let seen: std::collections::BTreeSet<u32> = map.iter().copied().collect();
        if seen.len() != map.len() {
            return None;
        }
        Some((wheel, crate::ground::Relabel::from_map(map)))
    }
}

impl MatroidOracle for WheelInstance {
    fn ground(&self) -> ElemSet {
        self.graph.ground()
    }

    fn rank(&self) -> usize {
        self.graph.rank()
    }

    fn is_independent(&self, set: ElemSet) -> bool {
        self.graph.is_independent(set)
    }

    fn label(&self, e: Element) -> String {
        self.graph.label(e)
    }
}

/// The wheel on `n >= 4` vertices with edges labeled `s1..` and `r1..`.
pub fn wheel(n: usize) -> Result<WheelInstance> {
    if n < 4 {
        return Err(Error::Domain(format!("wheel needs n >= 4, got {n}")));
    }
    let m = n - 1;
    if 2 * m > MAX_GROUND {
        return Err(Error::Domain(format!(
            "wheel({n}) exceeds the ground limit"
        )));
    }
    let mut edges = Vec::with_capacity(2 * m);
    let mut labels = Vec::with_capacity(2 * m);
    for i in 1..=m {
        edges.push((0, i as u32));
        labels.push(format!("s{i}"));
    }
    for i in 1..=m {
        edges.push((i as u32, (i % m + 1) as u32));
        labels.push(format!("r{i}"));
    }
    let graph = GraphInstance::with_labels(n, edges, labels)?;
    Ok(WheelInstance { n, graph })
}

/// The complete graph on four vertices, labeled `a..f`. Structurally this is
/// the wheel on four vertices; the labels match the split encoding below.
pub fn k4_graph() -> GraphInstance {
    GraphInstance::with_labels(
        4,
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        ["a", "b", "c", "d", "e", "f"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
    .unwrap()
}
