//! Simple undirected graphs, vertex sets and BFS layerings.
//!
//! Vertices are dense indices `0..n`. Every set-valued output is sorted
//! ascending so results are reproducible.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::tree::RootedTree;

/// A simple, finite, undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Rejects self-loops, parallel edges and
    /// out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
            adj[u].push(v);
            adj[v].push(u);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::ParallelEdge(w[0].0, w[0].1));
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph { adj, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// `true` if every edge of `self` is an edge of `other` (same labelling).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() <= other.n() && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Vertices of `region` adjacent to some vertex of `set`, excluding `set`.
    pub fn neighborhood(&self, set: &VertexSet, region: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n());
        for v in set.iter() {
            for &w in self.neighbors(v) {
                if region.contains(w) && !set.contains(w) {
                    out.insert(w);
                }
            }
        }
        out
    }

    /// Some edge with both endpoints in `region`, lexicographically first.
    pub fn edge_within(&self, region: &VertexSet) -> Option<(usize, usize)> {
        region.iter().find_map(|u| {
            self.neighbors(u)
                .iter()
                .find(|&&v| v > u && region.contains(v))
                .map(|&v| (u, v))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges)
    }
}

/// An ordered set of vertices of a host graph with `n` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Builds a set, rejecting members `>= n`.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vs: I) -> Result<Self> {
        let mut s = VertexSet::new(n);
        for v in vs {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Capacity of the host graph.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Partition of a root's component by distance from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
    layer_of: BTreeMap<usize, usize>,
}

impl Layering {
    /// Layer index of `v`, or `None` when `v` lies outside the root's component.
    pub fn layer_of(&self, v: usize) -> Option<usize> {
        self.layer_of.get(&v).copied()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// BFS layers from `root` in the whole graph.
pub fn bfs_layers(g: &Graph, root: usize) -> Result<Layering> {
    bfs_layers_in(g, &g.all_vertices(), root)
}

/// BFS layers from `root` inside `G[region]`.
pub fn bfs_layers_in(g: &Graph, region: &VertexSet, root: usize) -> Result<Layering> {
    g.check_vertex(root)?;
    if !region.contains(root) {
        return Err(Error::Precondition(format!("root {root} not in region")));
    }
    let mut layer_of = BTreeMap::new();
    layer_of.insert(root, 0);
    let mut layers = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        let depth = layers.len();
        for &u in layers.last().unwrap() {
            for &w in g.neighbors(u) {
                if region.contains(w) && !layer_of.contains_key(&w) {
                    layer_of.insert(w, depth);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    Ok(Layering {
        root,
        layers,
        layer_of,
    })
}

/// Spanning tree of `V_0 ∪ … ∪ V_{i-1} ∪ {u}` rooted at the layering root in
/// which every non-root vertex of layer `j` has exactly one tree edge, to its
/// minimum-index neighbour in layer `j - 1`.
pub fn layered_spanning_tree(
    g: &Graph,
    layering: &Layering,
    i: usize,
    u: usize,
) -> Result<RootedTree> {
    if i == 0 {
        return Err(Error::Precondition("layer index must be >= 1".into()));
    }
    if layering.layer_of(u) != Some(i) {
        return Err(Error::Precondition(format!(
            "vertex {u} is not in layer {i}"
        )));
    }
    let mut parent = BTreeMap::new();
    parent.insert(layering.root, None);
    let lower = layering.layers[1..i].iter().flatten().copied();
    for v in lower.chain(std::iter::once(u)) {
        let j = layering.layer_of(v).unwrap();
        let p = g
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| layering.layer_of(w) == Some(j - 1))
            .ok_or_else(|| Error::Inconsistent(format!("vertex {v} has no lower neighbour")))?;
        parent.insert(v, Some(p));
    }
    RootedTree::from_parents(parent)
}

/// Outcome of a bipartiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bipartition {
    /// Side (`false`/`true`) of every vertex; a proper 2-colouring.
    Sides(Vec<bool>),
    /// Vertex sequence of an odd cycle; consecutive entries (cyclically) are adjacent.
    OddCycle(Vec<usize>),
}

pub fn is_bipartite(g: &Graph) -> Bipartition {
    let n = g.n();
    let mut side = vec![None::<bool>; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &w in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => {
                        return Bipartition::OddCycle(cycle_through(u, w, &parent, &depth));
                    }
                    _ => {}
                }
            }
        }
    }
    Bipartition::Sides(side.into_iter().map(|s| s.unwrap_or(false)).collect())
}

// Closes the BFS-tree paths from `a` and `b` at their lowest common ancestor.
fn cycle_through(a: usize, b: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// `G[X]` with vertices renumbered in ascending order; `map[i]` is the host
/// vertex of local vertex `i`.
pub fn induced_subgraph(g: &Graph, x: &VertexSet) -> Result<(Graph, Vec<usize>)> {
    if x.universe() > g.n() {
        if let Some(v) = x.iter().find(|&v| v >= g.n()) {
            return Err(Error::InvalidVertex {
                vertex: v,
                n: g.n(),
            });
        }
    }
    let map = x.to_vec();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| x.contains(u) && x.contains(v))
        .map(|&(u, v)| (local[u], local[v]));
    Ok((Graph::new(map.len(), edges)?, map))
}

pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    components_in(g, &g.all_vertices())
}

/// Components of `G[region]`, ordered by minimum element.
pub fn components_in(g: &Graph, region: &VertexSet) -> Vec<VertexSet> {
    let mut seen = VertexSet::new(g.n());
    let mut out = Vec::new();
    for s in region.iter() {
        if seen.contains(s) {
            continue;
        }
        let mut comp = VertexSet::new(g.n());
        let mut stack = vec![s];
        seen.insert(s);
        while let Some(u) = stack.pop() {
            comp.insert(u);
            for &w in g.neighbors(u) {
                if region.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// `true` if `G[set]` is connected (the empty set is not).
pub fn is_connected_in(g: &Graph, set: &VertexSet) -> bool {
    !set.is_empty() && components_in(g, set).len() == 1
}
