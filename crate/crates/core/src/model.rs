//! `H`-models, oddness witnesses and exhaustive search for (non-trivial) odd
//! models inside a region of a host graph.
//!
//! The search enumerates branch sets as connected vertex sets of the
//! bipartite double cover of the region: choosing the copy `(v, red)` or
//! `(v, blue)` for each vertex of a set fixes a 2-colouring, and the chosen
//! copies are connected in the cover exactly when the bichromatic edges of
//! the set span it, i.e. when some spanning tree is properly coloured.
//!
//! Two exact reductions keep the search small:
//!
//! * a branch tree can always be pruned to a subtree whose leaves are
//!   endpoints of chosen monochromatic joining edges, so a pattern vertex of
//!   degree at most one needs a branch set of size 1 (or 2 when non-trivial);
//! * when the pattern is a forest every model is odd, since each branch
//!   tree's colouring can be flipped independently to make one joining edge
//!   per pattern edge monochromatic. Colours are then not enumerated.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components_in, is_connected_in, Graph, VertexSet};

/// Default cap on the number of region vertices searched at once.
pub const SEARCH_CAP: usize = 24;
const HARD_CAP: usize = 64;

/// Witness colour of a covered vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Red,
    Blue,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Red => Side::Blue,
            Side::Blue => Side::Red,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Side::Red => 0,
            Side::Blue => 1,
        }
    }

    pub fn from_bit(b: u8) -> Option<Side> {
        match b {
            0 => Some(Side::Red),
            1 => Some(Side::Blue),
            _ => None,
        }
    }
}

/// An `H`-model: one branch set and spanning branch tree per pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<usize>>,
    pub branch_trees: Vec<Vec<(usize, usize)>>,
}

impl Model {
    pub fn covered(&self) -> impl Iterator<Item = usize> + '_ {
        self.branch_sets.iter().flatten().copied()
    }

    pub fn support(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for v in self.covered() {
            s.insert(v);
        }
        s
    }
}

/// Red/blue colouring of the vertices covered by a model, indexed by host vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub colour: Vec<Option<Side>>,
}

impl Witness {
    pub fn new(n: usize) -> Self {
        Witness {
            colour: vec![None; n],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelViolation {
    WrongBranchCount {
        expected: usize,
        sets: usize,
        trees: usize,
    },
    EmptyBranchSet(usize),
    VertexOutOfRange(usize),
    OverlappingBranchSets {
        vertex: usize,
    },
    TreeEdgeNotInGraph {
        branch: usize,
        edge: (usize, usize),
    },
    TreeEdgeLeavesBranchSet {
        branch: usize,
        edge: (usize, usize),
    },
    NotSpanningTree(usize),
    MissingJoin {
        x: usize,
        y: usize,
    },
    UncolouredVertex(usize),
    MonochromaticTreeEdge {
        branch: usize,
        edge: (usize, usize),
    },
    NoMonochromaticJoin {
        x: usize,
        y: usize,
    },
    Trivial(usize),
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModelViolation::*;
        match self {
            WrongBranchCount {
                expected,
                sets,
                trees,
            } => write!(
                f,
                "pattern has {expected} vertices but model has {sets} branch sets and {trees} trees"
            ),
            EmptyBranchSet(x) => write!(f, "branch set {x} is empty"),
            VertexOutOfRange(v) => write!(f, "vertex {v} is not in the host graph"),
            OverlappingBranchSets { vertex } => {
                write!(f, "vertex {vertex} appears in more than one branch set")
            }
            TreeEdgeNotInGraph { branch, edge } => {
                write!(
                    f,
                    "tree edge {}-{} of branch {branch} is not a graph edge",
                    edge.0, edge.1
                )
            }
            TreeEdgeLeavesBranchSet { branch, edge } => {
                write!(
                    f,
                    "tree edge {}-{} leaves branch set {branch}",
                    edge.0, edge.1
                )
            }
            NotSpanningTree(x) => write!(f, "branch tree {x} does not span its branch set"),
            MissingJoin { x, y } => write!(f, "no edge joins branch sets {x} and {y}"),
            UncolouredVertex(v) => write!(f, "covered vertex {v} has no witness colour"),
            MonochromaticTreeEdge { branch, edge } => write!(
                f,
                "tree edge {}-{} of branch {branch} is monochromatic",
                edge.0, edge.1
            ),
            NoMonochromaticJoin { x, y } => {
                write!(f, "no monochromatic edge joins branch sets {x} and {y}")
            }
            Trivial(x) => write!(f, "branch set {x} has fewer than two vertices"),
        }
    }
}

type Verdict = std::result::Result<(), ModelViolation>;

/// Checks the model conditions: disjoint non-empty branch sets, each spanned
/// by its tree inside `g`, and a joining edge for every pattern edge.
pub fn verify_model(g: &Graph, m: &Model) -> Verdict {
    use ModelViolation::*;
    let k = m.pattern.n();
    if m.branch_sets.len() != k || m.branch_trees.len() != k {
        return Err(WrongBranchCount {
            expected: k,
            sets: m.branch_sets.len(),
            trees: m.branch_trees.len(),
        });
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (x, set) in m.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(EmptyBranchSet(x));
        }
        for &v in set {
            if v >= g.n() {
                return Err(VertexOutOfRange(v));
            }
            if owner[v] != usize::MAX {
                return Err(OverlappingBranchSets { vertex: v });
            }
            owner[v] = x;
        }
    }
    for (x, (set, tree)) in m.branch_sets.iter().zip(&m.branch_trees).enumerate() {
        for &(a, b) in tree {
            if a >= g.n() || b >= g.n() || !g.has_edge(a, b) {
                return Err(TreeEdgeNotInGraph {
                    branch: x,
                    edge: (a, b),
                });
            }
            if owner[a] != x || owner[b] != x {
                return Err(TreeEdgeLeavesBranchSet {
                    branch: x,
                    edge: (a, b),
                });
            }
        }
        if tree.len() + 1 != set.len() || !tree_connects(set, tree) {
            return Err(NotSpanningTree(x));
        }
    }
    for &(x, y) in m.pattern.edges() {
        let joined = m.branch_sets[x]
            .iter()
            .any(|&u| g.neighbors(u).iter().any(|&w| owner[w] == y));
        if !joined {
            return Err(MissingJoin { x, y });
        }
    }
    Ok(())
}

fn tree_connects(set: &[usize], tree: &[(usize, usize)]) -> bool {
    let index = |v: usize| set.iter().position(|&s| s == v);
    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut merges = 0;
    for &(a, b) in tree {
        let (Some(ia), Some(ib)) = (index(a), index(b)) else {
            return false;
        };
        let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
        if ra != rb {
            parent[ra] = rb;
            merges += 1;
        }
    }
    merges + 1 == set.len()
}

/// Checks that `w` witnesses oddness of `m`. Assumes `verify_model` passed.
pub fn verify_odd_witness(g: &Graph, m: &Model, w: &Witness) -> Verdict {
    use ModelViolation::*;
    let colour_of = |v: usize| w.colour.get(v).copied().flatten();
    for v in m.covered() {
        if colour_of(v).is_none() {
            return Err(UncolouredVertex(v));
        }
    }
    for (x, tree) in m.branch_trees.iter().enumerate() {
        for &(a, b) in tree {
            if colour_of(a) == colour_of(b) {
                return Err(MonochromaticTreeEdge {
                    branch: x,
                    edge: (a, b),
                });
            }
        }
    }
    for &(x, y) in m.pattern.edges() {
        let mono = m.branch_sets[x].iter().any(|&u| {
            g.neighbors(u)
                .iter()
                .any(|&v| m.branch_sets[y].contains(&v) && colour_of(u) == colour_of(v))
        });
        if !mono {
            return Err(NoMonochromaticJoin { x, y });
        }
    }
    Ok(())
}

pub fn is_nontrivial(m: &Model) -> bool {
    m.branch_sets.iter().all(|s| s.len() >= 2)
}

/// `true` iff the bichromatic edges of `G[B]` under `colour` connect `B`,
/// i.e. `colour` properly 2-colours some spanning tree of `G[B]`.
pub fn parity_realizable(g: &Graph, b: &VertexSet, colour: &[Option<Side>]) -> Result<bool> {
    let Some(start) = b.min() else {
        return Err(Error::Precondition(
            "parity_realizable on an empty set".into(),
        ));
    };
    let col = |v: usize| {
        colour
            .get(v)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Precondition(format!("vertex {v} has no colour")))
    };
    for v in b.iter() {
        g.check_vertex(v)?;
        col(v)?;
    }
    let mut seen = VertexSet::new(g.n());
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if b.contains(w) && !seen.contains(w) && col(w)? != col(u)? {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    Ok(seen.len() == b.len())
}

/// Minimum-index BFS tree of the bichromatic edges inside `set`.
fn bichromatic_bfs_tree(g: &Graph, set: &[usize], colour: &[Option<Side>]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let Some(&start) = set.iter().min() else {
        return edges;
    };
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if set.contains(&w) && !seen.contains(&w) && colour[w] != colour[u] {
                seen.push(w);
                edges.push((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Searches for an oddness witness for a fixed family of branch sets, by
/// choosing a parity-realizable colouring per set so that every pattern edge
/// gets a monochromatic joining edge. Branch sets must each have at most 20
/// vertices. Returns the branch trees along with the witness.
pub fn witness_for_branch_sets(
    g: &Graph,
    pattern: &Graph,
    branch_sets: &[Vec<usize>],
) -> Result<Option<(Vec<Vec<(usize, usize)>>, Witness)>> {
    let mut options: Vec<Vec<Vec<Side>>> = Vec::new();
    for set in branch_sets {
        if set.len() > 20 {
            return Err(Error::CapExceeded {
                what: "branch set size for witness enumeration",
                size: set.len(),
                cap: 20,
            });
        }
        let vs = VertexSet::from_vertices(g.n(), set.iter().copied())?;
        let mut ok = Vec::new();
        let mut colour = vec![None; g.n()];
        for mask in 0u32..(1 << set.len()) {
            for (i, &v) in set.iter().enumerate() {
                colour[v] = Some(if mask >> i & 1 == 0 {
                    Side::Red
                } else {
                    Side::Blue
                });
            }
            if parity_realizable(g, &vs, &colour)? {
                ok.push(set.iter().map(|&v| colour[v].unwrap()).collect());
            }
        }
        options.push(ok);
    }
    let mut colour = vec![None; g.n()];
    if !choose_colourings(g, pattern, branch_sets, &options, 0, &mut colour) {
        return Ok(None);
    }
    let trees = branch_sets
        .iter()
        .map(|s| bichromatic_bfs_tree(g, s, &colour))
        .collect();
    Ok(Some((trees, Witness { colour })))
}

fn choose_colourings(
    g: &Graph,
    pattern: &Graph,
    sets: &[Vec<usize>],
    options: &[Vec<Vec<Side>>],
    x: usize,
    colour: &mut Vec<Option<Side>>,
) -> bool {
    if x == sets.len() {
        return true;
    }
    for opt in &options[x] {
        for (&v, &c) in sets[x].iter().zip(opt) {
            colour[v] = Some(c);
        }
        let consistent = pattern.neighbors(x).iter().filter(|&&y| y < x).all(|&y| {
            sets[x].iter().any(|&u| {
                g.neighbors(u)
                    .iter()
                    .any(|&v| sets[y].contains(&v) && colour[u] == colour[v])
            })
        });
        if consistent && choose_colourings(g, pattern, sets, options, x + 1, colour) {
            return true;
        }
    }
    for &v in &sets[x] {
        colour[v] = None;
    }
    false
}

/// Options for `find_odd_model_with`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub require_nontrivial: bool,
    /// Maximum number of region vertices searched at once. For a connected
    /// pattern this applies per connected component of the region.
    pub cap: usize,
}

impl SearchOptions {
    pub fn new(require_nontrivial: bool) -> Self {
        SearchOptions {
            require_nontrivial,
            cap: SEARCH_CAP,
        }
    }
}

/// Exhaustive search for an odd `H`-model with all branch sets inside
/// `region`. `Ok(None)` means no such model exists.
pub fn find_odd_model(
    g: &Graph,
    h: &Graph,
    region: &VertexSet,
    require_nontrivial: bool,
) -> Result<Option<(Model, Witness)>> {
    find_odd_model_with(g, h, region, SearchOptions::new(require_nontrivial))
}

pub fn find_odd_model_with(
    g: &Graph,
    h: &Graph,
    region: &VertexSet,
    opts: SearchOptions,
) -> Result<Option<(Model, Witness)>> {
    if let Some(v) = region.iter().find(|&v| v >= g.n()) {
        return Err(Error::InvalidVertex {
            vertex: v,
            n: g.n(),
        });
    }
    if h.n() == 0 {
        let empty = Model {
            pattern: h.clone(),
            branch_sets: vec![],
            branch_trees: vec![],
        };
        return Ok(Some((empty, Witness::new(g.n()))));
    }
    let cap = opts.cap.min(HARD_CAP);
    let min_size = if opts.require_nontrivial { 2 } else { 1 };
    let needed = h.n() * min_size;
    let spaces = if is_connected_in(h, &h.all_vertices()) {
        components_in(g, region)
    } else {
        vec![region.clone()]
    };
    for space in spaces {
        if space.len() < needed {
            continue;
        }
        if space.len() > cap {
            return Err(Error::CapExceeded {
                what: "odd-model search region",
                size: space.len(),
                cap,
            });
        }
        let mut search = Search::new(g, h, &space, opts.require_nontrivial);
        if search.place(0, search.all) {
            return Ok(Some(search.extract(g, h)));
        }
    }
    Ok(None)
}

struct Search {
    host: Vec<usize>,
    adj: Vec<u64>,
    // Adjacency in the double cover (2v = red copy, 2v+1 = blue copy) or,
    // for forest patterns, in the graph itself.
    cover_adj: Vec<u128>,
    odd: bool,
    all: u64,
    order: Vec<usize>,
    min_size: usize,
    max_size: Vec<usize>,
    // For each order position, earlier positions adjacent in the pattern.
    earlier: Vec<Vec<usize>>,
    // For each order position, (set, red) of the placed branch set.
    placed: Vec<(u64, u64)>,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn spread(m: u64, colour: u32) -> u128 {
    bits(m).fold(0u128, |acc, v| acc | 1u128 << (2 * v as u32 + colour))
}

impl Search {
    fn new(g: &Graph, h: &Graph, space: &VertexSet, nontrivial: bool) -> Self {
        let host = space.to_vec();
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in host.iter().enumerate() {
            local[v] = i;
        }
        let adj: Vec<u64> = host
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX)
                    .fold(0u64, |m, &w| m | 1 << local[w])
            })
            .collect();
        let odd = has_cycle(h);
        let cover_adj = if odd {
            (0..2 * host.len())
                .map(|i| spread(adj[i / 2], 1 - (i % 2) as u32))
                .collect()
        } else {
            adj.iter().map(|&m| m as u128).collect()
        };
        let order = pattern_order(h);
        let mut position = vec![0; h.n()];
        for (i, &x) in order.iter().enumerate() {
            position[x] = i;
        }
        let earlier = order
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let mut e: Vec<usize> = h
                    .neighbors(x)
                    .iter()
                    .map(|&y| position[y])
                    .filter(|&p| p < i)
                    .collect();
                e.sort_unstable();
                e
            })
            .collect();
        let min_size = if nontrivial { 2 } else { 1 };
        let max_size = order
            .iter()
            .map(|&x| {
                if h.degree(x) <= 1 {
                    min_size
                } else {
                    usize::MAX
                }
            })
            .collect();
        let all = if host.len() == 64 {
            u64::MAX
        } else {
            (1u64 << host.len()) - 1
        };
        Search {
            host,
            adj,
            cover_adj,
            odd,
            all,
            order,
            min_size,
            max_size,
            earlier,
            placed: Vec::new(),
        }
    }

    fn neighbourhood(&self, m: u64) -> u64 {
        bits(m).fold(0, |acc, v| acc | self.adj[v])
    }

    fn to_pair(&self, cover: u128) -> (u64, u64) {
        if !self.odd {
            return (cover as u64, cover as u64);
        }
        let (mut set, mut red) = (0u64, 0u64);
        let mut c = cover;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            c &= c - 1;
            set |= 1 << (i / 2);
            if i.is_multiple_of(2) {
                red |= 1 << (i / 2);
            }
        }
        (set, red)
    }

    fn joins(&self, (set, red): (u64, u64), (oset, ored): (u64, u64)) -> bool {
        if !self.odd {
            return self.neighbourhood(set) & oset != 0;
        }
        let blue = set & !red;
        let oblue = oset & !ored;
        self.neighbourhood(red) & ored != 0 || self.neighbourhood(blue) & oblue != 0
    }

    fn cover_of(&self, free: u64) -> u128 {
        if self.odd {
            spread(free, 0) | spread(free, 1)
        } else {
            free as u128
        }
    }

    fn twin(&self, i: u32) -> u128 {
        if self.odd {
            1u128 << (i ^ 1)
        } else {
            0
        }
    }

    fn place(&mut self, k: usize, free: u64) -> bool {
        if k == self.order.len() {
            return true;
        }
        let rest_needed = (self.order.len() - k - 1) * self.min_size;
        let available = free.count_ones() as usize;
        if available < self.min_size + rest_needed {
            return false;
        }
        let max = self.max_size[k].min(available - rest_needed);
        let allowed = self.cover_of(free);
        let anchors = match self.earlier[k].first() {
            Some(&p) => {
                let (set, red) = self.placed[p];
                if self.odd {
                    spread(self.neighbourhood(red) & free, 0)
                        | spread(self.neighbourhood(set & !red) & free, 1)
                } else {
                    (self.neighbourhood(set) & free) as u128
                }
            }
            // Flipping every colour preserves a witness, so the first branch
            // set may contain only red anchors.
            None if self.odd && k == 0 => spread(free, 0),
            None => allowed,
        };
        let mut banned = 0u128;
        let mut rest = anchors;
        while rest != 0 {
            let a = rest.trailing_zeros();
            rest &= rest - 1;
            let abit = 1u128 << a;
            let allow = allowed & !self.twin(a) & !banned;
            let cand = self.cover_adj[a as usize] & allow & !abit;
            if self.grow(k, free, abit, cand, banned | abit, 1, max, allow) {
                return true;
            }
            banned |= abit;
        }
        false
    }

    // Enumerates each connected cover set containing `cur` and avoiding
    // `banned` exactly once, trying each as the branch set at position `k`.
    #[allow(clippy::too_many_arguments)]
    fn grow(
        &mut self,
        k: usize,
        free: u64,
        cur: u128,
        cand: u128,
        banned: u128,
        size: usize,
        max: usize,
        allowed: u128,
    ) -> bool {
        if size >= self.min_size && self.try_branch(k, free, cur) {
            return true;
        }
        if size == max {
            return false;
        }
        let mut c = cand;
        let mut b = banned;
        while c != 0 {
            let v = c.trailing_zeros();
            c &= c - 1;
            let vbit = 1u128 << v;
            let allow = allowed & !self.twin(v);
            let next = (c | (self.cover_adj[v as usize] & !cur)) & allow & !b & !vbit;
            if self.grow(k, free, cur | vbit, next, b, size + 1, max, allow) {
                return true;
            }
            b |= vbit;
        }
        false
    }

    fn try_branch(&mut self, k: usize, free: u64, cover: u128) -> bool {
        let pair = self.to_pair(cover);
        for &p in &self.earlier[k] {
            if !self.joins(pair, self.placed[p]) {
                return false;
            }
        }
        let remaining = free & !pair.0;
        self.placed.push(pair);
        // Each later pattern vertex with a placed neighbour needs room next to it.
        let feasible = (k + 1..self.order.len()).all(|j| {
            self.earlier[j]
                .iter()
                .take_while(|&&p| p <= k)
                .all(|&p| self.neighbourhood(self.placed[p].0) & remaining != 0)
        });
        if feasible && self.place(k + 1, remaining) {
            return true;
        }
        self.placed.pop();
        false
    }

    fn extract(&self, g: &Graph, h: &Graph) -> (Model, Witness) {
        let mut branch_sets = vec![Vec::new(); h.n()];
        let mut red_masks = vec![0u64; h.n()];
        for (i, &x) in self.order.iter().enumerate() {
            let (set, red) = self.placed[i];
            branch_sets[x] = bits(set).map(|v| self.host[v]).collect();
            red_masks[x] = red;
        }
        let mut colour = vec![None; g.n()];
        let branch_trees;
        if self.odd {
            for x in 0..h.n() {
                for v in bits(self.set_of(x)) {
                    let red = red_masks[x] >> v & 1 == 1;
                    colour[self.host[v]] = Some(if red { Side::Red } else { Side::Blue });
                }
            }
            branch_trees = branch_sets
                .iter()
                .map(|s| bichromatic_bfs_tree(g, s, &colour))
                .collect();
        } else {
            branch_trees = forest_witness(g, h, &branch_sets, &mut colour);
        }
        (
            Model {
                pattern: h.clone(),
                branch_sets,
                branch_trees,
            },
            Witness { colour },
        )
    }

    fn set_of(&self, x: usize) -> u64 {
        let i = self.order.iter().position(|&y| y == x).unwrap();
        self.placed[i].0
    }
}

fn has_cycle(h: &Graph) -> bool {
    let comps = components_in(h, &h.all_vertices()).len();
    h.m() + comps > h.n()
}

// Descending degree; ties prefer vertices adjacent to those already chosen,
// then lower index.
fn pattern_order(h: &Graph) -> Vec<usize> {
    let mut chosen = vec![false; h.n()];
    let mut order = Vec::with_capacity(h.n());
    for _ in 0..h.n() {
        let x = (0..h.n())
            .filter(|&x| !chosen[x])
            .max_by_key(|&x| {
                let linked = h.neighbors(x).iter().any(|&y| chosen[y]);
                (h.degree(x), linked, std::cmp::Reverse(x))
            })
            .unwrap();
        chosen[x] = true;
        order.push(x);
    }
    order
}

// Branch trees (minimum-index BFS trees) and a witness for a model of a
// forest pattern: colour each tree by depth parity, then walk the pattern
// forest flipping child trees so one joining edge per pattern edge is
// monochromatic.
fn forest_witness(
    g: &Graph,
    h: &Graph,
    sets: &[Vec<usize>],
    colour: &mut [Option<Side>],
) -> Vec<Vec<(usize, usize)>> {
    let mut trees = Vec::with_capacity(sets.len());
    for set in sets {
        let start = set[0];
        colour[start] = Some(Side::Red);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = vec![start];
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if set.contains(&w) && !seen.contains(&w) {
                    seen.push(w);
                    colour[w] = colour[u].map(Side::flip);
                    edges.push((u.min(w), u.max(w)));
                    queue.push_back(w);
                }
            }
        }
        edges.sort_unstable();
        trees.push(edges);
    }
    let mut done = vec![false; h.n()];
    for root in 0..h.n() {
        if done[root] {
            continue;
        }
        done[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in h.neighbors(x) {
                if done[y] {
                    continue;
                }
                done[y] = true;
                let (u, v) = sets[x]
                    .iter()
                    .find_map(|&u| {
                        g.neighbors(u)
                            .iter()
                            .find(|v| sets[y].contains(v))
                            .map(|&v| (u, v))
                    })
                    .expect("verified join");
                if colour[u] != colour[v] {
                    for &w in &sets[y] {
                        colour[w] = colour[w].map(Side::flip);
                    }
                }
                queue.push_back(y);
            }
        }
    }
    trees
}
