//! Tree-decompositions: validation, exact treewidth for small graphs and a
//! min-fill heuristic for everything else.
//!
//! Decompositions produced here are normalized: node 0 is the root, nodes are
//! numbered in BFS order and children are ordered by their minimum bag
//! element (empty bags last).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{components_in, Graph, VertexSet};
use crate::tree::RootedTree;

/// Default vertex cap (per connected component) for `exact_treewidth`.
pub const EXACT_TREEWIDTH_CAP: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Decomposition tree over node indices `0..bags.len()`.
    pub tree: RootedTree,
    /// Bag of each node, sorted ascending.
    pub bags: Vec<Vec<usize>>,
    /// Maximum bag size minus one (0 when every bag is empty).
    pub width: usize,
}

fn bag_width(bags: &[Vec<usize>]) -> usize {
    bags.iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0)
        .saturating_sub(1)
}

impl TreeDecomposition {
    /// Builds a decomposition and computes its width. Bags are sorted and deduplicated.
    pub fn new(tree: RootedTree, mut bags: Vec<Vec<usize>>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        let width = bag_width(&bags);
        TreeDecomposition { tree, bags, width }
    }

    /// Builds from an undirected node-edge list, rooted at node 0.
    pub fn from_edges(
        nodes: usize,
        edges: &[(usize, usize)],
        bags: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if nodes == 0 || bags.len() != nodes {
            return Err(Error::Precondition(format!(
                "{nodes} nodes but {} bags",
                bags.len()
            )));
        }
        if edges.len() != nodes - 1 {
            return Err(Error::Precondition(format!(
                "a tree on {nodes} nodes has {} edges, found {}",
                nodes - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            if a >= nodes || b >= nodes || a == b {
                return Err(Error::Precondition(format!("bad tree edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Precondition(
                "decomposition tree is disconnected".into(),
            ));
        }
        Ok(Self::new(RootedTree::from_parent_vec(&parent)?, bags))
    }

    pub fn nodes(&self) -> usize {
        self.bags.len()
    }

    /// Undirected tree edges `(parent, child)` in node order.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        (0..self.nodes())
            .filter_map(|x| self.tree.parent(x).map(|p| (p, x)))
            .collect()
    }

    pub fn root(&self) -> usize {
        self.tree.root().unwrap_or(0)
    }

    /// Children lists, each ordered by minimum bag element.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.nodes()];
        for x in 0..self.nodes() {
            if let Some(p) = self.tree.parent(x) {
                ch[p].push(x);
            }
        }
        for c in &mut ch {
            c.sort_by_key(|&x| (self.bags[x].first().copied().unwrap_or(usize::MAX), x));
        }
        ch
    }

    /// Nodes in post-order (children before parents), children visited in order.
    pub fn post_order(&self) -> Vec<usize> {
        let ch = self.children();
        let mut out = Vec::with_capacity(self.nodes());
        let mut stack = vec![(self.root(), false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
            } else {
                stack.push((x, true));
                for &c in ch[x].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Same tree with every bag intersected with `region`.
    pub fn restrict(&self, region: &VertexSet) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|b| b.iter().copied().filter(|&v| region.contains(v)).collect())
            .collect();
        TreeDecomposition::new(self.tree.clone(), bags).normalized()
    }

    /// Renumbers nodes in BFS order from the current root, children ordered
    /// by minimum bag element.
    pub fn normalized(&self) -> TreeDecomposition {
        let ch = self.children();
        let mut order = Vec::with_capacity(self.nodes());
        let mut queue = VecDeque::from([self.root()]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            queue.extend(ch[x].iter().copied());
        }
        let mut new_id = vec![usize::MAX; self.nodes()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let parent: Vec<_> = order
            .iter()
            .map(|&x| self.tree.parent(x).map(|p| new_id[p]))
            .collect();
        let bags = order.iter().map(|&x| self.bags[x].clone()).collect();
        TreeDecomposition {
            tree: RootedTree::from_parent_vec(&parent).expect("renumbered tree"),
            bags,
            width: self.width,
        }
    }
}

/// First condition a decomposition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    NoNodes,
    NotATree,
    BagVertexOutOfRange { node: usize, vertex: usize },
    UncoveredEdge(usize, usize),
    MissingVertex(usize),
    DisconnectedTrace(usize),
    WidthMismatch { stated: usize, actual: usize },
}

impl fmt::Display for DecompositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DecompositionViolation::*;
        match self {
            NoNodes => write!(f, "decomposition has no nodes"),
            NotATree => write!(f, "decomposition tree is not a tree over 0..nodes"),
            BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} contains invalid vertex {vertex}")
            }
            UncoveredEdge(u, v) => write!(f, "edge {u}-{v} is not contained in any bag"),
            MissingVertex(v) => write!(f, "vertex {v} appears in no bag"),
            DisconnectedTrace(v) => write!(f, "bags containing vertex {v} are not connected"),
            WidthMismatch { stated, actual } => {
                write!(
                    f,
                    "stated width {stated} but maximum bag size minus one is {actual}"
                )
            }
        }
    }
}

pub fn validate_decomposition(
    g: &Graph,
    d: &TreeDecomposition,
) -> std::result::Result<(), DecompositionViolation> {
    use DecompositionViolation::*;
    let nodes = d.nodes();
    if nodes == 0 {
        return Err(NoNodes);
    }
    if !d.tree.is_tree() || d.tree.len() != nodes || d.tree.vertices().any(|x| x >= nodes) {
        return Err(NotATree);
    }
    let mut trace: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (x, bag) in d.bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return Err(BagVertexOutOfRange { node: x, vertex: v });
            }
            trace[v].push(x);
        }
    }
    for &(u, v) in g.edges() {
        let covered = trace[u]
            .iter()
            .any(|&x| d.bags[x].binary_search(&v).is_ok());
        if !covered {
            return Err(UncoveredEdge(u, v));
        }
    }
    for (v, nodes_of_v) in trace.iter().enumerate() {
        if nodes_of_v.is_empty() {
            return Err(MissingVertex(v));
        }
        // Connected iff exactly one node of the trace has its parent outside it.
        let inside: BTreeSet<_> = nodes_of_v.iter().copied().collect();
        let tops = nodes_of_v
            .iter()
            .filter(|&&x| d.tree.parent(x).is_none_or(|p| !inside.contains(&p)))
            .count();
        if tops != 1 {
            return Err(DisconnectedTrace(v));
        }
    }
    let actual = bag_width(&d.bags);
    if actual != d.width {
        return Err(WidthMismatch {
            stated: d.width,
            actual,
        });
    }
    Ok(())
}

// Decomposition of one component from an elimination order of its local
// vertices; `adj` holds local adjacency bitmasks and `map` the host labels.
fn from_elimination(
    adj: &[u64],
    order: &[usize],
    map: &[usize],
) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
    let k = order.len();
    let mut pos = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut fill = adj.to_vec();
    let mut eliminated = 0u64;
    let mut bags = vec![Vec::new(); k];
    let mut parent = vec![None; k];
    for (i, &v) in order.iter().enumerate() {
        let higher = fill[v] & !eliminated & !(1 << v);
        let mut bag = vec![map[v]];
        let mut rest = higher;
        let mut next: Option<usize> = None;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bag.push(map[w]);
            fill[w] |= higher & !(1 << w);
            if next.is_none_or(|x| pos[w] < pos[x]) {
                next = Some(w);
            }
        }
        bag.sort_unstable();
        bags[i] = bag;
        parent[i] = next.map(|w| pos[w]);
        eliminated |= 1 << v;
    }
    // Contract nodes whose bag is contained in the parent's bag.
    let mut alive = vec![true; k];
    for i in 0..k {
        if let Some(p) = parent[i] {
            if bags[i].iter().all(|v| bags[p].binary_search(v).is_ok()) {
                alive[i] = false;
                for c in 0..k {
                    if parent[c] == Some(i) {
                        parent[c] = Some(p);
                    }
                }
            }
        }
    }
    let mut id = vec![usize::MAX; k];
    let mut out_bags = Vec::new();
    for i in 0..k {
        if alive[i] {
            id[i] = out_bags.len();
            out_bags.push(bags[i].clone());
        }
    }
    let out_parent = (0..k)
        .filter(|&i| alive[i])
        .map(|i| parent[i].map(|p| id[p]))
        .collect();
    (out_parent, out_bags)
}

fn local_adjacency(g: &Graph, comp: &[usize]) -> Vec<u64> {
    let mut local = std::collections::HashMap::new();
    for (i, &v) in comp.iter().enumerate() {
        local.insert(v, i);
    }
    comp.iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| local.get(w))
                .fold(0u64, |m, &i| m | 1 << i)
        })
        .collect()
}

// Glues per-component decompositions under the first component's root.
fn assemble(parts: Vec<(Vec<Option<usize>>, Vec<Vec<usize>>)>) -> TreeDecomposition {
    if parts.is_empty() {
        let tree = RootedTree::from_parent_vec(&[None]).unwrap();
        return TreeDecomposition::new(tree, vec![Vec::new()]);
    }
    let mut parent = Vec::new();
    let mut bags = Vec::new();
    let mut global_root = None;
    for (p, b) in parts {
        let offset = bags.len();
        for x in p {
            parent.push(match x {
                Some(y) => Some(y + offset),
                None => global_root,
            });
        }
        if global_root.is_none() {
            global_root = parent[offset..]
                .iter()
                .position(|x| x.is_none())
                .map(|i| i + offset);
        }
        bags.extend(b);
    }
    // The glued tree is rooted where the first component's root was.
    let root = global_root.unwrap();
    let mut td = TreeDecomposition::new(RootedTree::from_parent_vec(&parent).unwrap(), bags);
    debug_assert_eq!(td.tree.root(), Some(root));
    td = td.normalized();
    td
}

/// Exact treewidth by dynamic programming over eliminated vertex sets.
///
/// `TW(S)` is the best width of eliminating `S` first; eliminating `v` after
/// `S` costs the number of vertices outside `S + v` reachable from `v`
/// through `S`. Components are solved independently.
pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_with_cap(g, EXACT_TREEWIDTH_CAP)
}

pub fn exact_treewidth_with_cap(g: &Graph, cap: usize) -> Result<(usize, TreeDecomposition)> {
    let cap = cap.min(24);
    let comps = components_in(g, &g.all_vertices());
    if let Some(big) = comps.iter().find(|c| c.len() > cap) {
        return Err(Error::CapExceeded {
            what: "exact treewidth component size",
            size: big.len(),
            cap,
        });
    }
    let mut parts = Vec::new();
    for comp in comps {
        let map = comp.to_vec();
        let adj = local_adjacency(g, &map);
        let order = optimal_order(&adj);
        parts.push(from_elimination(&adj, &order, &map));
    }
    let td = assemble(parts);
    Ok((td.width, td))
}

fn reach_cost(adj: &[u64], eliminated: u32, v: usize) -> u32 {
    let inside = eliminated | (1 << v);
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    let mut boundary = 0u32;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x] as u32;
        let new = nb & eliminated & !comp;
        comp |= new;
        frontier |= new;
        boundary |= nb & !inside;
    }
    boundary.count_ones()
}

fn optimal_order(adj: &[u64]) -> Vec<usize> {
    let k = adj.len();
    if k <= 1 {
        return (0..k).collect();
    }
    let states = 1usize << k;
    let mut best = vec![u8::MAX; states];
    let mut choice = vec![0u8; states];
    best[0] = 0;
    for s in 1..states {
        let mut rest = s as u32;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = best[prev].max(reach_cost(adj, prev as u32, v) as u8);
            if cost < best[s] {
                best[s] = cost;
                choice[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(k);
    let mut s = states - 1;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Min-fill elimination ordering (ties by degree, then index) turned into a
/// decomposition. Always valid; width is an upper bound on treewidth.
pub fn heuristic_decomposition(g: &Graph) -> TreeDecomposition {
    let mut parts = Vec::new();
    for comp in components_in(g, &g.all_vertices()) {
        let map = comp.to_vec();
        let order = min_fill_order(g, &map);
        parts.push(elimination_decomposition(g, &map, &order));
    }
    assemble(parts)
}

fn min_fill_order(g: &Graph, comp: &[usize]) -> Vec<usize> {
    let k = comp.len();
    let index: std::collections::HashMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut nb: Vec<BTreeSet<usize>> = comp
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect()
        })
        .collect();
    let mut alive: BTreeSet<usize> = (0..k).collect();
    let mut order = Vec::with_capacity(k);
    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| {
                let ns: Vec<_> = nb[v].iter().copied().collect();
                let mut fill = 0;
                for (i, &a) in ns.iter().enumerate() {
                    for &b in &ns[i + 1..] {
                        if !nb[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                (fill, ns.len(), v)
            })
            .unwrap();
        let ns: Vec<_> = nb[v].iter().copied().collect();
        for &a in &ns {
            nb[a].remove(&v);
            for &b in &ns {
                if a != b {
                    nb[a].insert(b);
                }
            }
        }
        alive.remove(&v);
        order.push(v);
    }
    order
}

// Elimination-order decomposition without the 64-vertex bitmask limit.
fn elimination_decomposition(
    g: &Graph,
    comp: &[usize],
    order: &[usize],
) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
    if comp.len() <= 64 {
        return from_elimination(&local_adjacency(g, comp), order, comp);
    }
    let k = comp.len();
    let index: std::collections::HashMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut nb: Vec<BTreeSet<usize>> = comp
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect()
        })
        .collect();
    let mut pos = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = vec![Vec::new(); k];
    let mut parent = vec![None; k];
    for (i, &v) in order.iter().enumerate() {
        let higher: Vec<usize> = nb[v].iter().copied().filter(|&w| pos[w] > i).collect();
        for &a in &higher {
            for &b in &higher {
                if a != b {
                    nb[a].insert(b);
                }
            }
        }
        let mut bag: Vec<usize> = higher.iter().map(|&w| comp[w]).collect();
        bag.push(comp[v]);
        bag.sort_unstable();
        bags[i] = bag;
        parent[i] = higher.iter().map(|&w| pos[w]).min();
    }
    (parent, bags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn validate_examples() {
        let k3 = complete(3);
        let single = TreeDecomposition::from_edges(1, &[], vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(validate_decomposition(&k3, &single), Ok(()));
        assert_eq!(single.width, 2);

        let p = path3();
        let two =
            TreeDecomposition::from_edges(2, &[(0, 1)], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(validate_decomposition(&p, &two), Ok(()));
        assert_eq!(two.width, 1);

        let bad = TreeDecomposition::from_edges(2, &[(0, 1)], vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(
            validate_decomposition(&p, &bad),
            Err(DecompositionViolation::UncoveredEdge(1, 2))
        );
    }

    #[test]
    fn detects_broken_traces_and_widths() {
        let p = path3();
        let split = TreeDecomposition::from_edges(
            3,
            &[(0, 1), (1, 2)],
            vec![vec![0, 1], vec![2], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(
            validate_decomposition(&p, &split),
            Err(DecompositionViolation::DisconnectedTrace(1))
        );
        let mut lying = TreeDecomposition::from_edges(1, &[], vec![vec![0, 1, 2]]).unwrap();
        lying.width = 1;
        assert_eq!(
            validate_decomposition(&p, &lying),
            Err(DecompositionViolation::WidthMismatch {
                stated: 1,
                actual: 2
            })
        );
        let missing = TreeDecomposition::from_edges(1, &[], vec![vec![0, 1]]).unwrap();
        assert!(validate_decomposition(&Graph::empty(3), &missing).is_err());
    }

    #[test]
    fn exact_examples() {
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let (w, d) = exact_treewidth(&tree).unwrap();
        assert_eq!(w, 1);
        assert_eq!(validate_decomposition(&tree, &d), Ok(()));
        assert_eq!(exact_treewidth(&complete(5)).unwrap().0, 4);
        let c6 = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let (w, d) = exact_treewidth(&c6).unwrap();
        assert_eq!(w, 2);
        assert_eq!(validate_decomposition(&c6, &d), Ok(()));
        assert_eq!(exact_treewidth(&Graph::empty(0)).unwrap().0, 0);
        assert!(matches!(
            exact_treewidth(&complete(19)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn heuristic_examples() {
        let e = Graph::empty(4);
        let d = heuristic_decomposition(&e);
        assert_eq!(d.width, 0);
        assert_eq!(validate_decomposition(&e, &d), Ok(()));
        let k4 = complete(4);
        assert_eq!(heuristic_decomposition(&k4).width, 3);
        let tree = Graph::new(6, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]).unwrap();
        let d = heuristic_decomposition(&tree);
        assert_eq!(d.width, 1);
        assert_eq!(validate_decomposition(&tree, &d), Ok(()));
    }

    #[test]
    fn normalized_root_is_zero_and_restriction_stays_valid() {
        let c6 = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let d = heuristic_decomposition(&c6);
        assert_eq!(d.root(), 0);
        let region = VertexSet::from_vertices(6, [0, 1, 2]).unwrap();
        let r = d.restrict(&region);
        assert!(r.width <= d.width);
        assert_eq!(r.root(), 0);
        let (sub, map) = crate::graph::induced_subgraph(&c6, &region).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        // Host labels coincide with local ones here, so the restriction validates directly.
        let mut only = r.clone();
        only.bags.iter_mut().for_each(|b| b.retain(|&v| v < 3));
        assert_eq!(validate_decomposition(&sub, &only), Ok(()));
    }
}
