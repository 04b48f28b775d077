//! Rooted trees and forests, closures, the `U(h, d)` family and exact
//! (connected) tree-depth.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default vertex cap for the exact tree-depth search.
pub const TREE_DEPTH_CAP: usize = 20;
/// Default vertex cap for `u_graph`.
pub const U_GRAPH_CAP: usize = 1 << 16;

/// A rooted forest over an arbitrary vertex set. Each vertex maps to its
/// parent, or `None` for a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: BTreeMap<usize, Option<usize>>,
}

impl RootedTree {
    /// Validates that every parent is itself a vertex and that following
    /// parents always reaches a root.
    pub fn from_parents(parent: BTreeMap<usize, Option<usize>>) -> Result<Self> {
        for (&v, &p) in &parent {
            if let Some(p) = p {
                if !parent.contains_key(&p) {
                    return Err(Error::Precondition(format!(
                        "parent {p} of {v} is not a tree vertex"
                    )));
                }
            }
        }
        let tree = RootedTree { parent };
        // A cycle shows up as a walk longer than the vertex count.
        for &v in tree.parent.keys() {
            let mut cur = v;
            let mut steps = 0;
            while let Some(p) = tree.parent[&cur] {
                cur = p;
                steps += 1;
                if steps > tree.parent.len() {
                    return Err(Error::Precondition(format!("parent cycle through {v}")));
                }
            }
        }
        Ok(tree)
    }

    /// Builds from a dense parent array over `0..parent.len()`.
    pub fn from_parent_vec(parent: &[Option<usize>]) -> Result<Self> {
        Self::from_parents(parent.iter().copied().enumerate().collect())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.parent.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent.keys().copied()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied().flatten()
    }

    pub fn roots(&self) -> Vec<usize> {
        self.parent
            .iter()
            .filter(|(_, p)| p.is_none())
            .map(|(&v, _)| v)
            .collect()
    }

    /// The root, if this is a single tree.
    pub fn root(&self) -> Option<usize> {
        match self.roots().as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    pub fn is_tree(&self) -> bool {
        self.root().is_some()
    }

    /// Tree edges `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .parent
            .iter()
            .filter_map(|(&v, &p)| p.map(|p| (v.min(p), v.max(p))))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn children(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut ch: BTreeMap<usize, Vec<usize>> =
            self.parent.keys().map(|&v| (v, vec![])).collect();
        for (&v, &p) in &self.parent {
            if let Some(p) = p {
                ch.get_mut(&p).unwrap().push(v);
            }
        }
        ch
    }

    /// Number of vertices on the root path of `v`, counting `v` itself.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum number of vertices on a root-to-leaf path.
    pub fn vertex_height(&self) -> usize {
        self.parent
            .keys()
            .map(|&v| self.depth(v))
            .max()
            .unwrap_or(0)
    }

    /// `true` if `anc` lies on the root path of `v` (including `v`).
    pub fn is_ancestor(&self, anc: usize, v: usize) -> bool {
        let mut cur = Some(v);
        while let Some(c) = cur {
            if c == anc {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }
}

/// The closure: `uv` is an edge iff one is a strict descendant of the other.
/// Vertices must be exactly `0..len`.
pub fn closure(t: &RootedTree) -> Result<Graph> {
    let n = t.len();
    if let Some(v) = t.vertices().find(|&v| v >= n) {
        return Err(Error::Precondition(format!(
            "closure needs vertices 0..{n}, found {v}"
        )));
    }
    let mut edges = Vec::new();
    for v in t.vertices() {
        let mut cur = t.parent(v);
        while let Some(a) = cur {
            edges.push((a, v));
            cur = t.parent(a);
        }
    }
    Graph::new(n, edges)
}

fn u_vertex_count(h: usize, d: usize, cap: usize) -> Result<usize> {
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..h {
        total = total
            .checked_add(level)
            .ok_or(Error::Overflow("U(h,d) size"))?;
        if total > cap {
            return Err(Error::CapExceeded {
                what: "U(h,d) vertex count",
                size: total,
                cap,
            });
        }
        level = level.checked_mul(d).ok_or(Error::Overflow("U(h,d) size"))?;
    }
    Ok(total)
}

/// The complete `d`-ary tree of vertex-height `h`, vertices numbered in BFS
/// order (root 0, children of `i` are `d*i+1 ..= d*i+d`).
pub fn complete_dary_tree(h: usize, d: usize) -> Result<RootedTree> {
    complete_dary_tree_with_cap(h, d, U_GRAPH_CAP)
}

pub fn complete_dary_tree_with_cap(h: usize, d: usize, cap: usize) -> Result<RootedTree> {
    if h == 0 || d == 0 {
        return Err(Error::Precondition("U(h,d) needs h >= 1 and d >= 1".into()));
    }
    let n = u_vertex_count(h, d, cap)?;
    let parent: Vec<_> = (0..n)
        .map(|i| if i == 0 { None } else { Some((i - 1) / d) })
        .collect();
    RootedTree::from_parent_vec(&parent)
}

/// `U(h, d)`: the closure of the complete `d`-ary tree of vertex-height `h`.
pub fn u_graph(h: usize, d: usize) -> Result<Graph> {
    u_graph_with_cap(h, d, U_GRAPH_CAP)
}

pub fn u_graph_with_cap(h: usize, d: usize, cap: usize) -> Result<Graph> {
    closure(&complete_dary_tree_with_cap(h, d, cap)?)
}

/// Index in `U(h, d)` of vertex `k` of `U(h-1, d)` placed in the subtree of
/// the root's child number `copy` (0-based).
pub fn u_copy_index(k: usize, copy: usize, d: usize) -> usize {
    let (mut start, mut size) = (0usize, 1usize);
    while k >= start + size {
        start += size;
        size *= d;
    }
    let pos = k - start;
    // Level t of the copy sits at level t+1 of U(h, d), which starts at start + size.
    start + size + copy * size + pos
}

// Bitmask search over connected vertex sets; local indices only.
struct DepthSearch {
    adj: Vec<u32>,
    memo: HashMap<u32, (u8, u8)>,
}

impl DepthSearch {
    fn new(g: &Graph, cap: usize) -> Result<Self> {
        if g.n() > cap.min(32) {
            return Err(Error::CapExceeded {
                what: "tree-depth vertex count",
                size: g.n(),
                cap: cap.min(32),
            });
        }
        let adj = (0..g.n())
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
            .collect();
        Ok(DepthSearch {
            adj,
            memo: HashMap::new(),
        })
    }

    fn components(&self, mut set: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while set != 0 {
            let mut comp = set & set.wrapping_neg();
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.adj[v] & set & !comp;
                comp |= new;
                frontier |= new;
            }
            set &= !comp;
            out.push(comp);
        }
        out
    }

    // Tree-depth of an arbitrary set.
    fn td(&mut self, set: u32) -> u8 {
        self.components(set)
            .into_iter()
            .map(|c| self.td_connected(c).0)
            .max()
            .unwrap_or(0)
    }

    // (depth, best root) for a connected set.
    fn td_connected(&mut self, set: u32) -> (u8, u8) {
        if set.count_ones() == 1 {
            return (1, set.trailing_zeros() as u8);
        }
        if let Some(&hit) = self.memo.get(&set) {
            return hit;
        }
        let mut best = (u8::MAX, 0u8);
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let d = 1 + self.td(set & !(1 << v));
            if d < best.0 {
                best = (d, v as u8);
            }
            // Any connected non-singleton has depth at least 2.
            if best.0 <= 2 {
                break;
            }
        }
        self.memo.insert(set, best);
        best
    }

    fn build(&mut self, set: u32, above: Option<usize>, parent: &mut Vec<Option<usize>>) {
        for comp in self.components(set) {
            let (_, r) = self.td_connected(comp);
            parent[r as usize] = above;
            self.build(comp & !(1 << r), Some(r as usize), parent);
        }
    }
}

fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Exact tree-depth with a witness forest whose closure contains `g`.
pub fn tree_depth(g: &Graph) -> Result<(usize, RootedTree)> {
    tree_depth_with_cap(g, TREE_DEPTH_CAP)
}

pub fn tree_depth_with_cap(g: &Graph, cap: usize) -> Result<(usize, RootedTree)> {
    let mut s = DepthSearch::new(g, cap)?;
    let all = full_mask(g.n());
    let value = s.td(all) as usize;
    let mut parent = vec![None; g.n()];
    s.build(all, None, &mut parent);
    Ok((value, RootedTree::from_parent_vec(&parent)?))
}

/// Exact connected tree-depth with a single rooted tree as witness.
///
/// A rooted tree spanning `V(G)` is a root `v` above a rooted forest of
/// `G - v`, so `ctd(G) = 1 + min_v td(G - v)`.
pub fn connected_tree_depth(g: &Graph) -> Result<(usize, RootedTree)> {
    connected_tree_depth_with_cap(g, TREE_DEPTH_CAP)
}

pub fn connected_tree_depth_with_cap(g: &Graph, cap: usize) -> Result<(usize, RootedTree)> {
    if g.n() == 0 {
        return Err(Error::Precondition(
            "connected tree-depth needs at least one vertex".into(),
        ));
    }
    let mut s = DepthSearch::new(g, cap)?;
    let all = full_mask(g.n());
    let (value, root) = if s.components(all).len() == 1 {
        let (d, r) = s.td_connected(all);
        (d as usize, r as usize)
    } else {
        (0..g.n())
            .map(|v| (1 + s.td(all & !(1 << v)) as usize, v))
            .min()
            .unwrap()
    };
    let mut parent = vec![None; g.n()];
    s.build(all & !(1 << root), Some(root), &mut parent);
    Ok((value, RootedTree::from_parent_vec(&parent)?))
}

/// Vertex set of a rooted tree as a `VertexSet` over a host of size `n`.
pub fn tree_vertex_set(t: &RootedTree, n: usize) -> Result<VertexSet> {
    VertexSet::from_vertices(n, t.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        let path = RootedTree::from_parent_vec(&[None, Some(0), Some(1)]).unwrap();
        assert_eq!(closure(&path).unwrap().edges(), &[(0, 1), (0, 2), (1, 2)]);
        let cherry = RootedTree::from_parent_vec(&[None, Some(0), Some(0)]).unwrap();
        assert_eq!(closure(&cherry).unwrap().edges(), &[(0, 1), (0, 2)]);
        let bin = complete_dary_tree(3, 2).unwrap();
        assert_eq!(closure(&bin).unwrap().m(), 10);
    }

    #[test]
    fn rejects_parent_cycles() {
        let mut p = BTreeMap::new();
        p.insert(0, Some(1));
        p.insert(1, Some(0));
        assert!(RootedTree::from_parents(p).is_err());
    }

    #[test]
    fn u_graph_sizes() {
        for d in 1..5 {
            let u = u_graph(1, d).unwrap();
            assert_eq!((u.n(), u.m()), (1, 0));
        }
        let star = u_graph(2, 3).unwrap();
        assert_eq!((star.n(), star.m()), (4, 3));
        let u32_ = u_graph(3, 2).unwrap();
        assert_eq!((u32_.n(), u32_.m()), (7, 10));
        assert_eq!(u_graph(4, 1).unwrap().m(), 6);
        assert!(matches!(u_graph(30, 10), Err(Error::CapExceeded { .. })));
        assert!(u_graph(0, 2).is_err());
    }

    #[test]
    fn copy_index_matches_subtree_layout() {
        for (h, d) in [(2, 1), (3, 2), (3, 3), (4, 2)] {
            let big = complete_dary_tree(h, d).unwrap();
            let small = complete_dary_tree(h - 1, d).unwrap();
            for copy in 0..d {
                for k in small.vertices() {
                    let img = u_copy_index(k, copy, d);
                    let want_parent = match small.parent(k) {
                        None => Some(0),
                        Some(p) => Some(u_copy_index(p, copy, d)),
                    };
                    assert_eq!(
                        big.parent(img),
                        want_parent,
                        "h={h} d={d} k={k} copy={copy}"
                    );
                }
            }
        }
    }

    #[test]
    fn tree_depth_examples() {
        let k5 = Graph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        assert_eq!(tree_depth(&k5).unwrap().0, 5);
        let p4 = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let (v, w) = tree_depth(&p4).unwrap();
        assert_eq!(v, 3);
        assert!(p4.is_subgraph_of(&closure(&w).unwrap()));
        assert_eq!(tree_depth(&Graph::empty(5)).unwrap().0, 1);
        assert_eq!(tree_depth(&Graph::empty(0)).unwrap().0, 0);
    }

    #[test]
    fn connected_tree_depth_examples() {
        let two_k2 = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let (v, w) = connected_tree_depth(&two_k2).unwrap();
        assert_eq!(v, 3);
        assert!(w.is_tree());
        assert_eq!(w.vertex_height(), 3);
        assert_eq!(connected_tree_depth(&Graph::empty(1)).unwrap().0, 1);
        assert!(connected_tree_depth(&Graph::empty(0)).is_err());
        for h in 1..=3 {
            for d in 1..=3 {
                let (v, _) = connected_tree_depth(&u_graph(h, d).unwrap()).unwrap();
                assert_eq!(v, h);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            tree_depth(&Graph::empty(21)),
            Err(Error::CapExceeded { .. })
        ));
        assert!(tree_depth_with_cap(&Graph::empty(21), 24).is_ok());
    }
}
