//! Brute-force oracles and verifiers for tiny instances.
//!
//! Nothing here shares code with the optimised searches it is used to check.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const ODD_MINOR_ORACLE_CAP: usize = 8;
pub const CLUSTERING_ORACLE_CAP: usize = 10;
pub const DEPTH_ORACLE_CAP: usize = 7;
pub const TREEWIDTH_ORACLE_CAP: usize = 8;

fn cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { what, size, cap });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringReport {
    pub ok: bool,
    pub num_colours: usize,
    pub max_cluster: usize,
    /// The largest monochromatic component when it is too big.
    pub offending: Option<Vec<usize>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks a colour assignment against a colour count and a clustering bound.
pub fn verify_colouring(
    g: &Graph,
    colours: &[usize],
    max_colours: usize,
    max_cluster: usize,
) -> Result<ColouringReport> {
    if colours.len() != g.n() {
        return Err(Error::Precondition(format!(
            "colouring covers {} of {} vertices",
            colours.len(),
            g.n()
        )));
    }
    let mut parent: Vec<usize> = (0..g.n()).collect();
    for &(u, v) in g.edges() {
        if colours[u] == colours[v] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..g.n() {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let largest = groups
        .into_values()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])));
    let mut distinct = colours.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let max_seen = largest.as_ref().map_or(0, Vec::len);
    let ok = distinct.len() <= max_colours && max_seen <= max_cluster;
    Ok(ColouringReport {
        ok,
        num_colours: distinct.len(),
        max_cluster: max_seen,
        offending: largest.filter(|c| c.len() > max_cluster),
    })
}

/// Minimum number of colours in a colouring of `g` with clustering at most `k`.
pub fn min_colours_with_clustering(g: &Graph, k: usize) -> Result<usize> {
    let n = g.n();
    cap("clustering oracle vertices", n, CLUSTERING_ORACLE_CAP)?;
    if n == 0 {
        return Ok(0);
    }
    if k == 0 {
        return Err(Error::Precondition("clustering must be at least 1".into()));
    }
    // Restricted growth strings enumerate each partition into colour classes once.
    let mut best = n;
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        if blocks < best && verify_colouring(g, &rgs, blocks, k)?.ok {
            best = blocks;
        }
        // Next restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(best);
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Proper 2-colourings (as bitmasks over `members`) of some spanning tree of
/// the subgraph induced by `members`, i.e. colourings whose bichromatic edges
/// connect the set.
fn tree_colourings(g: &Graph, members: &[usize]) -> Vec<u32> {
    let k = members.len();
    let pos = |v: usize| members.iter().position(|&x| x == v);
    let mut out = Vec::new();
    for c in 0u32..(1 << k) {
        let mut reached = 1u32;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for &w in g.neighbors(members[i]) {
                if let Some(j) = pos(w) {
                    let differ = (c >> i) & 1 != (c >> j) & 1;
                    if differ && reached & (1 << j) == 0 {
                        reached |= 1 << j;
                        stack.push(j);
                    }
                }
            }
        }
        if reached.count_ones() as usize == k {
            out.push(c);
        }
    }
    out
}

/// Exhaustive odd-minor test: every assignment of vertices to pattern
/// vertices (or to nothing), every realisable tree colouring per branch set,
/// then a search for monochromatic joins.
pub fn odd_minor_oracle(g: &Graph, h: &Graph) -> Result<bool> {
    cap("odd-minor oracle vertices", g.n(), ODD_MINOR_ORACLE_CAP)?;
    let n = g.n();
    let p = h.n();
    if p == 0 {
        return Ok(true);
    }
    if p > n {
        return Ok(false);
    }
    let mut label = vec![0usize; n];
    let mut memo: HashMap<Vec<usize>, Vec<u32>> = HashMap::new();
    loop {
        let mut sets = vec![Vec::new(); p];
        for v in 0..n {
            if label[v] < p {
                sets[label[v]].push(v);
            }
        }
        if sets.iter().all(|s| !s.is_empty()) {
            let options: Vec<Vec<u32>> = sets
                .iter()
                .map(|s| {
                    memo.entry(s.clone())
                        .or_insert_with(|| tree_colourings(g, s))
                        .clone()
                })
                .collect();
            if options.iter().all(|o| !o.is_empty()) && joins(g, h, &sets, &options) {
                return Ok(true);
            }
        }
        // Odometer over labels 0..=p.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            label[i] += 1;
            if label[i] <= p {
                break;
            }
            label[i] = 0;
            i += 1;
        }
    }
}

fn joins(g: &Graph, h: &Graph, sets: &[Vec<usize>], options: &[Vec<u32>]) -> bool {
    let mut colour_of = vec![None; g.n()];
    fn go(
        x: usize,
        g: &Graph,
        h: &Graph,
        sets: &[Vec<usize>],
        options: &[Vec<u32>],
        colour_of: &mut Vec<Option<bool>>,
    ) -> bool {
        if x == sets.len() {
            return true;
        }
        for &c in &options[x] {
            for (i, &v) in sets[x].iter().enumerate() {
                colour_of[v] = Some((c >> i) & 1 == 1);
            }
            let fine = h.neighbors(x).iter().filter(|&&y| y < x).all(|&y| {
                sets[x].iter().any(|&a| {
                    g.neighbors(a)
                        .iter()
                        .any(|&b| sets[y].contains(&b) && colour_of[a] == colour_of[b])
                })
            });
            if fine && go(x + 1, g, h, sets, options, colour_of) {
                return true;
            }
        }
        for &v in &sets[x] {
            colour_of[v] = None;
        }
        false
    }
    go(0, g, h, sets, options, &mut colour_of)
}

fn closure_contains(g: &Graph, parent: &[Option<usize>]) -> bool {
    let is_anc = |a: usize, mut v: usize| {
        while let Some(p) = parent[v] {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    };
    g.edges().iter().all(|&(u, v)| is_anc(u, v) || is_anc(v, u))
}

// Minimum vertex-height over all rooted forests (or trees) on V(G) whose
// closure contains G, by enumerating parent functions.
fn forest_height_oracle(g: &Graph, single_root: bool) -> Result<usize> {
    let n = g.n();
    cap("depth oracle vertices", n, DEPTH_ORACLE_CAP)?;
    if n == 0 {
        if single_root {
            return Err(Error::Precondition(
                "connected tree-depth of the empty graph".into(),
            ));
        }
        return Ok(0);
    }
    // choice[v] == n means v is a root.
    let mut choice = vec![0usize; n];
    let mut best = usize::MAX;
    loop {
        let parent: Vec<Option<usize>> = choice.iter().map(|&c| (c < n).then_some(c)).collect();
        let roots = parent.iter().filter(|p| p.is_none()).count();
        let valid = (0..n).all(|v| parent[v] != Some(v)) && (!single_root || roots == 1);
        if valid {
            // Height, or None on a cycle.
            let mut height = Some(0);
            for v in 0..n {
                let mut steps = 1;
                let mut x = v;
                while let Some(p) = parent[x] {
                    x = p;
                    steps += 1;
                    if steps > n {
                        break;
                    }
                }
                if steps > n {
                    height = None;
                    break;
                }
                height = height.map(|h: usize| h.max(steps));
            }
            if let Some(hh) = height {
                if hh < best && closure_contains(g, &parent) {
                    best = hh;
                }
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(best);
            }
            choice[i] += 1;
            if choice[i] <= n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Tree-depth by exhaustive search over rooted forests.
pub fn tree_depth_oracle(g: &Graph) -> Result<usize> {
    forest_height_oracle(g, false)
}

/// Connected tree-depth by exhaustive search over rooted trees.
pub fn connected_tree_depth_oracle(g: &Graph) -> Result<usize> {
    forest_height_oracle(g, true)
}

/// Treewidth as the minimum over all elimination orders of the largest
/// back-neighbourhood in the filled graph.
pub fn treewidth_oracle(g: &Graph) -> Result<usize> {
    let n = g.n();
    cap("treewidth oracle vertices", n, TREEWIDTH_ORACLE_CAP)?;
    if n == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = n - 1;
    let mut c = vec![0usize; n];
    best = best.min(elimination_width(g, &order));
    // Heap's algorithm.
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            best = best.min(elimination_width(g, &order));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut gone = vec![false; n];
    let mut width = 0;
    for &v in order {
        let nb: Vec<usize> = (0..n).filter(|&w| !gone[w] && adj[v][w]).collect();
        width = width.max(nb.len());
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    width
}
