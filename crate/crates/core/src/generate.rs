//! Deterministic graph generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// `C_n` for `n >= 3`; smaller `n` gives a path.
pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

/// Star on `n` vertices: centre 0, leaves `1..n`.
pub fn star(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (0, i))).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly relabelled random recursive tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let edges: Vec<_> = (1..n)
        .map(|v| {
            let p = r.gen_range(0..v);
            (perm[p], perm[v])
        })
        .collect();
    Graph::new(n, edges).unwrap()
}

/// Erdos-Renyi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Random partial `k`-tree: start from a `(k+1)`-clique, attach each further
/// vertex to a uniformly chosen existing `k`-clique, then keep each edge
/// independently with probability `keep`. Treewidth is at most `k`.
/// Vertex labels are shuffled.
pub fn partial_ktree(n: usize, k: usize, seed: u64, keep: f64) -> Graph {
    let mut r = rng(seed);
    let base = n.min(k + 1);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..base {
        for j in i + 1..base {
            edges.push((i, j));
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    if base == k + 1 && k > 0 {
        for skip in 0..base {
            cliques.push((0..base).filter(|&x| x != skip).collect());
        }
    }
    for v in base..n {
        if k == 0 {
            continue;
        }
        let c = cliques[r.gen_range(0..cliques.len())].clone();
        for &x in &c {
            edges.push((x, v));
        }
        for skip in 0..k {
            let mut nc: Vec<usize> = c
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &x)| x)
                .collect();
            nc.push(v);
            cliques.push(nc);
        }
    }
    let keep = keep.clamp(0.0, 1.0);
    edges.retain(|_| r.gen_bool(keep));
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    Graph::new(n, edges.into_iter().map(|(a, b)| (perm[a], perm[b]))).unwrap()
}
