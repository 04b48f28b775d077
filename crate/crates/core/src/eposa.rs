//! Constructive packing-or-hitting dichotomy over a tree-decomposition.
//!
//! Given an exact oracle for a family of connected subgraphs, either `ell`
//! members with pairwise disjoint supports are found, or a set of at most
//! `(ell - 1) * (width + 1)` vertices meets every member.
//!
//! Procedure: walk the rooted decomposition in post-order and stop at the
//! first node `x` whose subtree (bags below and including `x`, minus deleted
//! vertices) contains a target. Record the target, add the bag at `x` to the
//! hitting set and delete the whole subtree from the working region. A member
//! avoiding the hitting set either lies in a child subtree of `x`, which the
//! earlier queries ruled out, or misses the subtree altogether and survives
//! into the next round; so when the oracle finally comes back empty the
//! collected bags hit everything.

use std::collections::HashMap;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{is_connected_in, Graph, VertexSet};

/// A member of the family: its vertex support plus an opaque payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target<P> {
    pub support: VertexSet,
    pub payload: P,
}

/// Exact oracle: returns some target whose support lies inside `region`, or
/// `None` if the family has no member there.
pub trait TargetOracle<P> {
    fn find(&mut self, region: &VertexSet) -> Result<Option<Target<P>>>;
}

impl<P, F> TargetOracle<P> for F
where
    F: FnMut(&VertexSet) -> Result<Option<Target<P>>>,
{
    fn find(&mut self, region: &VertexSet) -> Result<Option<Target<P>>> {
        self(region)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy<P> {
    Disjoint(Vec<Target<P>>),
    Hitting(VertexSet),
}

/// Query memo for one run, with a check that no region certified empty ever
/// contains a target found later.
struct Memo<'o, P, O> {
    g: &'o Graph,
    oracle: &'o mut O,
    seen: HashMap<VertexSet, Option<Target<P>>>,
    empty: Vec<VertexSet>,
}

impl<'o, P: Clone, O: TargetOracle<P>> Memo<'o, P, O> {
    fn query(&mut self, region: &VertexSet) -> Result<Option<Target<P>>> {
        if let Some(hit) = self.seen.get(region) {
            return Ok(hit.clone());
        }
        if self.empty.iter().any(|e| region.is_subset(e)) {
            self.seen.insert(region.clone(), None);
            return Ok(None);
        }
        let found = self.oracle.find(region)?;
        match &found {
            Some(t) => {
                if !t.support.is_subset(region) || !is_connected_in(self.g, &t.support) {
                    return Err(Error::Inconsistent(
                        "oracle returned a target outside the region or disconnected".into(),
                    ));
                }
            }
            None => self.empty.push(region.clone()),
        }
        self.seen.insert(region.clone(), found.clone());
        Ok(found)
    }

    // Re-asks the underlying oracle, bypassing the memo.
    fn recheck(&mut self, region: &VertexSet) -> Result<Option<Target<P>>> {
        self.oracle.find(region)
    }
}

/// Dichotomy over all of `V(G)`.
pub fn disjoint_or_hitting<P: Clone, O: TargetOracle<P>>(
    g: &Graph,
    d: &TreeDecomposition,
    oracle: &mut O,
    ell: usize,
) -> Result<Dichotomy<P>> {
    disjoint_or_hitting_in(g, d, &g.all_vertices(), oracle, ell)
}

/// Dichotomy restricted to targets inside `domain`. In the hitting arm the
/// returned set lies in `domain` and the oracle finds nothing in
/// `domain - S`.
pub fn disjoint_or_hitting_in<P: Clone, O: TargetOracle<P>>(
    g: &Graph,
    d: &TreeDecomposition,
    domain: &VertexSet,
    oracle: &mut O,
    ell: usize,
) -> Result<Dichotomy<P>> {
    if ell == 0 {
        return Err(Error::Precondition("ell must be at least 1".into()));
    }
    let n = g.n();
    let post = d.post_order();
    let children = d.children();
    // Union of bags over each node's subtree.
    let mut below: Vec<VertexSet> = vec![VertexSet::new(n); d.nodes()];
    for &x in &post {
        let mut u = VertexSet::from_vertices(n, d.bags[x].iter().copied())?;
        for &c in &children[x] {
            u.union_with(&below[c]);
        }
        below[x] = u;
    }
    let mut memo = Memo {
        g,
        oracle,
        seen: HashMap::new(),
        empty: Vec::new(),
    };
    let mut region = domain.clone();
    let mut hitting = VertexSet::new(n);
    let mut found = Vec::new();
    'rounds: while found.len() < ell {
        for &x in &post {
            let sub = below[x].intersection(&region);
            if sub.is_empty() {
                continue;
            }
            if let Some(t) = memo.query(&sub)? {
                for &v in &d.bags[x] {
                    if region.contains(v) {
                        hitting.insert(v);
                    }
                }
                region.difference_with(&below[x]);
                found.push(t);
                continue 'rounds;
            }
        }
        break;
    }
    if found.len() == ell {
        return Ok(Dichotomy::Disjoint(found));
    }
    let bound = (ell - 1) * (d.width + 1);
    if hitting.len() > bound {
        return Err(Error::Inconsistent(format!(
            "hitting set of size {} exceeds bound {bound}",
            hitting.len()
        )));
    }
    if memo.recheck(&domain.difference(&hitting))?.is_some() {
        return Err(Error::Inconsistent(
            "a target survives outside the hitting set".into(),
        ));
    }
    Ok(Dichotomy::Hitting(hitting))
}
