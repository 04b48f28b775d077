//! Layered clustered colouring of bounded-treewidth graphs.
//!
//! `colour_bounded_tw` either colours `G` with at most `3 * 2^(h-1) - 2`
//! colours and clustering at most `d*w + d - w` (where `w` is the width of
//! the supplied decomposition), or returns a non-trivial odd `U(h, d)`-model.
//!
//! For each component, vertices are layered by BFS distance from the
//! minimum-index vertex. In layer `i >= 1` with minimum vertex `u`, the
//! packing-or-hitting dichotomy runs over `V_i - u` for non-trivial odd
//! `U(h-1, d)`-models with `ell = d`. Finding `d` disjoint models yields the
//! certificate: the BFS tree below the layer is the branch set of the
//! dominant vertex. Otherwise the hitting set plus `u` gets one fresh colour
//! and the remainder of the layer is coloured recursively with `h - 1`.
//!
//! Palette layout for level `h`: two halves of `colour_budget(h-1) + 1`
//! slots, used by even and odd layers. Within a half the last slot is the
//! hitting-set colour and the rest belong to the recursion. The root layer
//! uses slot 0.

use std::collections::HashMap;

use crate::decomposition::{
    exact_treewidth_with_cap, heuristic_decomposition, validate_decomposition, TreeDecomposition,
    EXACT_TREEWIDTH_CAP,
};
use crate::eposa::{disjoint_or_hitting_in, Dichotomy, Target};
use crate::error::{Error, Result};
use crate::graph::{
    bfs_layers_in, components_in, induced_subgraph, layered_spanning_tree, Graph, Layering,
    VertexSet,
};
use crate::model::{
    find_odd_model_with, is_nontrivial, verify_model, verify_odd_witness, Model, ModelViolation,
    SearchOptions, Side, Witness, SEARCH_CAP,
};
use crate::tree::{
    connected_tree_depth_with_cap, u_copy_index, u_graph, RootedTree, TREE_DEPTH_CAP,
};

/// `3 * 2^(h-1) - 2`, the colour budget at level `h`.
pub fn colour_budget(h: usize) -> Result<usize> {
    if h == 0 {
        return Err(Error::Precondition("colour budget needs h >= 1".into()));
    }
    let pow = u32::try_from(h - 1)
        .ok()
        .and_then(|e| 1usize.checked_shl(e))
        .filter(|&p| p.leading_zeros() >= 2)
        .ok_or(Error::Overflow("colour budget"))?;
    Ok(3 * pow - 2)
}

/// `d*w + d - w`, which equals `(d - 1)(w + 1) + 1`.
pub fn clustering_budget(d: usize, w: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::Precondition("clustering budget needs d >= 1".into()));
    }
    (d - 1)
        .checked_mul(
            w.checked_add(1)
                .ok_or(Error::Overflow("clustering budget"))?,
        )
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow("clustering budget"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub h: usize,
    pub d: usize,
    pub w: usize,
    pub colours: usize,
    pub clustering: usize,
}

impl Budgets {
    pub fn new(h: usize, d: usize, w: usize) -> Result<Self> {
        Ok(Budgets {
            h,
            d,
            w,
            colours: colour_budget(h)?,
            clustering: clustering_budget(d, w)?,
        })
    }
}

/// A vertex colouring with dense colour ids `0..num_colours`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    pub colour: Vec<usize>,
    pub num_colours: usize,
    pub max_cluster: usize,
}

impl Colouring {
    /// Renumbers arbitrary colour labels densely, preserving their order, and
    /// measures the largest monochromatic component.
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Colouring {
        let mut used: Vec<usize> = labels.to_vec();
        used.sort_unstable();
        used.dedup();
        let colour: Vec<usize> = labels
            .iter()
            .map(|c| used.binary_search(c).unwrap())
            .collect();
        let max_cluster = monochromatic_components(g, &colour)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        Colouring {
            colour,
            num_colours: used.len(),
            max_cluster,
        }
    }
}

/// Vertex sets of the monochromatic components, each sorted, ordered by minimum.
pub fn monochromatic_components(g: &Graph, colour: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in g.neighbors(u) {
                if !seen[w] && colour[w] == colour[u] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A non-trivial odd `U(h, d)`-model with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddModelCertificate {
    pub h: usize,
    pub d: usize,
    pub model: Model,
    pub witness: Witness,
}

/// Checks pattern, model, witness and non-triviality.
pub fn verify_certificate(
    g: &Graph,
    cert: &OddModelCertificate,
) -> std::result::Result<(), ModelViolation> {
    let expected = u_graph(cert.h, cert.d).map_err(|_| ModelViolation::WrongBranchCount {
        expected: 0,
        sets: cert.model.branch_sets.len(),
        trees: cert.model.branch_trees.len(),
    })?;
    if expected != cert.model.pattern {
        return Err(ModelViolation::WrongBranchCount {
            expected: expected.n(),
            sets: cert.model.branch_sets.len(),
            trees: cert.model.branch_trees.len(),
        });
    }
    verify_model(g, &cert.model)?;
    verify_odd_witness(g, &cert.model, &cert.witness)?;
    if let Some(x) = cert.model.branch_sets.iter().position(|s| s.len() < 2) {
        return Err(ModelViolation::Trivial(x));
    }
    Ok(())
}

/// A successful colouring together with the bookkeeping of how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourReport {
    pub colouring: Colouring,
    pub budgets: Budgets,
    /// Palette slot of every vertex before dense renumbering.
    pub palette: Vec<usize>,
    /// Identifier of the (recursion scope, layer) cell in which each vertex
    /// received its colour. Monochromatic edges never cross cells.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Coloured(ColourReport),
    Certificate(OddModelCertificate),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColourOptions {
    /// Region cap handed to the odd-model search.
    pub search_cap: usize,
    /// Component cap for exact treewidth in the pipeline; larger components
    /// use the min-fill heuristic.
    pub exact_treewidth_cap: usize,
    /// Vertex cap for computing the connected tree-depth of the pattern.
    pub tree_depth_cap: usize,
}

impl Default for ColourOptions {
    fn default() -> Self {
        ColourOptions {
            search_cap: SEARCH_CAP,
            exact_treewidth_cap: EXACT_TREEWIDTH_CAP,
            tree_depth_cap: TREE_DEPTH_CAP,
        }
    }
}

/// Colours `g` within the level-`h` budgets or returns an odd `U(h, d)`
/// certificate.
pub fn colour_bounded_tw(g: &Graph, h: usize, d: usize, td: &TreeDecomposition) -> Result<Outcome> {
    colour_bounded_tw_with(g, h, d, td, ColourOptions::default())
}

pub fn colour_bounded_tw_with(
    g: &Graph,
    h: usize,
    d: usize,
    td: &TreeDecomposition,
    opts: ColourOptions,
) -> Result<Outcome> {
    if h == 0 || d == 0 {
        return Err(Error::Precondition("h and d must be at least 1".into()));
    }
    if let Err(v) = validate_decomposition(g, td) {
        return Err(Error::Precondition(format!("invalid decomposition: {v}")));
    }
    let budgets = Budgets::new(h, d, td.width)?;
    let mut run = Colourer {
        g,
        d,
        td,
        search_cap: opts.search_cap,
        palette: vec![usize::MAX; g.n()],
        cells: vec![usize::MAX; g.n()],
        next_cell: 0,
        patterns: HashMap::new(),
    };
    if let Some(cert) = run.colour(&g.all_vertices(), h, 0)? {
        return Ok(Outcome::Certificate(cert));
    }
    run.check_locality()?;
    let colouring = Colouring::from_labels(g, &run.palette);
    if colouring.num_colours > budgets.colours || colouring.max_cluster > budgets.clustering {
        return Err(Error::Inconsistent(format!(
            "colouring uses {} colours with clustering {}, budgets {} and {}",
            colouring.num_colours, colouring.max_cluster, budgets.colours, budgets.clustering
        )));
    }
    Ok(Outcome::Coloured(ColourReport {
        colouring,
        budgets,
        palette: run.palette,
        cells: run.cells,
    }))
}

struct Colourer<'a> {
    g: &'a Graph,
    d: usize,
    td: &'a TreeDecomposition,
    search_cap: usize,
    palette: Vec<usize>,
    cells: Vec<usize>,
    next_cell: usize,
    patterns: HashMap<usize, Graph>,
}

impl Colourer<'_> {
    fn pattern(&mut self, h: usize) -> Result<Graph> {
        if let Some(p) = self.patterns.get(&h) {
            return Ok(p.clone());
        }
        let p = u_graph(h, self.d)?;
        self.patterns.insert(h, p.clone());
        Ok(p)
    }

    fn paint(&mut self, vs: impl IntoIterator<Item = usize>, slot: usize) {
        let cell = self.next_cell;
        self.next_cell += 1;
        for v in vs {
            self.palette[v] = slot;
            self.cells[v] = cell;
        }
    }

    // Colours `region` with slots `base .. base + colour_budget(h)`.
    fn colour(
        &mut self,
        region: &VertexSet,
        h: usize,
        base: usize,
    ) -> Result<Option<OddModelCertificate>> {
        let g = self.g;
        if h == 1 {
            if let Some((u, v)) = g.edge_within(region) {
                return Ok(Some(single_edge_certificate(g, self.d, u, v)?));
            }
            self.paint(region.iter(), base);
            return Ok(None);
        }
        let half = colour_budget(h - 1)? + 1;
        let inner = self.pattern(h - 1)?;
        for comp in components_in(g, region) {
            let root = comp.min().unwrap();
            let layering = bfs_layers_in(g, &comp, root)?;
            self.paint([root], base);
            for i in 1..layering.depth() {
                let layer_base = base + (i % 2) * half;
                let u = layering.layers[i][0];
                let mut domain =
                    VertexSet::from_vertices(g.n(), layering.layers[i].iter().copied())?;
                domain.remove(u);
                let local_td = self.td.restrict(&domain);
                let opts = SearchOptions {
                    require_nontrivial: true,
                    cap: self.search_cap,
                };
                let mut oracle = |r: &VertexSet| -> Result<Option<Target<(Model, Witness)>>> {
                    Ok(
                        find_odd_model_with(g, &inner, r, opts)?.map(|(m, w)| Target {
                            support: m.support(g.n()),
                            payload: (m, w),
                        }),
                    )
                };
                match disjoint_or_hitting_in(g, &local_td, &domain, &mut oracle, self.d)? {
                    Dichotomy::Disjoint(targets) => {
                        let tree = layered_spanning_tree(g, &layering, i, u)?;
                        let subs: Vec<_> = targets.into_iter().map(|t| t.payload).collect();
                        let cert =
                            assemble_certificate(g, &layering, i, u, &tree, &subs, h, self.d)?;
                        return Ok(Some(cert));
                    }
                    Dichotomy::Hitting(hit) => {
                        let rest = domain.difference(&hit);
                        self.paint(hit.iter().chain([u]), layer_base + half - 1);
                        if let Some(c) = self.colour(&rest, h - 1, layer_base)? {
                            return Err(Error::Inconsistent(format!(
                                "found a U({}, {}) model on {:?} inside a region the hitting set certified clean",
                                c.h,
                                c.d,
                                c.model.support(g.n())
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn check_locality(&self) -> Result<()> {
        for &(u, v) in self.g.edges() {
            if self.palette[u] == self.palette[v] && self.cells[u] != self.cells[v] {
                return Err(Error::Inconsistent(format!(
                    "monochromatic edge {u}-{v} joins different layer cells"
                )));
            }
        }
        Ok(())
    }
}

fn single_edge_certificate(g: &Graph, d: usize, u: usize, v: usize) -> Result<OddModelCertificate> {
    let mut witness = Witness::new(g.n());
    witness.colour[u] = Some(Side::Red);
    witness.colour[v] = Some(Side::Blue);
    Ok(OddModelCertificate {
        h: 1,
        d,
        model: Model {
            pattern: u_graph(1, d)?,
            branch_sets: vec![vec![u.min(v), u.max(v)]],
            branch_trees: vec![vec![(u.min(v), u.max(v))]],
        },
        witness,
    })
}

/// Combines `d` disjoint non-trivial odd `U(h-1, d)`-models inside layer `i`
/// (avoiding `u`) with the layered tree `tree` into a non-trivial odd
/// `U(h, d)`-model. The tree is coloured by layer parity with layer `i - 1`
/// red; sub-model colours are kept.
#[allow(clippy::too_many_arguments)]
pub fn assemble_certificate(
    g: &Graph,
    layering: &Layering,
    i: usize,
    u: usize,
    tree: &RootedTree,
    submodels: &[(Model, Witness)],
    h: usize,
    d: usize,
) -> Result<OddModelCertificate> {
    let bad = |msg: String| Err(Error::Precondition(msg));
    if h < 2 || i == 0 || submodels.len() != d {
        return bad(format!(
            "need h >= 2, i >= 1 and {d} sub-models, got h={h}, i={i}, {}",
            submodels.len()
        ));
    }
    if layering.layer_of(u) != Some(i) {
        return bad(format!("{u} is not in layer {i}"));
    }
    let expected: Vec<usize> = layering.layers[..i]
        .iter()
        .flatten()
        .copied()
        .chain([u])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if tree.vertices().collect::<Vec<_>>() != expected || tree.root() != Some(layering.root) {
        return bad("tree does not span the layers below the chosen vertex".into());
    }
    for v in tree.vertices() {
        if let Some(p) = tree.parent(v) {
            let (lv, lp) = (layering.layer_of(v).unwrap(), layering.layer_of(p).unwrap());
            if !g.has_edge(v, p) || lp + 1 != lv {
                return bad(format!("tree edge {p}-{v} does not step down one layer"));
            }
        }
    }
    let small = u_graph(h - 1, d)?;
    let mut used = VertexSet::new(g.n());
    for (j, (m, w)) in submodels.iter().enumerate() {
        if m.pattern != small {
            return bad(format!(
                "sub-model {j} does not have pattern U({}, {d})",
                h - 1
            ));
        }
        if let Err(e) = verify_model(g, m).and_then(|_| verify_odd_witness(g, m, w)) {
            return bad(format!("sub-model {j}: {e}"));
        }
        if !is_nontrivial(m) {
            return bad(format!("sub-model {j} is trivial"));
        }
        for v in m.covered() {
            if layering.layer_of(v) != Some(i) || v == u || used.contains(v) {
                return bad(format!(
                    "sub-model {j} uses vertex {v} outside layer {i} minus {u} or twice"
                ));
            }
            used.insert(v);
        }
    }
    let pattern = u_graph(h, d)?;
    let mut branch_sets = vec![Vec::new(); pattern.n()];
    let mut branch_trees = vec![Vec::new(); pattern.n()];
    let mut witness = Witness::new(g.n());
    branch_sets[0] = expected;
    branch_trees[0] = tree.edges();
    for v in tree.vertices() {
        let l = layering.layer_of(v).unwrap();
        witness.colour[v] = Some(if (i + 1 - l).is_multiple_of(2) {
            Side::Red
        } else {
            Side::Blue
        });
    }
    for (j, (m, w)) in submodels.iter().enumerate() {
        for x in 0..small.n() {
            let target = u_copy_index(x, j, d);
            branch_sets[target] = m.branch_sets[x].clone();
            branch_trees[target] = m.branch_trees[x].clone();
        }
        for v in m.covered() {
            witness.colour[v] = w.colour[v];
        }
    }
    let cert = OddModelCertificate {
        h,
        d,
        model: Model {
            pattern,
            branch_sets,
            branch_trees,
        },
        witness,
    };
    if let Err(e) = verify_certificate(g, &cert) {
        return Err(Error::Inconsistent(format!(
            "assembled certificate rejected: {e}"
        )));
    }
    Ok(cert)
}

/// Result of the pipeline: a colouring with the overall budgets, or a
/// certificate in host labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineOutcome {
    Coloured {
        colouring: Colouring,
        budgets: Budgets,
        palette: Vec<usize>,
    },
    Certificate(OddModelCertificate),
}

fn decompose(g: &Graph, exact_cap: usize) -> Result<TreeDecomposition> {
    match exact_treewidth_with_cap(g, exact_cap) {
        Ok((_, td)) => Ok(td),
        Err(Error::CapExceeded { .. }) => Ok(heuristic_decomposition(g)),
        Err(e) => Err(e),
    }
}

/// Runs the colouring against the pattern `U(ctd(H), |V(H)|)`.
///
/// Without a partition the whole graph is decomposed and coloured directly.
/// With a red/blue partition every monochromatic component of the partition
/// is coloured separately, red components from slots `0..f(h)` and blue ones
/// from `f(h)..2f(h)`, so at most `3 * 2^ctd(H) - 4` colours are used.
pub fn colour_pipeline(
    g: &Graph,
    pattern: &Graph,
    partition: Option<&[Side]>,
) -> Result<PipelineOutcome> {
    colour_pipeline_with(g, pattern, partition, ColourOptions::default())
}

pub fn colour_pipeline_with(
    g: &Graph,
    pattern: &Graph,
    partition: Option<&[Side]>,
    opts: ColourOptions,
) -> Result<PipelineOutcome> {
    let (h, _) = connected_tree_depth_with_cap(pattern, opts.tree_depth_cap)?;
    let d = pattern.n();
    let Some(sides) = partition else {
        let td = decompose(g, opts.exact_treewidth_cap)?;
        return Ok(match colour_bounded_tw_with(g, h, d, &td, opts)? {
            Outcome::Coloured(r) => PipelineOutcome::Coloured {
                colouring: r.colouring,
                budgets: r.budgets,
                palette: r.palette,
            },
            Outcome::Certificate(c) => PipelineOutcome::Certificate(c),
        });
    };
    if sides.len() != g.n() {
        return Err(Error::Precondition(format!(
            "partition has {} entries for {} vertices",
            sides.len(),
            g.n()
        )));
    }
    let per_side = colour_budget(h)?;
    let mut palette = vec![usize::MAX; g.n()];
    let mut max_width = 0;
    for (offset, side) in [(0, Side::Red), (per_side, Side::Blue)] {
        let members = VertexSet::from_vertices(g.n(), (0..g.n()).filter(|&v| sides[v] == side))?;
        for comp in components_in(g, &members) {
            let (local, map) = induced_subgraph(g, &comp)?;
            let td = decompose(&local, opts.exact_treewidth_cap)?;
            max_width = max_width.max(td.width);
            match colour_bounded_tw_with(&local, h, d, &td, opts)? {
                Outcome::Coloured(r) => {
                    for (i, &v) in map.iter().enumerate() {
                        palette[v] = offset + r.palette[i];
                    }
                }
                Outcome::Certificate(c) => {
                    return Ok(PipelineOutcome::Certificate(lift_certificate(g, c, &map)));
                }
            }
        }
    }
    let colouring = Colouring::from_labels(g, &palette);
    let mut budgets = Budgets::new(h, d, max_width)?;
    budgets.colours = 2 * per_side;
    Ok(PipelineOutcome::Coloured {
        colouring,
        budgets,
        palette,
    })
}

fn lift_certificate(g: &Graph, c: OddModelCertificate, map: &[usize]) -> OddModelCertificate {
    let mut witness = Witness::new(g.n());
    for (i, &v) in map.iter().enumerate() {
        witness.colour[v] = c.witness.colour[i];
    }
    let model = Model {
        pattern: c.model.pattern,
        branch_sets: c
            .model
            .branch_sets
            .iter()
            .map(|s| s.iter().map(|&v| map[v]).collect())
            .collect(),
        branch_trees: c
            .model
            .branch_trees
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
                    .collect()
            })
            .collect(),
    };
    OddModelCertificate {
        h: c.h,
        d: c.d,
        model,
        witness,
    }
}
