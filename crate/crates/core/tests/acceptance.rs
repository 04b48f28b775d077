//! Acceptance checks. Run with `cargo test -p oddcluster --test acceptance`.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use oddcluster::colouring::{
    clustering_budget, colour_bounded_tw, colour_budget, colour_pipeline, OddModelCertificate,
    Outcome, PipelineOutcome,
};
use oddcluster::decomposition::{
    exact_treewidth, heuristic_decomposition, validate_decomposition, TreeDecomposition,
    EXACT_TREEWIDTH_CAP,
};
use oddcluster::eposa::{disjoint_or_hitting, Dichotomy, Target};
use oddcluster::generate::{complete, cycle, partial_ktree, path, random_graph, random_tree};
use oddcluster::graph::{connected_components, induced_subgraph, is_bipartite, Bipartition};
use oddcluster::model::{find_odd_model, is_nontrivial, verify_model, verify_odd_witness, Side};
use oddcluster::oracle::{
    connected_tree_depth_oracle, odd_minor_oracle, tree_depth_oracle, treewidth_oracle,
    verify_colouring,
};
use oddcluster::tree::{connected_tree_depth, tree_depth, u_graph};
use oddcluster::{Error, Graph, Result, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn decompose(g: &Graph) -> TreeDecomposition {
    if g.n() <= EXACT_TREEWIDTH_CAP {
        exact_treewidth(g).unwrap().1
    } else {
        heuristic_decomposition(g)
    }
}

fn check_certificate(
    g: &Graph,
    c: &OddModelCertificate,
    h: usize,
    d: usize,
) -> std::result::Result<(), String> {
    ensure(c.h == h && c.d == d, || {
        format!("certificate for U({}, {}) instead of U({h}, {d})", c.h, c.d)
    })?;
    ensure(c.model.pattern == u_graph(h, d).unwrap(), || {
        "wrong pattern".into()
    })?;
    verify_model(g, &c.model).map_err(|e| format!("model rejected: {e}"))?;
    verify_odd_witness(g, &c.model, &c.witness).map_err(|e| format!("witness rejected: {e}"))?;
    ensure(is_nontrivial(&c.model), || "trivial certificate".into())
}

fn graph_with_edges(n: usize, mask: u32) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    Graph::new(
        n,
        pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e),
    )
    .unwrap()
}

fn triangle_oracle(g: &Graph) -> impl FnMut(&VertexSet) -> Result<Option<Target<[usize; 3]>>> + '_ {
    move |r: &VertexSet| {
        Ok(all_triangles(g)
            .into_iter()
            .find(|t| t.iter().all(|&v| r.contains(v)))
            .map(|t| Target {
                support: VertexSet::from_vertices(g.n(), t).unwrap(),
                payload: t,
            }))
    }
}

fn all_triangles(g: &Graph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn triangle_equivalence() -> Check {
    let k3 = complete(3);
    let mut odd = 0;
    for mask in 0u32..1024 {
        let g = graph_with_edges(5, mask);
        let expected = matches!(is_bipartite(&g), Bipartition::OddCycle(_));
        let brute = odd_minor_oracle(&g, &k3).map_err(|e| e.to_string())?;
        let found = find_odd_model(&g, &k3, &g.all_vertices(), false).map_err(|e| e.to_string())?;
        ensure(brute == expected, || {
            format!("oracle disagrees with bipartiteness on mask {mask}")
        })?;
        ensure(found.is_some() == expected, || {
            format!("search disagrees on mask {mask}")
        })?;
        if let Some((m, w)) = found {
            verify_model(&g, &m).map_err(|e| format!("mask {mask}: {e}"))?;
            verify_odd_witness(&g, &m, &w).map_err(|e| format!("mask {mask}: {e}"))?;
            odd += 1;
        }
    }
    Ok(format!("1024 graphs, {odd} non-bipartite"))
}

fn hitting_set_bound() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut hit, mut disjoint) = (0, 0);
    for sample in 0..200 {
        let n = rng.gen_range(3..=15);
        let g = partial_ktree(n, 2, rng.gen(), rng.gen_range(0.5..=1.0));
        let (w, d) = exact_treewidth(&g).unwrap();
        let triangles = all_triangles(&g);
        for ell in 1..=3 {
            let mut oracle = triangle_oracle(&g);
            match disjoint_or_hitting(&g, &d, &mut oracle, ell).map_err(|e| e.to_string())? {
                Dichotomy::Hitting(s) => {
                    hit += 1;
                    ensure(s.len() <= (ell - 1) * (w + 1), || {
                        format!(
                            "sample {sample}, ell {ell}: hitting set {} over bound",
                            s.len()
                        )
                    })?;
                    ensure(
                        triangles.iter().all(|t| t.iter().any(|&v| s.contains(v))),
                        || format!("sample {sample}, ell {ell}: a triangle avoids the hitting set"),
                    )?;
                }
                Dichotomy::Disjoint(ts) => {
                    disjoint += 1;
                    ensure(ts.len() == ell, || {
                        format!("sample {sample}: {} targets for ell {ell}", ts.len())
                    })?;
                    for (i, a) in ts.iter().enumerate() {
                        ensure(triangles.contains(&a.payload), || {
                            "target is not a triangle".into()
                        })?;
                        for b in &ts[i + 1..] {
                            ensure(a.support.is_disjoint(&b.support), || {
                                format!("sample {sample}: overlapping targets")
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("600 runs, {hit} hitting, {disjoint} disjoint"))
}

fn colouring_budgets() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut coloured, mut certified) = (0, 0);
    for sample in 0..100 {
        let n = rng.gen_range(2..=40);
        let k = rng.gen_range(1..=3);
        let g = partial_ktree(n, k, rng.gen(), rng.gen_range(0.5..=1.0));
        let td = decompose(&g);
        for (h, d) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let ctx = || format!("sample {sample} (n={n}, k={k}), h={h}, d={d}");
            match colour_bounded_tw(&g, h, d, &td).map_err(|e| format!("{}: {e}", ctx()))? {
                Outcome::Coloured(r) => {
                    coloured += 1;
                    let report = verify_colouring(
                        &g,
                        &r.colouring.colour,
                        colour_budget(h).unwrap(),
                        clustering_budget(d, td.width).unwrap(),
                    )
                    .unwrap();
                    ensure(report.ok, || format!("{}: {report:?}", ctx()))?;
                }
                Outcome::Certificate(c) => {
                    certified += 1;
                    check_certificate(&g, &c, h, d).map_err(|e| format!("{}: {e}", ctx()))?;
                }
            }
        }
    }
    Ok(format!(
        "400 runs, {coloured} colourings, {certified} certificates"
    ))
}

fn base_case() -> Check {
    for n in 1..=50 {
        let g = Graph::empty(n);
        let td = decompose(&g);
        for d in 1..=3 {
            match colour_bounded_tw(&g, 1, d, &td).map_err(|e| e.to_string())? {
                Outcome::Coloured(r) => ensure(
                    r.colouring.num_colours == 1 && r.colouring.max_cluster == 1,
                    || format!("edgeless n={n}: {:?}", r.colouring),
                )?,
                Outcome::Certificate(_) => {
                    return Err(format!("edgeless n={n} produced a certificate"))
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tried = 0;
    while tried < 50 {
        let n = rng.gen_range(2..=30);
        let g = random_graph(n, rng.gen_range(0.05..0.5), rng.gen());
        if g.m() == 0 {
            continue;
        }
        tried += 1;
        match colour_bounded_tw(&g, 1, 1, &decompose(&g)).map_err(|e| e.to_string())? {
            Outcome::Certificate(c) => check_certificate(&g, &c, 1, 1)?,
            Outcome::Coloured(_) => {
                return Err(format!("graph with {} edges coloured at h=1", g.m()))
            }
        }
    }
    Ok("50 edgeless sizes x 3, 50 graphs with edges".into())
}

fn u_family_depth() -> Check {
    for h in 1..=3 {
        for d in 1..=3 {
            let u = u_graph(h, d).unwrap();
            let (c, _) = connected_tree_depth(&u).map_err(|e| e.to_string())?;
            ensure(c == h, || format!("ctd(U({h}, {d})) = {c}"))?;
        }
    }
    Ok("9 patterns".into())
}

fn depth_versus_connected_depth() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for sample in 0..500 {
        let n = rng.gen_range(1..=6);
        let pairs = n * (n - 1) / 2;
        let g = graph_with_edges(n, rng.gen_range(0..1u32 << pairs));
        let (td, _) = tree_depth(&g).unwrap();
        let (ctd, _) = connected_tree_depth(&g).unwrap();
        ensure(td == tree_depth_oracle(&g).unwrap(), || {
            format!("sample {sample}: td mismatch")
        })?;
        ensure(ctd == connected_tree_depth_oracle(&g).unwrap(), || {
            format!("sample {sample}: ctd mismatch")
        })?;
        let attaining = connected_components(&g)
            .iter()
            .filter(|c| tree_depth(&induced_subgraph(&g, c).unwrap().0).unwrap().0 == td)
            .count();
        let predicted = if attaining >= 2 { td + 1 } else { td };
        ensure(ctd == predicted, || {
            format!("sample {sample}: ctd {ctd}, td {td}, {attaining} maximal components")
        })?;
    }
    Ok("500 graphs".into())
}

fn bipartite_fixtures() -> Vec<Graph> {
    let mut out = vec![cycle(6), cycle(20), path(15), Graph::empty(5)];
    for s in 0..10 {
        out.push(random_tree(5 + 3 * s as usize, s));
    }
    // Grids.
    for (r, c) in [(3, 3), (4, 5), (2, 8)] {
        let id = |i: usize, j: usize| i * c + j;
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i + 1 < r {
                    edges.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    edges.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        out.push(Graph::new(r * c, edges).unwrap());
    }
    // Random bipartite graphs.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let (a, b) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                if rng.gen_bool(0.35) {
                    edges.push((i, a + j));
                }
            }
        }
        out.push(Graph::new(a + b, edges).unwrap());
    }
    out
}

fn pipeline_arithmetic() -> Check {
    let patterns = [("K2", complete(2)), ("P3", path(3)), ("K3", complete(3))];
    let mut runs = 0;
    for g in bipartite_fixtures() {
        let red = vec![Side::Red; g.n()];
        for (name, hp) in &patterns {
            let (c, _) = connected_tree_depth(hp).unwrap();
            let bound = 3 * (1usize << c) - 4;
            runs += 1;
            match colour_pipeline(&g, hp, Some(&red)).map_err(|e| format!("{name}: {e}"))? {
                PipelineOutcome::Coloured {
                    colouring, budgets, ..
                } => {
                    ensure(budgets.colours == bound, || {
                        format!("{name}: budget {} != {bound}", budgets.colours)
                    })?;
                    let total = verify_colouring(&g, &colouring.colour, bound, usize::MAX).unwrap();
                    ensure(total.ok, || {
                        format!("{name}: {} colours over {bound}", total.num_colours)
                    })?;
                    let side = verify_colouring(
                        &g,
                        &colouring.colour,
                        colour_budget(c).unwrap(),
                        clustering_budget(hp.n(), budgets.w).unwrap(),
                    )
                    .unwrap();
                    ensure(side.ok, || {
                        format!("{name}: red side outside its budgets: {side:?}")
                    })?;
                }
                PipelineOutcome::Certificate(cert) => check_certificate(&g, &cert, c, hp.n())?,
            }
        }
    }
    Ok(format!("{runs} pipeline runs"))
}

fn certificate_fuzz() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut certs, mut colourings, mut capped) = (0, 0, 0);
    for run in 0..1000 {
        let n = rng.gen_range(1..=30);
        let g = if rng.gen_bool(0.6) {
            partial_ktree(n, rng.gen_range(1..=3), rng.gen(), rng.gen_range(0.4..=1.0))
        } else {
            random_graph(n.min(16), rng.gen_range(0.1..0.6), rng.gen())
        };
        let (h, d) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let td = decompose(&g);
        ensure(validate_decomposition(&g, &td).is_ok(), || {
            format!("run {run}: invalid decomposition")
        })?;
        match colour_bounded_tw(&g, h, d, &td) {
            Ok(Outcome::Certificate(c)) => {
                certs += 1;
                check_certificate(&g, &c, h, d).map_err(|e| format!("run {run}: {e}"))?;
            }
            Ok(Outcome::Coloured(r)) => {
                colourings += 1;
                let rep = verify_colouring(
                    &g,
                    &r.colouring.colour,
                    colour_budget(h).unwrap(),
                    clustering_budget(d, td.width).unwrap(),
                )
                .unwrap();
                ensure(rep.ok, || format!("run {run}: {rep:?}"))?;
            }
            Err(Error::CapExceeded { .. }) => capped += 1,
            Err(e) => return Err(format!("run {run}: {e}")),
        }
    }
    Ok(format!(
        "{certs} certificates, {colourings} colourings, {capped} over caps"
    ))
}

fn treewidth_truth() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for sample in 0..500 {
        let n = rng.gen_range(1..=6);
        let pairs = n * (n - 1) / 2;
        let g = graph_with_edges(n, rng.gen_range(0..1u32 << pairs));
        let (w, d) = exact_treewidth(&g).unwrap();
        validate_decomposition(&g, &d).map_err(|e| format!("sample {sample}: {e}"))?;
        ensure(w == treewidth_oracle(&g).unwrap(), || {
            format!("sample {sample}: width {w}")
        })?;
        let forest = g.m() + connected_components(&g).len() == n;
        ensure((w <= 1) == forest, || {
            format!("sample {sample}: width {w}, forest {forest}")
        })?;
    }
    for s in 0..50 {
        let t = random_tree(rng.gen_range(2..=EXACT_TREEWIDTH_CAP), s);
        let (w, _) = exact_treewidth(&t).unwrap();
        ensure(w == 1, || {
            format!("tree on {} vertices has width {w}", t.n())
        })?;
    }
    Ok("500 graphs, 50 trees".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        (
            "1 triangle odd-minor iff non-bipartite",
            triangle_equivalence,
        ),
        ("2 packing or small hitting set", hitting_set_bound),
        ("3 colouring budgets on partial k-trees", colouring_budgets),
        ("4 base case", base_case),
        ("5 connected tree-depth of U(h, d)", u_family_depth),
        ("6 tree-depth vs connected tree-depth", depth_versus_connected_depth),
        ("7 pipeline colour total", pipeline_arithmetic),
        ("8 certificate fuzz", certificate_fuzz),
        ("9 treewidth ground truth", treewidth_truth),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}; {secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
