//! JSON report shapes.

use oddcluster::colouring::{Budgets, Colouring, OddModelCertificate};
use oddcluster::decomposition::TreeDecomposition;
use oddcluster::model::{Model, Side, Witness};
use oddcluster::tree::RootedTree;
use oddcluster::Graph;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetsJson {
    pub colours: usize,
    pub clustering: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringJson {
    pub colours: Vec<usize>,
    pub num_colours: usize,
    pub max_cluster: usize,
    pub budgets: BudgetsJson,
}

impl ColouringJson {
    pub fn new(c: &Colouring, b: &Budgets) -> Self {
        ColouringJson {
            colours: c.colour.clone(),
            num_colours: c.num_colours,
            max_cluster: c.max_cluster,
            budgets: BudgetsJson {
                colours: b.colours,
                clustering: b.clustering,
            },
        }
    }
}

/// A model with its witness. `h` and `d` are present for `U(h, d)`
/// certificates; the witness has one entry per vertex of `G`: 0 red, 1 blue,
/// `null` outside the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub branch_sets: Vec<Vec<usize>>,
    pub tree_edges: Vec<Vec<[usize; 2]>>,
    pub witness: Vec<Option<u8>>,
}

impl CertificateJson {
    pub fn from_model(m: &Model, w: &Witness, hd: Option<(usize, usize)>) -> Self {
        CertificateJson {
            h: hd.map(|x| x.0),
            d: hd.map(|x| x.1),
            branch_sets: m.branch_sets.clone(),
            tree_edges: m
                .branch_trees
                .iter()
                .map(|t| t.iter().map(|&(a, b)| [a, b]).collect())
                .collect(),
            witness: w.colour.iter().map(|c| c.map(Side::bit)).collect(),
        }
    }

    pub fn from_certificate(c: &OddModelCertificate) -> Self {
        Self::from_model(&c.model, &c.witness, Some((c.h, c.d)))
    }

    /// Rebuilds the model against `pattern` for a graph on `n` vertices.
    pub fn to_model(&self, pattern: Graph, n: usize) -> Result<(Model, Witness), String> {
        if self.witness.len() != n {
            return Err(format!(
                "witness has {} entries for {n} vertices",
                self.witness.len()
            ));
        }
        let colour = self
            .witness
            .iter()
            .enumerate()
            .map(|(v, c)| match c {
                None => Ok(None),
                Some(b) => Side::from_bit(*b)
                    .map(Some)
                    .ok_or_else(|| format!("witness entry {v} is {b}, expected 0 or 1")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let model = Model {
            pattern,
            branch_sets: self.branch_sets.clone(),
            branch_trees: self
                .tree_edges
                .iter()
                .map(|t| t.iter().map(|&[a, b]| (a, b)).collect())
                .collect(),
        };
        Ok((model, Witness { colour }))
    }
}

/// A certificate file: either a bare certificate or an `odd-minor` report.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum CertificateFile {
    Bare(CertificateJson),
    Report(OddMinorJson),
}

impl CertificateFile {
    pub fn into_certificate(self) -> Result<CertificateJson, String> {
        match self {
            CertificateFile::Bare(c) => Ok(c),
            CertificateFile::Report(r) => r
                .certificate
                .ok_or_else(|| "report contains no certificate".to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddMinorJson {
    pub found: bool,
    pub certificate: Option<CertificateJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
    pub bags: Vec<Vec<usize>>,
    pub width: usize,
}

impl DecompositionJson {
    pub fn new(d: &TreeDecomposition) -> Self {
        DecompositionJson {
            nodes: d.nodes(),
            edges: d.tree_edges().into_iter().map(|(a, b)| [a, b]).collect(),
            bags: d.bags.clone(),
            width: d.width,
        }
    }

    /// Structural conversion; the stated width is kept so validation can
    /// compare it with the bags.
    pub fn to_decomposition(&self) -> Result<TreeDecomposition, String> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        let mut d = TreeDecomposition::from_edges(self.nodes, &edges, self.bags.clone())
            .map_err(|e| e.to_string())?;
        d.width = self.width;
        Ok(d)
    }
}

/// Result of `metric`: the value plus a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricJson {
    pub metric: String,
    pub value: usize,
    /// Parent of each vertex in the witnessing forest or tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parents: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionJson>,
}

pub fn parents(t: &RootedTree, n: usize) -> Vec<Option<usize>> {
    (0..n).map(|v| t.parent(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use oddcluster::decomposition::exact_treewidth;
    use oddcluster::model::find_odd_model;

    #[test]
    fn certificate_round_trip() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (m, w) = find_odd_model(&g, &k3, &g.all_vertices(), false)
            .unwrap()
            .unwrap();
        let j = CertificateJson::from_model(&m, &w, None);
        let text = serde_json::to_string(&j).unwrap();
        assert!(!text.contains("\"h\""));
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model(k3, 5).unwrap(), (m, w));
        assert!(back.to_model(Graph::empty(3), 4).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let (_, d) = exact_treewidth(&g).unwrap();
        let j = DecompositionJson::new(&d);
        let back = j.to_decomposition().unwrap();
        assert_eq!(back.bags, d.bags);
        assert_eq!(back.width, 2);
    }
}
