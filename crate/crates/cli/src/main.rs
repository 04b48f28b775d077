use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oddcluster::colouring::{
    colour_bounded_tw_with, colour_pipeline_with, verify_certificate, OddModelCertificate, Outcome,
    PipelineOutcome,
};
use oddcluster::decomposition::{
    exact_treewidth_with_cap, heuristic_decomposition, validate_decomposition, TreeDecomposition,
};
use oddcluster::generate;
use oddcluster::model::{find_odd_model_with, verify_model, verify_odd_witness, SearchOptions};
use oddcluster::oracle::verify_colouring;
use oddcluster::tree::{
    connected_tree_depth_with_cap, tree_depth_with_cap, u_graph, u_graph_with_cap, U_GRAPH_CAP,
};
use oddcluster::{Error, Graph};
use oddcluster_cli::caps::Caps;
use oddcluster_cli::format::{parse_graph, parse_partition, write_graph};
use oddcluster_cli::json::{
    parents, CertificateFile, CertificateJson, ColouringJson, DecompositionJson, MetricJson,
    OddMinorJson,
};

const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_CERTIFICATE: u8 = 3;

/// Odd-minor models, tree-depth and clustered colouring.
#[derive(Parser)]
#[command(name = "oddcluster", version)]
struct Cli {
    /// Resource caps: `N` sets the model-search cap, or give
    /// `search=N,treewidth=N,depth=N`.
    #[arg(long, global = true, env = "ODDCLUSTER_CAP", default_value = "")]
    cap: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Compute tree-depth, connected tree-depth or treewidth.
    Metric {
        #[arg(value_enum)]
        which: Metric,
        graph: PathBuf,
        /// For `tw`: use the min-fill heuristic instead of the exact solver.
        #[arg(long)]
        heuristic: bool,
    },
    /// Search for an odd H-model in G. Exit 0 found, 1 not found.
    OddMinor {
        graph: PathBuf,
        pattern: PathBuf,
        /// Require every branch set to have at least two vertices.
        #[arg(long)]
        nontrivial: bool,
    },
    /// Colour G against U(h, d). Exit 0 colouring, 3 certificate.
    Colour {
        graph: PathBuf,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
        /// Decomposition JSON; computed when omitted.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Colour G against U(ctd(H), |V(H)|), optionally per side of a partition.
    Pipeline {
        graph: PathBuf,
        pattern: PathBuf,
        /// File with one line of `r`/`b` characters.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Check a colouring, model or decomposition. Exit 0 pass, 1 fail.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Closure of the complete d-ary tree of vertex-height h.
    U {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        d: usize,
    },
    /// Random partial k-tree.
    PartialKtree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of keeping each edge of the k-tree.
        #[arg(long, default_value_t = 0.8)]
        keep: f64,
    },
    Cycle {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Star on n vertices with centre 0.
    Star {
        #[arg(long)]
        n: usize,
    },
    Path {
        #[arg(long)]
        n: usize,
    },
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Td,
    Ctd,
    Tw,
}

#[derive(Subcommand)]
enum Verify {
    /// Check a colouring JSON against colour and clustering bounds.
    Colouring {
        graph: PathBuf,
        colouring: PathBuf,
        /// Defaults to the budget recorded in the file.
        #[arg(long)]
        max_colours: Option<usize>,
        /// Defaults to the budget recorded in the file.
        #[arg(long)]
        max_cluster: Option<usize>,
    },
    /// Check a certificate JSON. Without `--pattern` the file must name `h`
    /// and `d` and the pattern is U(h, d), which also requires non-triviality.
    Model {
        graph: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long)]
        nontrivial: bool,
    },
    /// Check a decomposition JSON.
    Decomposition {
        graph: PathBuf,
        decomposition: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serialisable")
    );
}

fn decompose(g: &Graph, caps: &Caps) -> Result<TreeDecomposition, Error> {
    match exact_treewidth_with_cap(g, caps.treewidth) {
        Ok((_, d)) => Ok(d),
        Err(Error::CapExceeded { .. }) => Ok(heuristic_decomposition(g)),
        Err(e) => Err(e),
    }
}

fn report_certificate(c: &OddModelCertificate) -> u8 {
    print_json(&CertificateJson::from_certificate(c));
    EXIT_CERTIFICATE
}

fn run(cli: Cli) -> Result<u8, String> {
    let caps = Caps::parse(&cli.cap).map_err(|e| format!("--cap / ODDCLUSTER_CAP: {e}"))?;
    let lib = |e: Error| e.to_string();
    match cli.command {
        Command::Gen { family } => {
            let g = match family {
                Family::U { h, d } => u_graph_with_cap(h, d, U_GRAPH_CAP).map_err(lib)?,
                Family::PartialKtree { n, k, seed, keep } => {
                    generate::partial_ktree(n, k, seed, keep)
                }
                Family::Cycle { n } => generate::cycle(n),
                Family::Complete { n } => generate::complete(n),
                Family::Star { n } => generate::star(n),
                Family::Path { n } => generate::path(n),
                Family::Tree { n, seed } => generate::random_tree(n, seed),
            };
            print!("{}", write_graph(&g));
            Ok(0)
        }
        Command::Metric {
            which,
            graph,
            heuristic,
        } => {
            let g = load_graph(&graph)?;
            let out = match which {
                Metric::Td => {
                    let (value, t) = tree_depth_with_cap(&g, caps.depth).map_err(lib)?;
                    MetricJson {
                        metric: "td".into(),
                        value,
                        parents: Some(parents(&t, g.n())),
                        decomposition: None,
                    }
                }
                Metric::Ctd => {
                    let (value, t) = connected_tree_depth_with_cap(&g, caps.depth).map_err(lib)?;
                    MetricJson {
                        metric: "ctd".into(),
                        value,
                        parents: Some(parents(&t, g.n())),
                        decomposition: None,
                    }
                }
                Metric::Tw => {
                    let d = if heuristic {
                        heuristic_decomposition(&g)
                    } else {
                        exact_treewidth_with_cap(&g, caps.treewidth).map_err(lib)?.1
                    };
                    MetricJson {
                        metric: if heuristic { "tw-upper-bound" } else { "tw" }.into(),
                        value: d.width,
                        parents: None,
                        decomposition: Some(DecompositionJson::new(&d)),
                    }
                }
            };
            print_json(&out);
            Ok(0)
        }
        Command::OddMinor {
            graph,
            pattern,
            nontrivial,
        } => {
            let g = load_graph(&graph)?;
            let h = load_graph(&pattern)?;
            let opts = SearchOptions {
                require_nontrivial: nontrivial,
                cap: caps.search,
            };
            let found = find_odd_model_with(&g, &h, &g.all_vertices(), opts).map_err(lib)?;
            let code = if found.is_some() { 0 } else { EXIT_NO };
            print_json(&OddMinorJson {
                found: found.is_some(),
                certificate: found.map(|(m, w)| CertificateJson::from_model(&m, &w, None)),
            });
            Ok(code)
        }
        Command::Colour {
            graph,
            h,
            d,
            decomposition,
        } => {
            let g = load_graph(&graph)?;
            let td = match decomposition {
                Some(p) => load_json::<DecompositionJson>(&p)?.to_decomposition()?,
                None => decompose(&g, &caps).map_err(lib)?,
            };
            match colour_bounded_tw_with(&g, h, d, &td, caps.colour_options()).map_err(lib)? {
                Outcome::Coloured(r) => {
                    print_json(&ColouringJson::new(&r.colouring, &r.budgets));
                    Ok(0)
                }
                Outcome::Certificate(c) => Ok(report_certificate(&c)),
            }
        }
        Command::Pipeline {
            graph,
            pattern,
            partition,
        } => {
            let g = load_graph(&graph)?;
            let h = load_graph(&pattern)?;
            let sides = match partition {
                Some(p) => Some(
                    parse_partition(&read(&p)?, g.n())
                        .map_err(|e| format!("{}: {e}", p.display()))?,
                ),
                None => None,
            };
            match colour_pipeline_with(&g, &h, sides.as_deref(), caps.colour_options())
                .map_err(lib)?
            {
                PipelineOutcome::Coloured {
                    colouring, budgets, ..
                } => {
                    print_json(&ColouringJson::new(&colouring, &budgets));
                    Ok(0)
                }
                PipelineOutcome::Certificate(c) => Ok(report_certificate(&c)),
            }
        }
        Command::Verify { what } => verify(what),
    }
}

fn verdict(result: Result<(), String>) -> u8 {
    match result {
        Ok(()) => {
            println!("pass");
            0
        }
        Err(why) => {
            println!("fail: {why}");
            EXIT_NO
        }
    }
}

fn verify(what: Verify) -> Result<u8, String> {
    match what {
        Verify::Colouring {
            graph,
            colouring,
            max_colours,
            max_cluster,
        } => {
            let g = load_graph(&graph)?;
            let c: ColouringJson = load_json(&colouring)?;
            let report = verify_colouring(
                &g,
                &c.colours,
                max_colours.unwrap_or(c.budgets.colours),
                max_cluster.unwrap_or(c.budgets.clustering),
            )
            .map_err(|e| e.to_string())?;
            let mut check = Ok(());
            if !report.ok {
                check = Err(match &report.offending {
                    Some(comp) => {
                        format!("monochromatic component of size {} on {comp:?}", comp.len())
                    }
                    None => format!("{} colours used", report.num_colours),
                });
            } else if report.num_colours != c.num_colours || report.max_cluster != c.max_cluster {
                check = Err(format!(
                    "file states {} colours and clustering {}, measured {} and {}",
                    c.num_colours, c.max_cluster, report.num_colours, report.max_cluster
                ));
            }
            Ok(verdict(check))
        }
        Verify::Model {
            graph,
            certificate,
            pattern,
            nontrivial,
        } => {
            let g = load_graph(&graph)?;
            let cert = load_json::<CertificateFile>(&certificate)?.into_certificate()?;
            let check = match pattern {
                Some(p) => {
                    let h = load_graph(&p)?;
                    cert.to_model(h, g.n()).and_then(|(m, w)| {
                        verify_model(&g, &m)
                            .and_then(|_| verify_odd_witness(&g, &m, &w))
                            .map_err(|e| e.to_string())
                            .and_then(|_| match m.branch_sets.iter().position(|s| s.len() < 2) {
                                Some(x) if nontrivial => {
                                    Err(format!("branch set {x} has fewer than two vertices"))
                                }
                                _ => Ok(()),
                            })
                    })
                }
                None => {
                    let (h, d) = cert
                        .h
                        .zip(cert.d)
                        .ok_or("certificate names no h and d; pass --pattern")?;
                    let u = u_graph(h, d).map_err(|e| e.to_string())?;
                    cert.to_model(u, g.n()).and_then(|(model, witness)| {
                        verify_certificate(
                            &g,
                            &OddModelCertificate {
                                h,
                                d,
                                model,
                                witness,
                            },
                        )
                        .map_err(|e| e.to_string())
                    })
                }
            };
            Ok(verdict(check))
        }
        Verify::Decomposition {
            graph,
            decomposition,
        } => {
            let g = load_graph(&graph)?;
            let check = load_json::<DecompositionJson>(&decomposition)?
                .to_decomposition()
                .and_then(|d| validate_decomposition(&g, &d).map_err(|e| e.to_string()));
            Ok(verdict(check))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
