use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oddcluster_cli::format::{parse_graph, write_graph};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_oddcluster"));
    c.env_remove("ODDCLUSTER_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn save(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn generated(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    save(dir, name, &stdout(&o))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn u_graph_and_its_depth() {
    let dir = TempDir::new().unwrap();
    let u = generated(&dir, "u.g", &["u", "--h", "2", "--d", "3"]);
    let g = parse_graph(&std::fs::read_to_string(&u).unwrap()).unwrap();
    assert_eq!((g.n(), g.m()), (4, 3));
    let o = run(&["metric", "ctd", s(&u)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 2);
}

#[test]
fn generated_graphs_round_trip() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("c", vec!["cycle", "--n", "7"]),
        ("k", vec!["complete", "--n", "5"]),
        ("s", vec!["star", "--n", "6"]),
        (
            "p",
            vec!["partial-ktree", "--n", "20", "--k", "3", "--seed", "9"],
        ),
    ] {
        let p = generated(&dir, name, &args);
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }
}

#[test]
fn odd_minor_exit_codes_and_verification() {
    let dir = TempDir::new().unwrap();
    let c5 = generated(&dir, "c5", &["cycle", "--n", "5"]);
    let c4 = generated(&dir, "c4", &["cycle", "--n", "4"]);
    let k3 = generated(&dir, "k3", &["complete", "--n", "3"]);
    let found = run(&["odd-minor", s(&c5), s(&k3)]);
    assert_eq!(code(&found), 0);
    let cert = save(&dir, "cert.json", &stdout(&found));
    let ok = run(&["verify", "model", s(&c5), s(&cert), "--pattern", s(&k3)]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    // The same certificate does not fit the even cycle.
    assert_eq!(
        code(&run(&[
            "verify",
            "model",
            s(&c4),
            s(&cert),
            "--pattern",
            s(&k3)
        ])),
        1
    );
    assert_eq!(code(&run(&["odd-minor", s(&c4), s(&k3)])), 1);
    // A search cap smaller than the graph is a resource error.
    let capped = bin()
        .args(["odd-minor", s(&c5), s(&k3)])
        .env("ODDCLUSTER_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);
    assert_eq!(
        code(&run(&["odd-minor", s(&c5), s(&k3), "--cap", "search=3"])),
        2
    );
}

#[test]
fn colour_certificates_are_accepted() {
    let dir = TempDir::new().unwrap();
    let k6 = generated(&dir, "k6", &["complete", "--n", "6"]);
    let o = run(&["colour", s(&k6), "--h", "2", "--d", "1"]);
    assert_eq!(code(&o), 3);
    let cert = save(&dir, "cert.json", &stdout(&o));
    assert_eq!(code(&run(&["verify", "model", s(&k6), s(&cert)])), 0);
    for seed in 0..8 {
        let g = generated(
            &dir,
            "g",
            &[
                "partial-ktree",
                "--n",
                "24",
                "--k",
                "3",
                "--seed",
                &seed.to_string(),
            ],
        );
        for (h, d) in [("1", "2"), ("2", "1"), ("3", "2")] {
            let o = run(&["colour", s(&g), "--h", h, "--d", d]);
            let out = save(&dir, "out.json", &stdout(&o));
            let check = match code(&o) {
                0 => run(&["verify", "colouring", s(&g), s(&out)]),
                3 => run(&["verify", "model", s(&g), s(&out)]),
                other => panic!("exit {other}: {}", String::from_utf8_lossy(&o.stderr)),
            };
            assert_eq!(code(&check), 0, "{}", stdout(&check));
        }
    }
}

#[test]
fn colour_with_supplied_decomposition() {
    let dir = TempDir::new().unwrap();
    let c = generated(&dir, "c", &["cycle", "--n", "12"]);
    let o = run(&["metric", "tw", s(&c)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 2);
    let d = save(&dir, "d.json", &v["decomposition"].to_string());
    assert_eq!(code(&run(&["verify", "decomposition", s(&c), s(&d)])), 0);
    let o = run(&[
        "colour",
        s(&c),
        "--h",
        "2",
        "--d",
        "2",
        "--decomposition",
        s(&d),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["budgets"]["colours"], 4);
    assert_eq!(v["budgets"]["clustering"], 4);
    // A decomposition whose stated width is wrong is rejected.
    let bad = serde_json::json!({"nodes": 1, "edges": [], "bags": [(0..12).collect::<Vec<_>>()], "width": 3});
    let bad_path = save(&dir, "bad.json", &bad.to_string());
    let o = run(&["verify", "decomposition", s(&c), s(&bad_path)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("fail"));
}

#[test]
fn pipeline_with_partition() {
    let dir = TempDir::new().unwrap();
    let c6 = generated(&dir, "c6", &["cycle", "--n", "6"]);
    let k2 = generated(&dir, "k2", &["complete", "--n", "2"]);
    let part = save(&dir, "part", "rrrrrr\n");
    let o = run(&["pipeline", s(&c6), s(&k2), "--partition", s(&part)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["budgets"]["colours"], 8);
    assert!(v["num_colours"].as_u64().unwrap() <= 4);
    let short = save(&dir, "short", "rrb\n");
    assert_eq!(
        code(&run(&[
            "pipeline",
            s(&c6),
            s(&k2),
            "--partition",
            s(&short)
        ])),
        2
    );
}

#[test]
fn tampered_colouring_fails_verification() {
    let dir = TempDir::new().unwrap();
    let k3 = generated(&dir, "k3", &["complete", "--n", "3"]);
    let same = r#"{"colours":[0,0,0],"num_colours":1,"max_cluster":3,"budgets":{"colours":1,"clustering":2}}"#;
    let p = save(&dir, "c.json", same);
    let o = run(&["verify", "colouring", s(&k3), s(&p)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("size 3"));
    assert_eq!(
        code(&run(&[
            "verify",
            "colouring",
            s(&k3),
            s(&p),
            "--max-cluster",
            "3"
        ])),
        0
    );
}

#[test]
fn parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = save(&dir, "bad.g", "# header next\np 3 2\n0 1\n1 7\n");
    let o = run(&["metric", "td", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = generated(
        &dir,
        "g",
        &["partial-ktree", "--n", "30", "--k", "2", "--seed", "5"],
    );
    let a = run(&["colour", s(&g), "--h", "3", "--d", "2"]);
    let b = run(&["colour", s(&g), "--h", "3", "--d", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
}
