use std::path::PathBuf;
use std::process::Command;

use causal_expl::explain::{causal_explanation_tree, ExplainerConfig};
use causal_expl::{cli, networks, ExplanationTree};

fn network(name: &str) -> String {
    format!("{}/networks/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("causal-expl").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("causal-expl-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn drug_cet_ascii() {
    let drug = network("drug");
    let (code, out, _) = run(&[
        "cet", "--network", &drug, "--explanandum", "Recovery=rec", "--hypothesis", "Sex,Drug",
        "--alpha", "0", "--format", "ascii",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "Sex");
    for label in ["no: 0.6374", "yes: 0.4150", "no: -0.5850", "yes: -1.1699"] {
        assert!(out.contains(label), "missing {label} in\n{out}");
    }
}

#[test]
fn query_prints_interventional_probability() {
    let drug = network("drug");
    let (code, out, _) = run(&["query", "--network", &drug, "--event", "Recovery=rec", "--do", "Drug=yes"]);
    assert_eq!((code, out.as_str()), (0, "0.4\n"));
    let (code, out, _) = run(&["query", "--network", &drug, "--event", "Recovery=rec", "--given", "Drug=yes"]);
    assert_eq!((code, out.as_str()), (0, "0.5\n"));
}

#[test]
fn validate_reports_cycles() {
    let text = networks::DRUG_JSON.replace(
        r#""Sex":      {"parents": [],              "table": [[0.5, 0.5]]}"#,
        r#""Sex":      {"parents": ["Recovery"],    "table": [[0.5, 0.5], [0.5, 0.5]]}"#,
    );
    let path = temp_file("cyclic.json", &text);
    let (code, out, err) = run(&["validate", "--network", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("cycle"), "{err}");

    let (code, out, _) = run(&["validate", "--network", &network("asia")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok: network `asia` with 8 variables"));
}

#[test]
fn asia_dyspnea_roots() {
    let asia = network("asia");
    let base = [
        "cet", "--network", asia.as_str(), "--observe", "Smoker=yes", "--explanandum", "Dyspnea=yes",
        "--exclude", "TbOrCa", "--alpha", "0.01",
    ];
    let (code, out, _) = run(&base);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1), Some("Smoker (observed)"));

    let mut args = base.to_vec();
    args.extend(["--exclude", "Smoker"]);
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1), Some("Bronchitis"));
}

#[test]
fn exit_statuses() {
    let drug = network("drug");
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["cet", "--network", &drug]).0, 1);
    assert_eq!(run(&["query", "--network", &drug, "--event", "Recovery=maybe"]).0, 1);
    assert_eq!(run(&["query", "--network", &drug, "--event", "Nope=x"]).0, 1);
    assert_eq!(run(&["query", "--network", &drug, "--event", "Sex=m", "--given", "Sex=f,Sex=m"]).0, 1);
    assert_eq!(run(&["query", "--network", &drug, "--event", "Sex=m", "--format", "dot"]).0, 1);
    assert_eq!(
        run(&["bf", "--network", &drug, "--explanandum", "Recovery=rec", "--max-subset-size", "5"]).0,
        1
    );
    assert_eq!(run(&["validate", "--network", "/no/such/file.json"]).0, 2);
    let broken = temp_file("broken.json", "{ \"name\": ");
    assert_eq!(run(&["validate", "--network", broken.to_str().unwrap()]).0, 2);
    assert_eq!(
        run(&["query", "--network", &drug, "--event", "Recovery=rec", "--given", "Sex=m", "--do", "Sex=f"]).0,
        3
    );
    let asia = network("asia");
    assert_eq!(
        run(&["mpe", "--network", &asia, "--evidence", "TbOrCa=no,LungCancer=yes"]).0,
        3
    );
}

#[test]
fn dot_output_is_well_formed() {
    let asia = network("asia");
    let (code, out, _) = run(&[
        "cet", "--network", &asia, "--explanandum", "X-ray=abnormal", "--exclude", "TbOrCa", "--format", "dot",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph explanation_tree {\n"));
    assert!(out.ends_with("}\n"));
    let nodes = out.lines().filter(|l| l.contains(" [label=") && !l.contains("->")).count();
    let edges: Vec<&str> = out.lines().filter(|l| l.contains("->")).collect();
    // a tree has one more node than it has edges
    assert_eq!(nodes, edges.len() + 1);
    for e in &edges {
        let label = e.split("label=\"").nth(1).unwrap().split('"').next().unwrap();
        let value = label.rsplit(": ").next().unwrap();
        let decimals = value.split('.').nth(1).map(str::len);
        assert!(value == "pruned" || decimals == Some(4), "{e}");
    }
    assert_eq!(out.matches('{').count(), out.matches('}').count());
}

#[test]
fn json_output_round_trips() {
    let asia = network("asia");
    let (code, out, _) = run(&[
        "cet", "--network", &asia, "--explanandum", "Dyspnea=yes", "--observe", "Smoker=yes", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let parsed = ExplanationTree::from_json(&out).unwrap();

    let net = networks::asia();
    let e = net.assignment([("Dyspnea", "yes")]).unwrap();
    let o = net.assignment([("Smoker", "yes")]).unwrap();
    let h: Vec<_> = net.ids().filter(|v| !e.contains(*v)).collect();
    let tree = causal_explanation_tree(&net, &h, &o, &e, &ExplainerConfig::default()).unwrap();
    assert_eq!(parsed, tree);
}

#[test]
fn rankings() {
    let drug = network("drug");
    let (code, out, _) = run(&["mpe", "--network", &drug, "--evidence", "Recovery=rec"]);
    assert_eq!(code, 0);
    assert!(out.contains("1. Sex=m, Drug=yes  0.5000"), "{out}");

    let (code, out, _) = run(&["bf", "--network", &drug, "--explanandum", "Recovery=rec", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert!((entries[0]["score"].as_f64().unwrap() - 2.272727).abs() < 1e-6);

    let (code, out, _) = run(&["bf", "--network", &drug, "--explanandum", "Recovery=rec", "--raw-odds"]);
    assert_eq!(code, 0);
    assert!(out.contains("posterior odds"));
}

#[test]
fn oracle_check_passes_on_shipped_networks() {
    for (net, args) in [
        ("drug", vec!["cet", "--explanandum", "Recovery=rec"]),
        ("drug", vec!["et", "--explanandum", "Recovery=rec", "--alpha", "0.02"]),
        ("asia", vec!["mpe", "--evidence", "Dyspnea=yes"]),
        ("asia", vec!["bf", "--explanandum", "X-ray=abnormal", "--exclude", "TbOrCa"]),
        ("academe", vec!["cet", "--explanandum", "FinalMark=fail", "--exclude", "TPMark,GlobalMark"]),
    ] {
        let path = network(net);
        let mut full = args.clone();
        full.extend(["--network", path.as_str(), "--oracle-check"]);
        let (code, _, err) = run(&full);
        assert_eq!(code, 0, "{net} {args:?}: {err}");
        assert!(err.contains("values agree"), "{err}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    let drug = network("drug");
    let args = ["cet", "--network", drug.as_str(), "--explanandum", "Recovery=rec", "--format", "json"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_causal-expl");
    let out = Command::new(bin)
        .args(["query", "--network", &network("drug"), "--event", "Recovery=rec", "--do", "Drug=yes"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0.4\n");
    let out = Command::new(bin)
        .args(["validate", "--network", "/no/such/file.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
