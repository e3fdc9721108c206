//! Every runnable example is also run here, so they cannot rot.

#[allow(dead_code)]
#[path = "../examples/drug_simpson.rs"]
mod drug_simpson;
#[allow(dead_code)]
#[path = "../examples/causal_tree.rs"]
mod causal_tree;
#[allow(dead_code)]
#[path = "../examples/explanation_tree.rs"]
mod explanation_tree;
#[allow(dead_code)]
#[path = "../examples/mpe_and_bayes_factor.rs"]
mod mpe_and_bayes_factor;
#[allow(dead_code)]
#[path = "../examples/information_flow.rs"]
mod information_flow;
#[allow(dead_code)]
#[path = "../examples/oracle_check.rs"]
mod oracle_check;
#[allow(dead_code)]
#[path = "../examples/dot_export.rs"]
mod dot_export;

#[test]
fn drug_simpson_reverses() {
    let out = drug_simpson::run_example().unwrap();
    assert!(out.contains("Drug=yes  p(rec | seen) = 0.500  p(rec | do) = 0.400"), "{out}");
}

#[test]
fn causal_tree_roots() {
    let out = causal_tree::run_example().unwrap();
    let roots: Vec<&str> = out
        .split("\n\n")
        .map(|block| block.lines().nth(1).unwrap())
        .collect();
    assert_eq!(roots, ["Sex", "Smoker (observed)", "Bronchitis"]);
}

#[test]
fn explanation_tree_best_branch() {
    let out = explanation_tree::run_example().unwrap();
    assert!(out.ends_with("most probable branch: Sex=m, Drug=yes (0.5000)\n"), "{out}");
}

#[test]
fn rankings_print() {
    let out = mpe_and_bayes_factor::run_example().unwrap();
    assert!(out.contains("1. Sex=m, Drug=yes  0.5000"));
    assert!(out.contains("2. Sex=m, Drug=no  1.6897"));
    assert!(out.contains("3. Sex=m, Drug=yes  1.0000"));
}

#[test]
fn information_flow_table() {
    let out = information_flow::run_example().unwrap();
    assert!(out.contains("LungCancer    I(→X-ray) = 0.1848  flow to X-ray=abnormal = 1.0871"), "{out}");
    assert!(out.ends_with("do(TbOrCa=no): 0.0000\n"));
}

#[test]
fn oracle_check_agrees() {
    let out = oracle_check::run_example().unwrap();
    assert!(out.contains(" 0 divergences"), "{out}");
}

#[test]
fn dot_export_shape() {
    let out = dot_export::run_example().unwrap();
    assert!(out.starts_with("digraph explanation_tree {"));
    assert!(out.contains("n0 [label=\"LungCancer\"]"));
}
