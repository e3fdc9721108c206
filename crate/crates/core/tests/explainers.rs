mod common;

use std::collections::BTreeSet;

use causal_expl::explain::{
    bayes_factor_search, best_explanation, causal_explanation_tree, causal_explanation_tree_with,
    explanation_tree, explanation_tree_with, mpe_explanation, Binding, ExplainerConfig,
    ExplanationTree, ScoreKind, TreeNode,
};
use causal_expl::{networks, Assignment, Engine, InterventionSet, Network, VarId};
use proptest::prelude::*;

fn ids(net: &Network, names: &[&str]) -> Vec<VarId> {
    names.iter().map(|n| net.var_id(n).unwrap()).collect()
}

fn all_but(net: &Network, skip: &[&str]) -> Vec<VarId> {
    net.ids()
        .filter(|v| !skip.contains(&net.variable(*v).name()))
        .collect()
}

/// Visits every branch with the assignment of the path above it.
fn walk<F>(net: &Network, node: &TreeNode, path: &Assignment, f: &mut F)
where
    F: FnMut(&Assignment, VarId, usize, Option<f64>, bool),
{
    if let TreeNode::Split {
        variable,
        observed,
        branches,
    } = node
    {
        let var = net.var_id(variable).unwrap();
        for b in branches {
            let state = net.state_id(var, &b.state).unwrap();
            f(path, var, state, b.label, *observed);
            walk(net, &b.subtree, &path.with(var, state), f);
        }
    }
}

fn cet_labels_are_consistent(net: &Network, tree: &ExplanationTree, o: &Assignment, e: &Assignment) {
    let engine = Engine::new(net);
    let prior = engine.event_probability(e, o).unwrap();
    walk(net, &tree.root, &Assignment::new(), &mut |path, var, state, label, _| {
        let full = path.with(var, state);
        let expected = engine
            .interventional_probability(e, &o.minus_vars(&full), &InterventionSet::from(full.clone()));
        match (label, expected) {
            (Some(l), Ok(p)) => {
                let want = (p / prior).log2();
                assert!(
                    (l - want).abs() < 1e-9 || (l == want),
                    "label {l} vs {want} at {}",
                    full.display(net)
                );
            }
            (None, Err(_)) => {}
            (l, p) => panic!("label {l:?} but recomputation gave {p:?}"),
        }
    });
}

#[test]
fn drug_causal_tree() {
    let net = networks::drug();
    let e = net.assignment([("Recovery", "rec")]).unwrap();
    let tree = causal_explanation_tree(
        &net,
        &ids(&net, &["Sex", "Drug"]),
        &Assignment::new(),
        &e,
        &ExplainerConfig::default(),
    )
    .unwrap();
    assert_eq!(tree.root_variable(), Some("Sex"));
    let label = |sex: &str, drug: &str| {
        tree.paths()
            .into_iter()
            .find(|p| p.bindings == [Binding::new("Sex", sex), Binding::new("Drug", drug)])
            .unwrap()
            .label
    };
    let (mn, my, fneg, fy) = (label("m", "no"), label("m", "yes"), label("f", "no"), label("f", "yes"));
    for (got, p) in [(mn, 0.7), (my, 0.6), (fneg, 0.3), (fy, 0.2)] {
        assert!((got - (p / 0.45f64).log2()).abs() < 1e-9);
    }
    assert!(mn > my && my > 0.0 && 0.0 > fneg && fneg > fy);
    assert!((mn - 0.63743).abs() < 1e-5);
    cet_labels_are_consistent(&net, &tree, &Assignment::new(), &e);

    let best = best_explanation(&tree).unwrap();
    assert_eq!(best.bindings, [Binding::new("Sex", "m"), Binding::new("Drug", "no")]);
    assert!((best.score - 0.63743).abs() < 1e-5);
}

#[test]
fn asia_xray_tree() {
    let net = networks::asia();
    let e = net.assignment([("X-ray", "abnormal")]).unwrap();
    let tree = causal_explanation_tree(
        &net,
        &all_but(&net, &["X-ray", "TbOrCa"]),
        &Assignment::new(),
        &e,
        &ExplainerConfig::default().with_alpha(0.01),
    )
    .unwrap();
    assert_eq!(tree.root_variable(), Some("LungCancer"));
    match tree.node_at(&["no"]).unwrap() {
        TreeNode::Split { variable, .. } => assert_eq!(variable, "Tuberculosis"),
        TreeNode::Leaf => panic!("expected Tuberculosis under LungCancer=no"),
    }
    // with the cancer present the x-ray is already explained
    assert_eq!(tree.node_at(&["yes"]), Some(&TreeNode::Leaf));
    cet_labels_are_consistent(&net, &tree, &Assignment::new(), &e);
}

#[test]
fn asia_dyspnea_given_smoker() {
    let net = networks::asia();
    let e = net.assignment([("Dyspnea", "yes")]).unwrap();
    let o = net.assignment([("Smoker", "yes")]).unwrap();
    let cfg = ExplainerConfig::default().with_alpha(0.01);

    let with_smoker = causal_explanation_tree(&net, &all_but(&net, &["Dyspnea", "TbOrCa"]), &o, &e, &cfg)
        .unwrap();
    // the observed smoker outscores every unobserved factor and is taken first
    assert_eq!(with_smoker.root_variable(), Some("Smoker"));
    match with_smoker.node_at(&["yes"]).unwrap() {
        TreeNode::Split { variable, .. } => assert_eq!(variable, "Bronchitis"),
        TreeNode::Leaf => panic!("expected Bronchitis under Smoker"),
    }
    cet_labels_are_consistent(&net, &with_smoker, &o, &e);

    let without = causal_explanation_tree(
        &net,
        &all_but(&net, &["Dyspnea", "TbOrCa", "Smoker"]),
        &o,
        &e,
        &cfg,
    )
    .unwrap();
    assert_eq!(without.root_variable(), Some("Bronchitis"));
    cet_labels_are_consistent(&net, &without, &o, &e);
}

#[test]
fn impossible_branches_are_marked() {
    let net = networks::asia();
    let e = net.assignment([("Dyspnea", "yes")]).unwrap();
    let o = net.assignment([("TbOrCa", "no")]).unwrap();
    let cfg = ExplainerConfig {
        prune_unreachable: false,
        ..ExplainerConfig::default()
    };
    let tree = causal_explanation_tree(&net, &ids(&net, &["LungCancer"]), &o, &e, &cfg).unwrap();
    let TreeNode::Split { branches, .. } = &tree.root else {
        panic!("expected a split");
    };
    assert_eq!(branches.len(), 2);
    assert!(branches[0].is_pruned(), "do(LungCancer=yes) contradicts TbOrCa=no");
    assert!(!branches[1].is_pruned());
    cet_labels_are_consistent(&net, &tree, &o, &e);
}

#[test]
fn drug_noncausal_tree() {
    let net = networks::drug();
    let e = net.assignment([("Recovery", "rec")]).unwrap();
    let tree = explanation_tree(
        &net,
        &ids(&net, &["Sex", "Drug"]),
        &e,
        &ExplainerConfig::default().with_alpha(0.02),
    )
    .unwrap();
    assert_eq!(tree.root_variable(), Some("Sex"));
    let best = best_explanation(&tree).unwrap();
    assert_eq!(best.bindings, [Binding::new("Sex", "m"), Binding::new("Drug", "yes")]);
    assert!((best.score - 0.5).abs() < 1e-12);
    et_labels_are_consistent(&net, &tree, &e);
}

fn et_labels_are_consistent(net: &Network, tree: &ExplanationTree, e: &Assignment) {
    let engine = Engine::new(net);
    walk(net, &tree.root, &Assignment::new(), &mut |path, var, state, label, _| {
        let full = path.with(var, state);
        let p = engine.event_probability(&full, e).unwrap();
        assert!((label.unwrap() - p).abs() < 1e-9);
    });
    fn sums(node: &TreeNode, parent: f64) {
        if let TreeNode::Split { branches, .. } = node {
            let total: f64 = branches.iter().map(|b| b.label.unwrap()).sum();
            assert!((total - parent).abs() < 1e-9, "{total} vs {parent}");
            for b in branches {
                sums(&b.subtree, b.label.unwrap());
            }
        }
    }
    sums(&tree.root, 1.0);
}

#[test]
fn mpe_ranking() {
    let net = networks::drug();
    let e = net.assignment([("Recovery", "rec")]).unwrap();
    let r = mpe_explanation(&net, &e).unwrap();
    assert_eq!(r.entries.len(), 1);
    assert_eq!(r.entries[0].kind, ScoreKind::PosteriorProbability);
    assert_eq!(
        r.entries[0].assignment,
        net.assignment([("Sex", "m"), ("Drug", "yes")]).unwrap()
    );
    assert!((r.entries[0].score - 0.5).abs() < 1e-12);
}

#[test]
fn drug_bayes_factors() {
    let net = networks::drug();
    let e = net.assignment([("Recovery", "rec")]).unwrap();
    let cfg = ExplainerConfig {
        top_k: 8,
        ..ExplainerConfig::default()
    };
    let r = bayes_factor_search(&net, &ids(&net, &["Sex", "Drug"]), &e, &cfg).unwrap();
    let score = |pairs: &[(&str, &str)]| {
        let a = net.assignment(pairs.iter().copied()).unwrap();
        r.entries.iter().find(|x| x.assignment == a).unwrap().score
    };
    assert!((score(&[("Sex", "m")]) - 2.2727).abs() < 1e-4);
    assert!((score(&[("Sex", "m"), ("Drug", "no")]) - 1.6897).abs() < 1e-4);
    assert!((score(&[("Sex", "m"), ("Drug", "yes")]) - 5.0 / 3.0).abs() < 1e-9);
    assert!((score(&[("Drug", "yes")]) - 1.25).abs() < 1e-9);
    // 2 + 2 singletons and 4 pairs
    assert_eq!(r.considered, 8);
    for w in r.entries.windows(2) {
        assert!(w[0].score >= w[1].score);
    }
    // supported singletons have factors above one
    assert!(score(&[("Sex", "m")]) > 1.0);
    assert!(score(&[("Sex", "f")]) < 1.0);
}

#[test]
fn single_leaf_best_explanation() {
    let net = networks::drug();
    let e = net.assignment([("Recovery", "rec")]).unwrap();
    let tree = causal_explanation_tree(
        &net,
        &ids(&net, &["Sex", "Drug"]),
        &Assignment::new(),
        &e,
        &ExplainerConfig::default().with_alpha(1.0),
    )
    .unwrap();
    assert!(tree.is_empty());
    let best = best_explanation(&tree).unwrap();
    assert!(best.bindings.is_empty());
    assert_eq!(best.score, 0.0);
}

#[test]
fn trees_round_trip_through_json() {
    let net = networks::asia();
    let e = net.assignment([("Dyspnea", "yes")]).unwrap();
    let o = net.assignment([("Smoker", "yes")]).unwrap();
    let tree = causal_explanation_tree(&net, &all_but(&net, &["Dyspnea"]), &o, &e, &ExplainerConfig::default())
        .unwrap();
    assert_eq!(ExplanationTree::from_json(&tree.to_json()).unwrap(), tree);
}

#[test]
fn chain_call_counts_stay_linear() {
    for n in 4..=10 {
        let mut rng = common::rng(n as u64);
        let net = common::chain(&mut rng, n);
        let last = VarId(n - 1);
        let e = Assignment::single(last, 0);
        let h: Vec<VarId> = (0..n - 1).map(VarId).collect();
        let engine = Engine::new(&net);
        let (_, costs) =
            causal_explanation_tree_with(&engine, &h, &Assignment::new(), &e, &ExplainerConfig::default())
                .unwrap();
        for c in &costs {
            assert!(c.calls <= 4 * c.hypotheses * 2, "{c:?}");
        }
        let engine = Engine::new(&net);
        let (_, costs) = explanation_tree_with(&engine, &h, &e, &ExplainerConfig::default()).unwrap();
        for c in &costs {
            assert!(c.calls <= 4 * c.hypotheses * c.hypotheses * 4, "{c:?}");
        }
    }
}

/// Tree variables and the path of interventions above each, for the
/// causal-ancestor check.
fn split_sites(net: &Network, tree: &ExplanationTree) -> Vec<(VarId, Assignment, bool)> {
    let mut out = Vec::new();
    fn go(net: &Network, node: &TreeNode, path: &Assignment, out: &mut Vec<(VarId, Assignment, bool)>) {
        if let TreeNode::Split {
            variable,
            observed,
            branches,
        } = node
        {
            let var = net.var_id(variable).unwrap();
            out.push((var, path.clone(), *observed));
            for b in branches {
                let s = net.state_id(var, &b.state).unwrap();
                go(net, &b.subtree, &path.with(var, s), out);
            }
        }
    }
    go(net, &tree.root, &Assignment::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_tree_labels_are_consistent(seed in any::<u64>(), n in 3usize..8) {
        let mut rng = common::rng(seed);
        let net = common::random_dag(&mut rng, n, 3, 0.45);
        let target = VarId(n - 1);
        let e = Assignment::single(target, 0);
        let pool: Vec<VarId> = (0..n - 1).map(VarId).collect();
        let o = common::random_assignment(&mut rng, &net, &pool, 0.25);
        let cfg = ExplainerConfig::default().with_alpha(1e-6);
        let tree = causal_explanation_tree(&net, &pool, &o, &e, &cfg).unwrap();
        cet_labels_are_consistent(&net, &tree, &o, &e);

        // only causal ancestors of e get selected
        for (var, path, observed) in split_sites(&net, &tree) {
            let mut blocked: BTreeSet<VarId> = path.vars().collect();
            blocked.extend(o.minus_vars(&path).vars());
            blocked.remove(&var);
            prop_assert!(observed || net.reachable(var, target, &blocked));
        }

        let et = explanation_tree(&net, &pool, &e, &ExplainerConfig::default().with_alpha(1e-6)).unwrap();
        et_labels_are_consistent(&net, &et, &e);
    }

    #[test]
    fn trees_are_deterministic(seed in any::<u64>(), n in 3usize..8) {
        let mut rng = common::rng(seed);
        let net = common::random_dag(&mut rng, n, 2, 0.45);
        let e = Assignment::single(VarId(n - 1), 1);
        let pool: Vec<VarId> = (0..n - 1).map(VarId).collect();
        let cfg = ExplainerConfig::default();
        let a = causal_explanation_tree(&net, &pool, &Assignment::new(), &e, &cfg).unwrap();
        let b = causal_explanation_tree(&net, &pool, &Assignment::new(), &e, &cfg).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        let a = explanation_tree(&net, &pool, &e, &cfg).unwrap();
        let b = explanation_tree(&net, &pool, &e, &cfg).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
    }
}

/// Without observations, blocked paths carry no flow at all, so pruning
/// cannot change a tree. With observations it can (conditioning on a
/// collider opens a non-causal route); those cases are reported.
#[test]
fn pruning_agrees_with_unpruned_trees() {
    let on = ExplainerConfig::default().with_alpha(1e-6);
    let off = ExplainerConfig {
        prune_unreachable: false,
        ..on.clone()
    };
    let mut diverging = 0;
    let mut compared = 0;
    for seed in 0..60u64 {
        let mut rng = common::rng(1000 + seed);
        let n = 4 + (seed as usize % 5);
        let net = common::random_dag(&mut rng, n, 2, 0.45);
        let e = Assignment::single(VarId(n - 1), 0);
        let pool: Vec<VarId> = (0..n - 1).map(VarId).collect();

        let a = causal_explanation_tree(&net, &pool, &Assignment::new(), &e, &on).unwrap();
        let b = causal_explanation_tree(&net, &pool, &Assignment::new(), &e, &off).unwrap();
        assert_eq!(a, b, "seed {seed}");

        let o = common::random_assignment(&mut rng, &net, &pool, 0.3);
        if o.is_empty() {
            continue;
        }
        // observed candidates would be scored the same either way
        let h: Vec<VarId> = pool.iter().copied().filter(|v| !o.contains(*v)).collect();
        let a = causal_explanation_tree(&net, &h, &o, &e, &on).unwrap();
        let b = causal_explanation_tree(&net, &h, &o, &e, &off).unwrap();
        compared += 1;
        if a != b {
            diverging += 1;
            eprintln!(
                "seed {seed}: pruning changes the tree given {}: root {:?} (pruned) vs {:?} (unpruned)",
                o.display(&net),
                a.root_variable(),
                b.root_variable()
            );
        }
    }
    eprintln!("pruning changed {diverging} of {compared} trees with observations");
}

/// X → W ← U → E with W observed: X has no directed path to E, yet
/// intervening on X shifts E through the explained-away U.
#[test]
fn observed_collider_makes_pruning_matter() {
    let text = r#"{
      "name": "collider",
      "variables": [
        {"name": "X", "states": ["on", "off"]},
        {"name": "U", "states": ["on", "off"]},
        {"name": "W", "states": ["on", "off"]},
        {"name": "E", "states": ["on", "off"]}
      ],
      "cpts": {
        "X": {"parents": [], "table": [[0.5, 0.5]]},
        "U": {"parents": [], "table": [[0.5, 0.5]]},
        "W": {"parents": ["X", "U"], "table": [[0.95, 0.05], [0.6, 0.4], [0.6, 0.4], [0.05, 0.95]]},
        "E": {"parents": ["U"], "table": [[0.9, 0.1], [0.1, 0.9]]}
      }
    }"#;
    let net = causal_expl::parse_network(text).unwrap();
    let e = net.assignment([("E", "on")]).unwrap();
    let o = net.assignment([("W", "on")]).unwrap();
    let h = ids(&net, &["X"]);
    let on = ExplainerConfig::default().with_alpha(1e-6);
    let off = ExplainerConfig {
        prune_unreachable: false,
        ..on.clone()
    };
    let pruned = causal_explanation_tree(&net, &h, &o, &e, &on).unwrap();
    let unpruned = causal_explanation_tree(&net, &h, &o, &e, &off).unwrap();
    assert!(pruned.is_empty());
    assert_eq!(unpruned.root_variable(), Some("X"));
    let flow = Engine::new(&net)
        .flow_to_state(h[0], &e, &o, &InterventionSet::empty())
        .unwrap();
    eprintln!("collider flow X → E=on given W=on: {flow:.6} bits");
    assert!(flow > 1e-3);
}
