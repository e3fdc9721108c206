//! Graphviz and JSON export of an explanation tree. Pipe the DOT output
//! through `dot -Tsvg` to draw it.

use causal_expl::explain::{causal_explanation_tree, ExplainerConfig};
use causal_expl::render::{tree_dot, tree_json};
use causal_expl::{networks, Assignment, ExplanationTree, Result};

pub fn run_example() -> Result<String> {
    let net = networks::asia();
    let xray = net.assignment([("X-ray", "abnormal")])?;
    let h: Vec<_> = net
        .ids()
        .filter(|v| !["X-ray", "TbOrCa"].contains(&net.variable(*v).name()))
        .collect();
    let tree = causal_explanation_tree(&net, &h, &Assignment::new(), &xray, &ExplainerConfig::default().with_alpha(0.01))?;
    let json = tree_json(&tree);
    assert_eq!(ExplanationTree::from_json(&json)?, tree);
    Ok(tree_dot(&tree))
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
