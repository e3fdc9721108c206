//! The noncausal explanation tree, grown from conditional mutual information
//! and labelled with posterior path probabilities.

use causal_expl::explain::{explanation_tree, ExplainerConfig};
use causal_expl::render::tree_ascii;
use causal_expl::{networks, Result};

pub fn run_example() -> Result<String> {
    let net = networks::drug();
    let rec = net.assignment([("Recovery", "rec")])?;
    let h: Vec<_> = net.ids().filter(|v| !rec.contains(*v)).collect();
    let tree = explanation_tree(&net, &h, &rec, &ExplainerConfig::default().with_alpha(0.02))?;
    let mut out = tree_ascii(&tree);
    let best = tree
        .paths()
        .into_iter()
        .filter(|p| p.label.is_finite())
        .max_by(|a, b| a.label.total_cmp(&b.label));
    if let Some(p) = best {
        let bindings: Vec<String> = p.bindings.iter().map(|b| format!("{}={}", b.variable, b.state)).collect();
        out += &format!("most probable branch: {} ({:.4})\n", bindings.join(", "), p.label);
    }
    Ok(out)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
