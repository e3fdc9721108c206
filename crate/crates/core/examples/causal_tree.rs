//! Causal explanation trees for the drug trial and the chest clinic.

use causal_expl::explain::{causal_explanation_tree, ExplainerConfig};
use causal_expl::render::tree_ascii;
use causal_expl::{networks, Assignment, Result};

pub fn run_example() -> Result<String> {
    let mut out = String::new();

    let drug = networks::drug();
    let rec = drug.assignment([("Recovery", "rec")])?;
    let h: Vec<_> = drug.ids().filter(|v| !rec.contains(*v)).collect();
    let tree = causal_explanation_tree(&drug, &h, &Assignment::new(), &rec, &ExplainerConfig::default())?;
    out += &tree_ascii(&tree);

    // Observing Smoker lets it compete through its pointwise flow; leaving it
    // out asks what else explains the breathlessness of a smoker.
    let asia = networks::asia();
    let dysp = asia.assignment([("Dyspnea", "yes")])?;
    let smoker = asia.assignment([("Smoker", "yes")])?;
    let cfg = ExplainerConfig::default().with_alpha(0.01);
    for skip in [&["Dyspnea", "TbOrCa"][..], &["Dyspnea", "TbOrCa", "Smoker"]] {
        let h: Vec<_> = asia.ids().filter(|v| !skip.contains(&asia.variable(*v).name())).collect();
        let tree = causal_explanation_tree(&asia, &h, &smoker, &dysp, &cfg)?;
        out.push('\n');
        out += &tree_ascii(&tree);
    }
    Ok(out)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
