//! Causal information flow between variables and into a single observed state.

use causal_expl::{networks, Assignment, Engine, InterventionSet, Result};

pub fn run_example() -> Result<String> {
    let net = networks::asia();
    let engine = Engine::new(&net);
    let none = Assignment::new();
    let empty = InterventionSet::empty();
    let xray = net.assignment([("X-ray", "abnormal")])?;
    let x = net.var_id("X-ray").unwrap();
    let mut out = String::new();
    for v in net.ids().filter(|v| *v != x) {
        let name = net.variable(v).name();
        let flow = engine.information_flow(v, x, &empty)?;
        let to_state = engine.flow_to_state(v, &xray, &none, &empty)?;
        out += &format!("{name:<13} I(→X-ray) = {flow:.4}  flow to X-ray=abnormal = {to_state:.4}\n");
    }

    // Intervening on TbOrCa cuts every path from the diseases to the X-ray.
    let cut = InterventionSet::from(net.assignment([("TbOrCa", "no")])?);
    let lung = net.var_id("LungCancer").unwrap();
    out += &format!(
        "LungCancer → X-ray under do(TbOrCa=no): {:.4}\n",
        engine.information_flow(lung, x, &cut)?.abs()
    );
    Ok(out)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
