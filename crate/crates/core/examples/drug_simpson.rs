//! Seeing versus doing on the drug trial: the drug looks helpful in the
//! pooled data and hurts once sex is adjusted for by intervening.

use causal_expl::{networks, Assignment, Engine, InterventionSet, Result};

pub fn run_example() -> Result<String> {
    let net = networks::drug();
    let engine = Engine::new(&net);
    let rec = net.assignment([("Recovery", "rec")])?;
    let mut out = String::new();
    for drug in ["yes", "no"] {
        let d = net.assignment([("Drug", drug)])?;
        let seen = engine.event_probability(&rec, &d)?;
        let forced = engine.interventional_probability(&rec, &Assignment::new(), &InterventionSet::from(d))?;
        out += &format!("Drug={drug:<3}  p(rec | seen) = {seen:.3}  p(rec | do) = {forced:.3}\n");
    }
    Ok(out)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
