//! Cross-checking the elimination engine against brute-force enumeration.

use causal_expl::oracle::{CrossCheck, Oracle};
use causal_expl::{networks, Engine, InterventionSet, Result};

pub fn run_example() -> Result<String> {
    let net = networks::academe();
    let engine = Engine::with_cross_check(&net, CrossCheck::new(Oracle::new(&net), 1e-9));
    let fail = net.assignment([("FinalMark", "fail")])?;
    for (var, state) in [("Theory", "bad"), ("Practice", "good"), ("Extra", "no")] {
        let given = net.assignment([(var, state)])?;
        let targets: Vec<_> = fail.vars().collect();
        engine.query(&targets, &given, &InterventionSet::empty())?;
        engine.query(&targets, &causal_expl::Assignment::new(), &InterventionSet::from(given))?;
    }
    let check = engine.cross_check().unwrap();
    Ok(format!(
        "{} values compared, {} divergences, {} engine calls\n",
        check.checked(),
        check.divergences().len(),
        engine.calls()
    ))
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
