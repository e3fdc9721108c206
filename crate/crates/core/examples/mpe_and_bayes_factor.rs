//! Two ranking baselines: the most probable explanation and a Bayes'-factor
//! search over partial assignments.

use causal_expl::explain::{bayes_factor_search, mpe_explanation, BayesFactorForm, ExplainerConfig};
use causal_expl::render::ranking_ascii;
use causal_expl::{networks, Result};

pub fn run_example() -> Result<String> {
    let net = networks::drug();
    let rec = net.assignment([("Recovery", "rec")])?;
    let mut out = ranking_ascii(&net, "most probable explanation", &mpe_explanation(&net, &rec)?);

    let h: Vec<_> = net.ids().filter(|v| !rec.contains(*v)).collect();
    let cfg = ExplainerConfig { top_k: 5, ..ExplainerConfig::default() };
    out += &ranking_ascii(&net, "Bayes' factors", &bayes_factor_search(&net, &h, &rec, &cfg)?);

    let raw = ExplainerConfig { bayes_factor: BayesFactorForm::PosteriorOdds, ..cfg };
    out += &ranking_ascii(&net, "posterior odds", &bayes_factor_search(&net, &h, &rec, &raw)?);
    Ok(out)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
