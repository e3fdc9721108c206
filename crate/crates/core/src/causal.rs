//! Interventions and causal information flow.
//!
//! `do(X = x)` is evaluated in the mutilated network: incoming edges of `X`
//! are cut and its CPT becomes a point mass on `x`. Observations are
//! conditioned on afterwards, inside the post-intervention distribution.
//!
//! All flow measures are in bits.

use crate::error::{Error, Result};
use crate::inference::Engine;
use crate::network::{Assignment, Cpt, Network, VarId};

/// A set of `do(X = x)` bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InterventionSet(Assignment);

impl InterventionSet {
    pub fn empty() -> Self {
        InterventionSet(Assignment::new())
    }

    pub fn bindings(&self) -> &Assignment {
        &self.0
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.0.get(var)
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.0.contains(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// This set plus `do(var = state)`, replacing any earlier binding of `var`.
    pub fn with(&self, var: VarId, state: usize) -> Self {
        InterventionSet(self.0.with(var, state))
    }
}

impl From<Assignment> for InterventionSet {
    fn from(a: Assignment) -> Self {
        InterventionSet(a)
    }
}

/// Returns the mutilated network for `do_set`; the input is untouched.
pub fn mutilate(net: &Network, do_set: &InterventionSet) -> Result<Network> {
    net.check_assignment(do_set.bindings())?;
    let replacements = do_set
        .bindings()
        .iter()
        .map(|(v, s)| Cpt::point_mass(v, net.cardinality(v), s))
        .collect();
    net.replace_cpts(replacements)
}

/// Per-state ingredients of the flow from `X` to an explanandum `e`.
///
/// `weights[x] = p(x | o, do(p))`, `effects[x] = p(e | o, do(p), do(x))`.
/// Effects are only evaluated where the weight is positive (which guarantees
/// the observations stay possible under `do(x)`); elsewhere they are `None`.
#[derive(Clone, Debug)]
pub(crate) struct FlowTerms {
    pub weights: Vec<f64>,
    pub effects: Vec<Option<f64>>,
}

impl FlowTerms {
    /// `Σ_x p(x | o, p̂) p(e | o, x̂, p̂)`.
    pub fn interventional_mixture(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.effects)
            .filter_map(|(w, r)| r.map(|r| w * r))
            .sum()
    }

    /// Expected-form flow to the explanandum state; `prior` is `p(e | o, p̂)`.
    pub fn state_flow(&self, prior: f64) -> f64 {
        let mixture = self.interventional_mixture();
        if mixture <= 0.0 || prior <= 0.0 {
            return 0.0;
        }
        self.weights
            .iter()
            .zip(&self.effects)
            .filter_map(|(w, r)| r.map(|r| (w, r)))
            .filter(|(w, r)| **w > 0.0 && *r > 0.0)
            .map(|(w, r)| w * r / prior * (r / mixture).log2())
            .sum()
    }

    /// Pointwise flow for the known state `x`.
    pub fn pointwise(&self, x: usize) -> Option<f64> {
        let r = self.effects[x]?;
        Some((r / self.interventional_mixture()).log2())
    }
}

impl Engine<'_> {
    /// `p(event | observed)` evaluated in the network mutilated by `do_set`.
    pub fn interventional_probability(
        &self,
        event: &Assignment,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        self.conditional(event, observed, do_set)
    }

    /// Causal information flow `I(X → Y | do(ẑ))`.
    pub fn information_flow(&self, x: VarId, y: VarId, do_set: &InterventionSet) -> Result<f64> {
        self.information_flow_given(x, y, &Assignment::new(), do_set)
    }

    /// Causal information flow with additional observational conditioning:
    /// `Σ_x p(x|o,ẑ) Σ_y p(y|o,x̂,ẑ) log₂ p(y|o,x̂,ẑ) / p*(y|o,ẑ)`.
    pub fn information_flow_given(
        &self,
        x: VarId,
        y: VarId,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        if x == y {
            return Err(Error::InvalidQuery("flow needs two distinct variables".into()));
        }
        for v in [x, y] {
            if do_set.contains(v) || observed.contains(v) {
                return Err(Error::InvalidQuery(format!(
                    "`{}` is already bound",
                    self.network().variable(v).name()
                )));
            }
        }
        let weights = self.marginal(x, observed, do_set)?;
        let ny = self.network().cardinality(y);
        let mut effects: Vec<Option<Vec<f64>>> = Vec::with_capacity(weights.len());
        for (state, w) in weights.iter().enumerate() {
            if *w > 0.0 {
                effects.push(Some(self.marginal(y, observed, &do_set.with(x, state))?));
            } else {
                effects.push(None);
            }
        }
        let mut mixture = vec![0.0; ny];
        for (w, r) in weights.iter().zip(&effects) {
            if let Some(r) = r {
                for (m, ry) in mixture.iter_mut().zip(r) {
                    *m += w * ry;
                }
            }
        }
        let mut total = 0.0;
        for (w, r) in weights.iter().zip(&effects) {
            let Some(r) = r else { continue };
            for (ry, my) in r.iter().zip(&mixture) {
                if *ry > 0.0 {
                    total += w * ry * (ry / my).log2();
                }
            }
        }
        Ok(total)
    }

    /// Flow from `X` to the explanandum state `e`, divided by `p(e | o, p̂)`.
    /// May be negative.
    pub fn flow_to_state(
        &self,
        x: VarId,
        e: &Assignment,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        self.check_flow_args(x, e, observed, do_set)?;
        let prior = self.conditional(e, observed, do_set)?;
        if prior <= 0.0 {
            return Err(self.impossible_explanandum(e, observed));
        }
        let terms = self.flow_terms(x, e, observed, do_set)?;
        Ok(terms.state_flow(prior))
    }

    /// Pointwise flow from the known `X = x` to `e`, with `observed_rest`
    /// the observations other than `X = x`.
    pub fn pointwise_flow(
        &self,
        x: (VarId, usize),
        e: &Assignment,
        observed_rest: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        let (var, state) = x;
        self.check_flow_args(var, e, observed_rest, do_set)?;
        if state >= self.network().cardinality(var) {
            return Err(Error::InvalidQuery("state out of range".into()));
        }
        let mut terms = self.flow_terms(var, e, observed_rest, do_set)?;
        if terms.effects[state].is_none() {
            terms.effects[state] = Some(self.conditional(e, observed_rest, &do_set.with(var, state))?);
        }
        Ok(terms.pointwise(state).expect("effect just computed"))
    }

    /// One call for the weights plus one per positive-weight state.
    pub(crate) fn flow_terms(
        &self,
        x: VarId,
        e: &Assignment,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<FlowTerms> {
        let weights = self.marginal(x, observed, do_set)?;
        let mut effects = Vec::with_capacity(weights.len());
        for (state, w) in weights.iter().enumerate() {
            if *w > 0.0 {
                effects.push(Some(self.conditional(e, observed, &do_set.with(x, state))?));
            } else {
                effects.push(None);
            }
        }
        Ok(FlowTerms { weights, effects })
    }

    fn check_flow_args(
        &self,
        x: VarId,
        e: &Assignment,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<()> {
        if e.is_empty() {
            return Err(Error::InvalidQuery("explanandum is empty".into()));
        }
        if e.contains(x) || observed.contains(x) || do_set.contains(x) {
            return Err(Error::InvalidQuery(format!(
                "`{}` is already bound",
                self.network().variable(x).name()
            )));
        }
        Ok(())
    }

    pub(crate) fn impossible_explanandum(&self, e: &Assignment, observed: &Assignment) -> Error {
        let net = self.network();
        Error::ImpossibleConditioning(format!(
            "{} | {} (explanandum has probability zero)",
            e.display(net),
            observed.display(net)
        ))
    }
}

pub fn interventional_probability(
    net: &Network,
    event: &Assignment,
    observed: &Assignment,
    do_set: &InterventionSet,
) -> Result<f64> {
    Engine::new(net).interventional_probability(event, observed, do_set)
}

pub fn information_flow(net: &Network, x: VarId, y: VarId, do_set: &InterventionSet) -> Result<f64> {
    Engine::new(net).information_flow(x, y, do_set)
}

pub fn flow_to_state(
    net: &Network,
    x: VarId,
    e: &Assignment,
    observed: &Assignment,
    do_set: &InterventionSet,
) -> Result<f64> {
    Engine::new(net).flow_to_state(x, e, observed, do_set)
}

pub fn pointwise_flow(
    net: &Network,
    x: (VarId, usize),
    e: &Assignment,
    observed_rest: &Assignment,
    do_set: &InterventionSet,
) -> Result<f64> {
    Engine::new(net).pointwise_flow(x, e, observed_rest, do_set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks;

    #[test]
    fn mutilate_drug() {
        let net = networks::drug();
        let drug = net.var_id("Drug").unwrap();
        let m = mutilate(&net, &InterventionSet::from(net.assignment([("Drug", "yes")]).unwrap()))
            .unwrap();
        assert!(m.parents(drug).is_empty());
        assert_eq!(m.cpt(drug).rows(), &[vec![1.0, 0.0]]);
        assert_eq!(m.cpt(net.var_id("Recovery").unwrap()), net.cpt(net.var_id("Recovery").unwrap()));
        assert_eq!(mutilate(&net, &InterventionSet::empty()).unwrap(), net);
    }

    #[test]
    fn simpson_gap() {
        let net = networks::drug();
        let rec = net.assignment([("Recovery", "rec")]).unwrap();
        let yes = net.assignment([("Drug", "yes")]).unwrap();
        let e = Engine::new(&net);
        let obs = e.event_probability(&rec, &yes).unwrap();
        let int = e
            .interventional_probability(&rec, &Assignment::new(), &yes.clone().into())
            .unwrap();
        assert!((obs - 0.5).abs() < 1e-12);
        assert!((int - 0.4).abs() < 1e-12);
    }

    #[test]
    fn pointwise_negative_for_drug() {
        let net = networks::drug();
        let drug = net.var_id("Drug").unwrap();
        let rec = net.assignment([("Recovery", "rec")]).unwrap();
        let v = pointwise_flow(&net, (drug, 0), &rec, &Assignment::new(), &InterventionSet::empty())
            .unwrap();
        assert!((v - (0.4f64 / 0.45).log2()).abs() < 1e-12);
    }

    #[test]
    fn flow_rejects_bound_variable() {
        let net = networks::drug();
        let sex = net.var_id("Sex").unwrap();
        let rec = net.assignment([("Recovery", "rec")]).unwrap();
        let m = net.assignment([("Sex", "m")]).unwrap();
        assert!(flow_to_state(&net, sex, &rec, &m, &InterventionSet::empty()).is_err());
        assert!(flow_to_state(&net, sex, &rec, &Assignment::new(), &m.into()).is_err());
    }
}
