use std::collections::BTreeSet;

use crate::causal::InterventionSet;
use crate::error::{Error, Result};
use crate::explain::tree::{Binding, Branch, ExplanationTree, TreeMethod, TreeNode};
use crate::explain::{ExplainerConfig, NodeCost, TIE_TOLERANCE};
use crate::inference::Engine;
use crate::network::{Assignment, Network, VarId};

/// Builds a causal explanation tree for `e` given observations `observed`.
///
/// At each node the candidate with the largest flow to `e` (pointwise flow for
/// observed candidates) becomes the split variable, unless that flow is below
/// `config.alpha`. Each branch intervenes on its state; its label is
/// `log₂ p(e | o, do(path)) / p(e | o)`, with intervened variables dropped
/// from `o`.
pub fn causal_explanation_tree(
    net: &Network,
    hypotheses: &[VarId],
    observed: &Assignment,
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<ExplanationTree> {
    let engine = Engine::new(net);
    causal_explanation_tree_with(&engine, hypotheses, observed, e, config).map(|(t, _)| t)
}

/// Same as [`causal_explanation_tree`] on a caller-supplied engine; also
/// returns the inference calls spent at each node.
pub fn causal_explanation_tree_with(
    engine: &Engine<'_>,
    hypotheses: &[VarId],
    observed: &Assignment,
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<(ExplanationTree, Vec<NodeCost>)> {
    config.validate()?;
    let net = engine.network();
    net.check_assignment(observed)?;
    net.check_assignment(e)?;
    if e.is_empty() {
        return Err(Error::InvalidQuery("explanandum is empty".into()));
    }
    let hypotheses: Vec<VarId> = hypotheses.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for h in &hypotheses {
        if h.index() >= net.len() {
            return Err(Error::UnknownVariable(format!("#{}", h.index())));
        }
        if e.contains(*h) {
            return Err(Error::InvalidQuery(format!(
                "`{}` is part of the explanandum",
                net.variable(*h).name()
            )));
        }
    }

    let prior = engine.event_probability(e, observed)?;
    if prior <= 0.0 {
        return Err(engine.impossible_explanandum(e, observed));
    }
    let observed = observed.minus_vars(e);

    let mut builder = Builder {
        engine,
        e,
        config,
        root_prior: prior,
        costs: Vec::new(),
    };
    let root = builder.grow(&hypotheses, &observed, &InterventionSet::empty(), prior)?;
    let tree = ExplanationTree {
        method: TreeMethod::Cet,
        explanandum: Binding::from_assignment(net, e),
        observed: Binding::from_assignment(net, &observed),
        root_label: 0.0,
        root,
    };
    Ok((tree, builder.costs))
}

struct Candidate {
    var: VarId,
    score: f64,
    /// `p(e | o, do(path), do(x))` per state where already known.
    effects: Vec<Option<f64>>,
    /// Known state when the candidate is observed.
    known: Option<usize>,
}

struct Builder<'a, 'n> {
    engine: &'a Engine<'n>,
    e: &'a Assignment,
    config: &'a ExplainerConfig,
    root_prior: f64,
    costs: Vec<NodeCost>,
}

impl Builder<'_, '_> {
    /// `prior` is `p(e | observed, do(path))`, known from the parent branch.
    fn grow(
        &mut self,
        hypotheses: &[VarId],
        observed: &Assignment,
        path: &InterventionSet,
        prior: f64,
    ) -> Result<TreeNode> {
        if hypotheses.is_empty() || prior <= 0.0 {
            return Ok(TreeNode::Leaf);
        }
        let start = self.engine.calls();
        let mut best: Option<Candidate> = None;
        for &x in hypotheses {
            if self.config.prune_unreachable && !self.reaches_explanandum(x, observed, path) {
                continue;
            }
            let candidate = self.score(x, observed, path, prior)?;
            if best.as_ref().is_none_or(|b| candidate.score > b.score + TIE_TOLERANCE) {
                best = Some(candidate);
            }
        }

        let Some(best) = best.filter(|b| b.score >= self.config.alpha) else {
            self.record(hypotheses.len(), start);
            return Ok(TreeNode::Leaf);
        };

        let net = self.engine.network();
        let var = best.var;
        let rest: Vec<VarId> = hypotheses.iter().copied().filter(|h| *h != var).collect();
        let (child_observed, states): (Assignment, Vec<usize>) = match best.known {
            Some(s) => (observed.without(var), vec![s]),
            None => (observed.clone(), (0..net.cardinality(var)).collect()),
        };

        let mut effects = Vec::with_capacity(states.len());
        for &s in &states {
            let effect = match best.effects[s] {
                Some(r) => Some(r),
                None => {
                    match self.engine.conditional(self.e, &child_observed, &path.with(var, s)) {
                        Ok(r) => Some(r),
                        Err(Error::ImpossibleConditioning(_)) => None,
                        Err(err) => return Err(err),
                    }
                }
            };
            effects.push((s, effect));
        }
        self.record(hypotheses.len(), start);

        let mut branches = Vec::with_capacity(effects.len());
        for (s, effect) in effects {
            let state = net.variable(var).states()[s].clone();
            let branch = match effect {
                None => Branch {
                    state,
                    label: None,
                    subtree: TreeNode::Leaf,
                },
                Some(r) => Branch {
                    state,
                    label: Some((r / self.root_prior).log2()),
                    subtree: self.grow(&rest, &child_observed, &path.with(var, s), r)?,
                },
            };
            branches.push(branch);
        }
        Ok(TreeNode::Split {
            variable: net.variable(var).name().to_string(),
            observed: best.known.is_some(),
            branches,
        })
    }

    fn score(
        &self,
        x: VarId,
        observed: &Assignment,
        path: &InterventionSet,
        prior: f64,
    ) -> Result<Candidate> {
        match observed.get(x) {
            Some(known) => {
                let rest = observed.without(x);
                let mut terms = self.engine.flow_terms(x, self.e, &rest, path)?;
                if terms.effects[known].is_none() {
                    terms.effects[known] =
                        Some(self.engine.conditional(self.e, &rest, &path.with(x, known))?);
                }
                let score = terms.pointwise(known).expect("known effect computed");
                Ok(Candidate {
                    var: x,
                    score,
                    effects: terms.effects,
                    known: Some(known),
                })
            }
            None => {
                let terms = self.engine.flow_terms(x, self.e, observed, path)?;
                Ok(Candidate {
                    var: x,
                    score: terms.state_flow(prior),
                    effects: terms.effects,
                    known: None,
                })
            }
        }
    }

    /// Directed path from `x` to some explanandum variable avoiding the
    /// other observed and intervened variables.
    fn reaches_explanandum(&self, x: VarId, observed: &Assignment, path: &InterventionSet) -> bool {
        let net = self.engine.network();
        let blocked: BTreeSet<VarId> = observed
            .vars()
            .chain(path.bindings().vars())
            .filter(|v| *v != x && !self.e.contains(*v))
            .collect();
        self.e.vars().any(|t| net.reachable(x, t, &blocked))
    }

    fn record(&mut self, hypotheses: usize, start: usize) {
        self.costs.push(NodeCost {
            hypotheses,
            calls: self.engine.calls() - start,
        });
    }
}
