use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::explain::tree::{Binding, Branch, ExplanationTree, TreeMethod, TreeNode};
use crate::explain::{ExplainerConfig, NodeCost, TIE_TOLERANCE};
use crate::inference::Engine;
use crate::causal::InterventionSet;
use crate::network::{Assignment, Network, VarId};

/// Noncausal explanation tree.
///
/// The split variable maximizes `Σ_{Y ≠ X} I(X; Y | e, path)` over the
/// remaining hypotheses. A node stays a leaf when `p(path | e) <= beta`, or
/// when the best pairwise information of the chosen variable is below `alpha`
/// (a lone remaining variable has no partner and is always expanded). Branch
/// labels are `p(path, x | e)`.
pub fn explanation_tree(
    net: &Network,
    hypotheses: &[VarId],
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<ExplanationTree> {
    let engine = Engine::new(net);
    explanation_tree_with(&engine, hypotheses, e, config).map(|(t, _)| t)
}

pub fn explanation_tree_with(
    engine: &Engine<'_>,
    hypotheses: &[VarId],
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<(ExplanationTree, Vec<NodeCost>)> {
    config.validate()?;
    let net = engine.network();
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
    let pe = engine
        .query(&[], e, &InterventionSet::empty())
        .map_err(|_| engine.impossible_explanandum(e, &Assignment::new()))?
        .evidence_probability;
    debug_assert!(pe > 0.0);

    let mut builder = Builder {
        engine,
        e,
        config,
        costs: Vec::new(),
    };
    let root = builder.grow(&hypotheses, &Assignment::new(), 1.0)?;
    let tree = ExplanationTree {
        method: TreeMethod::Et,
        explanandum: Binding::from_assignment(net, e),
        observed: Vec::new(),
        root_label: 1.0,
        root,
    };
    Ok((tree, builder.costs))
}

struct Builder<'a, 'n> {
    engine: &'a Engine<'n>,
    e: &'a Assignment,
    config: &'a ExplainerConfig,
    costs: Vec<NodeCost>,
}

impl Builder<'_, '_> {
    fn grow(&mut self, hypotheses: &[VarId], path: &Assignment, path_prob: f64) -> Result<TreeNode> {
        if hypotheses.is_empty() || path_prob <= self.config.beta {
            return Ok(TreeNode::Leaf);
        }
        let start = self.engine.calls();
        let context = self
            .e
            .union(path)
            .expect("path variables are disjoint from the explanandum");

        let n = hypotheses.len();
        let mut info = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.engine.conditional_mutual_information(
                    hypotheses[i],
                    hypotheses[j],
                    &context,
                )?;
                info[i][j] = v;
                info[j][i] = v;
            }
        }
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, row) in info.iter().enumerate() {
            let score: f64 = row.iter().sum();
            if score > best_score + TIE_TOLERANCE {
                best = i;
                best_score = score;
            }
        }
        if n > 1 {
            let strongest = info[best]
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != best)
                .map(|(_, v)| *v)
                .fold(f64::NEG_INFINITY, f64::max);
            if strongest < self.config.alpha {
                self.record(n, start);
                return Ok(TreeNode::Leaf);
            }
        }

        let var = hypotheses[best];
        let posterior = self
            .engine
            .marginal(var, &context, &InterventionSet::empty())?;
        self.record(n, start);

        let rest: Vec<VarId> = hypotheses.iter().copied().filter(|h| *h != var).collect();
        let net = self.engine.network();
        let mut branches = Vec::with_capacity(posterior.len());
        for (s, p) in posterior.iter().enumerate() {
            let label = path_prob * p;
            branches.push(Branch {
                state: net.variable(var).states()[s].clone(),
                label: Some(label),
                subtree: self.grow(&rest, &path.with(var, s), label)?,
            });
        }
        Ok(TreeNode::Split {
            variable: net.variable(var).name().to_string(),
            observed: false,
            branches,
        })
    }

    fn record(&mut self, hypotheses: usize, start: usize) {
        self.costs.push(NodeCost {
            hypotheses,
            calls: self.engine.calls() - start,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explain::tree::best_explanation;
    use crate::networks;

    #[test]
    fn drug_tree_prefers_sex_then_drug() {
        let net = networks::drug();
        let h = [net.var_id("Sex").unwrap(), net.var_id("Drug").unwrap()];
        let e = net.assignment([("Recovery", "rec")]).unwrap();
        let cfg = ExplainerConfig::default().with_alpha(0.02);
        let t = explanation_tree(&net, &h, &e, &cfg).unwrap();
        assert_eq!(t.root_variable(), Some("Sex"));
        assert_eq!(t.depth(), 2);
        let best = best_explanation(&t).unwrap();
        assert_eq!(
            best.bindings,
            vec![Binding::new("Sex", "m"), Binding::new("Drug", "yes")]
        );
        assert!((best.score - 0.5).abs() < 1e-12);
    }

    #[test]
    fn beta_one_gives_empty_tree() {
        let net = networks::drug();
        let h = [net.var_id("Sex").unwrap(), net.var_id("Drug").unwrap()];
        let e = net.assignment([("Recovery", "rec")]).unwrap();
        let cfg = ExplainerConfig::default().with_beta(1.0);
        assert!(explanation_tree(&net, &h, &e, &cfg).unwrap().is_empty());
    }

    #[test]
    fn singleton_hypothesis() {
        let net = networks::drug();
        let sex = net.var_id("Sex").unwrap();
        let e = net.assignment([("Recovery", "rec")]).unwrap();
        let t = explanation_tree(&net, &[sex], &e, &ExplainerConfig::default().with_alpha(0.5))
            .unwrap();
        assert_eq!(t.root_variable(), Some("Sex"));
        let labels: Vec<f64> = t.paths().iter().map(|p| p.label).collect();
        assert!((labels[0] - 0.3125 / 0.45).abs() < 1e-12);
        assert!((labels[1] - 0.1375 / 0.45).abs() < 1e-12);
    }

    #[test]
    fn impossible_explanandum() {
        let net = networks::asia();
        let e = net
            .assignment([("TbOrCa", "no"), ("LungCancer", "yes")])
            .unwrap();
        let h = [net.var_id("Smoker").unwrap()];
        assert!(matches!(
            explanation_tree(&net, &h, &e, &ExplainerConfig::default()),
            Err(Error::ImpossibleConditioning(_))
        ));
    }
}
