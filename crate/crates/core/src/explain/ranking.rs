use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::causal::InterventionSet;
use crate::error::{Error, Result};
use crate::explain::{BayesFactorForm, ExplainerConfig};
use crate::inference::Engine;
use crate::network::{Assignment, Network, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreKind {
    PosteriorProbability,
    BayesFactor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedEntry {
    pub assignment: Assignment,
    pub score: f64,
    pub kind: ScoreKind,
}

/// Explanations sorted by nonincreasing score; equal scores are ordered by
/// assignment (variable declaration order, then state index).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankedExplanations {
    pub entries: Vec<RankedEntry>,
    /// Hypotheses scored before truncation to `top_k`.
    pub considered: usize,
    /// Hypotheses skipped because their Bayes' factor is undefined
    /// (prior probability 0 or 1, or posterior probability 1).
    pub skipped_degenerate: usize,
}

/// The most probable completion of `evidence`, as a one-entry ranking.
pub fn mpe_explanation(net: &Network, evidence: &Assignment) -> Result<RankedExplanations> {
    let (assignment, score) = Engine::new(net).mpe(evidence)?;
    Ok(RankedExplanations {
        entries: vec![RankedEntry {
            assignment,
            score,
            kind: ScoreKind::PosteriorProbability,
        }],
        considered: 1,
        skipped_degenerate: 0,
    })
}

/// Scores every assignment to every subset of `hypotheses` with
/// 1..=`max_subset_size` variables and keeps the `top_k` best.
pub fn bayes_factor_search(
    net: &Network,
    hypotheses: &[VarId],
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<RankedExplanations> {
    bayes_factor_search_with(&Engine::new(net), hypotheses, e, config)
}

pub fn bayes_factor_search_with(
    engine: &Engine<'_>,
    hypotheses: &[VarId],
    e: &Assignment,
    config: &ExplainerConfig,
) -> Result<RankedExplanations> {
    config.validate()?;
    let net = engine.network();
    net.check_assignment(e)?;
    let hypotheses: Vec<VarId> = hypotheses
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
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
    if config.max_subset_size > hypotheses.len() {
        return Err(Error::InvalidConfig(format!(
            "max_subset_size {} exceeds the {} hypothesis variables",
            config.max_subset_size,
            hypotheses.len()
        )));
    }

    let none = InterventionSet::empty();
    let mut entries = Vec::new();
    let mut skipped = 0;
    for size in 1..=config.max_subset_size {
        for subset in combinations(&hypotheses, size) {
            let prior = engine.query(&subset, &Assignment::new(), &none)?;
            let posterior = engine.query(&subset, e, &none)?;
            let (prior, posterior) = (prior.distribution, posterior.distribution);
            for (idx, (p, q)) in prior.values().iter().zip(posterior.values()).enumerate() {
                let (p, q) = (*p, *q);
                let degenerate = p <= 0.0 || p >= 1.0 || q >= 1.0;
                if degenerate {
                    skipped += 1;
                    continue;
                }
                let odds = q / (1.0 - q);
                let score = match config.bayes_factor {
                    BayesFactorForm::PriorNormalized => odds / (p / (1.0 - p)),
                    BayesFactorForm::PosteriorOdds => odds,
                };
                entries.push(RankedEntry {
                    assignment: prior.assignment_at(idx),
                    score,
                    kind: ScoreKind::BayesFactor,
                });
            }
        }
    }

    let considered = entries.len();
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.assignment.cmp(&b.assignment))
    });
    entries.truncate(config.top_k);
    Ok(RankedExplanations {
        entries,
        considered,
        skipped_degenerate: skipped,
    })
}

/// `k`-subsets in lexicographic order.
fn combinations(items: &[VarId], k: usize) -> Vec<Vec<VarId>> {
    fn go(items: &[VarId], k: usize, start: usize, cur: &mut Vec<VarId>, out: &mut Vec<Vec<VarId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}
