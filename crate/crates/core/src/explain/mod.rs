//! Explanation methods.
//!
//! - [`causal_explanation_tree`]: grows a tree by causal information flow to
//!   the explanandum, intervening on each chosen state.
//! - [`explanation_tree`]: the mutual-information tree baseline.
//! - [`mpe_explanation`]: most probable full completion.
//! - [`bayes_factor_search`]: ranks small partial assignments by Bayes' factor.

mod cet;
mod et;
mod ranking;
mod tree;

use crate::error::{Error, Result};

pub use cet::{causal_explanation_tree, causal_explanation_tree_with};
pub use et::{explanation_tree, explanation_tree_with};
pub use ranking::{
    bayes_factor_search, bayes_factor_search_with, mpe_explanation, RankedEntry,
    RankedExplanations, ScoreKind,
};
pub use tree::{
    best_explanation, BestExplanation, Binding, Branch, ExplanationTree, TreeMethod, TreeNode,
    TreePath,
};

/// Scores closer than this count as tied; the earlier-declared variable wins.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

/// Which Bayes' factor to rank by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BayesFactorForm {
    /// Posterior odds over prior odds, `[p(h|e)/(1−p(h|e))] / [p(h)/(1−p(h))]`.
    #[default]
    PriorNormalized,
    /// Posterior odds alone, `p(h|e)/(1−p(h|e))`.
    PosteriorOdds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExplainerConfig {
    /// Minimum information needed to add a node (both trees).
    pub alpha: f64,
    /// Minimum path posterior needed to keep expanding (noncausal tree only).
    /// A path is expanded only while `p(path | e) > beta`.
    pub beta: f64,
    /// Largest hypothesis size in the Bayes' factor search.
    pub max_subset_size: usize,
    /// Number of ranked hypotheses to return.
    pub top_k: usize,
    pub bayes_factor: BayesFactorForm,
    /// Skip causal-tree candidates with no directed path to the explanandum
    /// that avoids observed and intervened variables.
    pub prune_unreachable: bool,
}

impl Default for ExplainerConfig {
    fn default() -> Self {
        ExplainerConfig {
            alpha: 0.0,
            beta: 0.0,
            max_subset_size: 2,
            top_k: 3,
            bayes_factor: BayesFactorForm::PriorNormalized,
            prune_unreachable: true,
        }
    }
}

impl ExplainerConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be a finite value >= 0, got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidConfig(format!(
                "beta must lie in [0, 1], got {}",
                self.beta
            )));
        }
        if self.max_subset_size == 0 {
            return Err(Error::InvalidConfig("max_subset_size must be positive".into()));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be positive".into()));
        }
        Ok(())
    }
}

/// Inference calls spent choosing the variable at one tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeCost {
    /// Size of the hypothesis set at this node.
    pub hypotheses: usize,
    pub calls: usize,
}
