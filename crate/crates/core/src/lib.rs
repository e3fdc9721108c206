//! Explaining observations in discrete causal Bayesian networks.
//!
//! The centerpiece is the causal explanation tree ([`explain::causal_explanation_tree`]):
//! explanatory variables are picked by how much causal information they send
//! to the explanandum, with interventions (not observations) along each path.
//! Three baselines sit next to it for comparison: noncausal explanation trees
//! built from conditional mutual information, the most probable explanation,
//! and a Bayes'-factor search over partial assignments.
//!
//! Inference is exact ([`Engine`], variable elimination). The [`oracle`]
//! module recomputes everything by brute-force enumeration.
//!
//! ```
//! use causal_expl::{networks, Assignment, Engine, InterventionSet};
//!
//! let net = networks::drug();
//! let engine = Engine::new(&net);
//! let rec = net.assignment([("Recovery", "rec")]).unwrap();
//! let yes = net.assignment([("Drug", "yes")]).unwrap();
//!
//! let seen = engine.event_probability(&rec, &yes).unwrap();
//! let forced = engine
//!     .interventional_probability(&rec, &Assignment::new(), &InterventionSet::from(yes))
//!     .unwrap();
//! assert!((seen - 0.5).abs() < 1e-12);
//! assert!((forced - 0.4).abs() < 1e-12);
//! ```

pub mod causal;
pub mod cli;
pub mod error;
pub mod explain;
pub mod factor;
pub mod format;
pub mod inference;
pub mod network;
pub mod networks;
pub mod oracle;
pub mod render;

pub use causal::{mutilate, InterventionSet};
pub use error::{Error, Result};
pub use explain::{
    bayes_factor_search, best_explanation, causal_explanation_tree, explanation_tree,
    mpe_explanation, ExplainerConfig, ExplanationTree, RankedExplanations,
};
pub use format::{parse_network, to_json};
pub use inference::{Engine, QueryResult};
pub use network::{Assignment, Cpt, Network, VarId, Variable};
