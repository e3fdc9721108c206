use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Assignment, Network};

/// Which algorithm produced a tree, and so how its labels read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeMethod {
    /// Causal tree; labels are `log₂ p(e | o, do(path)) / p(e | o)`.
    Cet,
    /// Noncausal tree; labels are `p(path | e)`.
    Et,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Binding {
    pub variable: String,
    pub state: String,
}

impl Binding {
    pub fn new(variable: impl Into<String>, state: impl Into<String>) -> Self {
        Binding {
            variable: variable.into(),
            state: state.into(),
        }
    }

    pub fn from_assignment(net: &Network, a: &Assignment) -> Vec<Binding> {
        a.named(net)
            .into_iter()
            .map(|(v, s)| Binding::new(v, s))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplanationTree {
    pub method: TreeMethod,
    pub explanandum: Vec<Binding>,
    #[serde(default)]
    pub observed: Vec<Binding>,
    /// Label of the empty path: 0 for causal trees, 1 for noncausal ones.
    #[serde(with = "label")]
    pub root_label: f64,
    pub root: TreeNode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf,
    Split {
        variable: String,
        /// The variable was observed; only its known state is branched on.
        #[serde(default)]
        observed: bool,
        branches: Vec<Branch>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub state: String,
    /// `None` marks a pruned branch: intervening on this state makes the
    /// observations impossible.
    #[serde(with = "optional_label")]
    pub label: Option<f64>,
    pub subtree: TreeNode,
}

impl Branch {
    pub fn is_pruned(&self) -> bool {
        self.label.is_none()
    }
}

/// A root-to-leaf path and the label of its last branch.
#[derive(Clone, Debug, PartialEq)]
pub struct TreePath {
    pub bindings: Vec<Binding>,
    pub label: f64,
}

impl ExplanationTree {
    pub fn is_empty(&self) -> bool {
        matches!(self.root, TreeNode::Leaf)
    }

    /// Every unpruned root-to-leaf path, depth first, branches in domain order.
    pub fn paths(&self) -> Vec<TreePath> {
        let mut out = Vec::new();
        if self.is_empty() {
            out.push(TreePath {
                bindings: Vec::new(),
                label: self.root_label,
            });
            return out;
        }
        collect_paths(&self.root, &mut Vec::new(), self.root_label, &mut out);
        out
    }

    /// Number of split nodes.
    pub fn split_count(&self) -> usize {
        fn count(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf => 0,
                TreeNode::Split { branches, .. } => {
                    1 + branches.iter().map(|b| count(&b.subtree)).sum::<usize>()
                }
            }
        }
        count(&self.root)
    }

    pub fn depth(&self) -> usize {
        fn depth(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf => 0,
                TreeNode::Split { branches, .. } => {
                    1 + branches.iter().map(|b| depth(&b.subtree)).max().unwrap_or(0)
                }
            }
        }
        depth(&self.root)
    }

    /// Variable at the root, if any.
    pub fn root_variable(&self) -> Option<&str> {
        match &self.root {
            TreeNode::Leaf => None,
            TreeNode::Split { variable, .. } => Some(variable),
        }
    }

    /// Subtree reached by following `path` of state labels from the root.
    pub fn node_at(&self, path: &[&str]) -> Option<&TreeNode> {
        let mut node = &self.root;
        for state in path {
            match node {
                TreeNode::Leaf => return None,
                TreeNode::Split { branches, .. } => {
                    node = &branches.iter().find(|b| b.state == *state)?.subtree;
                }
            }
        }
        Some(node)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

fn collect_paths(node: &TreeNode, prefix: &mut Vec<Binding>, label: f64, out: &mut Vec<TreePath>) {
    match node {
        TreeNode::Leaf => out.push(TreePath {
            bindings: prefix.clone(),
            label,
        }),
        TreeNode::Split {
            variable, branches, ..
        } => {
            for b in branches {
                let Some(l) = b.label else { continue };
                prefix.push(Binding::new(variable.clone(), b.state.clone()));
                collect_paths(&b.subtree, prefix, l, out);
                prefix.pop();
            }
        }
    }
}

/// The best path of a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct BestExplanation {
    pub bindings: Vec<Binding>,
    pub score: f64,
}

/// Path whose final label is largest; the first such path wins ties.
///
/// For noncausal trees that label is `p(path | e)`; for causal trees it is the
/// log-ratio contribution of the full intervention path.
pub fn best_explanation(tree: &ExplanationTree) -> Result<BestExplanation> {
    let mut best: Option<TreePath> = None;
    for p in tree.paths() {
        if best.as_ref().is_none_or(|b| p.label > b.label) {
            best = Some(p);
        }
    }
    let best = best.ok_or(Error::EmptyTree)?;
    Ok(BestExplanation {
        bindings: best.bindings,
        score: best.label,
    })
}

/// Labels may be infinite (a path that makes the explanandum impossible has
/// label −∞), which JSON numbers cannot carry; those go out as strings.
mod label {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad label `{other}`"))),
            },
        }
    }
}

mod optional_label {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::label::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::label")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
