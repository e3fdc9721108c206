//! Text renderings of trees and rankings.
//!
//! ASCII and DOT show labels to 4 decimal places; JSON keeps full precision.

use std::fmt::Write as _;

use serde_json::json;

use crate::explain::{
    Binding, ExplanationTree, RankedExplanations, ScoreKind, TreeMethod, TreeNode,
};
use crate::network::{Assignment, Network};

/// Fixed 4-decimal label; infinities print as `inf` / `-inf`.
pub fn format_label(v: f64) -> String {
    if v.is_finite() {
        // avoid "-0.0000"
        let s = format!("{v:.4}");
        if s == "-0.0000" {
            "0.0000".to_string()
        } else {
            s
        }
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Probability to 12 decimals with trailing zeros trimmed, so `0.4` prints
/// as `0.4` even when the computed value is off by an ulp.
pub fn format_probability(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn bindings_text(bindings: &[Binding]) -> String {
    if bindings.is_empty() {
        return "∅".to_string();
    }
    bindings
        .iter()
        .map(|b| format!("{}={}", b.variable, b.state))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn tree_ascii(tree: &ExplanationTree) -> String {
    let mut out = String::new();
    let kind = match tree.method {
        TreeMethod::Cet => "causal explanation tree",
        TreeMethod::Et => "explanation tree",
    };
    let _ = write!(out, "{kind} for {}", bindings_text(&tree.explanandum));
    if !tree.observed.is_empty() {
        let _ = write!(out, " given {}", bindings_text(&tree.observed));
    }
    out.push('\n');
    match &tree.root {
        TreeNode::Leaf => {
            let _ = writeln!(out, "(leaf) {}", format_label(tree.root_label));
        }
        node => ascii_node(node, "", &mut out),
    }
    out
}

fn ascii_node(node: &TreeNode, indent: &str, out: &mut String) {
    let TreeNode::Split {
        variable,
        observed,
        branches,
    } = node
    else {
        return;
    };
    if *observed {
        let _ = writeln!(out, "{indent}{variable} (observed)");
    } else {
        let _ = writeln!(out, "{indent}{variable}");
    }
    for (i, b) in branches.iter().enumerate() {
        let last = i + 1 == branches.len();
        let (elbow, pipe) = if last { ("└── ", "    ") } else { ("├── ", "│   ") };
        match b.label {
            Some(l) => {
                let _ = writeln!(out, "{indent}{elbow}{}: {}", b.state, format_label(l));
            }
            None => {
                let _ = writeln!(out, "{indent}{elbow}{}: pruned", b.state);
            }
        }
        if matches!(b.subtree, TreeNode::Split { .. }) {
            ascii_node(&b.subtree, &format!("{indent}{pipe}    "), out);
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph: one statement per tree node (leaves are points) and
/// one labeled edge per branch.
pub fn tree_dot(tree: &ExplanationTree) -> String {
    let mut out = String::new();
    out.push_str("digraph explanation_tree {\n");
    out.push_str("  node [shape=box];\n");
    let mut next = 0;
    match &tree.root {
        TreeNode::Leaf => {
            let _ = writeln!(
                out,
                "  n0 [label=\"{}\", shape=plaintext];",
                dot_escape(&format!("(empty) {}", format_label(tree.root_label)))
            );
        }
        node => {
            dot_node(node, &mut next, &mut out);
        }
    }
    out.push_str("}\n");
    out
}

fn dot_node(node: &TreeNode, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    match node {
        TreeNode::Leaf => {
            let _ = writeln!(out, "  n{id} [label=\"\", shape=point];");
        }
        TreeNode::Split {
            variable,
            observed,
            branches,
        } => {
            let label = if *observed {
                format!("{variable} (observed)")
            } else {
                variable.clone()
            };
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", dot_escape(&label));
            for b in branches {
                let child = dot_node(&b.subtree, next, out);
                let text = match b.label {
                    Some(l) => format!("{}: {}", b.state, format_label(l)),
                    None => format!("{}: pruned", b.state),
                };
                let style = if b.is_pruned() { ", style=dashed" } else { "" };
                let _ = writeln!(
                    out,
                    "  n{id} -> n{child} [label=\"{}\"{style}];",
                    dot_escape(&text)
                );
            }
        }
    }
    id
}

pub fn tree_json(tree: &ExplanationTree) -> String {
    let mut s = tree.to_json();
    s.push('\n');
    s
}

fn kind_name(kind: ScoreKind) -> &'static str {
    match kind {
        ScoreKind::PosteriorProbability => "posterior_probability",
        ScoreKind::BayesFactor => "bayes_factor",
    }
}

pub fn ranking_ascii(net: &Network, title: &str, ranked: &RankedExplanations) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    for (i, entry) in ranked.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. {}  {}",
            i + 1,
            entry.assignment.display(net),
            format_label(entry.score)
        );
    }
    if ranked
        .entries
        .iter()
        .any(|e| e.kind == ScoreKind::BayesFactor)
    {
        let _ = writeln!(
            out,
            "({} hypotheses scored, {} skipped as degenerate)",
            ranked.considered, ranked.skipped_degenerate
        );
    }
    out
}

pub fn ranking_json(net: &Network, explanandum: &Assignment, ranked: &RankedExplanations) -> String {
    let named = |a: &Assignment| {
        Binding::from_assignment(net, a)
            .into_iter()
            .map(|b| json!({"variable": b.variable, "state": b.state}))
            .collect::<Vec<_>>()
    };
    let entries: Vec<_> = ranked
        .entries
        .iter()
        .map(|e| {
            json!({
                "bindings": named(&e.assignment),
                "score": e.score,
                "score_kind": kind_name(e.kind),
            })
        })
        .collect();
    let doc = json!({
        "explanandum": named(explanandum),
        "entries": entries,
        "considered": ranked.considered,
        "skipped_degenerate": ranked.skipped_degenerate,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("ranking serializes");
    s.push('\n');
    s
}
