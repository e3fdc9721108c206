//! JSON network file format.
//!
//! ```json
//! {
//!   "name": "drug",
//!   "variables": [{"name": "Sex", "states": ["m", "f"]}, ...],
//!   "cpts": {
//!     "Sex": {"parents": [], "table": [[0.5, 0.5]]},
//!     ...
//!   }
//! }
//! ```
//!
//! Edges are implied by parent lists. Table rows enumerate parent
//! configurations with the last parent varying fastest.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Cpt, Network, VarId, Variable};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    name: String,
    variables: Vec<VariableSpec>,
    cpts: IndexMap<String, CptSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableSpec {
    name: String,
    states: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CptSpec {
    parents: Vec<String>,
    table: Vec<Vec<f64>>,
}

/// Parses and validates network file text.
pub fn parse_network(text: &str) -> Result<Network> {
    let file: NetworkFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let variables = file
        .variables
        .into_iter()
        .map(|v| Variable::new(v.name, v.states))
        .collect::<Result<Vec<_>>>()?;
    let lookup = |name: &str| {
        variables
            .iter()
            .position(|v| v.name() == name)
            .map(VarId)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    };

    let mut cpts = Vec::with_capacity(file.cpts.len());
    for (child, spec) in file.cpts {
        let child = lookup(&child)?;
        let parents = spec
            .parents
            .iter()
            .map(|p| lookup(p))
            .collect::<Result<Vec<_>>>()?;
        cpts.push(Cpt::new(child, parents, spec.table));
    }
    Network::new(file.name, variables, cpts)
}

/// Serializes a network to the file format; `parse_network` reads it back
/// to an identical network.
pub fn to_json(net: &Network) -> String {
    let quote = |s: &str| serde_json::to_string(s).expect("string serializes");
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"name\": {},\n", quote(net.name())));
    out.push_str("  \"variables\": [\n");
    for (i, v) in net.variables().iter().enumerate() {
        let states = serde_json::to_string(v.states()).expect("states serialize");
        let sep = if i + 1 < net.len() { "," } else { "" };
        out.push_str(&format!(
            "    {{\"name\": {}, \"states\": {}}}{sep}\n",
            quote(v.name()),
            states
        ));
    }
    out.push_str("  ],\n");
    out.push_str("  \"cpts\": {\n");
    for (i, cpt) in net.cpts().iter().enumerate() {
        let parents: Vec<&str> = cpt
            .parents()
            .iter()
            .map(|p| net.variable(*p).name())
            .collect();
        let table = serde_json::to_string(cpt.rows()).expect("table serializes");
        let sep = if i + 1 < net.len() { "," } else { "" };
        out.push_str(&format!(
            "    {}: {{\"parents\": {}, \"table\": {}}}{sep}\n",
            quote(net.variable(cpt.child()).name()),
            serde_json::to_string(&parents).expect("parents serialize"),
            table
        ));
    }
    out.push_str("  }\n}\n");
    out
}
