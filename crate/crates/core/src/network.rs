//! Discrete causal Bayesian network data model.
//!
//! A [`Network`] owns its variables in declaration order and one [`Cpt`] per
//! variable. Edges are implied by CPT parent lists. Every constructor
//! validates, so a `Network` value is always a DAG with normalized CPT rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Maximum deviation of a CPT row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Index of a variable in its network's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    name: String,
    states: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: S, states: Vec<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidNetwork("variable name is empty".into()));
        }
        if states.len() < 2 {
            return Err(Error::InvalidNetwork(format!(
                "variable `{name}` needs at least 2 states, got {}",
                states.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if s.is_empty() {
                return Err(Error::InvalidNetwork(format!(
                    "variable `{name}` has an empty state label"
                )));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidNetwork(format!(
                    "variable `{name}` repeats state `{s}`"
                )));
            }
        }
        Ok(Variable { name, states })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }
}

/// Conditional probability table `p(child | parents)`.
///
/// One row per parent configuration, ordered lexicographically over the
/// parents' states with the last parent varying fastest; one column per
/// child state.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    child: VarId,
    parents: Vec<VarId>,
    table: Vec<Vec<f64>>,
}

impl Cpt {
    pub fn new(child: VarId, parents: Vec<VarId>, table: Vec<Vec<f64>>) -> Self {
        Cpt {
            child,
            parents,
            table,
        }
    }

    /// Point mass on `state`, with no parents.
    pub fn point_mass(child: VarId, cardinality: usize, state: usize) -> Self {
        let mut row = vec![0.0; cardinality];
        row[state] = 1.0;
        Cpt::new(child, Vec::new(), vec![row])
    }

    pub fn child(&self) -> VarId {
        self.child
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// Row index for a full assignment given as a state slice indexed by `VarId`.
    pub fn row_for(&self, net: &Network, states: &[usize]) -> usize {
        self.parents.iter().fold(0, |acc, p| {
            acc * net.variable(*p).cardinality() + states[p.index()]
        })
    }

    /// `p(child = states[child] | parents = states[parents])`.
    pub fn prob(&self, net: &Network, states: &[usize]) -> f64 {
        self.table[self.row_for(net, states)][states[self.child.index()]]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    name: String,
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
    children: Vec<Vec<VarId>>,
    topo: Vec<VarId>,
}

impl Network {
    /// Builds and validates a network. `cpts` may come in any order but
    /// there must be exactly one per variable.
    pub fn new<S: Into<String>>(name: S, variables: Vec<Variable>, cpts: Vec<Cpt>) -> Result<Self> {
        let n = variables.len();
        let mut names = BTreeSet::new();
        for v in &variables {
            if !names.insert(v.name()) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate variable `{}`",
                    v.name()
                )));
            }
        }

        let mut slots: Vec<Option<Cpt>> = vec![None; n];
        for cpt in cpts {
            let c = cpt.child.index();
            if c >= n {
                return Err(Error::InvalidNetwork(format!("CPT for unknown variable #{c}")));
            }
            if slots[c].is_some() {
                return Err(Error::InvalidNetwork(format!(
                    "variable `{}` has more than one CPT",
                    variables[c].name()
                )));
            }
            slots[c] = Some(cpt);
        }
        let mut ordered = Vec::with_capacity(n);
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(c) => ordered.push(c),
                None => {
                    return Err(Error::InvalidNetwork(format!(
                        "variable `{}` has no CPT",
                        variables[i].name()
                    )))
                }
            }
        }

        for cpt in &ordered {
            validate_cpt(&variables, cpt)?;
        }

        let mut children = vec![Vec::new(); n];
        for cpt in &ordered {
            for p in &cpt.parents {
                children[p.index()].push(cpt.child);
            }
        }
        for c in &mut children {
            c.sort();
        }

        let topo = kahn_order(&variables, &ordered)?;
        Ok(Network {
            name: name.into(),
            variables,
            cpts: ordered,
            children,
            topo,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.variables.len()).map(VarId)
    }

    pub fn cpt(&self, id: VarId) -> &Cpt {
        &self.cpts[id.index()]
    }

    pub fn cpts(&self) -> &[Cpt] {
        &self.cpts
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        self.cpts[id.index()].parents()
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.index()]
    }

    pub fn cardinality(&self, id: VarId) -> usize {
        self.variables[id.index()].cardinality()
    }

    /// All `(parent, child)` pairs, sorted.
    pub fn edges(&self) -> Vec<(VarId, VarId)> {
        let mut edges: Vec<_> = self
            .cpts
            .iter()
            .flat_map(|c| c.parents.iter().map(move |p| (*p, c.child)))
            .collect();
        edges.sort();
        edges
    }

    pub fn var_id(&self, name: &str) -> Result<VarId> {
        self.variables
            .iter()
            .position(|v| v.name() == name)
            .map(VarId)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn state_id(&self, var: VarId, label: &str) -> Result<usize> {
        let v = self.variable(var);
        v.state_index(label).ok_or_else(|| Error::UnknownState {
            variable: v.name().to_string(),
            state: label.to_string(),
        })
    }

    /// Parents before children; ties broken by declaration order.
    pub fn topological_order(&self) -> &[VarId] {
        &self.topo
    }

    /// True iff a directed path `source -> ... -> target` exists whose
    /// interior nodes all lie outside `blocked`.
    pub fn reachable(&self, source: VarId, target: VarId, blocked: &BTreeSet<VarId>) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![source];
        seen[source.index()] = true;
        while let Some(v) = stack.pop() {
            for &c in self.children(v) {
                if c == target {
                    return true;
                }
                if !seen[c.index()] && !blocked.contains(&c) {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// Builds a checked assignment from `(variable, state)` name pairs.
    pub fn assignment<'a, I>(&self, pairs: I) -> Result<Assignment>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut a = Assignment::new();
        for (var, state) in pairs {
            let id = self.var_id(var)?;
            let s = self.state_id(id, state)?;
            if let Some(prev) = a.insert(id, s) {
                if prev != s {
                    return Err(Error::ConflictingBinding(var.to_string()));
                }
            }
        }
        Ok(a)
    }

    /// Parses `Var=state` tokens separated by commas, e.g. `Sex=m,Drug=yes`.
    pub fn parse_assignment(&self, text: &str) -> Result<Assignment> {
        let mut pairs = Vec::new();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (var, state) = token
                .split_once('=')
                .ok_or_else(|| Error::MalformedBinding(token.to_string()))?;
            let (var, state) = (var.trim(), state.trim());
            if var.is_empty() || state.is_empty() {
                return Err(Error::MalformedBinding(token.to_string()));
            }
            pairs.push((var, state));
        }
        self.assignment(pairs)
    }

    /// Checks that every binding names a variable and state of this network.
    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        for (v, s) in a.iter() {
            if v.index() >= self.len() {
                return Err(Error::UnknownVariable(format!("#{}", v.index())));
            }
            if s >= self.cardinality(v) {
                let var = self.variable(v);
                return Err(Error::UnknownState {
                    variable: var.name().to_string(),
                    state: format!("#{s}"),
                });
            }
        }
        Ok(())
    }

    /// Product of domain sizes, saturating.
    pub fn state_space_size(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.cardinality() as u128))
    }

    pub(crate) fn replace_cpts(&self, replacements: Vec<Cpt>) -> Result<Network> {
        let mut cpts = self.cpts.clone();
        for c in replacements {
            let i = c.child.index();
            cpts[i] = c;
        }
        Network::new(self.name.clone(), self.variables.clone(), cpts)
    }
}

fn validate_cpt(variables: &[Variable], cpt: &Cpt) -> Result<()> {
    let child = &variables[cpt.child.index()];
    let mut seen = BTreeSet::new();
    for p in &cpt.parents {
        if p.index() >= variables.len() {
            return Err(Error::InvalidNetwork(format!(
                "`{}` has an unknown parent #{}",
                child.name(),
                p.index()
            )));
        }
        if *p == cpt.child {
            return Err(Error::Cycle(vec![child.name().to_string()]));
        }
        if !seen.insert(*p) {
            return Err(Error::InvalidNetwork(format!(
                "`{}` lists parent `{}` twice",
                child.name(),
                variables[p.index()].name()
            )));
        }
    }
    let rows: usize = cpt
        .parents
        .iter()
        .map(|p| variables[p.index()].cardinality())
        .product();
    if cpt.table.len() != rows {
        return Err(Error::CptShape {
            variable: child.name().to_string(),
            detail: format!("expected {rows} rows, got {}", cpt.table.len()),
        });
    }
    for (i, row) in cpt.table.iter().enumerate() {
        if row.len() != child.cardinality() {
            return Err(Error::CptShape {
                variable: child.name().to_string(),
                detail: format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    child.cardinality()
                ),
            });
        }
        if let Some(bad) = row.iter().find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0) {
            return Err(Error::CptShape {
                variable: child.name().to_string(),
                detail: format!("row {i} has entry {bad} outside [0, 1]"),
            });
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::RowSum {
                variable: child.name().to_string(),
                row: i,
                sum,
            });
        }
    }
    Ok(())
}

fn kahn_order(variables: &[Variable], cpts: &[Cpt]) -> Result<Vec<VarId>> {
    let n = variables.len();
    let mut indegree: Vec<usize> = cpts.iter().map(|c| c.parents.len()).collect();
    let mut children = vec![Vec::new(); n];
    for c in cpts {
        for p in &c.parents {
            children[p.index()].push(c.child.index());
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        order.push(VarId(i));
        for &c in &children[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n)
            .filter(|&i| indegree[i] > 0)
            .map(|i| variables[i].name().to_string())
            .collect();
        return Err(Error::Cycle(stuck));
    }
    Ok(order)
}

/// Partial mapping from variables to state indices.
///
/// Ordered by `VarId`, so iteration follows declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<VarId, usize>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn single(var: VarId, state: usize) -> Self {
        let mut a = Assignment::new();
        a.insert(var, state);
        a
    }

    /// Binds `var`, returning the previous state if there was one.
    pub fn insert(&mut self, var: VarId, state: usize) -> Option<usize> {
        self.0.insert(var, state)
    }

    pub fn remove(&mut self, var: VarId) -> Option<usize> {
        self.0.remove(&var)
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.0.get(&var).copied()
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.0.contains_key(&var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.0.iter().map(|(v, s)| (*v, *s))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.keys().copied()
    }

    pub fn with(&self, var: VarId, state: usize) -> Self {
        let mut a = self.clone();
        a.insert(var, state);
        a
    }

    pub fn without(&self, var: VarId) -> Self {
        let mut a = self.clone();
        a.remove(var);
        a
    }

    /// Drops every binding whose variable is bound in `other`.
    pub fn minus_vars(&self, other: &Assignment) -> Self {
        Assignment(
            self.0
                .iter()
                .filter(|(v, _)| !other.contains(**v))
                .map(|(v, s)| (*v, *s))
                .collect(),
        )
    }

    /// Union of two assignments, or the first conflicting variable.
    pub fn union(&self, other: &Assignment) -> std::result::Result<Assignment, VarId> {
        let mut out = self.clone();
        for (v, s) in other.iter() {
            if let Some(prev) = out.insert(v, s) {
                if prev != s {
                    return Err(v);
                }
            }
        }
        Ok(out)
    }

    pub fn is_disjoint(&self, other: &Assignment) -> bool {
        self.vars().all(|v| !other.contains(v))
    }

    /// True if the full state vector (indexed by `VarId`) agrees with every binding.
    pub fn matches(&self, states: &[usize]) -> bool {
        self.0.iter().all(|(v, s)| states[v.index()] == *s)
    }

    /// `(variable name, state label)` pairs in declaration order.
    pub fn named<'n>(&self, net: &'n Network) -> Vec<(&'n str, &'n str)> {
        self.iter()
            .map(|(v, s)| {
                let var = net.variable(v);
                (var.name(), var.states()[s].as_str())
            })
            .collect()
    }

    pub fn display<'a>(&'a self, net: &'a Network) -> DisplayAssignment<'a> {
        DisplayAssignment { a: self, net }
    }
}

impl FromIterator<(VarId, usize)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (VarId, usize)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

pub struct DisplayAssignment<'a> {
    a: &'a Assignment,
    net: &'a Network,
}

impl fmt::Display for DisplayAssignment<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_empty() {
            return f.write_str("∅");
        }
        for (i, (var, state)) in self.a.named(self.net).into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{var}={state}")?;
        }
        Ok(())
    }
}
