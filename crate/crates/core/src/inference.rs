//! Exact observational and interventional inference by variable elimination.
//!
//! Every probability the crate computes goes through [`Engine::query`], which
//! runs one elimination pass and bumps the engine's call counter. Interventions
//! are folded into the factor set by swapping the intervened variable's CPT for
//! a point mass, which is the truncated factorization of the mutilated network.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::causal::InterventionSet;
use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::network::{Assignment, Network, VarId};
use crate::oracle::CrossCheck;

/// Posterior over a set of target variables.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryResult {
    /// Normalized distribution over the targets, in the order requested.
    pub distribution: Factor,
    /// Probability of the conditioning event (under any interventions).
    pub evidence_probability: f64,
}

impl QueryResult {
    /// Probability of a binding of every target variable.
    pub fn probability(&self, targets: &Assignment) -> f64 {
        self.distribution.value_at(targets)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Sum,
    Max,
}

/// Inference front end over one immutable network.
///
/// Holds a call counter and, optionally, an oracle cross-check that recomputes
/// every query by full-joint enumeration.
pub struct Engine<'n> {
    net: &'n Network,
    calls: AtomicUsize,
    check: Option<CrossCheck<'n>>,
}

impl<'n> Engine<'n> {
    pub fn new(net: &'n Network) -> Self {
        Engine {
            net,
            calls: AtomicUsize::new(0),
            check: None,
        }
    }

    /// An engine whose every query is recomputed by `check`.
    pub fn with_cross_check(net: &'n Network, check: CrossCheck<'n>) -> Self {
        Engine {
            net,
            calls: AtomicUsize::new(0),
            check: Some(check),
        }
    }

    pub fn network(&self) -> &'n Network {
        self.net
    }

    /// Number of elimination passes run so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn cross_check(&self) -> Option<&CrossCheck<'n>> {
        self.check.as_ref()
    }

    /// Posterior over `targets` given `evidence`, in the network mutilated by
    /// `do_set`. One inference call.
    pub fn query(
        &self,
        targets: &[VarId],
        evidence: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<QueryResult> {
        self.net.check_assignment(evidence)?;
        self.net.check_assignment(do_set.bindings())?;
        let mut seen = BTreeSet::new();
        for t in targets {
            if t.index() >= self.net.len() {
                return Err(Error::UnknownVariable(format!("#{}", t.index())));
            }
            if evidence.contains(*t) {
                return Err(Error::InvalidQuery(format!(
                    "target `{}` is also evidence",
                    self.net.variable(*t).name()
                )));
            }
            if !seen.insert(*t) {
                return Err(Error::InvalidQuery(format!(
                    "target `{}` repeated",
                    self.net.variable(*t).name()
                )));
            }
        }

        self.calls.fetch_add(1, Ordering::Relaxed);
        let (joint, _) = self.eliminate(targets, evidence, do_set, Mode::Sum, false);
        let joint = joint.reorder(targets);
        let z = joint.total();
        if z <= 0.0 {
            return Err(self.impossible(evidence, do_set));
        }
        let values = joint.values().iter().map(|v| v / z).collect();
        let result = QueryResult {
            distribution: Factor::new(targets.to_vec(), joint.cardinalities().to_vec(), values),
            evidence_probability: z,
        };
        if let Some(check) = &self.check {
            check.check_query(targets, evidence, do_set, &result);
        }
        Ok(result)
    }

    /// Distribution of a single variable.
    pub fn marginal(
        &self,
        var: VarId,
        evidence: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<Vec<f64>> {
        Ok(self
            .query(&[var], evidence, do_set)?
            .distribution
            .values()
            .to_vec())
    }

    /// `p(event | given)`. Overlapping bindings are allowed: a binding shared
    /// with `given` is certain, a conflicting one makes the event impossible.
    pub fn event_probability(&self, event: &Assignment, given: &Assignment) -> Result<f64> {
        self.conditional(event, given, &InterventionSet::empty())
    }

    pub(crate) fn conditional(
        &self,
        event: &Assignment,
        given: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        self.net.check_assignment(event)?;
        let conflict = event.iter().any(|(v, s)| given.get(v).is_some_and(|g| g != s));
        let rest = event.minus_vars(given);
        let targets: Vec<VarId> = rest.vars().collect();
        let result = self.query(&targets, given, do_set)?;
        if conflict {
            return Ok(0.0);
        }
        Ok(result.probability(&rest))
    }

    /// Chain-rule product `∏ p(x_j | pa_j)` for a full assignment.
    pub fn joint_probability(&self, full: &Assignment) -> Result<f64> {
        joint_probability(self.net, full)
    }

    /// Most probable completion of the unobserved variables and its posterior
    /// probability. Ties go to the lower state index.
    pub fn mpe(&self, evidence: &Assignment) -> Result<(Assignment, f64)> {
        self.net.check_assignment(evidence)?;
        let none = InterventionSet::empty();
        let pe = self.query(&[], evidence, &none)?.evidence_probability;

        self.calls.fetch_add(1, Ordering::Relaxed);
        let (best, trace) = self.eliminate(&[], evidence, &none, Mode::Max, true);
        let best = best.values()[0];
        let mut completion = Assignment::new();
        for (var, table) in trace.iter().rev() {
            let state = table.argmax_state(*var, &completion);
            completion.insert(*var, state);
        }
        let probability = best / pe;
        if let Some(check) = &self.check {
            check.check_mpe(evidence, &completion, probability);
        }
        Ok((completion, probability))
    }

    /// Conditional mutual information `I(X; Y | context)` in bits.
    pub fn conditional_mutual_information(
        &self,
        x: VarId,
        y: VarId,
        context: &Assignment,
    ) -> Result<f64> {
        if x == y {
            return Err(Error::InvalidQuery("CMI needs two distinct variables".into()));
        }
        // fixed operand order keeps the value exactly symmetric
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        let joint = self.query(&[a, b], context, &InterventionSet::empty())?;
        Ok(mutual_information(&joint.distribution))
    }

    fn impossible(&self, evidence: &Assignment, do_set: &InterventionSet) -> Error {
        let mut text = evidence.display(self.net).to_string();
        if !do_set.is_empty() {
            text.push_str(&format!(" | do({})", do_set.bindings().display(self.net)));
        }
        Error::ImpossibleConditioning(text)
    }

    /// Runs elimination and returns the unnormalized factor over `targets`
    /// plus, in max mode, the product table of each eliminated variable.
    fn eliminate(
        &self,
        targets: &[VarId],
        evidence: &Assignment,
        do_set: &InterventionSet,
        mode: Mode,
        all_variables: bool,
    ) -> (Factor, Vec<(VarId, Factor)>) {
        let net = self.net;
        let relevant = if all_variables {
            vec![true; net.len()]
        } else {
            relevant_variables(net, targets, evidence, do_set)
        };

        let mut factors: Vec<Factor> = net
            .ids()
            .filter(|v| relevant[v.index()])
            .map(|v| {
                let f = match do_set.get(v) {
                    Some(s) => Factor::indicator(v, net.cardinality(v), s),
                    None => Factor::from_cpt(net, v),
                };
                f.restrict(evidence)
            })
            .collect();

        let mut remaining: BTreeSet<VarId> = net
            .ids()
            .filter(|v| relevant[v.index()] && !evidence.contains(*v) && !targets.contains(v))
            .collect();
        let mut trace = Vec::new();

        while !remaining.is_empty() {
            let var = min_degree(&factors, &remaining);
            remaining.remove(&var);
            let (touching, rest): (Vec<Factor>, Vec<Factor>) =
                factors.into_iter().partition(|f| f.contains(var));
            factors = rest;
            let Some(product) = touching.into_iter().reduce(|a, b| a.product(&b)) else {
                continue;
            };
            let reduced = match mode {
                Mode::Sum => product.sum_out(var),
                Mode::Max => product.max_out(var),
            };
            if mode == Mode::Max {
                trace.push((var, product));
            }
            factors.push(reduced);
        }

        let joint = factors
            .into_iter()
            .fold(Factor::scalar(1.0), |acc, f| acc.product(&f));
        (joint, trace)
    }
}

/// Ancestral closure of targets and evidence in the mutilated graph.
/// Everything else is barren and sums to one.
fn relevant_variables(
    net: &Network,
    targets: &[VarId],
    evidence: &Assignment,
    do_set: &InterventionSet,
) -> Vec<bool> {
    let mut keep = vec![false; net.len()];
    let mut stack: Vec<VarId> = targets.iter().copied().chain(evidence.vars()).collect();
    while let Some(v) = stack.pop() {
        if keep[v.index()] {
            continue;
        }
        keep[v.index()] = true;
        if !do_set.contains(v) {
            stack.extend(net.parents(v).iter().copied());
        }
    }
    keep
}

/// Variable with the fewest neighbours in the current interaction graph;
/// ties go to the earliest declared.
fn min_degree(factors: &[Factor], candidates: &BTreeSet<VarId>) -> VarId {
    let mut best = None;
    for &v in candidates {
        let mut neighbours = BTreeSet::new();
        for f in factors.iter().filter(|f| f.contains(v)) {
            neighbours.extend(f.scope().iter().copied().filter(|w| *w != v));
        }
        let degree = neighbours.len();
        if best.is_none_or(|(d, _)| degree < d) {
            best = Some((degree, v));
        }
    }
    best.expect("no candidates").1
}

/// `I(A; B)` in bits for a normalized joint over exactly two variables.
pub(crate) fn mutual_information(joint: &Factor) -> f64 {
    let cards = joint.cardinalities();
    let (na, nb) = (cards[0], cards[1]);
    let v = joint.values();
    let pa: Vec<f64> = (0..na).map(|i| (0..nb).map(|j| v[i * nb + j]).sum()).collect();
    let pb: Vec<f64> = (0..nb).map(|j| (0..na).map(|i| v[i * nb + j]).sum()).collect();
    let mut total = 0.0;
    for i in 0..na {
        for j in 0..nb {
            let pij = v[i * nb + j];
            if pij > 0.0 {
                total += pij * (pij / (pa[i] * pb[j])).log2();
            }
        }
    }
    total
}

pub fn joint_probability(net: &Network, full: &Assignment) -> Result<f64> {
    net.check_assignment(full)?;
    let mut states = vec![0; net.len()];
    for v in net.ids() {
        states[v.index()] = full.get(v).ok_or_else(|| {
            Error::InvalidQuery(format!("variable `{}` is unbound", net.variable(v).name()))
        })?;
    }
    Ok(net.ids().map(|v| net.cpt(v).prob(net, &states)).product())
}

pub fn event_probability(net: &Network, event: &Assignment, given: &Assignment) -> Result<f64> {
    Engine::new(net).event_probability(event, given)
}

pub fn mpe(net: &Network, evidence: &Assignment) -> Result<(Assignment, f64)> {
    Engine::new(net).mpe(evidence)
}

pub fn conditional_mutual_information(
    net: &Network,
    x: VarId,
    y: VarId,
    context: &Assignment,
) -> Result<f64> {
    Engine::new(net).conditional_mutual_information(x, y, context)
}
