//! Reference answers by full-joint enumeration.
//!
//! Nothing here touches [`Factor`](crate::factor::Factor) or the elimination
//! code: the joint is built directly as the truncated product of CPT entries,
//! and every measure is expanded from sums over that table. Use it to
//! cross-check the engine on networks small enough to enumerate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::causal::InterventionSet;
use crate::error::{Error, Result};
use crate::inference::QueryResult;
use crate::network::{Assignment, Network, VarId};

/// Default limit on the number of full assignments to enumerate.
pub const DEFAULT_STATE_SPACE_CAP: u128 = 1 << 20;

/// Probability of every full assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    /// All variables, in topological order; the last varies fastest.
    scope: Vec<VarId>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl JointTable {
    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(states indexed by VarId, probability)` for every entry.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let n = self.scope.len();
        self.values.iter().enumerate().map(move |(mut idx, p)| {
            let mut states = vec![0; n];
            for k in (0..n).rev() {
                states[self.scope[k].index()] = idx % self.cards[k];
                idx /= self.cards[k];
            }
            (states, *p)
        })
    }

    /// Probability of a full assignment.
    pub fn value(&self, full: &Assignment) -> f64 {
        let idx = self
            .scope
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (v, c)| acc * c + full.get(*v).expect("full assignment"));
        self.values[idx]
    }
}

pub fn enumerate_joint(net: &Network, do_set: &InterventionSet) -> Result<JointTable> {
    enumerate_joint_capped(net, do_set, DEFAULT_STATE_SPACE_CAP)
}

/// Truncated-factorization product for every full assignment.
pub fn enumerate_joint_capped(
    net: &Network,
    do_set: &InterventionSet,
    cap: u128,
) -> Result<JointTable> {
    let size = net.state_space_size();
    if size > cap {
        return Err(Error::StateSpaceTooLarge { size, cap });
    }
    net.check_assignment(do_set.bindings())?;
    let scope = net.topological_order().to_vec();
    let cards: Vec<usize> = scope.iter().map(|v| net.cardinality(*v)).collect();
    let mut values = Vec::with_capacity(size as usize);
    let mut states = vec![0usize; net.len()];
    let mut digits = vec![0usize; scope.len()];
    for _ in 0..size {
        for (k, v) in scope.iter().enumerate() {
            states[v.index()] = digits[k];
        }
        let mut p = 1.0;
        for v in net.ids() {
            p *= match do_set.get(v) {
                Some(forced) if states[v.index()] == forced => 1.0,
                Some(_) => 0.0,
                None => net.cpt(v).prob(net, &states),
            };
        }
        values.push(p);
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < cards[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(JointTable {
        scope,
        cards,
        values,
    })
}

/// `Σ matching(event ∧ given) / Σ matching(given)`.
pub fn oracle_query(table: &JointTable, event: &Assignment, given: &Assignment) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (states, p) in table.entries() {
        if given.matches(&states) {
            den += p;
            if event.matches(&states) {
                num += p;
            }
        }
    }
    if den <= 0.0 {
        return Err(Error::ImpossibleConditioning(format!(
            "{given:?} in enumerated joint"
        )));
    }
    Ok(num / den)
}

/// Enumeration oracle with a per-intervention-set cache of joint tables.
pub struct Oracle<'n> {
    net: &'n Network,
    cap: u128,
    cache: Mutex<HashMap<InterventionSet, Arc<JointTable>>>,
}

impl<'n> Oracle<'n> {
    pub fn new(net: &'n Network) -> Self {
        Oracle::with_cap(net, DEFAULT_STATE_SPACE_CAP)
    }

    pub fn with_cap(net: &'n Network, cap: u128) -> Self {
        Oracle {
            net,
            cap,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn network(&self) -> &'n Network {
        self.net
    }

    pub fn joint(&self, do_set: &InterventionSet) -> Result<Arc<JointTable>> {
        if let Some(t) = self.cache.lock().expect("oracle cache poisoned").get(do_set) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(enumerate_joint_capped(self.net, do_set, self.cap)?);
        self.cache
            .lock()
            .expect("oracle cache poisoned")
            .insert(do_set.clone(), Arc::clone(&table));
        Ok(table)
    }

    /// `p(event | given)` after `do_set`.
    pub fn probability(
        &self,
        event: &Assignment,
        given: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        oracle_query(self.joint(do_set)?.as_ref(), event, given)
    }

    /// Distribution of one variable.
    pub fn marginal(
        &self,
        var: VarId,
        given: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<Vec<f64>> {
        (0..self.net.cardinality(var))
            .map(|s| self.probability(&Assignment::single(var, s), given, do_set))
            .collect()
    }

    /// `I(X; Y | context)` in bits, straight from its definition
    /// `Σ_x p(x|z) Σ_y p(y|x,z) log₂ p(y|x,z)/p(y|z)`.
    pub fn conditional_mutual_information(
        &self,
        x: VarId,
        y: VarId,
        context: &Assignment,
    ) -> Result<f64> {
        let none = InterventionSet::empty();
        let px = self.marginal(x, context, &none)?;
        let py = self.marginal(y, context, &none)?;
        let mut total = 0.0;
        for (xs, pxv) in px.iter().enumerate() {
            if *pxv <= 0.0 {
                continue;
            }
            let ctx = context.with(x, xs);
            for (ys, pyv) in py.iter().enumerate() {
                let pyx = self.probability(&Assignment::single(y, ys), &ctx, &none)?;
                if pyx > 0.0 {
                    total += pxv * pyx * (pyx / pyv).log2();
                }
            }
        }
        Ok(total)
    }

    /// `I(X → Y | o, ẑ)` expanded from its definition.
    pub fn information_flow(
        &self,
        x: VarId,
        y: VarId,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        let px = self.marginal(x, observed, do_set)?;
        let ny = self.net.cardinality(y);
        let mut total = 0.0;
        for (xs, pxv) in px.iter().enumerate() {
            if *pxv <= 0.0 {
                continue;
            }
            for ys in 0..ny {
                let yv = Assignment::single(y, ys);
                let p_y_do_x = self.probability(&yv, observed, &do_set.with(x, xs))?;
                if p_y_do_x <= 0.0 {
                    continue;
                }
                let mut star = 0.0;
                for (xp, pxp) in px.iter().enumerate() {
                    if *pxp > 0.0 {
                        star += pxp * self.probability(&yv, observed, &do_set.with(x, xp))?;
                    }
                }
                total += pxv * p_y_do_x * (p_y_do_x / star).log2();
            }
        }
        Ok(total)
    }

    /// Flow from `X` to the explanandum state `e`, normalized by `p(e | o, p̂)`.
    pub fn flow_to_state(
        &self,
        x: VarId,
        e: &Assignment,
        observed: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        let prior = self.probability(e, observed, do_set)?;
        if prior <= 0.0 {
            return Err(Error::ImpossibleConditioning(format!(
                "{} | {} has probability zero",
                e.display(self.net),
                observed.display(self.net)
            )));
        }
        let px = self.marginal(x, observed, do_set)?;
        let mut effect = vec![0.0; px.len()];
        for (xs, pxv) in px.iter().enumerate() {
            if *pxv > 0.0 {
                effect[xs] = self.probability(e, observed, &do_set.with(x, xs))?;
            }
        }
        let star: f64 = px.iter().zip(&effect).map(|(p, r)| p * r).sum();
        Ok(px
            .iter()
            .zip(&effect)
            .filter(|(p, r)| **p > 0.0 && **r > 0.0)
            .map(|(p, r)| p * r / prior * (r / star).log2())
            .sum())
    }

    /// Pointwise flow `log₂ p(e|o',p̂,x̂) / Σ_x' p(x'|o',p̂) p(e|o',x̂',p̂)`.
    pub fn pointwise_flow(
        &self,
        x: (VarId, usize),
        e: &Assignment,
        observed_rest: &Assignment,
        do_set: &InterventionSet,
    ) -> Result<f64> {
        let (var, state) = x;
        let px = self.marginal(var, observed_rest, do_set)?;
        let mut star = 0.0;
        for (xs, pxv) in px.iter().enumerate() {
            if *pxv > 0.0 {
                star += pxv * self.probability(e, observed_rest, &do_set.with(var, xs))?;
            }
        }
        let own = self.probability(e, observed_rest, &do_set.with(var, state))?;
        Ok((own / star).log2())
    }

    /// Most probable completion by scanning the joint. Ties go to the first
    /// entry in enumeration order.
    pub fn mpe(&self, evidence: &Assignment) -> Result<(Assignment, f64)> {
        let table = self.joint(&InterventionSet::empty())?;
        let mut pe = 0.0;
        let mut best: Option<(Vec<usize>, f64)> = None;
        for (states, p) in table.entries() {
            if !evidence.matches(&states) {
                continue;
            }
            pe += p;
            if best.as_ref().is_none_or(|(_, b)| p > *b) {
                best = Some((states, p));
            }
        }
        if pe <= 0.0 {
            return Err(Error::ImpossibleConditioning(format!(
                "{}",
                evidence.display(self.net)
            )));
        }
        let (states, p) = best.expect("nonempty joint");
        let completion = self
            .net
            .ids()
            .filter(|v| !evidence.contains(*v))
            .map(|v| (v, states[v.index()]))
            .collect();
        Ok((completion, p / pe))
    }
}

/// A mismatch between an engine result and its oracle recomputation.
#[derive(Clone, Debug, PartialEq)]
pub struct Divergence {
    pub what: String,
    pub engine: f64,
    pub oracle: f64,
}

/// Records every engine result that differs from the oracle by more than
/// `tolerance`. Attach it with [`Engine::with_cross_check`](crate::Engine::with_cross_check).
pub struct CrossCheck<'n> {
    oracle: Oracle<'n>,
    tolerance: f64,
    checked: Mutex<usize>,
    divergences: Mutex<Vec<Divergence>>,
}

impl<'n> CrossCheck<'n> {
    pub fn new(oracle: Oracle<'n>, tolerance: f64) -> Self {
        CrossCheck {
            oracle,
            tolerance,
            checked: Mutex::new(0),
            divergences: Mutex::new(Vec::new()),
        }
    }

    /// Number of values compared so far.
    pub fn checked(&self) -> usize {
        *self.checked.lock().expect("cross-check poisoned")
    }

    pub fn divergences(&self) -> Vec<Divergence> {
        self.divergences.lock().expect("cross-check poisoned").clone()
    }

    fn compare(&self, what: impl FnOnce() -> String, engine: f64, oracle: Result<f64>) {
        *self.checked.lock().expect("cross-check poisoned") += 1;
        let oracle = oracle.unwrap_or(f64::NAN);
        // NaN on either side counts as a divergence
        let agrees = (engine - oracle).abs() <= self.tolerance;
        if !agrees {
            self.divergences
                .lock()
                .expect("cross-check poisoned")
                .push(Divergence {
                    what: what(),
                    engine,
                    oracle,
                });
        }
    }

    pub(crate) fn check_query(
        &self,
        targets: &[VarId],
        evidence: &Assignment,
        do_set: &InterventionSet,
        result: &QueryResult,
    ) {
        let net = self.oracle.net;
        let describe = |extra: &str| {
            format!(
                "p({extra} | {}, do({}))",
                evidence.display(net),
                do_set.bindings().display(net)
            )
        };
        let evidence_p = self
            .oracle
            .probability(evidence, &Assignment::new(), do_set);
        self.compare(
            || describe("evidence"),
            result.evidence_probability,
            evidence_p,
        );
        let dist = &result.distribution;
        for (idx, value) in dist.values().iter().enumerate() {
            let a = dist.assignment_at(idx);
            debug_assert!(a.vars().all(|v| targets.contains(&v)));
            let oracle = self.oracle.probability(&a, evidence, do_set);
            self.compare(|| describe(&a.display(net).to_string()), *value, oracle);
        }
    }

    pub(crate) fn check_mpe(&self, evidence: &Assignment, completion: &Assignment, probability: f64) {
        let net = self.oracle.net;
        let oracle = self.oracle.mpe(evidence).map(|(_, p)| p);
        self.compare(
            || format!("mpe({})", evidence.display(net)),
            probability,
            oracle,
        );
        let own = completion
            .union(evidence)
            .map_err(|_| Error::InvalidQuery("completion overlaps evidence".into()))
            .and_then(|full| {
                let p = self.oracle.joint(&InterventionSet::empty())?.value(&full);
                let pe = self
                    .oracle
                    .probability(evidence, &Assignment::new(), &InterventionSet::empty())?;
                Ok(p / pe)
            });
        self.compare(
            || format!("posterior of mpe completion {}", completion.display(net)),
            probability,
            own,
        );
    }
}
