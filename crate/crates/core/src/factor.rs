//! Nonnegative tables over ordered variable scopes.

use crate::network::{Assignment, Network, VarId};

/// Table over `scope`, laid out with the last scope variable varying fastest
/// (the same layout as a CPT whose scope is `parents ++ [child]`).
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Vec<VarId>,
    cards: Vec<usize>,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<VarId>, cards: Vec<usize>, values: Vec<f64>) -> Self {
        assert_eq!(scope.len(), cards.len(), "scope/cardinality length mismatch");
        assert_eq!(
            values.len(),
            cards.iter().product::<usize>(),
            "value count does not match scope"
        );
        debug_assert!(values.iter().all(|v| *v >= 0.0), "negative factor entry");
        Factor {
            scope,
            cards,
            values,
        }
    }

    pub fn scalar(value: f64) -> Self {
        Factor::new(Vec::new(), Vec::new(), vec![value])
    }

    pub fn from_cpt(net: &Network, var: VarId) -> Self {
        let cpt = net.cpt(var);
        let mut scope = cpt.parents().to_vec();
        scope.push(var);
        let cards = scope.iter().map(|v| net.cardinality(*v)).collect();
        let values = cpt.rows().iter().flatten().copied().collect();
        Factor::new(scope, cards, values)
    }

    /// Point mass on `var = state`.
    pub fn indicator(var: VarId, cardinality: usize, state: usize) -> Self {
        let mut values = vec![0.0; cardinality];
        values[state] = 1.0;
        Factor::new(vec![var], vec![cardinality], values)
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cards
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.scope.contains(&var)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.scope.len()];
        for i in (0..self.scope.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.cards[i + 1];
        }
        strides
    }

    /// Value at an assignment binding every scope variable.
    pub fn value_at(&self, a: &Assignment) -> f64 {
        let strides = self.strides();
        let idx = self
            .scope
            .iter()
            .zip(&strides)
            .map(|(v, s)| a.get(*v).expect("scope variable unbound") * s)
            .sum::<usize>();
        self.values[idx]
    }

    /// Assignment of the scope variables at flat index `idx`.
    pub fn assignment_at(&self, mut idx: usize) -> Assignment {
        let mut states = vec![0; self.scope.len()];
        for i in (0..self.scope.len()).rev() {
            states[i] = idx % self.cards[i];
            idx /= self.cards[i];
        }
        self.scope.iter().copied().zip(states).collect()
    }

    /// Slices the table at the evidence, dropping bound variables from the scope.
    pub fn restrict(&self, evidence: &Assignment) -> Factor {
        if !self.scope.iter().any(|v| evidence.contains(*v)) {
            return self.clone();
        }
        let strides = self.strides();
        let mut base = 0;
        let mut scope = Vec::new();
        let mut cards = Vec::new();
        let mut kept_strides = Vec::new();
        for (i, v) in self.scope.iter().enumerate() {
            match evidence.get(*v) {
                Some(s) => base += s * strides[i],
                None => {
                    scope.push(*v);
                    cards.push(self.cards[i]);
                    kept_strides.push(strides[i]);
                }
            }
        }
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; scope.len()];
        for _ in 0..size {
            let idx = base
                + digits
                    .iter()
                    .zip(&kept_strides)
                    .map(|(d, s)| d * s)
                    .sum::<usize>();
            values.push(self.values[idx]);
            increment(&mut digits, &cards);
        }
        Factor::new(scope, cards, values)
    }

    pub fn product(&self, other: &Factor) -> Factor {
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        for (v, c) in other.scope.iter().zip(&other.cards) {
            if !scope.contains(v) {
                scope.push(*v);
                cards.push(*c);
            }
        }
        let map = |f: &Factor| -> Vec<usize> {
            let fs = f.strides();
            scope
                .iter()
                .map(|v| f.scope.iter().position(|w| w == v).map_or(0, |i| fs[i]))
                .collect()
        };
        let (sa, sb) = (map(self), map(other));
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; scope.len()];
        for _ in 0..size {
            let (mut ia, mut ib) = (0, 0);
            for (k, d) in digits.iter().enumerate() {
                ia += d * sa[k];
                ib += d * sb[k];
            }
            values.push(self.values[ia] * other.values[ib]);
            increment(&mut digits, &cards);
        }
        Factor::new(scope, cards, values)
    }

    pub fn sum_out(&self, var: VarId) -> Factor {
        self.reduce_out(var, |acc, v| acc + v, 0.0)
    }

    pub fn max_out(&self, var: VarId) -> Factor {
        self.reduce_out(var, f64::max, f64::NEG_INFINITY)
    }

    fn reduce_out(&self, var: VarId, op: impl Fn(f64, f64) -> f64, init: f64) -> Factor {
        let Some(pos) = self.scope.iter().position(|v| *v == var) else {
            return self.clone();
        };
        let strides = self.strides();
        let mut scope = self.scope.clone();
        let mut cards = self.cards.clone();
        scope.remove(pos);
        let card = cards.remove(pos);
        let mut kept: Vec<usize> = strides.clone();
        kept.remove(pos);
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; scope.len()];
        for _ in 0..size {
            let base: usize = digits.iter().zip(&kept).map(|(d, s)| d * s).sum();
            let v = (0..card).fold(init, |acc, s| op(acc, self.values[base + s * strides[pos]]));
            values.push(v);
            increment(&mut digits, &cards);
        }
        Factor::new(scope, cards, values)
    }

    /// First state of `var` maximizing the table, with every other scope
    /// variable fixed by `fixed`.
    pub fn argmax_state(&self, var: VarId, fixed: &Assignment) -> usize {
        let pos = self
            .scope
            .iter()
            .position(|v| *v == var)
            .expect("variable not in scope");
        let mut a = fixed.clone();
        let mut best = (0, f64::NEG_INFINITY);
        for s in 0..self.cards[pos] {
            a.insert(var, s);
            let v = self.value_at(&a);
            if v > best.1 {
                best = (s, v);
            }
        }
        best.0
    }

    /// Reorders the scope, permuting the table accordingly.
    pub fn reorder(&self, order: &[VarId]) -> Factor {
        assert_eq!(order.len(), self.scope.len());
        let cards: Vec<usize> = order
            .iter()
            .map(|v| {
                let i = self.scope.iter().position(|w| w == v).expect("unknown scope variable");
                self.cards[i]
            })
            .collect();
        let size = self.values.len();
        let mut values = Vec::with_capacity(size);
        let mut digits = vec![0usize; order.len()];
        for _ in 0..size {
            let a: Assignment = order.iter().copied().zip(digits.iter().copied()).collect();
            values.push(self.value_at(&a));
            increment(&mut digits, &cards);
        }
        Factor::new(order.to_vec(), cards, values)
    }
}

/// Odometer increment, last digit fastest.
fn increment(digits: &mut [usize], cards: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < cards[i] {
            return;
        }
        digits[i] = 0;
    }
}
