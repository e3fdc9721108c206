//! Seeded random networks shared by the integration tests.
#![allow(dead_code)]

use causal_expl::{Assignment, Cpt, Network, VarId, Variable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn states(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("s{i}")).collect()
}

fn random_row(rng: &mut StdRng, k: usize) -> Vec<f64> {
    // bounded away from zero so flows along open paths stay visible
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

fn build(name: &str, cards: &[usize], parents: &[Vec<usize>], rng: &mut StdRng) -> Network {
    let vars = cards
        .iter()
        .enumerate()
        .map(|(i, &k)| Variable::new(format!("V{i}"), states(k)).unwrap())
        .collect();
    let cpts = parents
        .iter()
        .enumerate()
        .map(|(i, ps)| {
            let rows: usize = ps.iter().map(|p| cards[*p]).product();
            let table = (0..rows).map(|_| random_row(rng, cards[i])).collect();
            Cpt::new(VarId(i), ps.iter().map(|p| VarId(*p)).collect(), table)
        })
        .collect();
    Network::new(name, vars, cpts).unwrap()
}

/// A DAG over `n` variables: each node draws up to `max_parents` parents
/// among earlier nodes with probability `edge_p` each.
pub fn random_dag(rng: &mut StdRng, n: usize, max_cardinality: usize, edge_p: f64) -> Network {
    let max_parents = 3;
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_cardinality)).collect();
    let mut parents = Vec::with_capacity(n);
    for i in 0..n {
        let mut ps: Vec<usize> = (0..i).filter(|_| rng.gen_bool(edge_p)).collect();
        while ps.len() > max_parents {
            let drop = rng.gen_range(0..ps.len());
            ps.remove(drop);
        }
        parents.push(ps);
    }
    build("random", &cards, &parents, rng)
}

/// Binary chain `V0 → V1 → … → V{n-1}`.
pub fn chain(rng: &mut StdRng, n: usize) -> Network {
    let parents: Vec<Vec<usize>> = (0..n)
        .map(|i| if i == 0 { vec![] } else { vec![i - 1] })
        .collect();
    build("chain", &vec![2; n], &parents, rng)
}

/// A random assignment to a random subset of `pool`, each variable kept
/// with probability `keep`.
pub fn random_assignment(rng: &mut StdRng, net: &Network, pool: &[VarId], keep: f64) -> Assignment {
    let mut a = Assignment::new();
    for v in pool {
        if rng.gen_bool(keep) {
            a.insert(*v, rng.gen_range(0..net.cardinality(*v)));
        }
    }
    a
}

/// Splits the variables into disjoint random groups: (event, given, do).
pub fn random_query(rng: &mut StdRng, net: &Network) -> (Assignment, Assignment, Assignment) {
    let mut ids: Vec<VarId> = net.ids().collect();
    // Fisher-Yates with the shared rng keeps everything reproducible
    for i in (1..ids.len()).rev() {
        let j = rng.gen_range(0..=i);
        ids.swap(i, j);
    }
    let n = ids.len();
    let a = rng.gen_range(1..=n.min(3));
    let b = rng.gen_range(0..=(n - a).min(3));
    let c = rng.gen_range(0..=(n - a - b).min(2));
    let event = random_assignment(rng, net, &ids[..a], 1.0);
    let given = random_assignment(rng, net, &ids[a..a + b], 1.0);
    let do_set = random_assignment(rng, net, &ids[a + b..a + b + c], 1.0);
    (event, given, do_set)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
