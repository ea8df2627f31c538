//! Reference implementations used as test oracles. Everything here is written
//! for clarity over speed and shares no code with the library algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chequenet_core::{Cheque, CollateralNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random cheque list over at most `max_nodes` customers. Several cheques may
/// share an issuer-recipient pair, exercising aggregation.
pub fn random_cheques(rng: &mut ChaCha8Rng, max_nodes: usize, density: f64) -> Vec<Cheque> {
    loop {
        let n = rng.random_range(2..=max_nodes);
        let mut cheques = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random_bool(density) {
                    let copies = rng.random_range(1..=2);
                    for _ in 0..copies {
                        let value = rng.random_range(1..=1_000i64);
                        let id = format!("q{}", cheques.len());
                        cheques.push(Cheque::new(
                            id,
                            format!("n{i:03}"),
                            format!("n{j:03}"),
                            value,
                        ));
                    }
                }
            }
        }
        if !cheques.is_empty() {
            return cheques;
        }
    }
}

pub fn random_network(seed: u64, max_nodes: usize, density: f64) -> CollateralNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CollateralNetwork::from_cheques(&random_cheques(&mut rng, max_nodes, density)).unwrap()
}

pub fn adjacency(net: &CollateralNetwork, undirected: bool) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); net.node_count()];
    for e in net.edges() {
        adj[e.from].insert(e.to);
        if undirected {
            adj[e.to].insert(e.from);
        }
    }
    adj
}

/// All-pairs hop distances by Floyd-Warshall.
pub fn floyd_warshall(adj: &[BTreeSet<usize>]) -> Vec<Vec<Option<u32>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for (u, nbrs) in adj.iter().enumerate() {
        d[u][u] = Some(0);
        for &v in nbrs {
            d[u][v] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|x| a + b < x) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// `(total distance, reachable ordered pairs, diameter)` over distinct pairs.
pub fn path_totals(net: &CollateralNetwork) -> (u64, u64, u32) {
    let d = floyd_warshall(&adjacency(net, false));
    let (mut total, mut pairs, mut diameter) = (0u64, 0u64, 0u32);
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if let (true, Some(x)) = (i != j, x) {
                total += u64::from(*x);
                pairs += 1;
                diameter = diameter.max(*x);
            }
        }
    }
    (total, pairs, diameter)
}

fn walk_shortest(
    adj: &[BTreeSet<usize>],
    dist: &[Vec<Option<u32>>],
    path: &mut Vec<usize>,
    target: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let u = *path.last().unwrap();
    if u == target {
        out.push(path.clone());
        return;
    }
    for &v in &adj[u] {
        // stay on a geodesic: each step must bring the target one hop closer
        if let (Some(a), Some(b)) = (dist[u][target], dist[v][target]) {
            if b + 1 == a {
                path.push(v);
                walk_shortest(adj, dist, path, target, out);
                path.pop();
            }
        }
    }
}

/// Betweenness by listing every shortest path explicitly. Undirected scores
/// count each unordered pair once.
pub fn brute_betweenness(net: &CollateralNetwork, undirected: bool) -> Vec<f64> {
    let adj = adjacency(net, undirected);
    let dist = floyd_warshall(&adj);
    let n = adj.len();
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || dist[s][t].is_none() || (undirected && t < s) {
                continue;
            }
            let mut paths = Vec::new();
            walk_shortest(&adj, &dist, &mut vec![s], t, &mut paths);
            let total = paths.len() as f64;
            let mut through = vec![0usize; n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for (sc, &th) in score.iter_mut().zip(&through) {
                *sc += th as f64 / total;
            }
        }
    }
    score
}

/// Cascade recomputed from scratch each round until nothing changes. Returns
/// the newly failed indices per stage.
pub fn naive_cascade(net: &CollateralNetwork, c_bp: u32, seeds: &[usize]) -> Vec<Vec<usize>> {
    let n = net.node_count();
    let inflow: Vec<u128> = (0..n)
        .map(|j| {
            net.edges()
                .iter()
                .filter(|e| e.to == j)
                .map(|e| u128::from(e.value_cents))
                .sum()
        })
        .collect();
    let mut failed: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut stages = vec![failed.iter().copied().collect::<Vec<_>>()];
    if failed.is_empty() {
        return Vec::new();
    }
    loop {
        let mut fresh = Vec::new();
        for (j, &inflow_j) in inflow.iter().enumerate() {
            if failed.contains(&j) {
                continue;
            }
            let exposure: u128 = net
                .edges()
                .iter()
                .filter(|e| e.to == j && failed.contains(&e.from))
                .map(|e| u128::from(e.value_cents))
                .sum();
            if exposure > 0 && exposure * 10_000 >= u128::from(c_bp) * inflow_j {
                fresh.push(j);
            }
        }
        if fresh.is_empty() {
            return stages;
        }
        failed.extend(fresh.iter().copied());
        stages.push(fresh);
    }
}

/// Uniform loss as the summed weight of every edge whose issuer failed.
pub fn failed_issuer_weight(net: &CollateralNetwork, failed: &BTreeSet<usize>) -> f64 {
    let cents: u64 = net
        .edges()
        .iter()
        .filter(|e| failed.contains(&e.from))
        .map(|e| e.value_cents)
        .sum();
    cents as f64 / net.total_value_cents() as f64
}

/// Rand index between two labelings of the same items.
pub fn rand_index(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut agree, mut pairs) = (0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            if (a[i] == a[j]) == (b[i] == b[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / pairs as f64
}

pub fn labels_from_groups<T: Ord + Clone>(items: &[T], groups: &[Vec<T>]) -> Vec<usize> {
    let mut index: BTreeMap<T, usize> = BTreeMap::new();
    for (g, members) in groups.iter().enumerate() {
        for m in members {
            index.insert(m.clone(), g);
        }
    }
    items.iter().map(|x| index[x]).collect()
}
