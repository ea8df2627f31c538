//! Betweenness centrality via Brandes' dependency accumulation.
//!
//! `C_B(v)` is the sum over pairs `s != v != t` of `sigma_st(v) / sigma_st`,
//! where `sigma_st` counts shortest (unweighted) paths. Scores are raw, not
//! normalised. Two equal-length paths through different middle nodes give
//! each 0.5, which is where half-integer scores come from.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::{CollateralNetwork, CustomerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Paths follow cheque direction, issuer to recipient. Sums over ordered pairs.
    #[default]
    Directed,
    /// Edge direction ignored. Sums over unordered pairs.
    Undirected,
}

fn adjacency(net: &CollateralNetwork, direction: Direction) -> Vec<Vec<usize>> {
    let n = net.node_count();
    let mut adj: Vec<Vec<usize>> = (0..n)
        .map(|v| net.out_edges(v).iter().map(|e| e.to).collect())
        .collect();
    if direction == Direction::Undirected {
        for e in net.edges() {
            adj[e.to].push(e.from);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
    }
    adj
}

/// Scores indexed by node position.
pub fn betweenness(net: &CollateralNetwork, direction: Direction) -> Vec<f64> {
    let adj = adjacency(net, direction);
    let n = adj.len();
    let mut scores = vec![0.0f64; n];

    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::new();

    for s in 0..n {
        for p in preds.iter_mut() {
            p.clear();
        }
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);

        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                scores[w] += delta[w];
            }
        }
    }

    if direction == Direction::Undirected {
        for x in scores.iter_mut() {
            *x /= 2.0;
        }
    }
    scores
}

pub fn betweenness_by_id(
    net: &CollateralNetwork,
    direction: Direction,
) -> BTreeMap<CustomerId, f64> {
    betweenness(net, direction)
        .into_iter()
        .enumerate()
        .map(|(v, b)| (net.id(v).clone(), b))
        .collect()
}
