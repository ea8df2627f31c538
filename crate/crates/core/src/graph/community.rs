//! Louvain modularity maximisation on the undirected weighted projection.
//!
//! Nodes are visited in canonical order and ties between candidate
//! communities go to the current community, then to the smallest label, so
//! the partition is a pure function of the network.

use alloc::vec;
use alloc::vec::Vec;

use super::{CollateralNetwork, CustomerId};

const MAX_PASSES: usize = 128;
const MAX_LEVELS: usize = 32;
const MIN_GAIN: f64 = 1e-12;

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degree: Vec<f64>,
    total: f64,
}

impl Level {
    fn new(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut self_loops = vec![0.0; n];
        for &(a, b, w) in edges {
            if a == b {
                self_loops[a] += w;
            } else {
                adj[a].push((b, w));
                adj[b].push((a, w));
            }
        }
        for list in adj.iter_mut() {
            list.sort_by_key(|x| x.0);
            // merge parallel entries
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += w,
                    _ => merged.push((v, w)),
                }
            }
            *list = merged;
        }
        let degree: Vec<f64> = (0..n)
            .map(|v| adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loops[v])
            .collect();
        let total = degree.iter().sum::<f64>() / 2.0;
        Level {
            adj,
            self_loops,
            degree,
            total,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// One round of local moves. Returns labels compacted to `0..k` and
    /// whether any node moved.
    fn local_moves(&self) -> (Vec<usize>, bool) {
        let n = self.len();
        let m = self.total;
        let mut community: Vec<usize> = (0..n).collect();
        if m <= 0.0 {
            return (community, false);
        }
        let mut sigma_tot = self.degree.clone();
        let mut link = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;

        for _ in 0..MAX_PASSES {
            let mut moved = false;
            for v in 0..n {
                let own = community[v];
                let k = self.degree[v];
                sigma_tot[own] -= k;

                touched.clear();
                for &(u, w) in &self.adj[v] {
                    let c = community[u];
                    if link[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                let gain = |c: usize, link_c: f64| link_c / m - sigma_tot[c] * k / (2.0 * m * m);

                let mut best = own;
                let mut best_gain = gain(own, link[own]);
                touched.sort_unstable();
                for &c in &touched {
                    if c == own {
                        continue;
                    }
                    let g = gain(c, link[c]);
                    if g > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = g;
                    }
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                link[own] = 0.0;

                sigma_tot[best] += k;
                if best != own {
                    community[v] = best;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (compact(&community), moved_any)
    }

    fn aggregate(&self, labels: &[usize], count: usize) -> Level {
        let mut edges = Vec::new();
        for v in 0..self.len() {
            if self.self_loops[v] > 0.0 {
                edges.push((labels[v], labels[v], self.self_loops[v]));
            }
            for &(u, w) in &self.adj[v] {
                if v < u {
                    edges.push((labels[v], labels[u], w));
                }
            }
        }
        Level::new(count, &edges)
    }
}

fn compact(labels: &[usize]) -> Vec<usize> {
    let mut remap = vec![usize::MAX; labels.len()];
    let mut next = 0;
    labels
        .iter()
        .map(|&c| {
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
            remap[c]
        })
        .collect()
}

/// Louvain over `n` nodes and undirected weighted edges. Labels are compacted
/// in order of first appearance.
pub fn louvain_partition(n: usize, edges: &[(usize, usize, f64)]) -> Vec<usize> {
    let mut membership: Vec<usize> = (0..n).collect();
    let mut level = Level::new(n, edges);
    for _ in 0..MAX_LEVELS {
        let (labels, moved) = level.local_moves();
        if !moved {
            break;
        }
        let count = labels.iter().max().map_or(0, |&c| c + 1);
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        if count == level.len() {
            break;
        }
        level = level.aggregate(&labels, count);
    }
    compact(&membership)
}

/// Newman modularity of `labels` on an undirected weighted edge list.
pub fn modularity(n: usize, edges: &[(usize, usize, f64)], labels: &[usize]) -> f64 {
    let level = Level::new(n, edges);
    let m = level.total;
    if m <= 0.0 {
        return 0.0;
    }
    let k = labels.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for v in 0..n {
        degree[labels[v]] += level.degree[v];
        internal[labels[v]] += level.self_loops[v];
        for &(u, w) in &level.adj[v] {
            if v < u && labels[u] == labels[v] {
                internal[labels[v]] += w;
            }
        }
    }
    (0..k)
        .map(|c| internal[c] / m - (degree[c] / (2.0 * m)) * (degree[c] / (2.0 * m)))
        .sum()
}

fn projection(net: &CollateralNetwork) -> Vec<(usize, usize, f64)> {
    net.edges()
        .iter()
        .map(|e| {
            let (a, b) = if e.from < e.to {
                (e.from, e.to)
            } else {
                (e.to, e.from)
            };
            (a, b, net.weight(e))
        })
        .collect()
}

/// Communities of the undirected weighted projection, each sorted, ordered by
/// their smallest member. Isolated customers form singleton communities.
pub fn detect_communities(net: &CollateralNetwork) -> Vec<Vec<CustomerId>> {
    let labels = louvain_partition(net.node_count(), &projection(net));
    let count = labels.iter().max().map_or(0, |&c| c + 1);
    let mut blocks: Vec<Vec<CustomerId>> = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        blocks[c].push(net.id(v).clone());
    }
    blocks
}
