use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{detect_communities, power_law_exponent, CollateralNetwork, CustomerId, PowerLawFit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub node_count: usize,
    pub edge_count: usize,
    /// `2 * E / N`, the undirected convention.
    pub average_degree: f64,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
}

pub fn degree_stats(net: &CollateralNetwork) -> Result<DegreeStats> {
    let n = net.node_count();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    Ok(DegreeStats {
        node_count: n,
        edge_count: net.edge_count(),
        average_degree: 2.0 * net.edge_count() as f64 / n as f64,
        max_in_degree: (0..n).map(|i| net.in_degree(i)).max().unwrap_or(0),
        max_out_degree: (0..n).map(|i| net.out_degree(i)).max().unwrap_or(0),
    })
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // smaller root wins so that labels follow canonical order
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Weak components, each sorted, ordered by their smallest member.
pub fn connected_components(net: &CollateralNetwork) -> Vec<Vec<CustomerId>> {
    let n = net.node_count();
    let mut dsu = DisjointSet::new(n);
    for e in net.edges() {
        dsu.union(e.from, e.to);
    }
    let mut slot_of_root = vec![usize::MAX; n];
    let mut components: Vec<Vec<CustomerId>> = Vec::new();
    for v in 0..n {
        let root = dsu.find(v);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = components.len();
            components.push(Vec::new());
        }
        components[slot_of_root[root]].push(net.id(v).clone());
    }
    components
}

pub fn is_weakly_connected(net: &CollateralNetwork) -> bool {
    connected_components(net).len() == 1
}

/// Directed hop distances over ordered reachable pairs `s != t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathMetrics {
    pub total_distance: u64,
    pub reachable_pairs: u64,
    pub diameter: u32,
}

impl PathMetrics {
    pub fn average_path_length(&self) -> f64 {
        self.total_distance as f64 / self.reachable_pairs as f64
    }
}

/// BFS from every node. `None` when no node reaches another.
pub fn path_metrics(net: &CollateralNetwork) -> Option<PathMetrics> {
    let n = net.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut metrics = PathMetrics {
        total_distance: 0,
        reachable_pairs: 0,
        diameter: 0,
    };
    for s in 0..n {
        dist.fill(u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in net.out_edges(v) {
                if dist[e.to] == u32::MAX {
                    let d = dist[v] + 1;
                    dist[e.to] = d;
                    metrics.total_distance += u64::from(d);
                    metrics.reachable_pairs += 1;
                    metrics.diameter = metrics.diameter.max(d);
                    queue.push_back(e.to);
                }
            }
        }
    }
    (metrics.reachable_pairs > 0).then_some(metrics)
}

/// The descriptive statistics block for a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    pub weakly_connected: bool,
    pub component_count: usize,
    pub average_path_length: Option<f64>,
    pub diameter: Option<u32>,
    pub power_law: Option<PowerLawFit>,
    pub funded_count: usize,
    pub total_value_cents: u64,
    pub community_count: usize,
}

impl NetworkStats {
    pub fn compute(net: &CollateralNetwork) -> Result<Self> {
        let degrees = degree_stats(net)?;
        let components = connected_components(net);
        let paths = path_metrics(net);
        Ok(NetworkStats {
            node_count: degrees.node_count,
            edge_count: degrees.edge_count,
            average_degree: degrees.average_degree,
            max_in_degree: degrees.max_in_degree,
            max_out_degree: degrees.max_out_degree,
            weakly_connected: components.len() == 1,
            component_count: components.len(),
            average_path_length: paths.map(|p| p.average_path_length()),
            diameter: paths.map(|p| p.diameter),
            power_law: power_law_exponent(net).ok(),
            funded_count: net.funded_count(),
            total_value_cents: net.total_value_cents(),
            community_count: detect_communities(net).len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Cheque;

    fn net(edges: &[(&str, &str)]) -> CollateralNetwork {
        let cheques: Vec<Cheque> = edges
            .iter()
            .enumerate()
            .map(|(k, (a, b))| Cheque::new(alloc::format!("q{k}"), *a, *b, 1))
            .collect();
        CollateralNetwork::from_cheques(&cheques).unwrap()
    }

    #[test]
    fn single_edge_degrees() {
        let s = degree_stats(&net(&[("a", "b")])).unwrap();
        assert_eq!((s.max_in_degree, s.max_out_degree), (1, 1));
        assert_eq!(s.average_degree, 1.0);
    }

    #[test]
    fn star_degrees() {
        let s = degree_stats(&net(&[
            ("a", "h"),
            ("b", "h"),
            ("c", "h"),
            ("d", "h"),
            ("e", "h"),
        ]))
        .unwrap();
        assert_eq!((s.max_in_degree, s.max_out_degree), (5, 1));
    }

    #[test]
    fn table_two_average_degree_convention() {
        let avg = 2.0 * 450.0 / 422.0;
        assert!((avg - 2.13_f64).abs() < 0.01);
    }

    #[test]
    fn components() {
        let two = net(&[("a", "b"), ("c", "d")]);
        assert_eq!(connected_components(&two).len(), 2);
        assert!(!is_weakly_connected(&two));
        assert!(is_weakly_connected(&net(&[("a", "b"), ("b", "c")])));
    }

    #[test]
    fn path_examples() {
        let p = path_metrics(&net(&[("a", "b"), ("b", "c")])).unwrap();
        assert_eq!((p.total_distance, p.reachable_pairs, p.diameter), (4, 3, 2));
        assert!((p.average_path_length() - 4.0 / 3.0).abs() < 1e-15);
        let p = path_metrics(&net(&[("a", "b")])).unwrap();
        assert_eq!(p.average_path_length(), 1.0);
        assert_eq!(p.diameter, 1);
    }

    #[test]
    fn no_reachable_pair_gives_none() {
        let lonely = CollateralNetwork::from_parts(
            alloc::vec![crate::graph::Customer::new("x", true)],
            core::iter::empty(),
        )
        .unwrap();
        assert_eq!(path_metrics(&lonely), None);
    }
}
