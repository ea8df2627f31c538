//! The weighted directed collateral network and its descriptive statistics.
//!
//! Customers are stored in lexicographic id order and referred to internally
//! by their position in that order (a node index). Every analysis iterates in
//! this canonical order, so all outputs are deterministic.

mod betweenness;
mod community;
mod powerlaw;
mod stats;

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

use crate::error::{Error, Result};

pub use betweenness::{betweenness, betweenness_by_id, Direction};
pub use community::{detect_communities, louvain_partition, modularity};
pub use powerlaw::{
    fit_discrete_power_law, power_law_exponent, PowerLawFit, MIN_POWER_LAW_SAMPLES,
};
pub use stats::{
    connected_components, degree_stats, is_weakly_connected, path_metrics, DegreeStats,
    NetworkStats, PathMetrics,
};

/// Customer identifier. Ordering is lexicographic on the raw string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CustomerId(String);

impl CustomerId {
    pub fn new(id: impl Into<String>) -> Self {
        CustomerId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CustomerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for CustomerId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for CustomerId {
    fn from(s: &str) -> Self {
        CustomerId(s.to_owned())
    }
}

impl From<String> for CustomerId {
    fn from(s: String) -> Self {
        CustomerId(s)
    }
}

/// One post-dated cheque pledged as collateral.
///
/// `value_cents` is signed so that malformed input can be represented and
/// rejected at ingestion rather than at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cheque {
    pub cheque_id: String,
    pub issuer: CustomerId,
    pub recipient: CustomerId,
    pub value_cents: i64,
    pub issue_date: Option<String>,
    pub maturity_date: Option<String>,
}

impl Cheque {
    pub fn new(
        cheque_id: impl Into<String>,
        issuer: impl Into<CustomerId>,
        recipient: impl Into<CustomerId>,
        value_cents: i64,
    ) -> Self {
        Cheque {
            cheque_id: cheque_id.into(),
            issuer: issuer.into(),
            recipient: recipient.into(),
            value_cents,
            issue_date: None,
            maturity_date: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.value_cents <= 0 {
            return Err(Error::NonPositiveValue(self.cheque_id.clone()));
        }
        if self.issuer == self.recipient {
            return Err(Error::SelfCheque {
                cheque: self.cheque_id.clone(),
                customer: self.issuer.to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Customer {
    pub id: CustomerId,
    /// Received bank credit against pledged cheques.
    pub funded: bool,
    pub label: Option<String>,
}

impl Customer {
    pub fn new(id: impl Into<CustomerId>, funded: bool) -> Self {
        Customer {
            id: id.into(),
            funded,
            label: None,
        }
    }
}

/// Aggregated exposure `d_ij` of issuer `from` to recipient `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub value_cents: u64,
}

/// Immutable aggregated network. Edge weights are `value_cents / total_value_cents`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollateralNetwork {
    customers: Vec<Customer>,
    index: BTreeMap<CustomerId, usize>,
    /// Sorted by `(from, to)`, which makes it a CSR layout for out-edges.
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
    /// Edge positions sorted by `(to, from)`.
    in_order: Vec<usize>,
    in_offsets: Vec<usize>,
    in_value: Vec<u64>,
    out_value: Vec<u64>,
    total_value: u64,
}

impl CollateralNetwork {
    /// Aggregates cheques into a network. Cheques sharing an issuer and
    /// recipient add their values into one edge.
    pub fn from_cheques(cheques: &[Cheque]) -> Result<Self> {
        if cheques.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut seen = BTreeSet::new();
        let mut exposures: BTreeMap<(&CustomerId, &CustomerId), u64> = BTreeMap::new();
        let mut funded: BTreeMap<&CustomerId, bool> = BTreeMap::new();
        for cheque in cheques {
            if !seen.insert(cheque.cheque_id.as_str()) {
                return Err(Error::DuplicateCheque(cheque.cheque_id.clone()));
            }
            cheque.validate()?;
            let slot = exposures
                .entry((&cheque.issuer, &cheque.recipient))
                .or_default();
            *slot = slot
                .checked_add(cheque.value_cents as u64)
                .ok_or(Error::ValueOverflow)?;
            funded.entry(&cheque.issuer).or_insert(false);
            funded.insert(&cheque.recipient, true);
        }
        let customers = funded
            .into_iter()
            .map(|(id, funded)| Customer::new(id.clone(), funded))
            .collect();
        let edges = exposures
            .into_iter()
            .map(|((from, to), value)| (from.clone(), to.clone(), value));
        Self::from_parts(customers, edges)
    }

    /// Builds a network from an explicit customer list and aggregated edges,
    /// as stored in a snapshot. Customers without edges are allowed.
    pub fn from_parts<I>(mut customers: Vec<Customer>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CustomerId, CustomerId, u64)>,
    {
        customers.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = BTreeMap::new();
        for (ix, customer) in customers.iter().enumerate() {
            if index.insert(customer.id.clone(), ix).is_some() {
                return Err(Error::DuplicateCustomer(customer.id.to_string()));
            }
        }
        let resolve = |id: &CustomerId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownCustomer(id.to_string()))
        };
        let mut resolved = Vec::new();
        for (from, to, value_cents) in edges {
            let (f, t) = (resolve(&from)?, resolve(&to)?);
            if f == t {
                return Err(Error::SelfCheque {
                    cheque: alloc::format!("{from}->{to}"),
                    customer: from.to_string(),
                });
            }
            if value_cents == 0 {
                return Err(Error::NonPositiveValue(alloc::format!("{from}->{to}")));
            }
            if !customers[t].funded {
                return Err(Error::UnfundedRecipient(to.to_string()));
            }
            resolved.push(Edge {
                from: f,
                to: t,
                value_cents,
            });
        }
        resolved.sort_unstable();
        for pair in resolved.windows(2) {
            if (pair[0].from, pair[0].to) == (pair[1].from, pair[1].to) {
                return Err(Error::DuplicateEdge {
                    from: customers[pair[0].from].id.to_string(),
                    to: customers[pair[0].to].id.to_string(),
                });
            }
        }
        Self::assemble(customers, index, resolved)
    }

    fn assemble(
        customers: Vec<Customer>,
        index: BTreeMap<CustomerId, usize>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let n = customers.len();
        let mut out_offsets = alloc::vec![0usize; n + 1];
        let mut in_offsets = alloc::vec![0usize; n + 1];
        let mut in_value = alloc::vec![0u64; n];
        let mut out_value = alloc::vec![0u64; n];
        let mut total_value = 0u64;
        for e in &edges {
            out_offsets[e.from + 1] += 1;
            in_offsets[e.to + 1] += 1;
            in_value[e.to] += e.value_cents;
            out_value[e.from] += e.value_cents;
            total_value = total_value
                .checked_add(e.value_cents)
                .ok_or(Error::ValueOverflow)?;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut in_order: Vec<usize> = (0..edges.len()).collect();
        in_order.sort_by_key(|&e| (edges[e].to, edges[e].from));
        Ok(CollateralNetwork {
            customers,
            index,
            edges,
            out_offsets,
            in_order,
            in_offsets,
            in_value,
            out_value,
            total_value,
        })
    }

    /// Returns a new network with one more cheque folded in. New customers
    /// are created as needed; `self` is untouched.
    pub fn with_cheque(&self, cheque: &Cheque) -> Result<Self> {
        cheque.validate()?;
        let mut customers = self.customers.clone();
        for id in [&cheque.issuer, &cheque.recipient] {
            if !self.index.contains_key(id) {
                customers.push(Customer::new(id.clone(), false));
            }
        }
        for c in customers.iter_mut() {
            if c.id == cheque.recipient {
                c.funded = true;
            }
        }
        let mut exposures: BTreeMap<(CustomerId, CustomerId), u64> = self
            .edges
            .iter()
            .map(|e| {
                (
                    (self.id(e.from).clone(), self.id(e.to).clone()),
                    e.value_cents,
                )
            })
            .collect();
        let slot = exposures
            .entry((cheque.issuer.clone(), cheque.recipient.clone()))
            .or_default();
        *slot = slot
            .checked_add(cheque.value_cents as u64)
            .ok_or(Error::ValueOverflow)?;
        Self::from_parts(
            customers,
            exposures.into_iter().map(|((f, t), v)| (f, t, v)),
        )
    }

    pub fn node_count(&self) -> usize {
        self.customers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when there are no edges (total value zero).
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn id(&self, ix: usize) -> &CustomerId {
        &self.customers[ix].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownCustomer(id.to_owned()))
    }

    pub fn funded_count(&self) -> usize {
        self.customers.iter().filter(|c| c.funded).count()
    }

    /// `V`: total collateral value in cents.
    pub fn total_value_cents(&self) -> u64 {
        self.total_value
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, ix: usize) -> &[Edge] {
        &self.edges[self.out_offsets[ix]..self.out_offsets[ix + 1]]
    }

    pub fn in_edges(&self, ix: usize) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.in_order[self.in_offsets[ix]..self.in_offsets[ix + 1]]
            .iter()
            .map(|&e| &self.edges[e])
    }

    pub fn out_degree(&self, ix: usize) -> usize {
        self.out_offsets[ix + 1] - self.out_offsets[ix]
    }

    pub fn in_degree(&self, ix: usize) -> usize {
        self.in_offsets[ix + 1] - self.in_offsets[ix]
    }

    pub fn in_value_cents(&self, ix: usize) -> u64 {
        self.in_value[ix]
    }

    pub fn out_value_cents(&self, ix: usize) -> u64 {
        self.out_value[ix]
    }

    /// Converts an amount in cents into a fraction of `V` (0 for an empty network).
    pub fn fraction(&self, cents: u64) -> f64 {
        if self.total_value == 0 {
            0.0
        } else {
            cents as f64 / self.total_value as f64
        }
    }

    /// `w_ij = d_ij / V`.
    pub fn weight(&self, edge: &Edge) -> f64 {
        self.fraction(edge.value_cents)
    }

    pub fn weighted_in_degree_at(&self, ix: usize) -> f64 {
        self.fraction(self.in_value[ix])
    }

    pub fn weighted_out_degree_at(&self, ix: usize) -> f64 {
        self.fraction(self.out_value[ix])
    }

    pub fn weighted_in_degree(&self, id: &str) -> Result<f64> {
        self.resolve(id).map(|ix| self.weighted_in_degree_at(ix))
    }

    pub fn weighted_out_degree(&self, id: &str) -> Result<f64> {
        self.resolve(id).map(|ix| self.weighted_out_degree_at(ix))
    }

    pub fn edge_value_cents(&self, from: usize, to: usize) -> Option<u64> {
        let out = self.out_edges(from);
        out.binary_search_by_key(&to, |e| e.to)
            .ok()
            .map(|p| out[p].value_cents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cheque(id: &str, i: &str, j: &str, v: i64) -> Cheque {
        Cheque::new(id, i, j, v)
    }

    #[test]
    fn weight_is_value_over_total() {
        // Pad the network so V = 4,306,735 euros with one 100,000 euro cheque.
        let cheques = vec![
            cheque("c1", "a", "b", 10_000_000),
            cheque("c2", "x", "y", 420_673_500),
        ];
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        assert_eq!(net.total_value_cents(), 430_673_500);
        let w = net.weighted_in_degree("b").unwrap();
        assert!((w - 100_000.0 / 4_306_735.0).abs() < 1e-12, "{w}");
        assert!((w - 0.023_220).abs() < 1e-6);
    }

    #[test]
    fn single_cheque_has_unit_weight() {
        let net = CollateralNetwork::from_cheques(&[cheque("c", "i", "j", 17)]).unwrap();
        assert_eq!(net.weight(&net.edges()[0]), 1.0);
    }

    #[test]
    fn aggregation_and_normalisation() {
        let net = CollateralNetwork::from_cheques(&[
            cheque("1", "i", "j", 300),
            cheque("2", "i", "j", 700),
            cheque("3", "k", "j", 1000),
        ])
        .unwrap();
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.total_value_cents(), 2000);
        let i = net.resolve("i").unwrap();
        let j = net.resolve("j").unwrap();
        assert_eq!(net.edge_value_cents(i, j), Some(1000));
        for e in net.edges() {
            assert_eq!(net.weight(e), 0.5);
        }
        assert!(net.customers()[j].funded);
        assert!(!net.customers()[i].funded);
    }

    #[test]
    fn ingestion_errors() {
        assert_eq!(
            CollateralNetwork::from_cheques(&[]),
            Err(Error::EmptyNetwork)
        );
        assert_eq!(
            CollateralNetwork::from_cheques(&[cheque("d", "a", "b", 1), cheque("d", "a", "c", 1)]),
            Err(Error::DuplicateCheque("d".into()))
        );
        assert_eq!(
            CollateralNetwork::from_cheques(&[cheque("z", "a", "b", 0)]),
            Err(Error::NonPositiveValue("z".into()))
        );
        assert!(matches!(
            CollateralNetwork::from_cheques(&[cheque("s", "a", "a", 5)]),
            Err(Error::SelfCheque { .. })
        ));
    }

    #[test]
    fn weighted_degrees() {
        let net = CollateralNetwork::from_cheques(&[
            cheque("1", "a", "c", 20),
            cheque("2", "b", "c", 12),
            cheque("3", "c", "d", 20),
            cheque("4", "c", "e", 20),
            cheque("5", "f", "g", 28),
        ])
        .unwrap();
        assert!((net.weighted_in_degree("c").unwrap() - 0.32).abs() < 1e-12);
        assert!((net.weighted_out_degree("c").unwrap() - 0.40).abs() < 1e-12);
        assert_eq!(net.weighted_in_degree("a").unwrap(), 0.0);
        assert_eq!(net.weighted_out_degree("g").unwrap(), 0.0);
        assert_eq!(
            net.weighted_in_degree("nobody"),
            Err(Error::UnknownCustomer("nobody".into()))
        );
    }

    #[test]
    fn snapshot_parts_reject_unfunded_recipient() {
        let customers = vec![Customer::new("a", false), Customer::new("b", false)];
        let r = CollateralNetwork::from_parts(customers, [("a".into(), "b".into(), 5)]);
        assert_eq!(r, Err(Error::UnfundedRecipient("b".into())));
    }

    #[test]
    fn with_cheque_leaves_original_untouched() {
        let net = CollateralNetwork::from_cheques(&[cheque("1", "a", "b", 10)]).unwrap();
        let grown = net.with_cheque(&cheque("2", "c", "b", 30)).unwrap();
        assert_eq!(net.total_value_cents(), 10);
        assert_eq!(grown.total_value_cents(), 40);
        assert_eq!(grown.node_count(), 3);
        assert!(net.with_cheque(&cheque("3", "a", "b", 0)).is_err());
    }
}
