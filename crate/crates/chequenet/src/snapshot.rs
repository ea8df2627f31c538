//! Canonical JSON snapshot of an aggregated network.

use chequenet_core::{CollateralNetwork, Customer, CustomerId};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotCustomer {
    funded: bool,
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotEdge {
    from: String,
    to: String,
    value_cents: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Snapshot {
    customers: Vec<SnapshotCustomer>,
    edges: Vec<SnapshotEdge>,
    total_value_cents: u64,
}

pub fn to_value(net: &CollateralNetwork) -> serde_json::Value {
    let snapshot = Snapshot {
        customers: net
            .customers()
            .iter()
            .map(|c| SnapshotCustomer {
                funded: c.funded,
                id: c.id.to_string(),
                label: c.label.clone(),
            })
            .collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| SnapshotEdge {
                from: net.id(e.from).to_string(),
                to: net.id(e.to).to_string(),
                value_cents: e.value_cents,
            })
            .collect(),
        total_value_cents: net.total_value_cents(),
    };
    serde_json::to_value(snapshot).expect("snapshot serializes")
}

pub fn to_json(net: &CollateralNetwork) -> String {
    crate::report::json_text(&to_value(net))
}

pub fn from_json(text: &str, origin: &str) -> Result<CollateralNetwork> {
    let bad = |message: String| Error::Format {
        origin: origin.to_string(),
        message,
    };
    let snapshot: Snapshot = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    if snapshot.customers.is_empty() {
        return Err(bad("empty network: no customers".into()));
    }
    let customers = snapshot
        .customers
        .into_iter()
        .map(|c| Customer {
            id: CustomerId::from(c.id),
            funded: c.funded,
            label: c.label,
        })
        .collect();
    let edges = snapshot.edges.into_iter().map(|e| {
        (
            CustomerId::from(e.from),
            CustomerId::from(e.to),
            e.value_cents,
        )
    });
    let net = CollateralNetwork::from_parts(customers, edges)?;
    if net.total_value_cents() != snapshot.total_value_cents {
        return Err(bad(format!(
            "total_value_cents is {} but the edges sum to {}",
            snapshot.total_value_cents,
            net.total_value_cents()
        )));
    }
    Ok(net)
}
