use crate::contagion::BasisPoints;
use crate::error::Result;
use crate::graph::{Cheque, CollateralNetwork};

use super::{default_depth, RiskEngine};

/// Scores of the parties to a prospective cheque in one network.
/// `None` marks a score that is undefined there (new customer, or a recipient
/// without incoming cheques).
#[derive(Debug, Clone, PartialEq)]
pub struct WhatIfSide {
    pub total_value_cents: u64,
    pub issuer_systemic_risk: Option<f64>,
    pub recipient_composite_loss: Option<f64>,
    pub recipient_threshold: Option<f64>,
    pub recipient_weighted_in_degree: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhatIfReport {
    pub cheque: Cheque,
    pub c: BasisPoints,
    pub depth: usize,
    pub before: WhatIfSide,
    pub after: WhatIfSide,
    pub derived: CollateralNetwork,
}

fn side(
    net: &CollateralNetwork,
    c: BasisPoints,
    cheque: &Cheque,
    depth: usize,
) -> Result<WhatIfSide> {
    let engine = RiskEngine::new(net, c);
    let issuer_systemic_risk = match net.index_of(cheque.issuer.as_str()) {
        Some(i) => Some(engine.systemic_risk(i, depth)?),
        None => None,
    };
    let recipient = net.index_of(cheque.recipient.as_str());
    Ok(WhatIfSide {
        total_value_cents: net.total_value_cents(),
        issuer_systemic_risk,
        recipient_composite_loss: recipient.and_then(|j| engine.composite_loss(j)),
        recipient_threshold: recipient.map(|j| c.as_fraction() * net.weighted_in_degree_at(j)),
        recipient_weighted_in_degree: recipient.map(|j| net.weighted_in_degree_at(j)),
    })
}

/// Scores the issuer and recipient before and after folding `cheque` into a
/// derived copy of `net`. Both sides use the same recursion depth, by default
/// the diameter of the derived network.
pub fn whatif_add_cheque(
    net: &CollateralNetwork,
    c: BasisPoints,
    cheque: &Cheque,
    depth: Option<usize>,
) -> Result<WhatIfReport> {
    let derived = net.with_cheque(cheque)?;
    let depth = depth.unwrap_or_else(|| default_depth(&derived));
    let before = side(net, c, cheque, depth)?;
    let after = side(&derived, c, cheque, depth)?;
    Ok(WhatIfReport {
        cheque: cheque.clone(),
        c,
        depth,
        before,
        after,
        derived,
    })
}
