//! Per-customer systemic-risk scores.
//!
//! * uniform loss `l_j`: total cascaded loss when `j` alone fails;
//! * adjusted loss: the same cascade with stage `k` discounted by `1/2^(k+1)`;
//! * composite loss `g_j = (W_j / d_j - u_j) + l_j + W_j`, where `W_j` is the
//!   weighted in-degree and `d_j` the in-degree count;
//! * issuer systemic risk `r_i = sum_j [ (w_ij / u_j) * g_j + r_j ]` over the
//!   recipients of `i`, recursing downstream to a fixed depth.
//!
//! All values are fractions of the network's total value.

mod scenario;
mod whatif;

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::contagion::{run_cascade_indices, BasisPoints, CascadeResult};
use crate::error::{Error, Result};
use crate::graph::{path_metrics, CollateralNetwork, CustomerId};

pub use scenario::{
    enumerate_scenarios, loss_distribution, scenario_loss, scenario_probability, LossDistribution,
    LossPoint, SamplingMode, ScenarioLoss, ScenarioRecord, EXACT_CANDIDATE_LIMIT,
};
pub use whatif::{whatif_add_cheque, WhatIfReport, WhatIfSide};

/// Which `l_j` feeds the composite loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossReading {
    /// Full cascaded uniform loss seeded at `{j}`.
    #[default]
    Cascaded,
    /// Only `j`'s own weighted out-degree.
    DirectOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Uniform,
    Adjusted,
    Composite,
    Systemic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeLoss {
    pub uniform: f64,
    pub adjusted: f64,
    pub cascade: CascadeResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub customer: CustomerId,
    pub uniform_loss: f64,
    pub adjusted_loss: f64,
    /// `None` for customers without incoming cheques.
    pub composite_loss: Option<f64>,
    /// Weighted in-degree.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IssuerRiskRecord {
    pub issuer: CustomerId,
    pub systemic_risk: f64,
    pub weighted_out_degree: f64,
    pub depth_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    /// 1-based.
    pub rank: usize,
    pub customer: CustomerId,
    pub value: f64,
    pub weighted_in_degree: f64,
    pub weighted_out_degree: f64,
}

fn single_cascade(net: &CollateralNetwork, c: BasisPoints, ix: usize) -> CascadeResult {
    run_cascade_indices(net, c, &[ix], None)
}

pub fn node_loss(net: &CollateralNetwork, c: BasisPoints, customer: &str) -> Result<NodeLoss> {
    let ix = net.resolve(customer)?;
    let cascade = single_cascade(net, c, ix);
    Ok(NodeLoss {
        uniform: cascade.total_uniform_loss(),
        adjusted: cascade.adjusted_loss(),
        cascade,
    })
}

fn composite_from_parts(
    net: &CollateralNetwork,
    c: BasisPoints,
    ix: usize,
    loss: f64,
) -> Result<f64> {
    let d_in = net.in_degree(ix);
    if d_in == 0 {
        return Err(Error::NoIncomingCheques(net.id(ix).to_string()));
    }
    let weight = net.weighted_in_degree_at(ix);
    let threshold = c.as_fraction() * weight;
    Ok((weight / d_in as f64 - threshold) + loss + weight)
}

pub fn composite_loss(
    net: &CollateralNetwork,
    c: BasisPoints,
    customer: &str,
    reading: LossReading,
) -> Result<f64> {
    let ix = net.resolve(customer)?;
    let loss = match reading {
        LossReading::Cascaded => single_cascade(net, c, ix).total_uniform_loss(),
        LossReading::DirectOnly => net.weighted_out_degree_at(ix),
    };
    composite_from_parts(net, c, ix, loss)
}

/// Default recursion depth for the issuer score: the network diameter.
pub fn default_depth(net: &CollateralNetwork) -> usize {
    path_metrics(net).map_or(1, |p| p.diameter.max(1) as usize)
}

/// Scores every customer of one network at one failure fraction.
#[derive(Debug, Clone)]
pub struct RiskEngine<'a> {
    net: &'a CollateralNetwork,
    c: BasisPoints,
    reading: LossReading,
    cascades: Vec<CascadeResult>,
    composite: Vec<Option<f64>>,
    acyclic: bool,
}

impl<'a> RiskEngine<'a> {
    pub fn new(net: &'a CollateralNetwork, c: BasisPoints) -> Self {
        Self::with_reading(net, c, LossReading::Cascaded)
    }

    pub fn with_reading(net: &'a CollateralNetwork, c: BasisPoints, reading: LossReading) -> Self {
        let n = net.node_count();
        let cascades: Vec<CascadeResult> = (0..n).map(|v| single_cascade(net, c, v)).collect();
        let composite = (0..n)
            .map(|v| {
                let loss = match reading {
                    LossReading::Cascaded => cascades[v].total_uniform_loss(),
                    LossReading::DirectOnly => net.weighted_out_degree_at(v),
                };
                composite_from_parts(net, c, v, loss).ok()
            })
            .collect();
        RiskEngine {
            net,
            c,
            reading,
            cascades,
            composite,
            acyclic: is_acyclic(net),
        }
    }

    pub fn network(&self) -> &CollateralNetwork {
        self.net
    }

    pub fn failure_fraction(&self) -> BasisPoints {
        self.c
    }

    pub fn loss_reading(&self) -> LossReading {
        self.reading
    }

    pub fn cascade(&self, ix: usize) -> &CascadeResult {
        &self.cascades[ix]
    }

    pub fn uniform_loss(&self, ix: usize) -> f64 {
        self.cascades[ix].total_uniform_loss()
    }

    pub fn adjusted_loss(&self, ix: usize) -> f64 {
        self.cascades[ix].adjusted_loss()
    }

    pub fn composite_loss(&self, ix: usize) -> Option<f64> {
        self.composite[ix]
    }

    pub fn score(&self, ix: usize) -> ScoreRecord {
        ScoreRecord {
            customer: self.net.id(ix).clone(),
            uniform_loss: self.uniform_loss(ix),
            adjusted_loss: self.adjusted_loss(ix),
            composite_loss: self.composite_loss(ix),
            weight: self.net.weighted_in_degree_at(ix),
        }
    }

    /// `r_i` at the given recursion depth (at least 1). The base case is
    /// `r^0 = 0`; a recipient already on the current recursion path keeps its
    /// direct term but is not recursed into again.
    pub fn systemic_risk(&self, ix: usize, depth: usize) -> Result<f64> {
        if depth == 0 {
            return Err(Error::InvalidDepth);
        }
        let n = self.net.node_count();
        if self.acyclic {
            let mut memo = vec![vec![None; depth + 1]; n];
            Ok(self.systemic_memo(ix, depth, &mut memo))
        } else {
            let mut on_path = vec![false; n];
            on_path[ix] = true;
            Ok(self.systemic_guarded(ix, depth, &mut on_path))
        }
    }

    pub fn issuer_risk(&self, ix: usize, depth: usize) -> Result<IssuerRiskRecord> {
        Ok(IssuerRiskRecord {
            issuer: self.net.id(ix).clone(),
            systemic_risk: self.systemic_risk(ix, depth)?,
            weighted_out_degree: self.net.weighted_out_degree_at(ix),
            depth_used: depth,
        })
    }

    fn direct_term(&self, exposure_cents: u64, recipient: usize) -> f64 {
        // w_ij / u_j = d_ij / (c * sum_i d_ij); u_j > 0 because j has this in-edge.
        let ratio = exposure_cents as f64
            / (self.c.as_fraction() * self.net.in_value_cents(recipient) as f64);
        ratio * self.composite[recipient].unwrap_or(0.0)
    }

    fn systemic_guarded(&self, v: usize, depth: usize, on_path: &mut [bool]) -> f64 {
        let mut total = 0.0;
        for e in self.net.out_edges(v) {
            total += self.direct_term(e.value_cents, e.to);
            if depth > 1 && !on_path[e.to] {
                on_path[e.to] = true;
                total += self.systemic_guarded(e.to, depth - 1, on_path);
                on_path[e.to] = false;
            }
        }
        total
    }

    fn systemic_memo(&self, v: usize, depth: usize, memo: &mut [Vec<Option<f64>>]) -> f64 {
        if let Some(r) = memo[v][depth] {
            return r;
        }
        let mut total = 0.0;
        for e in self.net.out_edges(v) {
            total += self.direct_term(e.value_cents, e.to);
            if depth > 1 {
                total += self.systemic_memo(e.to, depth - 1, memo);
            }
        }
        memo[v][depth] = Some(total);
        total
    }

    fn metric_values(&self, metric: Metric, depth: usize) -> Result<Vec<Option<f64>>> {
        let n = self.net.node_count();
        Ok(match metric {
            Metric::Uniform => (0..n).map(|v| Some(self.uniform_loss(v))).collect(),
            Metric::Adjusted => (0..n).map(|v| Some(self.adjusted_loss(v))).collect(),
            Metric::Composite => self.composite.clone(),
            Metric::Systemic => {
                if depth == 0 {
                    return Err(Error::InvalidDepth);
                }
                if self.acyclic {
                    let mut memo = vec![vec![None; depth + 1]; n];
                    (0..n)
                        .map(|v| Some(self.systemic_memo(v, depth, &mut memo)))
                        .collect()
                } else {
                    (0..n).map(|v| self.systemic_risk(v, depth).ok()).collect()
                }
            }
        })
    }

    /// Customers ordered by descending metric, ties by canonical id, cut to
    /// `top` entries. Customers for which the metric is undefined (composite
    /// loss without incoming cheques) are left out.
    pub fn rank(&self, metric: Metric, top: usize, depth: Option<usize>) -> Result<Vec<RankEntry>> {
        let depth = depth.unwrap_or_else(|| default_depth(self.net));
        let values = self.metric_values(metric, depth)?;
        let mut order: Vec<(usize, f64)> = values
            .iter()
            .enumerate()
            .filter_map(|(v, x)| x.map(|x| (v, x)))
            .collect();
        order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(order
            .into_iter()
            .take(top)
            .enumerate()
            .map(|(r, (v, value))| RankEntry {
                rank: r + 1,
                customer: self.net.id(v).clone(),
                value,
                weighted_in_degree: self.net.weighted_in_degree_at(v),
                weighted_out_degree: self.net.weighted_out_degree_at(v),
            })
            .collect())
    }
}

fn is_acyclic(net: &CollateralNetwork) -> bool {
    let n = net.node_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| net.in_degree(v)).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for e in net.out_edges(v) {
            indegree[e.to] -= 1;
            if indegree[e.to] == 0 {
                ready.push(e.to);
            }
        }
    }
    seen == n
}

pub fn issuer_systemic_risk(
    net: &CollateralNetwork,
    c: BasisPoints,
    issuer: &str,
    depth: usize,
) -> Result<f64> {
    let ix = net.resolve(issuer)?;
    RiskEngine::new(net, c).systemic_risk(ix, depth)
}

pub fn rank_customers(
    net: &CollateralNetwork,
    c: BasisPoints,
    metric: Metric,
    top: usize,
) -> Result<Vec<RankEntry>> {
    RiskEngine::new(net, c).rank(metric, top, None)
}
