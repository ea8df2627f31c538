//! Stage-wise failure cascade.
//!
//! Customer `j` has failure threshold `u_j = c * sum_i w_ij`, constant over
//! stages. Seeds fail at stage 0. At stage `k + 1` every surviving customer
//! whose exposure to customers failed by stage `k` is positive and at least
//! `u_j` fails; all such customers fail simultaneously. The cascade stops
//! when a stage adds nobody.
//!
//! Thresholds are compared exactly:
//! `sum_{i in D^k} d_ij * 10000 >= c_bp * sum_i d_ij`.
//!
//! A failed customer's issued cheques bounce, so the loss of stage `k` is the
//! weighted out-degree of the customers that failed at `k`. Each edge is
//! charged once, at its issuer's failure stage.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{CollateralNetwork, CustomerId};

/// Failure fraction `c` as an integer number of basis points in `(0, 10000]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisPoints(u32);

impl BasisPoints {
    pub const FULL: BasisPoints = BasisPoints(10_000);

    pub fn new(bp: u32) -> Result<Self> {
        if bp == 0 || bp > 10_000 {
            return Err(Error::InvalidFailureFraction(bp));
        }
        Ok(BasisPoints(bp))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_fraction(self) -> f64 {
        f64::from(self.0) / 10_000.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContagionConfig {
    pub c: BasisPoints,
    pub seeds: BTreeSet<CustomerId>,
    /// Cap on contagion stages after stage 0. `None` means the node count.
    pub max_stages: Option<usize>,
}

impl ContagionConfig {
    pub fn new<I, S>(c: BasisPoints, seeds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<CustomerId>,
    {
        ContagionConfig {
            c,
            seeds: seeds.into_iter().map(Into::into).collect(),
            max_stages: None,
        }
    }

    pub fn with_max_stages(mut self, max_stages: usize) -> Self {
        self.max_stages = Some(max_stages);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub k: usize,
    /// Node indices, ascending (canonical order).
    pub newly_failed: Vec<usize>,
    pub loss_cents: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeResult {
    pub c: BasisPoints,
    pub stages: Vec<Stage>,
    /// Indexed by node; `Some(k)` when the node failed at stage `k`.
    pub failed_at: Vec<Option<usize>>,
    /// Stopped by `max_stages` rather than at the fixpoint.
    pub truncated: bool,
    pub total_value_cents: u64,
}

impl CascadeResult {
    pub fn failed_count(&self) -> usize {
        self.failed_at.iter().filter(|f| f.is_some()).count()
    }

    pub fn failed_total(&self) -> Vec<usize> {
        (0..self.failed_at.len())
            .filter(|&v| self.failed_at[v].is_some())
            .collect()
    }

    pub fn is_failed(&self, ix: usize) -> bool {
        self.failed_at[ix].is_some()
    }

    pub fn total_loss_cents(&self) -> u64 {
        self.stages.iter().map(|s| s.loss_cents).sum()
    }

    fn fraction(&self, cents: u64) -> f64 {
        if self.total_value_cents == 0 {
            0.0
        } else {
            cents as f64 / self.total_value_cents as f64
        }
    }

    /// Loss of each stage as a fraction of `V`.
    pub fn stage_losses(&self) -> Vec<f64> {
        self.stages
            .iter()
            .map(|s| self.fraction(s.loss_cents))
            .collect()
    }

    /// Undiscounted total loss.
    pub fn total_uniform_loss(&self) -> f64 {
        self.fraction(self.total_loss_cents())
    }

    /// Stage losses discounted by `1 / 2^(k+1)`.
    pub fn adjusted_loss(&self) -> f64 {
        adjusted_loss_from_stages(&self.stage_losses())
    }

    /// Total loss over stage-0 loss; `None` when stage 0 lost nothing.
    pub fn amplification(&self) -> Option<f64> {
        let first = self.stages.first()?.loss_cents;
        (first > 0).then(|| self.total_loss_cents() as f64 / first as f64)
    }
}

/// `sum_k loss_k / 2^(k+1)`, in whatever unit the stage losses are given.
pub fn adjusted_loss_from_stages(stage_losses: &[f64]) -> f64 {
    let mut factor = 0.5;
    let mut total = 0.0;
    for loss in stage_losses {
        total += loss * factor;
        factor *= 0.5;
    }
    total
}

/// `u_j` for every customer as a fraction of `V`.
pub fn failure_thresholds(net: &CollateralNetwork, c: BasisPoints) -> BTreeMap<CustomerId, f64> {
    (0..net.node_count())
        .map(|v| {
            (
                net.id(v).clone(),
                c.as_fraction() * net.weighted_in_degree_at(v),
            )
        })
        .collect()
}

/// Exact test of `exposure >= u_j` with the positivity guard.
#[inline]
pub(crate) fn crosses_threshold(exposure_cents: u64, in_value_cents: u64, c: BasisPoints) -> bool {
    exposure_cents > 0
        && u128::from(exposure_cents) * 10_000 >= u128::from(c.get()) * u128::from(in_value_cents)
}

pub fn resolve_seeds<'a, I>(net: &CollateralNetwork, seeds: I) -> Result<Vec<usize>>
where
    I: IntoIterator<Item = &'a CustomerId>,
{
    let mut out: Vec<usize> = seeds
        .into_iter()
        .map(|s| net.resolve(s.as_str()))
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn run_cascade(net: &CollateralNetwork, config: &ContagionConfig) -> Result<CascadeResult> {
    let seeds = resolve_seeds(net, &config.seeds)?;
    Ok(run_cascade_indices(
        net,
        config.c,
        &seeds,
        config.max_stages,
    ))
}

/// Cascade from pre-resolved, sorted, deduplicated seed indices.
pub fn run_cascade_indices(
    net: &CollateralNetwork,
    c: BasisPoints,
    seeds: &[usize],
    max_stages: Option<usize>,
) -> CascadeResult {
    let n = net.node_count();
    let cap = max_stages.unwrap_or(n);
    let mut failed_at = vec![None; n];
    let mut exposure = vec![0u64; n];
    let mut stages = Vec::new();
    let mut frontier: Vec<usize> = seeds.to_vec();
    let mut touched = Vec::new();
    let mut truncated = false;

    for &s in &frontier {
        failed_at[s] = Some(0);
    }
    let mut k = 0;
    loop {
        let loss_cents = frontier.iter().map(|&v| net.out_value_cents(v)).sum();
        touched.clear();
        for &v in &frontier {
            for e in net.out_edges(v) {
                if failed_at[e.to].is_none() {
                    exposure[e.to] += e.value_cents;
                    touched.push(e.to);
                }
            }
        }
        stages.push(Stage {
            k,
            newly_failed: core::mem::take(&mut frontier),
            loss_cents,
        });

        touched.sort_unstable();
        touched.dedup();
        let next: Vec<usize> = touched
            .iter()
            .copied()
            .filter(|&j| crosses_threshold(exposure[j], net.in_value_cents(j), c))
            .collect();
        if next.is_empty() {
            break;
        }
        if k >= cap {
            truncated = true;
            break;
        }
        k += 1;
        for &j in &next {
            failed_at[j] = Some(k);
        }
        frontier = next;
    }

    CascadeResult {
        c,
        stages,
        failed_at,
        truncated,
        total_value_cents: net.total_value_cents(),
    }
}

/// The `m` customers with the largest weighted out-degree; ties go to the
/// lexicographically smaller id. Returned in canonical order.
pub fn top_seeds_by_weighted_out_degree(
    net: &CollateralNetwork,
    m: usize,
) -> Result<BTreeSet<CustomerId>> {
    let n = net.node_count();
    if m == 0 || m > n {
        return Err(Error::SeedCountOutOfRange {
            requested: m,
            available: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        net.out_value_cents(b)
            .cmp(&net.out_value_cents(a))
            .then(a.cmp(&b))
    });
    Ok(order[..m].iter().map(|&v| net.id(v).clone()).collect())
}
