//! Deterministic synthetic collateral networks.
//!
//! Funded customers receive in-degree budgets drawn from a discrete power law
//! by stratified inverse-CDF sampling over an integer table; the table is cut
//! at the smallest in-degree whose truncated mean reaches the target average,
//! and the budgets are then nudged one edge at a time, preferentially by
//! size, until they sum to the target edge count. Every funded customer also
//! issues a fixed number of cheques to other funded customers, which is what
//! lets failures propagate. Pure issuers fill the remaining budget with
//! out-degree between 1 and `max_out_degree`.
//!
//! Only integer draws from a ChaCha8 stream and `libm` arithmetic are used, so
//! output is identical on every platform for a given seed.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Cheque, CollateralNetwork, Customer};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub node_count: usize,
    pub funded_count: usize,
    pub target_edge_count: usize,
    pub power_law_alpha: f64,
    pub max_out_degree: usize,
    /// Cheques each funded customer issues to other funded customers.
    pub funded_out_degree: usize,
    pub max_cheques_per_edge: usize,
    pub value_min_cents: u64,
    pub value_max_cents: u64,
    pub rng_seed: u64,
}

impl GeneratorParams {
    /// The profile of the 422-customer branch network.
    pub fn table2(rng_seed: u64) -> Self {
        GeneratorParams {
            node_count: 422,
            funded_count: 33,
            target_edge_count: 450,
            power_law_alpha: 1.3,
            max_out_degree: 3,
            funded_out_degree: 1,
            max_cheques_per_edge: 3,
            value_min_cents: 10_000,
            value_max_cents: 1_100_000,
            rng_seed,
        }
    }

    fn pure_issuers(&self) -> usize {
        self.node_count - self.funded_count
    }

    fn funded_edges(&self) -> usize {
        if self.funded_count >= 2 {
            self.funded_count * self.funded_out_degree
        } else {
            0
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleParams(msg));
        if self.node_count == 0 {
            return bad("node_count must be positive".into());
        }
        if self.funded_count > self.node_count {
            return bad(format!(
                "funded_count {} exceeds node_count {}",
                self.funded_count, self.node_count
            ));
        }
        if self.max_out_degree == 0 {
            return bad("max_out_degree must be at least 1".into());
        }
        if self.max_cheques_per_edge == 0 {
            return bad("max_cheques_per_edge must be at least 1".into());
        }
        if self.value_min_cents == 0 || self.value_min_cents > self.value_max_cents {
            return bad(format!(
                "value range [{}, {}] must be positive and ordered",
                self.value_min_cents, self.value_max_cents
            ));
        }
        if !(self.power_law_alpha.is_finite() && self.power_law_alpha > 0.0) {
            return bad(format!(
                "power_law_alpha {} must be positive",
                self.power_law_alpha
            ));
        }
        let e = self.target_edge_count;
        if e == 0 {
            return Ok(());
        }
        if self.funded_count == 0 {
            return bad("edges require at least one funded customer".into());
        }
        if self.funded_count >= 2
            && (self.funded_out_degree >= self.funded_count
                || self.funded_out_degree > self.max_out_degree)
        {
            return bad(format!(
                "funded_out_degree {} must be below funded_count and at most max_out_degree",
                self.funded_out_degree
            ));
        }
        let ff = self.funded_edges();
        let issuers = self.pure_issuers();
        if e < ff + issuers || e < self.funded_count {
            return bad(format!(
                "target of {e} edges cannot give every customer an edge (need at least {})",
                (ff + issuers).max(self.funded_count)
            ));
        }
        let capacity = ff + issuers * self.max_out_degree;
        if e > capacity {
            return bad(format!(
                "target of {e} edges exceeds issuer capacity {capacity} \
                 ({issuers} issuers x max out-degree {} + {ff} funded cheques)",
                self.max_out_degree
            ));
        }
        if e > self.funded_count * (self.node_count - 1) {
            return bad(format!(
                "target of {e} edges exceeds distinct issuer-recipient pairs"
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedNetwork {
    pub params: GeneratorParams,
    /// Ordered by issuer, recipient, then cheque id.
    pub cheques: Vec<Cheque>,
    pub network: CollateralNetwork,
}

fn id_width(n: usize) -> usize {
    let mut digits = 1;
    let mut x = n;
    while x >= 10 {
        x /= 10;
        digits += 1;
    }
    digits.max(4)
}

fn pick_weighted(rng: &mut ChaCha8Rng, weights: &[u64]) -> Option<usize> {
    let total: u64 = weights.iter().sum();
    if total == 0 {
        return None;
    }
    let mut r = rng.random_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return Some(i);
        }
        r -= w;
    }
    None
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(0..n as u64) as usize
}

const TABLE_SCALE: f64 = (1u64 << 40) as f64;

/// In-degree budgets for the funded customers, summing to `params.target_edge_count`.
fn in_degree_budgets(params: &GeneratorParams, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let f = params.funded_count;
    let e = params.target_edge_count as u128;
    let hard_cap = (params.node_count - 1) as u64;

    // Integer table of x^-alpha, cut where the truncated mean reaches e / f.
    let mut weights: Vec<u64> = Vec::new();
    let (mut mass, mut first_moment) = (0u128, 0u128);
    for x in 1..=hard_cap {
        let w = (libm::pow(x as f64, -params.power_law_alpha) * TABLE_SCALE) as u64;
        let w = w.max(1);
        weights.push(w);
        mass += u128::from(w);
        first_moment += u128::from(w) * u128::from(x);
        if first_moment * f as u128 >= e * mass {
            break;
        }
    }
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0u128;
    for &w in &weights {
        acc += u128::from(w);
        cumulative.push(acc);
    }
    let cap = weights.len() as u64;

    // one draw per quantile stratum
    let mut budgets: Vec<u64> = (0..f)
        .map(|k| {
            let lo = mass * k as u128 / f as u128;
            let hi = mass * (k as u128 + 1) / f as u128;
            let width = (hi - lo).max(1);
            let offset = u128::from(rng.random_range(0..u64::MAX)) % width;
            let r = lo + offset;
            let x = cumulative.partition_point(|&c| c <= r) as u64 + 1;
            x.min(cap)
        })
        .collect();

    let mut sum: u128 = budgets.iter().map(|&b| u128::from(b)).sum();
    while sum < e {
        let w: Vec<u64> = budgets
            .iter()
            .map(|&b| if b < hard_cap { b } else { 0 })
            .collect();
        let i = pick_weighted(rng, &w).expect("validated capacity");
        budgets[i] += 1;
        sum += 1;
    }
    while sum > e {
        let w: Vec<u64> = budgets.iter().map(|&b| b - 1).collect();
        let i = pick_weighted(rng, &w).expect("sum exceeds count");
        budgets[i] -= 1;
        sum -= 1;
    }
    // strata come out in ascending order; decouple budget size from id
    for i in (1..budgets.len()).rev() {
        budgets.swap(i, below(rng, i + 1));
    }
    budgets
}

pub fn generate(params: &GeneratorParams) -> Result<GeneratedNetwork> {
    params.validate()?;
    let n = params.node_count;
    let f = params.funded_count;
    let issuers = params.pure_issuers();
    let width = id_width(n);
    let funded_ids: Vec<String> = (1..=f).map(|k| format!("F{k:0width$}")).collect();
    let issuer_ids: Vec<String> = (1..=issuers).map(|k| format!("C{k:0width$}")).collect();

    if params.target_edge_count == 0 {
        let customers = funded_ids
            .iter()
            .map(|id| Customer::new(id.as_str(), true))
            .chain(
                issuer_ids
                    .iter()
                    .map(|id| Customer::new(id.as_str(), false)),
            )
            .collect();
        let network = CollateralNetwork::from_parts(customers, core::iter::empty())?;
        return Ok(GeneratedNetwork {
            params: params.clone(),
            cheques: Vec::new(),
            network,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let mut remaining = in_degree_budgets(params, &mut rng);
    // edges as (issuer, recipient); funded are 0..f, pure issuers f..n
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(params.target_edge_count);
    let infeasible = || {
        Error::InfeasibleParams(
            "could not place edges without duplicates; loosen the targets".into(),
        )
    };

    if f >= 2 {
        for src in 0..f {
            for _ in 0..params.funded_out_degree {
                let w: Vec<u64> = (0..f)
                    .map(|g| {
                        let taken = edges.iter().any(|&(a, b)| a == src && b == g);
                        if g == src || taken {
                            0
                        } else {
                            remaining[g]
                        }
                    })
                    .collect();
                let g = pick_weighted(&mut rng, &w).ok_or_else(infeasible)?;
                remaining[g] -= 1;
                edges.push((src, g));
            }
        }
    }

    let issuer_edges = params.target_edge_count - edges.len();
    let mut out_degree = vec![1usize; issuers];
    for _ in 0..issuer_edges.saturating_sub(issuers) {
        let open: Vec<usize> = (0..issuers)
            .filter(|&i| out_degree[i] < params.max_out_degree)
            .collect();
        out_degree[open[below(&mut rng, open.len())]] += 1;
    }
    let mut order: Vec<usize> = (0..issuers).collect();
    order.sort_by(|&a, &b| out_degree[b].cmp(&out_degree[a]).then(a.cmp(&b)));
    for i in order {
        let mut linked: Vec<usize> = Vec::with_capacity(out_degree[i]);
        for _ in 0..out_degree[i] {
            let w: Vec<u64> = (0..f)
                .map(|g| if linked.contains(&g) { 0 } else { remaining[g] })
                .collect();
            let g = pick_weighted(&mut rng, &w).ok_or_else(infeasible)?;
            remaining[g] -= 1;
            linked.push(g);
            edges.push((f + i, g));
        }
    }

    let name = |v: usize| -> &str {
        if v < f {
            &funded_ids[v]
        } else {
            &issuer_ids[v - f]
        }
    };
    let mut named: Vec<(&str, &str)> = edges.iter().map(|&(a, b)| (name(a), name(b))).collect();
    named.sort_unstable();

    let mut cheques = Vec::new();
    for (issuer, recipient) in named {
        let count = rng.random_range(1..=params.max_cheques_per_edge as u64);
        for _ in 0..count {
            let value = rng.random_range(params.value_min_cents..=params.value_max_cents);
            let id = format!("Q{:06}", cheques.len() + 1);
            cheques.push(Cheque::new(id, issuer, recipient, value as i64));
        }
    }
    let network = CollateralNetwork::from_cheques(&cheques)?;
    Ok(GeneratedNetwork {
        params: params.clone(),
        cheques,
        network,
    })
}
