//! Scenario losses `L(F)`, probabilities `P(F)` and loss distributions.
//!
//! `L(F)` splits into the own losses of the initially failed set `F` plus the
//! own losses of the customers `C(F)` that fail by contagion from `F`. Since
//! the cascade is deterministic, `C(F)` is unique and `L(F)` equals the total
//! uniform loss of the cascade seeded at `F`.
//!
//! Failures are independent, so `P(F) = prod_{F} p_i * prod_{not F} (1 - p_i)`
//! over a candidate universe.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contagion::{resolve_seeds, run_cascade_indices, BasisPoints};
use crate::error::{Error, Result};
use crate::graph::{CollateralNetwork, CustomerId};

/// Exact enumeration covers at most `2^20` scenarios.
pub const EXACT_CANDIDATE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioLoss {
    pub loss: f64,
    pub loss_cents: u64,
    /// Own losses of the initially failed customers.
    pub direct_cents: u64,
    /// Own losses of the customers failed by contagion.
    pub contagion_cents: u64,
    pub contagion_set: Vec<CustomerId>,
}

pub fn scenario_loss(
    net: &CollateralNetwork,
    c: BasisPoints,
    failed: &BTreeSet<CustomerId>,
) -> Result<ScenarioLoss> {
    let seeds = resolve_seeds(net, failed)?;
    let cascade = run_cascade_indices(net, c, &seeds, None);
    let direct_cents = cascade.stages[0].loss_cents;
    let loss_cents = cascade.total_loss_cents();
    let contagion_set = cascade
        .stages
        .iter()
        .skip(1)
        .flat_map(|s| s.newly_failed.iter().map(|&v| net.id(v).clone()))
        .collect();
    Ok(ScenarioLoss {
        loss: net.fraction(loss_cents),
        loss_cents,
        direct_cents,
        contagion_cents: loss_cents - direct_cents,
        contagion_set,
    })
}

fn check_probability(customer: &CustomerId, p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::InvalidProbability {
            customer: customer.to_string(),
            p,
        })
    }
}

fn lookup(probabilities: &BTreeMap<CustomerId, f64>, customer: &CustomerId) -> Result<f64> {
    let p = probabilities
        .get(customer)
        .copied()
        .ok_or_else(|| Error::MissingProbability(customer.to_string()))?;
    check_probability(customer, p)
}

pub fn scenario_probability(
    failed: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
    universe: &BTreeSet<CustomerId>,
) -> Result<f64> {
    if let Some(outside) = failed.iter().find(|f| !universe.contains(*f)) {
        return Err(Error::OutsideUniverse(outside.to_string()));
    }
    let mut product = 1.0;
    for customer in universe {
        let p = lookup(probabilities, customer)?;
        product *= if failed.contains(customer) {
            p
        } else {
            1.0 - p
        };
    }
    Ok(product)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRecord {
    pub seed_set: BTreeSet<CustomerId>,
    pub loss: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    Exact,
    MonteCarlo { draws: u64, rng_seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossPoint {
    pub loss_cents: u64,
    pub loss: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossDistribution {
    /// Distinct losses, ascending.
    pub points: Vec<LossPoint>,
    pub expected_loss: f64,
    /// Monte Carlo standard error of `expected_loss`; `None` for exact mode.
    pub standard_error: Option<f64>,
    pub mode: SamplingMode,
    pub scenarios_evaluated: u64,
}

struct Candidates {
    indices: Vec<usize>,
    probabilities: Vec<f64>,
}

fn prepare(
    net: &CollateralNetwork,
    candidates: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
) -> Result<Candidates> {
    let mut indices = Vec::with_capacity(candidates.len());
    let mut probs = Vec::with_capacity(candidates.len());
    for customer in candidates {
        indices.push(net.resolve(customer.as_str())?);
        probs.push(lookup(probabilities, customer)?);
    }
    Ok(Candidates {
        indices,
        probabilities: probs,
    })
}

/// Cascade losses keyed by the failing subset of candidates.
struct LossCache<'a> {
    net: &'a CollateralNetwork,
    c: BasisPoints,
    seen: BTreeMap<Vec<u64>, u64>,
}

impl<'a> LossCache<'a> {
    fn loss_cents(&mut self, candidates: &[usize], mask: &[u64]) -> u64 {
        if let Some(&l) = self.seen.get(mask) {
            return l;
        }
        let mut seeds: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(k, _)| mask[k / 64] >> (k % 64) & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        seeds.sort_unstable();
        let l = run_cascade_indices(self.net, self.c, &seeds, None).total_loss_cents();
        self.seen.insert(mask.to_vec(), l);
        l
    }
}

/// Every subset of `candidates` with its loss and probability, in mask order.
pub fn enumerate_scenarios(
    net: &CollateralNetwork,
    c: BasisPoints,
    candidates: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
) -> Result<Vec<ScenarioRecord>> {
    let m = candidates.len();
    if m > EXACT_CANDIDATE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            candidates: m,
            limit: EXACT_CANDIDATE_LIMIT,
        });
    }
    let prepared = prepare(net, candidates, probabilities)?;
    let ids: Vec<&CustomerId> = candidates.iter().collect();
    let mut cache = LossCache {
        net,
        c,
        seen: BTreeMap::new(),
    };
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0u64..(1u64 << m) {
        let loss_cents = cache.loss_cents(&prepared.indices, &[mask]);
        let mut probability = 1.0;
        let mut seed_set = BTreeSet::new();
        for (k, &p) in prepared.probabilities.iter().enumerate() {
            if mask >> k & 1 == 1 {
                probability *= p;
                seed_set.insert(ids[k].clone());
            } else {
                probability *= 1.0 - p;
            }
        }
        out.push(ScenarioRecord {
            seed_set,
            loss: net.fraction(loss_cents),
            probability,
        });
    }
    Ok(out)
}

/// Loss distribution over independent candidate failures.
///
/// Monte Carlo draw `d` uses its own ChaCha8 stream `d` under `rng_seed`, so a
/// draw's outcome depends only on `(rng_seed, d)`.
pub fn loss_distribution(
    net: &CollateralNetwork,
    c: BasisPoints,
    candidates: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
    mode: SamplingMode,
) -> Result<LossDistribution> {
    match mode {
        SamplingMode::Exact => exact(net, c, candidates, probabilities),
        SamplingMode::MonteCarlo { draws, rng_seed } => {
            monte_carlo(net, c, candidates, probabilities, draws, rng_seed)
        }
    }
}

fn exact(
    net: &CollateralNetwork,
    c: BasisPoints,
    candidates: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
) -> Result<LossDistribution> {
    let m = candidates.len();
    if m > EXACT_CANDIDATE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            candidates: m,
            limit: EXACT_CANDIDATE_LIMIT,
        });
    }
    let prepared = prepare(net, candidates, probabilities)?;
    let mut cache = LossCache {
        net,
        c,
        seen: BTreeMap::new(),
    };
    let mut mass: BTreeMap<u64, f64> = BTreeMap::new();
    let mut expected = 0.0;
    for mask in 0u64..(1u64 << m) {
        let loss_cents = cache.loss_cents(&prepared.indices, &[mask]);
        let mut probability = 1.0;
        for (k, &p) in prepared.probabilities.iter().enumerate() {
            probability *= if mask >> k & 1 == 1 { p } else { 1.0 - p };
        }
        if probability > 0.0 {
            *mass.entry(loss_cents).or_default() += probability;
            expected += probability * net.fraction(loss_cents);
        }
    }
    Ok(LossDistribution {
        points: points(net, mass),
        expected_loss: expected,
        standard_error: None,
        mode: SamplingMode::Exact,
        scenarios_evaluated: 1u64 << m,
    })
}

fn monte_carlo(
    net: &CollateralNetwork,
    c: BasisPoints,
    candidates: &BTreeSet<CustomerId>,
    probabilities: &BTreeMap<CustomerId, f64>,
    draws: u64,
    rng_seed: u64,
) -> Result<LossDistribution> {
    if draws == 0 {
        return Err(Error::NoDraws);
    }
    let prepared = prepare(net, candidates, probabilities)?;
    let m = prepared.indices.len();
    let mut cache = LossCache {
        net,
        c,
        seen: BTreeMap::new(),
    };
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut mask = vec![0u64; m.div_ceil(64).max(1)];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for d in 0..draws {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(d);
        mask.fill(0);
        for (k, &p) in prepared.probabilities.iter().enumerate() {
            let u: f64 = rng.random();
            if u < p {
                mask[k / 64] |= 1 << (k % 64);
            }
        }
        let loss_cents = cache.loss_cents(&prepared.indices, &mask);
        *counts.entry(loss_cents).or_default() += 1;
        let x = net.fraction(loss_cents);
        sum += x;
        sum_sq += x * x;
    }
    let n = draws as f64;
    let mean = sum / n;
    let variance = if draws > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let mass = counts.into_iter().map(|(l, k)| (l, k as f64 / n)).collect();
    Ok(LossDistribution {
        points: points(net, mass),
        expected_loss: mean,
        standard_error: Some(libm::sqrt(variance / n)),
        mode: SamplingMode::MonteCarlo { draws, rng_seed },
        scenarios_evaluated: draws,
    })
}

fn points(net: &CollateralNetwork, mass: BTreeMap<u64, f64>) -> Vec<LossPoint> {
    mass.into_iter()
        .map(|(loss_cents, probability)| LossPoint {
            loss_cents,
            loss: net.fraction(loss_cents),
            probability,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Cheque;

    fn six_node() -> CollateralNetwork {
        let rows = [
            ("1", "2", 20),
            ("5", "2", 12),
            ("1", "4", 20),
            ("2", "4", 30),
            ("5", "6", 10),
            ("3", "6", 8),
        ];
        let cheques: Vec<Cheque> = rows
            .iter()
            .enumerate()
            .map(|(k, (a, b, v))| Cheque::new(alloc::format!("q{k}"), *a, *b, *v))
            .collect();
        CollateralNetwork::from_cheques(&cheques).unwrap()
    }

    fn set(ids: &[&str]) -> BTreeSet<CustomerId> {
        ids.iter().map(|&s| CustomerId::from(s)).collect()
    }

    fn uniform_p(ids: &BTreeSet<CustomerId>, p: f64) -> BTreeMap<CustomerId, f64> {
        ids.iter().map(|c| (c.clone(), p)).collect()
    }

    fn half() -> BasisPoints {
        BasisPoints::new(5000).unwrap()
    }

    #[test]
    fn scenario_loss_decomposition() {
        let net = six_node();
        let l = scenario_loss(&net, half(), &set(&["1"])).unwrap();
        assert_eq!(
            (l.direct_cents, l.contagion_cents, l.loss_cents),
            (40, 30, 70)
        );
        assert_eq!(
            l.contagion_set,
            [CustomerId::from("2"), CustomerId::from("4")]
        );
        assert_eq!(scenario_loss(&net, half(), &set(&[])).unwrap().loss, 0.0);
        let all: BTreeSet<_> = net.customers().iter().map(|c| c.id.clone()).collect();
        assert_eq!(scenario_loss(&net, half(), &all).unwrap().loss, 1.0);
    }

    #[test]
    fn probability_examples() {
        let u = set(&["a", "b"]);
        let p = uniform_p(&u, 0.1);
        assert!((scenario_probability(&set(&[]), &p, &u).unwrap() - 0.81).abs() < 1e-12);
        let p = uniform_p(&u, 0.5);
        assert_eq!(scenario_probability(&set(&["a"]), &p, &u).unwrap(), 0.25);
        assert_eq!(
            scenario_probability(&set(&["z"]), &p, &u),
            Err(Error::OutsideUniverse("z".into()))
        );
        let mut bad = p.clone();
        bad.insert("a".into(), 1.5);
        assert!(scenario_probability(&set(&[]), &bad, &u).is_err());
    }

    #[test]
    fn point_masses() {
        let net = six_node();
        let one = set(&["1"]);
        let d = loss_distribution(
            &net,
            half(),
            &one,
            &uniform_p(&one, 1.0),
            SamplingMode::Exact,
        )
        .unwrap();
        assert_eq!(d.points.len(), 1);
        assert_eq!(d.points[0].loss_cents, 70);
        assert_eq!(d.points[0].probability, 1.0);

        let many = set(&["1", "2", "3"]);
        let d = loss_distribution(
            &net,
            half(),
            &many,
            &uniform_p(&many, 0.0),
            SamplingMode::Exact,
        )
        .unwrap();
        assert_eq!(d.points.len(), 1);
        assert_eq!(d.points[0].loss_cents, 0);
        assert_eq!(d.expected_loss, 0.0);
    }

    #[test]
    fn exact_mode_limit() {
        let net = six_node();
        let ids: BTreeSet<CustomerId> = (0..21)
            .map(|k| CustomerId::new(alloc::format!("{k}")))
            .collect();
        let r = loss_distribution(
            &net,
            half(),
            &ids,
            &uniform_p(&ids, 0.1),
            SamplingMode::Exact,
        );
        assert_eq!(
            r,
            Err(Error::EnumerationTooLarge {
                candidates: 21,
                limit: 20
            })
        );
    }

    #[test]
    fn monte_carlo_is_reproducible_and_needs_draws() {
        let net = six_node();
        let cands = set(&["1", "2", "5"]);
        let p = uniform_p(&cands, 0.3);
        let mode = SamplingMode::MonteCarlo {
            draws: 500,
            rng_seed: 9,
        };
        let a = loss_distribution(&net, half(), &cands, &p, mode).unwrap();
        let b = loss_distribution(&net, half(), &cands, &p, mode).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.points.iter().map(|x| x.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(
            loss_distribution(
                &net,
                half(),
                &cands,
                &p,
                SamplingMode::MonteCarlo {
                    draws: 0,
                    rng_seed: 1
                }
            ),
            Err(Error::NoDraws)
        );
    }

    #[test]
    fn missing_probability() {
        let net = six_node();
        let cands = set(&["1", "2"]);
        let p = uniform_p(&set(&["1"]), 0.3);
        assert_eq!(
            loss_distribution(&net, half(), &cands, &p, SamplingMode::Exact),
            Err(Error::MissingProbability("2".into()))
        );
    }
}
