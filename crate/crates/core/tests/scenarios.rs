use std::collections::{BTreeMap, BTreeSet};

use chequenet_core::risk::{enumerate_scenarios, loss_distribution, scenario_loss, SamplingMode};
use chequenet_core::synth::{generate, GeneratorParams};
use chequenet_core::{BasisPoints, CollateralNetwork, CustomerId};

fn setup(
    candidates: usize,
) -> (
    CollateralNetwork,
    BTreeSet<CustomerId>,
    BTreeMap<CustomerId, f64>,
) {
    let net = generate(&GeneratorParams::table2(3)).unwrap().network;
    let mut order: Vec<usize> = (0..net.node_count()).collect();
    order.sort_by(|&a, &b| {
        net.out_value_cents(b)
            .cmp(&net.out_value_cents(a))
            .then(a.cmp(&b))
    });
    let chosen: BTreeSet<CustomerId> = order[..candidates]
        .iter()
        .map(|&v| net.id(v).clone())
        .collect();
    let probs = chosen
        .iter()
        .enumerate()
        .map(|(k, id)| (id.clone(), 0.05 + 0.07 * k as f64))
        .collect();
    (net, chosen, probs)
}

#[test]
fn probabilities_sum_to_one() {
    let (net, candidates, probs) = setup(10);
    let c = BasisPoints::new(5000).unwrap();
    let records = enumerate_scenarios(&net, c, &candidates, &probs).unwrap();
    assert_eq!(records.len(), 1024);
    let total: f64 = records.iter().map(|r| r.probability).sum();
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn scenario_loss_is_cascade_total() {
    let (net, candidates, probs) = setup(8);
    let c = BasisPoints::new(5000).unwrap();
    for r in enumerate_scenarios(&net, c, &candidates, &probs)
        .unwrap()
        .iter()
        .step_by(17)
    {
        let direct = scenario_loss(&net, c, &r.seed_set).unwrap();
        assert_eq!(direct.loss, r.loss);
        assert_eq!(
            direct.direct_cents + direct.contagion_cents,
            direct.loss_cents
        );
    }
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    let (net, candidates, probs) = setup(12);
    let c = BasisPoints::new(5000).unwrap();
    let exact = loss_distribution(&net, c, &candidates, &probs, SamplingMode::Exact).unwrap();
    let mc = loss_distribution(
        &net,
        c,
        &candidates,
        &probs,
        SamplingMode::MonteCarlo {
            draws: 100_000,
            rng_seed: 2024,
        },
    )
    .unwrap();
    let se = mc.standard_error.unwrap();
    assert!(se > 0.0);
    assert!((mc.expected_loss - exact.expected_loss).abs() <= 3.0 * se);
    let mass: f64 = exact.points.iter().map(|p| p.probability).sum();
    assert!((mass - 1.0).abs() < 1e-9);
}
