mod support;

use std::collections::BTreeSet;

use chequenet_core::contagion::run_cascade_indices;
use chequenet_core::{BasisPoints, Cheque, CollateralNetwork};
use proptest::prelude::*;

use support::failed_issuer_weight;

fn cheques_strategy() -> impl Strategy<Value = Vec<Cheque>> {
    (2usize..30)
        .prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n, 1i64..5_000), 1..80).prop_map(|raw| {
                raw.into_iter()
                    .filter(|(i, j, _)| i != j)
                    .enumerate()
                    .map(|(k, (i, j, v))| {
                        Cheque::new(format!("q{k}"), format!("c{i:02}"), format!("c{j:02}"), v)
                    })
                    .collect::<Vec<_>>()
            })
        })
        .prop_filter("at least one cheque", |c| !c.is_empty())
}

fn failed_set(net: &CollateralNetwork, c_bp: u32, seeds: &[usize]) -> BTreeSet<usize> {
    let r = run_cascade_indices(net, BasisPoints::new(c_bp).unwrap(), seeds, None);
    r.failed_total().into_iter().collect()
}

fn seeds_from(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> (v % 64) & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn more_seeds_fail_more(cheques in cheques_strategy(), c_bp in 1u32..=10_000, a in any::<u64>(), b in any::<u64>()) {
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        let n = net.node_count();
        let small = seeds_from(a & b, n);
        let large = seeds_from(a, n);
        prop_assert!(failed_set(&net, c_bp, &small).is_subset(&failed_set(&net, c_bp, &large)));
    }

    #[test]
    fn higher_fraction_fails_less(cheques in cheques_strategy(), c1 in 1u32..=10_000, c2 in 1u32..=10_000, a in any::<u64>()) {
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        let seeds = seeds_from(a, net.node_count());
        let (lo, hi) = (c1.min(c2), c1.max(c2));
        prop_assert!(failed_set(&net, hi, &seeds).is_subset(&failed_set(&net, lo, &seeds)));
    }

    #[test]
    fn loss_accounting(cheques in cheques_strategy(), c_bp in 1u32..=10_000, a in any::<u64>()) {
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        let seeds = seeds_from(a, net.node_count());
        let r = run_cascade_indices(&net, BasisPoints::new(c_bp).unwrap(), &seeds, None);
        let uniform = r.total_uniform_loss();
        prop_assert!(r.adjusted_loss() <= uniform / 2.0 + 1e-12);
        let summed: f64 = r.stage_losses().iter().sum();
        prop_assert!((summed - uniform).abs() < 1e-12);
        let failed: BTreeSet<usize> = r.failed_total().into_iter().collect();
        prop_assert!((failed_issuer_weight(&net, &failed) - uniform).abs() < 1e-12);
    }

    #[test]
    fn weights_are_a_distribution(cheques in cheques_strategy()) {
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        let total: f64 = net.edges().iter().map(|e| net.weight(e)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let in_range = net.edges().iter().map(|e| net.weight(e)).all(|w| w > 0.0 && w <= 1.0);
        prop_assert!(in_range);
        let degrees: f64 = (0..net.node_count())
            .map(|v| net.weighted_in_degree_at(v) + net.weighted_out_degree_at(v))
            .sum();
        prop_assert!((degrees - 2.0).abs() < 1e-9);
    }

    #[test]
    fn ingestion_ignores_record_order(cheques in cheques_strategy(), rot in 0usize..80) {
        let mut shuffled = cheques.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        prop_assert_eq!(
            CollateralNetwork::from_cheques(&cheques).unwrap(),
            CollateralNetwork::from_cheques(&shuffled).unwrap()
        );
    }

    #[test]
    fn with_cheque_equals_reingestion(cheques in cheques_strategy(), i in 0usize..32, j in 0usize..32, v in 1i64..10_000) {
        prop_assume!(i != j);
        let net = CollateralNetwork::from_cheques(&cheques).unwrap();
        let extra = Cheque::new("extra", format!("c{i:02}"), format!("c{j:02}"), v);
        let mut all = cheques.clone();
        all.push(extra.clone());
        prop_assert_eq!(net.with_cheque(&extra).unwrap(), CollateralNetwork::from_cheques(&all).unwrap());
    }
}
