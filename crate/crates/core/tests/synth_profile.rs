use chequenet_core::contagion::{run_cascade_indices, top_seeds_by_weighted_out_degree};
use chequenet_core::graph::{degree_stats, power_law_exponent};
use chequenet_core::synth::{generate, GeneratorParams};
use chequenet_core::{BasisPoints, CollateralNetwork};

#[test]
fn profile_holds_across_seeds() {
    let c = BasisPoints::new(5000).unwrap();
    for seed in 0..50 {
        let g = generate(&GeneratorParams::table2(seed)).unwrap();
        let net = &g.network;
        let d = degree_stats(net).unwrap();
        assert_eq!(d.node_count, 422, "seed {seed}");
        assert_eq!(d.edge_count, 450, "seed {seed}");
        assert!(d.max_out_degree <= 3, "seed {seed}");
        assert_eq!(net.funded_count(), 33, "seed {seed}");
        let fit = power_law_exponent(net).unwrap();
        assert!(
            (1.0..=1.6).contains(&fit.alpha),
            "seed {seed}: alpha {}",
            fit.alpha
        );

        let seeds = top_seeds_by_weighted_out_degree(net, 5).unwrap();
        let ix: Vec<usize> = seeds
            .iter()
            .map(|s| net.index_of(s.as_str()).unwrap())
            .collect();
        let r = run_cascade_indices(net, c, &ix, None);
        assert_eq!(r.stages[0].newly_failed.len(), 5);
        assert!(r.stages.len() <= 6, "seed {seed}");
        if r.failed_count() > 5 {
            assert!(r.total_loss_cents() > r.stages[0].loss_cents);
        }
    }
}

#[test]
fn ingest_round_trip_is_exact() {
    for seed in [1, 2, 3, 99] {
        let g = generate(&GeneratorParams::table2(seed)).unwrap();
        assert_eq!(
            CollateralNetwork::from_cheques(&g.cheques).unwrap(),
            g.network
        );
    }
}

#[test]
fn out_degree_cap_and_funded_flags() {
    let p = GeneratorParams {
        node_count: 120,
        funded_count: 15,
        target_edge_count: 200,
        max_out_degree: 2,
        ..GeneratorParams::table2(5)
    };
    let g = generate(&p).unwrap();
    let net = &g.network;
    for v in 0..net.node_count() {
        assert!(net.out_degree(v) <= 2);
        let funded = net.customers()[v].funded;
        assert_eq!(funded, net.in_degree(v) > 0);
    }
    assert_eq!(net.edge_count(), 200);
}
