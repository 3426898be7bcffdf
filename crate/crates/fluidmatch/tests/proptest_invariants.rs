//! Property-based invariants: algebraic identities of the invariant
//! queue map, feasibility of sampled rates and transport plans, and
//! exact conservation in the simulator on randomized tiny systems.

use fluidmatch::dist::PatienceDistribution;
use fluidmatch::fluid::node_q_star;
use fluidmatch::sim::{run, ArrivalKind, Policy, SimConfig};
use fluidmatch::solver::sample_feasible;
use fluidmatch::transport::solve_transport;
use fluidmatch::{MatchingRates, Network};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_dist() -> impl Strategy<Value = PatienceDistribution> {
    prop_oneof![
        (0.3f64..3.0).prop_map(|r| PatienceDistribution::exponential(r).unwrap()),
        (0.3f64..3.0).prop_map(|t| PatienceDistribution::uniform(t).unwrap()),
        (0.6f64..4.0, 0.3f64..2.0)
            .prop_map(|(shape, mean)| PatienceDistribution::gamma_with_mean(shape, mean).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariant_queue_has_exact_endpoints(dist in arb_dist(), rate in 0.2f64..4.0) {
        let full = node_q_star(rate, &dist, 0.0).unwrap();
        prop_assert!((full - rate * dist.mean()).abs() < 1e-8,
            "queue with nothing consumed must hold rate * mean patience");
        let empty = node_q_star(rate, &dist, rate).unwrap();
        prop_assert!(empty.abs() < 1e-8, "queue with everything consumed must vanish");
    }

    #[test]
    fn invariant_queue_is_monotone_in_consumption(
        dist in arb_dist(),
        rate in 0.2f64..4.0,
        a in 0.01f64..0.99,
        b in 0.01f64..0.99,
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let q_lo = node_q_star(rate, &dist, lo * rate).unwrap();
        let q_hi = node_q_star(rate, &dist, hi * rate).unwrap();
        prop_assert!(q_hi <= q_lo + 1e-9,
            "more consumption cannot lengthen the invariant queue");
    }

    #[test]
    fn invariant_queue_scales_with_the_instance(
        dist in arb_dist(),
        rate in 0.2f64..4.0,
        frac in 0.05f64..0.95,
        c in 0.2f64..5.0,
    ) {
        let base = node_q_star(rate, &dist, frac * rate).unwrap();
        let scaled = node_q_star(c * rate, &dist, c * frac * rate).unwrap();
        prop_assert!((scaled - c * base).abs() < 1e-7 * (1.0 + c * base),
            "joint rescaling of arrivals and consumption must rescale the queue");
    }

    #[test]
    fn sampled_rates_are_always_feasible(
        seed in 0u64..1_000,
        lambda in proptest::collection::vec(0.3f64..2.0, 1..=3),
        mu in proptest::collection::vec(0.3f64..2.0, 1..=3),
    ) {
        let j = lambda.len();
        let k = mu.len();
        let net = Network::new(
            lambda,
            mu,
            vec![vec![1.0; k]; j],
            vec![0.1; j],
            vec![0.1; k],
            vec![PatienceDistribution::exponential(1.0).unwrap(); j],
            vec![PatienceDistribution::exponential(1.0).unwrap(); k],
        ).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let m = sample_feasible(&net, &mut rng);
            prop_assert!(net.check_rates(&m).is_ok());
        }
    }

    #[test]
    fn transport_plans_respect_their_caps(
        row_caps in proptest::collection::vec(0.0f64..4.0, 1..=4),
        col_caps in proptest::collection::vec(0.0f64..4.0, 1..=4),
        seed in 0u64..1_000,
    ) {
        let j = row_caps.len();
        let k = col_caps.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<Vec<f64>> = (0..j)
            .map(|_| (0..k).map(|_| rand::Rng::gen_range(&mut rng, -2.0..5.0)).collect())
            .collect();
        let sol = solve_transport::<f64>(&row_caps, &col_caps, &weights).unwrap();
        for (jj, row) in sol.plan.iter().enumerate() {
            prop_assert!(row.iter().all(|&x| x >= -1e-9));
            prop_assert!(row.iter().sum::<f64>() <= row_caps[jj] + 1e-9);
        }
        for kk in 0..k {
            prop_assert!(sol.plan.iter().map(|r| r[kk]).sum::<f64>() <= col_caps[kk] + 1e-9);
        }
        prop_assert!(sol.value >= -1e-9, "empty plan is always available");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conservation_is_exact_on_random_tiny_systems(
        seed in 0u64..10_000,
        n in 1u64..=3,
        policy_pick in 0usize..3,
        kind_pick in 0usize..3,
        lambda in proptest::collection::vec(0.4f64..1.6, 1..=2),
        mu in proptest::collection::vec(0.4f64..1.6, 1..=2),
    ) {
        let j = lambda.len();
        let k = mu.len();
        let net = Network::new(
            lambda.clone(),
            mu.clone(),
            vec![vec![1.0; k]; j],
            vec![0.2; j],
            vec![0.2; k],
            vec![PatienceDistribution::uniform(1.5).unwrap(); j],
            vec![PatienceDistribution::gamma_with_mean(2.0, 0.8).unwrap(); k],
        ).unwrap();
        let policy = match policy_pick {
            0 => {
                let scale = 0.5;
                let rows = (0..j)
                    .map(|jj| (0..k).map(|kk| scale * lambda[jj].min(mu[kk]) / (j.max(k) as f64)).collect())
                    .collect();
                Policy::MatchingRateBased(MatchingRates::new(rows).unwrap())
            }
            1 => {
                let net_ref = &net;
                let best = fluidmatch::polytope::enumerate_extreme_points(net_ref).unwrap()
                    .into_iter()
                    .max_by(|a, b| a.m.total().total_cmp(&b.m.total()))
                    .unwrap();
                Policy::PriorityOrdering(
                    fluidmatch::priority::build_priority_sets(net_ref, &best).unwrap(),
                )
            }
            _ => Policy::LpBased,
        };
        let arrival_kind = match kind_pick {
            0 => ArrivalKind::Poisson,
            1 => ArrivalKind::Erlang { k: 3 },
            _ => ArrivalKind::Deterministic,
        };
        let cfg = SimConfig {
            net,
            n,
            review_base: 0.4,
            review_exponent: 0.0,
            horizon: 2.0,
            policy,
            arrival_kind,
            seed,
            record_trajectory: true,
        };
        let result = run(&cfg).unwrap();
        prop_assert!(result.check_flow_balance().is_ok());
        let points = result.trajectory.as_ref().unwrap();
        for pair in points.windows(2) {
            for jj in 0..j {
                for kk in 0..k {
                    prop_assert!(pair[1].matches[jj][kk] >= pair[0].matches[jj][kk]);
                }
            }
        }
    }
}
