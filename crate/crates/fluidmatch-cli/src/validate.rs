//! Self-contained diagnostic suites behind `fluidmatch validate`.
//!
//! Each suite prints one line per check with the measured gap and returns
//! whether everything passed; the binary exits nonzero on any failure.

use crate::experiments::RunContext;
use anyhow::{Context, Result};
use fluidmatch::dist::PatienceDistribution;
use fluidmatch::fluid::{fluid_trajectory, invariant_state, node_q_star};
use fluidmatch::markov::{mean_queues, BirthDeathSpec};
use fluidmatch::polytope::{enumerate_extreme_points, is_vertex};
use fluidmatch::sim::{replicate, ArrivalKind, Policy, SimConfig};
use fluidmatch::solver::solve_mp;
use fluidmatch::{MatchingRates, Network, FEAS_TOL};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn line(name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "pass" } else { "FAIL" };
    println!("{name:<42} {verdict} ({detail})");
}

fn rng_for(ctx: &RunContext) -> StdRng {
    StdRng::seed_from_u64(ctx.seed.unwrap_or(0))
}

/// A small two-by-two instance with mixed patience families, used by the
/// trajectory and convergence checks.
fn demo_network(theta: f64) -> Network {
    Network::new(
        vec![1.4, 0.9],
        vec![1.1, 1.2],
        vec![vec![2.0, 1.0], vec![1.0, 3.0]],
        vec![0.5, 0.5],
        vec![0.5, 0.5],
        vec![
            PatienceDistribution::exponential(theta).unwrap(),
            PatienceDistribution::uniform(theta).unwrap(),
        ],
        vec![
            PatienceDistribution::gamma_with_mean(2.0, 1.0 / theta).unwrap(),
            PatienceDistribution::exponential(theta).unwrap(),
        ],
    )
    .unwrap()
}

/// Closed-form invariant queues, trajectory settling, and exact
/// conservation in the simulator.
pub fn run_invariants(ctx: &RunContext) -> Result<bool> {
    let mut rng = rng_for(ctx);
    let mut all_ok = true;

    // Exponential and uniform patience both have elementary invariant
    // queue formulas; the library must reproduce them pointwise.
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let rate = rng.gen_range(0.2..5.0);
        let theta = rng.gen_range(0.3..3.0);
        let s = rate * rng.gen_range(0.01..0.99);
        let exp = PatienceDistribution::exponential(theta).unwrap();
        let uni = PatienceDistribution::uniform(theta).unwrap();
        let got_e = node_q_star(rate, &exp, s)?;
        let want_e = (rate - s) / theta;
        let got_u = node_q_star(rate, &uni, s)?;
        let want_u = rate / theta * (1.0 - (s / rate).powi(2));
        worst = worst.max((got_e - want_e).abs()).max((got_u - want_u).abs());
    }
    let ok = worst < 1e-9;
    line("invariants: closed-form queue lengths", ok, &format!("worst gap {worst:.2e}"));
    all_ok &= ok;

    // The fluid dynamics must settle on the invariant state.
    let net = demo_network(1.0);
    let m = MatchingRates::new(vec![vec![0.5, 0.3], vec![0.2, 0.4]]).unwrap();
    let traj = fluid_trajectory(&net, &m, 40.0, None)?;
    let target = invariant_state(&net, &m)?;
    let last_d = traj.demand.last().unwrap();
    let last_s = traj.supply.last().unwrap();
    let gap = last_d
        .iter()
        .zip(&target.q_star)
        .chain(last_s.iter().zip(&target.i_star))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max)
        .max(0.0);
    let ok = gap < 1e-4;
    line("invariants: trajectory settles", ok, &format!("sup gap {gap:.2e}"));
    all_ok &= ok;

    // Exact conservation: arrivals = matched + reneged + waiting, per
    // node, as integers, across policies and arrival laws.
    let mut runs = 0usize;
    let mut ok = true;
    for (policy, arrival) in [
        (Policy::LpBased, ArrivalKind::Poisson),
        (Policy::MatchingRateBased(m.clone()), ArrivalKind::Erlang { k: 3 }),
        (Policy::LpBased, ArrivalKind::Deterministic),
    ] {
        let cfg = SimConfig {
            net: net.clone(),
            n: 4,
            review_base: 0.4,
            review_exponent: 0.0,
            horizon: 6.0,
            policy,
            arrival_kind: arrival,
            seed: rng.gen(),
            record_trajectory: false,
        };
        for r in replicate(&cfg, 4)? {
            runs += 1;
            if r.check_flow_balance().is_err() {
                ok = false;
            }
        }
    }
    line("invariants: simulator conservation", ok, &format!("{runs} runs, exact counts"));
    all_ok &= ok;
    Ok(all_ok)
}

/// Exact single-edge birth-death chain against the fluid point, across
/// a load sweep and increasing scale.
pub fn run_markov(ctx: &RunContext) -> Result<bool> {
    let mut all_ok = true;
    let mut csv = match ctx.out.as_ref() {
        Some(p) => {
            let mut w = csv::Writer::from_writer(
                std::fs::File::create(p)
                    .with_context(|| format!("cannot create {}", p.display()))?,
            );
            w.write_record([
                "mu",
                "n",
                "scaled_demand_queue",
                "scaled_supply_queue",
                "q_star",
                "i_star",
                "gap",
            ])?;
            Some(w)
        }
        None => None,
    };
    for mu in [0.5, 1.0, 1.5] {
        let spec = BirthDeathSpec::new(1.0, mu, 1.0)?;
        let matched = 1.0f64.min(mu);
        let (qs, is) = (1.0 - matched, mu - matched);
        let mut gaps = Vec::new();
        for n in [1u64, 10, 100] {
            // `mean_queues` already reports per-capacity values E[Q]/n.
            let (q, i) = mean_queues(&spec, n)?;
            let gap = (q - qs).abs().max((i - is).abs());
            gaps.push(gap);
            if let Some(w) = csv.as_mut() {
                w.write_record([
                    format!("{mu}"),
                    format!("{n}"),
                    format!("{q:.6}"),
                    format!("{i:.6}"),
                    format!("{qs:.6}"),
                    format!("{is:.6}"),
                    format!("{gap:.6}"),
                ])?;
            }
        }
        let shrinking = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let ok = shrinking && *gaps.last().unwrap() < 0.05;
        line(
            &format!("markov: scaled chain at mu={mu}"),
            ok,
            &format!("gaps {:.4} -> {:.4} -> {:.4}", gaps[0], gaps[1], gaps[2]),
        );
        all_ok &= ok;
    }
    if let Some(w) = csv.as_mut() {
        w.flush()?;
    }
    Ok(all_ok)
}

/// Every enumerated extreme point must pass the independent vertex test
/// and respect the capacity constraints.
pub fn run_extreme_points(ctx: &RunContext) -> Result<bool> {
    let mut rng = rng_for(ctx);
    let mut all_ok = true;
    let mut total = 0usize;
    let mut worst_residual = 0.0f64;
    let mut non_vertices = 0usize;
    for trial in 0..30 {
        let j_n = rng.gen_range(1..=3);
        let k_n = rng.gen_range(1..=3);
        let lambda: Vec<f64> = (0..j_n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let mu: Vec<f64> = (0..k_n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let theta = 1.0;
        let net = Network::new(
            lambda.clone(),
            mu.clone(),
            vec![vec![1.0; k_n]; j_n],
            vec![0.0; j_n],
            vec![0.0; k_n],
            vec![PatienceDistribution::exponential(theta).unwrap(); j_n],
            vec![PatienceDistribution::exponential(theta).unwrap(); k_n],
        )
        .unwrap();
        let points = enumerate_extreme_points(&net)?;
        let mut saw_zero = false;
        for p in &points {
            total += 1;
            if !is_vertex(&lambda, &mu, &p.m, FEAS_TOL) {
                non_vertices += 1;
            }
            for j in 0..j_n {
                worst_residual = worst_residual.max(p.m.row_sum(j) - lambda[j]);
            }
            for k in 0..k_n {
                worst_residual = worst_residual.max(p.m.col_sum(k) - mu[k]);
            }
            if p.m.total() <= FEAS_TOL {
                saw_zero = true;
            }
        }
        if !saw_zero {
            non_vertices += 1;
            eprintln!("trial {trial}: zero vertex missing");
        }
    }
    let ok = non_vertices == 0 && worst_residual <= FEAS_TOL;
    line(
        "extreme points: forest structure",
        ok,
        &format!("{total} points, worst cap excess {worst_residual:.2e}"),
    );
    all_ok &= ok;
    Ok(all_ok)
}

/// Scaled simulation queues must approach the fluid invariant as the
/// scale parameter grows.
pub fn run_convergence(ctx: &RunContext) -> Result<bool> {
    let net = demo_network(1.5);
    let sol = solve_mp(&net).map_err(|e| anyhow::anyhow!("solve failed: {e}"))?;
    let target = invariant_state(&net, &sol.m_star)?;
    let horizon = 6.0;
    let mut gaps = Vec::new();
    for n in [10u64, 50] {
        let cfg = SimConfig {
            net: net.clone(),
            n,
            review_base: 0.3,
            review_exponent: 2.0 / 3.0,
            horizon,
            policy: Policy::MatchingRateBased(sol.m_star.clone()),
            arrival_kind: ArrivalKind::Poisson,
            seed: ctx.seed.unwrap_or(7),
            record_trajectory: false,
        };
        let results = replicate(&cfg, 6)?;
        // Time-averaged scaled queues over the horizon vs the invariant.
        let mut gap = 0.0f64;
        for r in &results {
            for (j, integral) in r.queue_integral_demand.iter().enumerate() {
                gap += (integral / (n as f64 * horizon) - target.q_star[j]).abs();
            }
            for (k, integral) in r.queue_integral_supply.iter().enumerate() {
                gap += (integral / (n as f64 * horizon) - target.i_star[k]).abs();
            }
        }
        gaps.push(gap / results.len() as f64);
    }
    let ok = gaps[1] < gaps[0];
    line(
        "convergence: scaled queues -> invariant",
        ok,
        &format!("mean L1 gap {:.4} (n=10) -> {:.4} (n=50)", gaps[0], gaps[1]),
    );
    Ok(ok)
}
