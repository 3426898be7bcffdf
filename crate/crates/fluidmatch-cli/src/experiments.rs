//! Subcommand bodies for `solve`, `priority-sets`, `simulate`, and
//! `sweep`, plus the shared CSV row machinery.

use crate::config::{ExperimentKind, FileConfig, PatienceAxisEntry, PolicyKind};
use anyhow::{bail, Context, Result};
use fluidmatch::dist::PatienceDistribution;
use fluidmatch::fluid::invariant_state;
use fluidmatch::polytope::ExtremePoint;
use fluidmatch::priority::build_priority_sets;
use fluidmatch::sim::{aggregate, replicate, Policy, SimConfig, SimResult};
use fluidmatch::solver::{solve_mp, MpSolution};
use fluidmatch::{MatchingRates, Network, FEAS_TOL};
use std::io::Write;
use std::path::PathBuf;

/// Flag-level overrides threaded into every subcommand.
pub struct RunContext {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl RunContext {
    fn seed(&self, cfg: &FileConfig) -> u64 {
        self.seed.unwrap_or(cfg.experiment.seed)
    }

    fn out_path(&self, cfg: &FileConfig) -> Option<PathBuf> {
        self.out.clone().or_else(|| cfg.experiment.out.clone().map(PathBuf::from))
    }

    fn say(&self, text: &str) {
        if !self.quiet {
            println!("{text}");
        }
    }
}

/// The patience axis, with a single pass-through entry when the config
/// does not declare one.
fn patience_entries(cfg: &FileConfig) -> Vec<(String, Option<PatienceDistribution>)> {
    if cfg.patience.is_empty() {
        vec![("instance".to_string(), None)]
    } else {
        cfg.patience
            .iter()
            .map(|PatienceAxisEntry { label, all_nodes }| {
                (label.clone(), Some(all_nodes.clone()))
            })
            .collect()
    }
}

/// Reconstruct the vertex annotations for a rate matrix known to be an
/// extreme point of the instance's polytope.
fn to_extreme_point(net: &Network, m: &MatchingRates) -> ExtremePoint {
    let support = (0..net.j())
        .flat_map(|j| (0..net.k()).map(move |k| (j, k)))
        .filter(|&(j, k)| m.get(j, k) > FEAS_TOL)
        .collect();
    let tight_demand =
        (0..net.j()).map(|j| (m.row_sum(j) - net.lambda()[j]).abs() <= FEAS_TOL).collect();
    let tight_supply =
        (0..net.k()).map(|k| (m.col_sum(k) - net.mu()[k]).abs() <= FEAS_TOL).collect();
    ExtremePoint { m: m.clone(), support, tight_demand, tight_supply }
}

/// Fluid share of each side left unmatched under the zero-cost optimum:
/// per-node positive parts `(cap - consumed)+`, aggregated per side.
fn unmatched_shares(cfg: &FileConfig, patience: Option<&PatienceDistribution>, mu: Option<f64>) -> Result<(f64, f64)> {
    let net = cfg.instance.zero_cost().build_with(patience, mu)?;
    let sol = solve_mp(&net).map_err(|e| anyhow::anyhow!("zero-cost solve failed: {e}"))?;
    let m = &sol.m_star;
    let lam: f64 = net.lambda().iter().sum();
    let unmatched_d: f64 =
        (0..net.j()).map(|j| (net.lambda()[j] - m.row_sum(j)).max(0.0)).sum();
    let mu_total: f64 = net.mu().iter().sum();
    let unmatched_s: f64 = (0..net.k()).map(|k| (net.mu()[k] - m.col_sum(k)).max(0.0)).sum();
    Ok((unmatched_d / lam, unmatched_s / mu_total))
}

fn solve_cell(net: &Network) -> Result<MpSolution> {
    solve_mp(net).map_err(|e| anyhow::anyhow!("rate optimization failed: {e}"))
}

/// CSV sink that always emits the header row, writing to a file when a
/// path is given and to standard output otherwise.
struct Sink {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Sink {
    fn open(path: Option<&PathBuf>, header: &[&str]) -> Result<Self> {
        let raw: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p)
                    .with_context(|| format!("cannot create {}", p.display()))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        let mut writer = csv::Writer::from_writer(raw);
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields)?;
        Ok(())
    }

    fn done(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

pub fn run_solve(cfg: &FileConfig, ctx: &RunContext) -> Result<()> {
    let mut sink = match ctx.out_path(cfg) {
        Some(p) => Some(Sink::open(Some(&p), &["patience", "row", "col", "m_star"])?),
        None => None,
    };
    for (label, patience) in patience_entries(cfg) {
        let net = cfg.instance.build(patience.as_ref())?;
        let sol = solve_cell(&net)?;
        let state = invariant_state(&net, &sol.m_star)
            .map_err(|e| anyhow::anyhow!("invariant state failed: {e}"))?;
        let (r_d, r_s) = unmatched_shares(cfg, patience.as_ref(), None)?;
        ctx.say(&format!("[{label}]"));
        ctx.say(&format!(
            "  route: {}   objective: {:.6}   extreme point: {}   certified optimum: {}",
            sol.solver_used, sol.objective, sol.is_extreme_point, sol.global_optimum
        ));
        for j in 0..net.j() {
            let row: Vec<String> =
                (0..net.k()).map(|k| format!("{:8.4}", sol.m_star.get(j, k))).collect();
            ctx.say(&format!("  m*[{j}] {}", row.join(" ")));
        }
        ctx.say(&format!(
            "  invariant queues q*: {:?}   i*: {:?}",
            state.q_star.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            state.i_star.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
        ));
        ctx.say(&format!(
            "  fluid unmatched shares (zero-cost): demand {r_d:.4}, supply {r_s:.4}"
        ));
        if let Some(sink) = sink.as_mut() {
            for j in 0..net.j() {
                for k in 0..net.k() {
                    sink.row(&[
                        label.clone(),
                        j.to_string(),
                        k.to_string(),
                        fmt(sol.m_star.get(j, k)),
                    ])?;
                }
            }
        }
    }
    if let Some(sink) = sink {
        sink.done()?;
    }
    Ok(())
}

pub fn run_priority_sets(cfg: &FileConfig, ctx: &RunContext) -> Result<()> {
    let mut sink = match ctx.out_path(cfg) {
        Some(p) => {
            Some(Sink::open(Some(&p), &["patience", "level", "row", "col", "is_zero_set"])?)
        }
        None => None,
    };
    for (label, patience) in patience_entries(cfg) {
        let net = cfg.instance.build(patience.as_ref())?;
        let sol = solve_cell(&net)?;
        if !sol.is_extreme_point {
            bail!(
                "[{label}] the optimal rates are not an extreme point (route {}), so no \
                 priority ordering exists for them; this instance needs nondecreasing \
                 hazard rates on every node",
                sol.solver_used
            );
        }
        let vertex = to_extreme_point(&net, &sol.m_star);
        let sets = build_priority_sets(&net, &vertex)
            .map_err(|e| anyhow::anyhow!("priority construction failed: {e}"))?;
        ctx.say(&format!("[{label}]  {} levels + zero set", sets.h_max + 1));
        for (idx, level) in sets.sets.iter().enumerate() {
            let is_zero = idx == sets.sets.len() - 1;
            let name = if is_zero { "zero ".to_string() } else { format!("{:5}", idx + 1) };
            let edges: Vec<String> =
                level.iter().map(|(j, k)| format!("({j},{k})")).collect();
            ctx.say(&format!("  level {name} {}", edges.join(" ")));
            if let Some(sink) = sink.as_mut() {
                for (j, k) in level {
                    sink.row(&[
                        label.clone(),
                        (idx + 1).to_string(),
                        j.to_string(),
                        k.to_string(),
                        is_zero.to_string(),
                    ])?;
                }
            }
        }
    }
    if let Some(sink) = sink {
        sink.done()?;
    }
    Ok(())
}

/// Columns shared by `simulate` and `sweep` rows.
const ROW_HEADER: [&str; 14] = [
    "patience",
    "policy",
    "n",
    "l",
    "mu",
    "replication",
    "seed",
    "objective",
    "fluid_objective",
    "ratio",
    "demand_renege_fraction",
    "supply_renege_fraction",
    "r_star_demand",
    "r_star_supply",
];

struct CellSpec<'a> {
    patience_label: &'a str,
    policy: PolicyKind,
    n: u64,
    l: f64,
    mu: Option<f64>,
    seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn write_cell_rows(
    sink: &mut Sink,
    spec: &CellSpec<'_>,
    results: &[SimResult],
    horizon: f64,
    fluid_objective: f64,
    shares: (f64, f64),
) -> Result<()> {
    for (rep, r) in results.iter().enumerate() {
        let arrivals_d: u64 = r.arrivals_demand.iter().sum();
        let reneged_d: u64 = r.reneged_demand.iter().sum();
        let arrivals_s: u64 = r.arrivals_supply.iter().sum();
        let reneged_s: u64 = r.reneged_supply.iter().sum();
        let frac = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let ratio = if fluid_objective > 0.0 {
            fmt(r.objective / (spec.n as f64 * horizon * fluid_objective))
        } else {
            String::new()
        };
        sink.row(&[
            spec.patience_label.to_string(),
            spec.policy.to_string(),
            spec.n.to_string(),
            fmt(spec.l),
            spec.mu.map(fmt).unwrap_or_default(),
            rep.to_string(),
            spec.seed.wrapping_add(rep as u64).to_string(),
            fmt(r.objective),
            fmt(fluid_objective),
            ratio,
            fmt(frac(reneged_d, arrivals_d)),
            fmt(frac(reneged_s, arrivals_s)),
            fmt(shares.0),
            fmt(shares.1),
        ])?;
    }
    Ok(())
}

fn build_policy(net: &Network, sol: &MpSolution, kind: PolicyKind) -> Result<Policy> {
    Ok(match kind {
        PolicyKind::Lp => Policy::LpBased,
        PolicyKind::RateBased => Policy::MatchingRateBased(sol.m_star.clone()),
        PolicyKind::Priority => {
            if !sol.is_extreme_point {
                bail!(
                    "priority policy needs extreme-point rates, but the optimum came from \
                     route {} and is interior",
                    sol.solver_used
                );
            }
            let vertex = to_extreme_point(net, &sol.m_star);
            Policy::PriorityOrdering(
                build_priority_sets(net, &vertex)
                    .map_err(|e| anyhow::anyhow!("priority construction failed: {e}"))?,
            )
        }
    })
}

pub fn run_simulate(cfg: &FileConfig, ctx: &RunContext) -> Result<()> {
    let e = &cfg.experiment;
    let (n, l, horizon, policy_kind) =
        (e.n.unwrap(), e.review_base.unwrap(), e.horizon.unwrap(), e.policy.unwrap());
    let base_seed = ctx.seed(cfg);
    let mut sink = match ctx.out_path(cfg) {
        Some(p) => Some(Sink::open(Some(&p), &ROW_HEADER)?),
        None => None,
    };
    for (label, patience) in patience_entries(cfg) {
        let net = cfg.instance.build(patience.as_ref())?;
        let sol = solve_cell(&net)?;
        let policy = build_policy(&net, &sol, policy_kind)?;
        let sim = SimConfig {
            net: net.clone(),
            n,
            review_base: l,
            review_exponent: e.review_exponent,
            horizon,
            policy,
            arrival_kind: e.arrival,
            seed: base_seed,
            record_trajectory: false,
        };
        sim.validate().map_err(|e| anyhow::anyhow!("invalid simulation settings: {e}"))?;
        let results =
            replicate(&sim, e.replications).map_err(|e| anyhow::anyhow!("simulation failed: {e}"))?;
        let agg = aggregate(&results);
        ctx.say(&format!(
            "[{label}] n={n} l={l} delta={} horizon={horizon} policy={policy_kind} reps={}",
            e.review_exponent, e.replications
        ));
        ctx.say(&format!(
            "  objective {:.3} (stderr {:.3}); fluid bound {:.3}",
            agg.mean_objective,
            agg.stderr_objective,
            sol.objective * n as f64 * horizon
        ));
        ctx.say(&format!(
            "  demand renege fractions {:?}",
            agg.mean_demand_renege_fraction
                .iter()
                .map(|v| (v * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        ));
        ctx.say(&format!(
            "  supply renege fractions {:?}",
            agg.mean_supply_renege_fraction
                .iter()
                .map(|v| (v * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        ));
        if let Some(sink) = sink.as_mut() {
            let shares = unmatched_shares(cfg, patience.as_ref(), None)?;
            let spec = CellSpec {
                patience_label: &label,
                policy: policy_kind,
                n,
                l,
                mu: (net.k() == 1).then(|| net.mu()[0]),
                seed: base_seed,
            };
            write_cell_rows(sink, &spec, &results, horizon, sol.objective, shares)?;
        }
    }
    if let Some(sink) = sink {
        sink.done()?;
    }
    Ok(())
}

pub fn run_sweep(cfg: &FileConfig, ctx: &RunContext) -> Result<()> {
    let e = &cfg.experiment;
    let horizon = e.horizon.unwrap();
    let n_axis: Vec<u64> =
        e.n_values.clone().unwrap_or_else(|| vec![e.n.expect("checked in config")]);
    let l_axis: Vec<f64> =
        e.l_values.clone().unwrap_or_else(|| vec![e.review_base.expect("checked in config")]);
    let policy_axis: Vec<PolicyKind> =
        e.policies.clone().unwrap_or_else(|| vec![e.policy.expect("checked in config")]);
    let mu_axis: Vec<Option<f64>> = match &e.mu_values {
        Some(v) => v.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let base_seed = ctx.seed(cfg);

    let mut sink = Sink::open(ctx.out_path(cfg).as_ref(), &ROW_HEADER)?;
    let mut cell_idx: u64 = 0;
    for (label, patience) in patience_entries(cfg) {
        for &mu in &mu_axis {
            let net = cfg.instance.build_with(patience.as_ref(), mu)?;
            let sol = solve_cell(&net)?;
            let shares = unmatched_shares(cfg, patience.as_ref(), mu)?;
            for &policy_kind in &policy_axis {
                let policy = build_policy(&net, &sol, policy_kind)?;
                for &n in &n_axis {
                    for &l in &l_axis {
                        // Distinct seed block per cell so no two cells
                        // share replication streams.
                        let seed = base_seed.wrapping_add(cell_idx << 20);
                        cell_idx += 1;
                        let sim = SimConfig {
                            net: net.clone(),
                            n,
                            review_base: l,
                            review_exponent: e.review_exponent,
                            horizon,
                            policy: policy.clone(),
                            arrival_kind: e.arrival,
                            seed,
                            record_trajectory: false,
                        };
                        sim.validate()
                            .map_err(|e| anyhow::anyhow!("invalid cell (n={n}, l={l}): {e}"))?;
                        let results = replicate(&sim, e.replications)
                            .map_err(|e| anyhow::anyhow!("simulation failed: {e}"))?;
                        if !ctx.quiet {
                            eprintln!(
                                "sweep cell patience={label} mu={mu:?} policy={policy_kind} \
                                 n={n} l={l}: done ({} reps)",
                                e.replications
                            );
                        }
                        let spec = CellSpec {
                            patience_label: &label,
                            policy: policy_kind,
                            n,
                            l,
                            mu,
                            seed,
                        };
                        write_cell_rows(&mut sink, &spec, &results, horizon, sol.objective, shares)?;
                    }
                }
            }
        }
    }
    sink.done()?;
    Ok(())
}

pub fn dispatch(cfg: &FileConfig, ctx: &RunContext) -> Result<()> {
    match cfg.experiment.kind {
        ExperimentKind::Solve => run_solve(cfg, ctx),
        ExperimentKind::PrioritySets => run_priority_sets(cfg, ctx),
        ExperimentKind::Simulate => run_simulate(cfg, ctx),
        ExperimentKind::Sweep => run_sweep(cfg, ctx),
    }
}
