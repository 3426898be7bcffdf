//! Event-driven simulation of the scaled matching system under
//! discrete-review policies.
//!
//! Arrival rates are scaled by `n` while patience distributions stay
//! fixed; the review length shrinks as `l * n^(-delta)`. Between reviews
//! the system only accumulates arrivals and loses impatient entries; at
//! each review the configured policy consumes an integer queue snapshot
//! and removes matched entries oldest-first.
//!
//! Event ordering at equal timestamps: reneging deadlines fire first
//! (ties broken by node index, then insertion order), then arrivals, then
//! the review snapshot — so a deadline at exactly a review time is a
//! reneging, and an arrival at exactly a review time is matchable.
//! Queue-length time integrals are accumulated exactly between events.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::network::{MatchingRates, Network};
use crate::priority::PrioritySets;
use crate::transport::solve_transport;
use crate::{Error, Result};

/// Interarrival law of the renewal arrival streams; every kind has mean
/// `1/(n * rate)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ArrivalKind {
    /// Exponential interarrivals (Poisson process).
    Poisson,
    /// Sum of `k` exponential phases (lower variability).
    Erlang { k: u32 },
    /// Constant interarrivals.
    Deterministic,
}

/// Matching rule applied at each review instant.
#[derive(Debug, Clone)]
pub enum Policy {
    /// Scale a fixed rate matrix by the effective elapsed window.
    MatchingRateBased(MatchingRates),
    /// Greedy residual matching in priority-set order.
    PriorityOrdering(PrioritySets),
    /// Solve a fresh transportation LP on the snapshot.
    LpBased,
}

/// Full description of one simulation run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Instance (unscaled rates).
    pub net: Network,
    /// Scaling factor applied to all arrival rates.
    pub n: u64,
    /// Review-length base `l`.
    pub review_base: f64,
    /// Review-length exponent `delta`: the review length is
    /// `l * n^(-delta)`. Either `0` (constant review length) or a value
    /// in `(1/2, 1)`.
    pub review_exponent: f64,
    /// Simulation horizon `T`.
    pub horizon: f64,
    /// Matching rule.
    pub policy: Policy,
    /// Interarrival law.
    pub arrival_kind: ArrivalKind,
    /// Root seed; replications derive their own seeds from it.
    pub seed: u64,
    /// Record `(t, Q, I, M)` after every review.
    pub record_trajectory: bool,
}

impl SimConfig {
    /// Effective review period `l * n^(-delta)`.
    pub fn review_length(&self) -> f64 {
        self.review_base * (self.n as f64).powf(-self.review_exponent)
    }

    /// Validate every cross-field invariant.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("scaling n must be at least 1".into()));
        }
        if !(self.review_base > 0.0) || !self.review_base.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "review base must be positive, got {}",
                self.review_base
            )));
        }
        let d = self.review_exponent;
        if d != 0.0 && !(0.5 < d && d < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "review exponent must be 0 or inside (1/2, 1), got {d}"
            )));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if self.review_length() >= self.horizon {
            return Err(Error::InvalidParameter(format!(
                "review length {} must be shorter than the horizon {}",
                self.review_length(),
                self.horizon
            )));
        }
        if let ArrivalKind::Erlang { k } = self.arrival_kind {
            if k == 0 {
                return Err(Error::InvalidParameter("Erlang phase count must be positive".into()));
            }
        }
        match &self.policy {
            Policy::MatchingRateBased(m) => self.net.check_rates(m),
            Policy::PriorityOrdering(sets) => sets.validate_partition(self.net.j(), self.net.k()),
            Policy::LpBased => Ok(()),
        }
    }
}

/// One waiting entry: when it arrived and when it will renege.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub arrival_time: f64,
    pub deadline: f64,
}

/// FCFS queue of one node. Entries are keyed by a globally increasing
/// insertion id, so the map order is arrival order; reneging removes by
/// id, matching pops from the front.
#[derive(Debug, Clone, Default)]
pub struct NodeQueue {
    entries: BTreeMap<u64, Entry>,
}

impl NodeQueue {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, id: u64, entry: Entry) {
        self.entries.insert(id, entry);
    }

    /// Remove the oldest resident (FCFS match).
    pub fn pop_oldest(&mut self) -> Option<(u64, Entry)> {
        self.entries.pop_first()
    }

    /// Remove a specific entry (reneging); `None` when it was already
    /// matched, which makes its deadline event stale.
    pub fn remove(&mut self, id: u64) -> Option<Entry> {
        self.entries.remove(&id)
    }

    /// Arrival time of the oldest resident (head-of-line waiting time is
    /// the current time minus this).
    pub fn head_arrival_time(&self) -> Option<f64> {
        self.entries.first_key_value().map(|(_, e)| e.arrival_time)
    }
}

/// Queue lengths and cumulative matches right after a review.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub demand: Vec<u64>,
    pub supply: Vec<u64>,
    pub matches: Vec<Vec<u64>>,
}

/// Counts and exact integrals accumulated over one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Cumulative matches per edge at the horizon.
    pub matches: Vec<Vec<u64>>,
    /// Entries lost to impatience, per demand node.
    pub reneged_demand: Vec<u64>,
    /// Entries lost to impatience, per supply node.
    pub reneged_supply: Vec<u64>,
    /// Total arrivals per demand node.
    pub arrivals_demand: Vec<u64>,
    /// Total arrivals per supply node.
    pub arrivals_supply: Vec<u64>,
    /// Entries still waiting at the horizon, per demand node.
    pub residual_demand: Vec<u64>,
    /// Entries still waiting at the horizon, per supply node.
    pub residual_supply: Vec<u64>,
    /// Exact `integral of Q_j(t) dt` over the horizon.
    pub queue_integral_demand: Vec<f64>,
    /// Exact `integral of I_k(t) dt` over the horizon.
    pub queue_integral_supply: Vec<f64>,
    /// Match value minus holding costs: `sum v M - sum cD int Q - sum cS int I`.
    pub objective: f64,
    /// Post-review snapshots when recording was requested.
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

impl SimResult {
    /// Exact per-node conservation: arrivals = matched + reneged + still waiting.
    pub fn check_flow_balance(&self) -> Result<()> {
        for j in 0..self.arrivals_demand.len() {
            let matched: u64 = self.matches[j].iter().sum();
            let rhs = matched + self.reneged_demand[j] + self.residual_demand[j];
            if self.arrivals_demand[j] != rhs {
                return Err(Error::Structure(format!(
                    "demand node {j}: {} arrivals vs {rhs} accounted",
                    self.arrivals_demand[j]
                )));
            }
        }
        for k in 0..self.arrivals_supply.len() {
            let matched: u64 = self.matches.iter().map(|row| row[k]).sum();
            let rhs = matched + self.reneged_supply[k] + self.residual_supply[k];
            if self.arrivals_supply[k] != rhs {
                return Err(Error::Structure(format!(
                    "supply node {k}: {} arrivals vs {rhs} accounted",
                    self.arrivals_supply[k]
                )));
            }
        }
        Ok(())
    }

    /// Fraction of demand arrivals at node `j` lost to impatience.
    pub fn demand_renege_fraction(&self, j: usize) -> f64 {
        if self.arrivals_demand[j] == 0 {
            0.0
        } else {
            self.reneged_demand[j] as f64 / self.arrivals_demand[j] as f64
        }
    }

    /// Fraction of supply arrivals at node `k` lost to impatience.
    pub fn supply_renege_fraction(&self, k: usize) -> f64 {
        if self.arrivals_supply[k] == 0 {
            0.0
        } else {
            self.reneged_supply[k] as f64 / self.arrivals_supply[k] as f64
        }
    }

    /// Time-averaged demand queue lengths over `[0, horizon]`.
    pub fn time_average_demand(&self, horizon: f64) -> Vec<f64> {
        self.queue_integral_demand.iter().map(|q| q / horizon).collect()
    }

    /// Time-averaged supply queue lengths over `[0, horizon]`.
    pub fn time_average_supply(&self, horizon: f64) -> Vec<f64> {
        self.queue_integral_supply.iter().map(|q| q / horizon).collect()
    }
}

/// Rate-based review rule: each edge receives
/// `floor(m_jk * min(n * l_n, Q_j / lambda_j, I_k / mu_k))` matches.
/// Row sums stay within `Q_j` because the rate rows sum to at most
/// `lambda_j`, and symmetrically for columns.
pub fn policy_matching_rate_based(
    q: &[u64],
    i: &[u64],
    m: &MatchingRates,
    lambda: &[f64],
    mu: &[f64],
    n: u64,
    review_len: f64,
) -> Vec<Vec<u64>> {
    let window = n as f64 * review_len;
    (0..q.len())
        .map(|j| {
            (0..i.len())
                .map(|k| {
                    let scale = window.min(q[j] as f64 / lambda[j]).min(i[k] as f64 / mu[k]);
                    (m.get(j, k) * scale).floor() as u64
                })
                .collect()
        })
        .collect()
}

/// Priority review rule: in set order, each edge greedily takes the
/// smaller residual of its endpoints; the zero set participates last.
pub fn policy_priority_ordering(q: &[u64], i: &[u64], sets: &PrioritySets) -> Vec<Vec<u64>> {
    let mut rq = q.to_vec();
    let mut ri = i.to_vec();
    let mut counts = vec![vec![0u64; i.len()]; q.len()];
    for level in &sets.sets {
        for &(j, k) in level {
            let x = rq[j].min(ri[k]);
            counts[j][k] += x;
            rq[j] -= x;
            ri[k] -= x;
        }
    }
    counts
}

/// LP review rule: maximize total match value over the integral snapshot;
/// the transportation structure makes the optimum integral.
pub fn policy_lp_based(q: &[u64], i: &[u64], values: &[Vec<f64>]) -> Result<Vec<Vec<u64>>> {
    let row_caps: Vec<f64> = q.iter().map(|&x| x as f64).collect();
    let col_caps: Vec<f64> = i.iter().map(|&x| x as f64).collect();
    let sol = solve_transport(&row_caps, &col_caps, values)?;
    Ok(sol
        .plan
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| {
                    debug_assert!((x - x.round()).abs() < 1e-6, "non-integral LP entry {x}");
                    x.round() as u64
                })
                .collect()
        })
        .collect())
}

/// Event classes in tie-break order at equal timestamps.
const CLASS_DEADLINE: u8 = 0;
const CLASS_ARRIVAL: u8 = 1;
const CLASS_REVIEW: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
enum EventKind {
    Deadline { demand: bool, node: usize, id: u64 },
    Arrival { demand: bool, node: usize },
    Review,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    class: u8,
    node: usize,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.class.cmp(&other.class))
            .then(self.node.cmp(&other.node))
            .then(self.seq.cmp(&other.seq))
    }
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    rng: ChaCha8Rng,
    heap: BinaryHeap<Reverse<Event>>,
    seq: u64,
    next_id: u64,
    queues_d: Vec<NodeQueue>,
    queues_s: Vec<NodeQueue>,
    last_time: f64,
    qint_d: Vec<f64>,
    qint_s: Vec<f64>,
    arrivals_d: Vec<u64>,
    arrivals_s: Vec<u64>,
    reneged_d: Vec<u64>,
    reneged_s: Vec<u64>,
    matches: Vec<Vec<u64>>,
    trajectory: Option<Vec<TrajectoryPoint>>,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SimConfig) -> Self {
        let j = cfg.net.j();
        let k = cfg.net.k();
        Self {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            heap: BinaryHeap::new(),
            seq: 0,
            next_id: 0,
            queues_d: vec![NodeQueue::default(); j],
            queues_s: vec![NodeQueue::default(); k],
            last_time: 0.0,
            qint_d: vec![0.0; j],
            qint_s: vec![0.0; k],
            arrivals_d: vec![0; j],
            arrivals_s: vec![0; k],
            reneged_d: vec![0; j],
            reneged_s: vec![0; k],
            matches: vec![vec![0; k]; j],
            trajectory: cfg.record_trajectory.then(Vec::new),
        }
    }

    fn push(&mut self, time: f64, class: u8, node: usize, kind: EventKind) {
        let seq = self.seq;
        self.seq += 1;
        self.heap.push(Reverse(Event { time, class, node, seq, kind }));
    }

    /// Accumulate the exact piecewise-constant queue integrals up to `t`.
    fn advance_time(&mut self, t: f64) {
        let dt = t - self.last_time;
        if dt > 0.0 {
            for (j, q) in self.queues_d.iter().enumerate() {
                self.qint_d[j] += q.len() as f64 * dt;
            }
            for (k, q) in self.queues_s.iter().enumerate() {
                self.qint_s[k] += q.len() as f64 * dt;
            }
            self.last_time = t;
        }
    }

    fn interarrival(&mut self, rate: f64) -> f64 {
        match self.cfg.arrival_kind {
            ArrivalKind::Poisson => exp_draw(&mut self.rng, rate),
            ArrivalKind::Erlang { k } => {
                (0..k).map(|_| exp_draw(&mut self.rng, k as f64 * rate)).sum()
            }
            ArrivalKind::Deterministic => 1.0 / rate,
        }
    }

    fn scaled_rate(&self, demand: bool, node: usize) -> f64 {
        let base = if demand { self.cfg.net.lambda()[node] } else { self.cfg.net.mu()[node] };
        self.cfg.n as f64 * base
    }

    fn schedule_arrival(&mut self, demand: bool, node: usize, after: f64) {
        let rate = self.scaled_rate(demand, node);
        let t = after + self.interarrival(rate);
        if t <= self.cfg.horizon {
            let tie_node = if demand { node } else { self.cfg.net.j() + node };
            self.push(t, CLASS_ARRIVAL, tie_node, EventKind::Arrival { demand, node });
        }
    }

    fn handle_arrival(&mut self, t: f64, demand: bool, node: usize) {
        self.advance_time(t);
        let dist = if demand {
            &self.cfg.net.demand_patience()[node]
        } else {
            &self.cfg.net.supply_patience()[node]
        };
        let patience = dist.sample(&mut self.rng);
        let id = self.next_id;
        self.next_id += 1;
        let entry = Entry { arrival_time: t, deadline: t + patience };
        if demand {
            self.arrivals_d[node] += 1;
            self.queues_d[node].push(id, entry);
        } else {
            self.arrivals_s[node] += 1;
            self.queues_s[node].push(id, entry);
        }
        if entry.deadline <= self.cfg.horizon {
            let tie_node = if demand { node } else { self.cfg.net.j() + node };
            self.push(entry.deadline, CLASS_DEADLINE, tie_node, EventKind::Deadline {
                demand,
                node,
                id,
            });
        }
        self.schedule_arrival(demand, node, t);
    }

    fn handle_deadline(&mut self, t: f64, demand: bool, node: usize, id: u64) {
        let removed =
            if demand { self.queues_d[node].remove(id) } else { self.queues_s[node].remove(id) };
        if removed.is_some() {
            self.advance_time(t);
            if demand {
                self.reneged_d[node] += 1;
            } else {
                self.reneged_s[node] += 1;
            }
        }
    }

    fn handle_review(&mut self, t: f64) -> Result<()> {
        self.advance_time(t);
        let q: Vec<u64> = self.queues_d.iter().map(|x| x.len() as u64).collect();
        let i: Vec<u64> = self.queues_s.iter().map(|x| x.len() as u64).collect();
        let counts = match &self.cfg.policy {
            Policy::MatchingRateBased(m) => policy_matching_rate_based(
                &q,
                &i,
                m,
                self.cfg.net.lambda(),
                self.cfg.net.mu(),
                self.cfg.n,
                self.cfg.review_length(),
            ),
            Policy::PriorityOrdering(sets) => policy_priority_ordering(&q, &i, sets),
            Policy::LpBased => policy_lp_based(&q, &i, self.cfg.net.values())?,
        };
        for (j, row) in counts.iter().enumerate() {
            let total: u64 = row.iter().sum();
            for _ in 0..total {
                self.queues_d[j]
                    .pop_oldest()
                    .expect("policy must not match more demand than present");
            }
        }
        for k in 0..i.len() {
            let total: u64 = counts.iter().map(|row| row[k]).sum();
            for _ in 0..total {
                self.queues_s[k]
                    .pop_oldest()
                    .expect("policy must not match more supply than present");
            }
        }
        for (j, row) in counts.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                self.matches[j][k] += c;
            }
        }
        if let Some(tr) = &mut self.trajectory {
            tr.push(TrajectoryPoint {
                time: t,
                demand: self.queues_d.iter().map(|x| x.len() as u64).collect(),
                supply: self.queues_s.iter().map(|x| x.len() as u64).collect(),
                matches: self.matches.clone(),
            });
        }
        Ok(())
    }

    fn finish(mut self) -> SimResult {
        self.advance_time(self.cfg.horizon);
        let net = &self.cfg.net;
        let mut objective = 0.0;
        for j in 0..net.j() {
            for k in 0..net.k() {
                objective += net.values()[j][k] * self.matches[j][k] as f64;
            }
        }
        for j in 0..net.j() {
            objective -= net.cost_demand()[j] * self.qint_d[j];
        }
        for k in 0..net.k() {
            objective -= net.cost_supply()[k] * self.qint_s[k];
        }
        SimResult {
            matches: self.matches,
            reneged_demand: self.reneged_d,
            reneged_supply: self.reneged_s,
            arrivals_demand: self.arrivals_d,
            arrivals_supply: self.arrivals_s,
            residual_demand: self.queues_d.iter().map(|q| q.len() as u64).collect(),
            residual_supply: self.queues_s.iter().map(|q| q.len() as u64).collect(),
            queue_integral_demand: self.qint_d,
            queue_integral_supply: self.qint_s,
            objective,
            trajectory: self.trajectory,
        }
    }
}

/// Unit-mean-1/rate exponential draw via inverse transform.
fn exp_draw(rng: &mut impl Rng, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -(-u).ln_1p() / rate
}

/// Run one simulation to the horizon.
pub fn run(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let mut eng = Engine::new(cfg);
    if let Some(tr) = &mut eng.trajectory {
        tr.push(TrajectoryPoint {
            time: 0.0,
            demand: vec![0; cfg.net.j()],
            supply: vec![0; cfg.net.k()],
            matches: vec![vec![0; cfg.net.k()]; cfg.net.j()],
        });
    }
    for j in 0..cfg.net.j() {
        eng.schedule_arrival(true, j, 0.0);
    }
    for k in 0..cfg.net.k() {
        eng.schedule_arrival(false, k, 0.0);
    }
    let review_len = cfg.review_length();
    let slack = 1e-9 * cfg.horizon.max(1.0);
    let mut i = 1u64;
    loop {
        let t = i as f64 * review_len;
        if t > cfg.horizon + slack {
            break;
        }
        eng.push(t.min(cfg.horizon), CLASS_REVIEW, 0, EventKind::Review);
        i += 1;
    }
    while let Some(Reverse(ev)) = eng.heap.pop() {
        match ev.kind {
            EventKind::Deadline { demand, node, id } => {
                eng.handle_deadline(ev.time, demand, node, id)
            }
            EventKind::Arrival { demand, node } => eng.handle_arrival(ev.time, demand, node),
            EventKind::Review => eng.handle_review(ev.time)?,
        }
    }
    Ok(eng.finish())
}

/// Independent replications with derived seeds `seed + r`, in parallel;
/// the result order is by replication index, so output is deterministic.
pub fn replicate(cfg: &SimConfig, reps: u32) -> Result<Vec<SimResult>> {
    if reps == 0 {
        return Err(Error::InvalidParameter("need at least one replication".into()));
    }
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut c = cfg.clone();
            c.seed = cfg.seed.wrapping_add(r as u64);
            run(&c)
        })
        .collect()
}

/// Mean and standard-error summaries across replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SimAggregate {
    pub reps: usize,
    pub mean_matches: Vec<Vec<f64>>,
    pub mean_objective: f64,
    pub stderr_objective: f64,
    pub mean_demand_renege_fraction: Vec<f64>,
    pub stderr_demand_renege_fraction: Vec<f64>,
    pub mean_supply_renege_fraction: Vec<f64>,
    pub stderr_supply_renege_fraction: Vec<f64>,
    pub mean_queue_integral_demand: Vec<f64>,
    pub mean_queue_integral_supply: Vec<f64>,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Summarize a batch of replications.
pub fn aggregate(results: &[SimResult]) -> SimAggregate {
    assert!(!results.is_empty(), "aggregate needs at least one result");
    let j = results[0].arrivals_demand.len();
    let k = results[0].arrivals_supply.len();
    let reps = results.len();
    let mut mean_matches = vec![vec![0.0; k]; j];
    for r in results {
        for jj in 0..j {
            for kk in 0..k {
                mean_matches[jj][kk] += r.matches[jj][kk] as f64 / reps as f64;
            }
        }
    }
    let (mean_objective, stderr_objective) =
        mean_stderr(&results.iter().map(|r| r.objective).collect::<Vec<_>>());
    let mut mdf = Vec::with_capacity(j);
    let mut sdf = Vec::with_capacity(j);
    for jj in 0..j {
        let xs: Vec<f64> = results.iter().map(|r| r.demand_renege_fraction(jj)).collect();
        let (m, s) = mean_stderr(&xs);
        mdf.push(m);
        sdf.push(s);
    }
    let mut msf = Vec::with_capacity(k);
    let mut ssf = Vec::with_capacity(k);
    for kk in 0..k {
        let xs: Vec<f64> = results.iter().map(|r| r.supply_renege_fraction(kk)).collect();
        let (m, s) = mean_stderr(&xs);
        msf.push(m);
        ssf.push(s);
    }
    let mean_qd = (0..j)
        .map(|jj| results.iter().map(|r| r.queue_integral_demand[jj]).sum::<f64>() / reps as f64)
        .collect();
    let mean_qs = (0..k)
        .map(|kk| results.iter().map(|r| r.queue_integral_supply[kk]).sum::<f64>() / reps as f64)
        .collect();
    SimAggregate {
        reps,
        mean_matches,
        mean_objective,
        stderr_objective,
        mean_demand_renege_fraction: mdf,
        stderr_demand_renege_fraction: sdf,
        mean_supply_renege_fraction: msf,
        stderr_supply_renege_fraction: ssf,
        mean_queue_integral_demand: mean_qd,
        mean_queue_integral_supply: mean_qs,
    }
}
