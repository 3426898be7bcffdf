//! Fluid-model quantities induced by a matching-rate matrix: invariant
//! queue lengths, the platform objective and its gradient, and the
//! transient fluid trajectory from an empty start.
//!
//! For a node with arrival rate `r`, patience distribution `G` (mean
//! `1/theta`) and total matching rate `s` drawn from it, the invariant
//! queue length is
//!
//! ```text
//! q*(s) = (r / theta) * Ge(Ginv(1 - s/r)),        0 < s < r,
//! q*(0) = r / theta,    q*(r) = 0,
//! ```
//!
//! where `Ge` is the stationary-excess cdf of `G`. The objective sums
//! match values minus holding costs of the invariant queues; its partial
//! derivative in `m_jk` is `v_jk + cD_j / hD_j(x_j) + cS_k / hS_k(x_k)`
//! with `x_j = Ginv_j(1 - s_j/lambda_j)` and `h` the hazard rate.

use crate::dist::PatienceDistribution;
use crate::network::{InvariantState, MatchingRates, Network};
use crate::{Error, Result, FEAS_TOL};

/// Invariant queue length of a single node given its arrival rate,
/// patience distribution and total matching rate consumed from it.
///
/// The map is continuous on `[0, rate]`; inputs within `1e-9` of the
/// endpoints are clamped onto them before inversion.
pub fn node_q_star(rate: f64, dist: &PatienceDistribution, consumed: f64) -> Result<f64> {
    let theta = dist.theta();
    let s = consumed.clamp(0.0, rate);
    if s <= FEAS_TOL {
        return Ok(rate / theta);
    }
    if s >= rate - FEAS_TOL {
        return Ok(0.0);
    }
    let x = dist.inverse_cdf(1.0 - s / rate)?;
    Ok(rate / theta * dist.excess_life_cdf(x)?)
}

/// Invariant demand queue lengths `q*_j` under matching rates `m`.
pub fn q_star(net: &Network, m: &MatchingRates) -> Result<Vec<f64>> {
    net.check_rates(m)?;
    (0..net.j())
        .map(|j| node_q_star(net.lambda()[j], &net.demand_patience()[j], m.row_sum(j)))
        .collect()
}

/// Invariant supply queue lengths `i*_k` under matching rates `m`.
pub fn i_star(net: &Network, m: &MatchingRates) -> Result<Vec<f64>> {
    net.check_rates(m)?;
    (0..net.k())
        .map(|k| node_q_star(net.mu()[k], &net.supply_patience()[k], m.col_sum(k)))
        .collect()
}

/// Both sides of the invariant state at once.
pub fn invariant_state(net: &Network, m: &MatchingRates) -> Result<InvariantState> {
    Ok(InvariantState { q_star: q_star(net, m)?, i_star: i_star(net, m)? })
}

/// Platform objective: total match value minus holding costs of the
/// invariant queues, `sum v_jk m_jk - sum cD_j q*_j - sum cS_k i*_k`.
pub fn mp_objective(net: &Network, m: &MatchingRates) -> Result<f64> {
    let state = invariant_state(net, m)?;
    let mut obj = 0.0;
    for j in 0..net.j() {
        for k in 0..net.k() {
            obj += net.values()[j][k] * m.get(j, k);
        }
    }
    for j in 0..net.j() {
        obj -= net.cost_demand()[j] * state.q_star[j];
    }
    for k in 0..net.k() {
        obj -= net.cost_supply()[k] * state.i_star[k];
    }
    Ok(obj)
}

/// Marginal cost saving at a node operating strictly inside its capacity:
/// `cost / hazard(Ginv(1 - s/rate))`. Errors if `s` is within tolerance of
/// `0` or `rate`, where the one-sided derivative may not exist.
fn node_gradient_term(
    side: &str,
    idx: usize,
    rate: f64,
    dist: &PatienceDistribution,
    cost: f64,
    consumed: f64,
) -> Result<f64> {
    if consumed <= FEAS_TOL || consumed >= rate - FEAS_TOL {
        return Err(Error::GradientUndefined(format!(
            "{side} node {idx} has boundary matching rate {consumed} (cap {rate})"
        )));
    }
    let x = dist.inverse_cdf(1.0 - consumed / rate)?;
    Ok(cost / dist.hazard(x)?)
}

/// Gradient of [`mp_objective`] in the matrix entries, defined only when
/// every row and column sum is strictly interior to `(0, cap)`.
pub fn mp_gradient(net: &Network, m: &MatchingRates) -> Result<Vec<Vec<f64>>> {
    net.check_rates(m)?;
    let mut d_terms = Vec::with_capacity(net.j());
    for j in 0..net.j() {
        d_terms.push(node_gradient_term(
            "demand",
            j,
            net.lambda()[j],
            &net.demand_patience()[j],
            net.cost_demand()[j],
            m.row_sum(j),
        )?);
    }
    let mut s_terms = Vec::with_capacity(net.k());
    for k in 0..net.k() {
        s_terms.push(node_gradient_term(
            "supply",
            k,
            net.mu()[k],
            &net.supply_patience()[k],
            net.cost_supply()[k],
            m.col_sum(k),
        )?);
    }
    let grad = (0..net.j())
        .map(|j| (0..net.k()).map(|k| net.values()[j][k] + d_terms[j] + s_terms[k]).collect())
        .collect();
    Ok(grad)
}

/// Transient fluid trajectory sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct FluidTrajectory {
    /// Grid times, starting at `0.0` and ending at the horizon.
    pub times: Vec<f64>,
    /// Demand queue lengths per grid time (one inner vector per time).
    pub demand: Vec<Vec<f64>>,
    /// Supply queue lengths per grid time.
    pub supply: Vec<Vec<f64>>,
}

/// Default integration step: ten steps per shortest mean patience,
/// capped at `0.01`.
pub fn default_dt(net: &Network) -> f64 {
    let max_theta = net
        .demand_patience()
        .iter()
        .chain(net.supply_patience())
        .map(|d| d.theta())
        .fold(f64::MIN, f64::max);
    (1.0 / (10.0 * max_theta)).min(0.01)
}

/// Queue drift of one node: fresh arrivals still patient at the current
/// fluid age, minus the matching rate drawn from the node.
fn node_drift(rate: f64, dist: &PatienceDistribution, q: f64, consumed: f64) -> Result<f64> {
    let theta = dist.theta();
    let z = (theta * q / rate).clamp(0.0, 1.0);
    if z >= 1.0 {
        // Full mass `rate / theta`: the head age sits at the top of the
        // patience range, where survival vanishes, so inflow is zero.
        // Integrator stages can poke at this boundary when the invariant
        // queue is close to full mass.
        return Ok(-consumed);
    }
    let w = dist.inverse_excess_life_cdf(z)?;
    Ok(rate * (1.0 - dist.cdf(w)?) - consumed)
}

/// Integrate the fluid dynamics from an empty system over `[0, horizon]`
/// with classic fourth-order Runge-Kutta. Uses `dt` when given, else
/// [`default_dt`]; the final step is shortened to land on the horizon.
pub fn fluid_trajectory(
    net: &Network,
    m: &MatchingRates,
    horizon: f64,
    dt: Option<f64>,
) -> Result<FluidTrajectory> {
    net.check_rates(m)?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    let dt = dt.unwrap_or_else(|| default_dt(net));
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let j = net.j();
    let k = net.k();
    let consumed_d: Vec<f64> = (0..j).map(|jj| m.row_sum(jj)).collect();
    let consumed_s: Vec<f64> = (0..k).map(|kk| m.col_sum(kk)).collect();

    let drift = |state: &[f64]| -> Result<Vec<f64>> {
        let mut d = Vec::with_capacity(j + k);
        for jj in 0..j {
            d.push(node_drift(
                net.lambda()[jj],
                &net.demand_patience()[jj],
                state[jj],
                consumed_d[jj],
            )?);
        }
        for kk in 0..k {
            d.push(node_drift(
                net.mu()[kk],
                &net.supply_patience()[kk],
                state[j + kk],
                consumed_s[kk],
            )?);
        }
        Ok(d)
    };

    let mut state = vec![0.0; j + k];
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut demand = vec![state[..j].to_vec()];
    let mut supply = vec![state[j..].to_vec()];
    while t < horizon - 1e-12 {
        let h = dt.min(horizon - t);
        let k1 = drift(&state)?;
        let mid1: Vec<f64> =
            state.iter().zip(&k1).map(|(y, d)| (y + 0.5 * h * d).max(0.0)).collect();
        let k2 = drift(&mid1)?;
        let mid2: Vec<f64> =
            state.iter().zip(&k2).map(|(y, d)| (y + 0.5 * h * d).max(0.0)).collect();
        let k3 = drift(&mid2)?;
        let end: Vec<f64> = state.iter().zip(&k3).map(|(y, d)| (y + h * d).max(0.0)).collect();
        let k4 = drift(&end)?;
        for i in 0..state.len() {
            state[i] = (state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).max(0.0);
        }
        t += h;
        times.push(t);
        demand.push(state[..j].to_vec());
        supply.push(state[j..].to_vec());
    }
    Ok(FluidTrajectory { times, demand, supply })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::PatienceDistribution;

    fn one_node_net(
        lambda: f64,
        mu: f64,
        d: PatienceDistribution,
        s: PatienceDistribution,
    ) -> Network {
        Network::new(
            vec![lambda],
            vec![mu],
            vec![vec![1.0]],
            vec![1.0],
            vec![1.0],
            vec![d],
            vec![s],
        )
        .unwrap()
    }

    #[test]
    fn exponential_invariant_queue_is_linear_in_rate() {
        // Memoryless patience: q*(s) = (lambda - s) / theta.
        let d = PatienceDistribution::exponential(2.0).unwrap();
        for s in [0.0, 0.3, 0.9, 1.499, 1.5] {
            let q = node_q_star(1.5, &d, s).unwrap();
            assert!((q - (1.5 - s) / 2.0).abs() < 1e-9, "s={s} q={q}");
        }
    }

    #[test]
    fn uniform_invariant_queue_is_quadratic_in_rate() {
        // Uniform patience: q*(s) = (lambda/theta) (1 - (s/lambda)^2).
        let d = PatienceDistribution::uniform(1.0).unwrap();
        for s in [0.1, 0.5, 1.2, 1.9] {
            let q = node_q_star(2.0, &d, s).unwrap();
            let expect = 2.0 * (1.0 - (s / 2.0_f64).powi(2));
            assert!((q - expect).abs() < 1e-9, "s={s} q={q} expect={expect}");
        }
    }

    #[test]
    fn invariant_queue_endpoints_and_continuity() {
        let d = PatienceDistribution::gamma(3.0, 1.0 / 3.0).unwrap();
        assert!((node_q_star(1.0, &d, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(node_q_star(1.0, &d, 1.0).unwrap(), 0.0);
        // Near-boundary values approach the clamped endpoint values.
        let near0 = node_q_star(1.0, &d, 1e-7).unwrap();
        assert!((near0 - 1.0).abs() < 1e-4, "near0={near0}");
        // Near full consumption the queue vanishes at a cube-root rate:
        // G(x) ~ 4.5 x^3 near zero, so q*(1 - eps) ~ (eps/4.5)^(1/3).
        let eps = 1e-7;
        let near1 = node_q_star(1.0, &d, 1.0 - eps).unwrap();
        let asymptote = (eps / 4.5).powf(1.0 / 3.0);
        assert!((near1 / asymptote - 1.0).abs() < 0.01, "near1={near1} vs {asymptote}");
    }

    #[test]
    fn objective_matches_hand_computation() {
        // Unit-exponential patience both sides, lambda = mu = 1, m = 0.5:
        // q* = i* = 0.5, objective = v*0.5 - 1*0.5 - 1*0.5 = 0.5v - 1.
        let net = one_node_net(
            1.0,
            1.0,
            PatienceDistribution::exponential(1.0).unwrap(),
            PatienceDistribution::exponential(1.0).unwrap(),
        );
        let m = MatchingRates::new(vec![vec![0.5]]).unwrap();
        let obj = mp_objective(&net, &m).unwrap();
        assert!((obj - (0.5 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let net = Network::new(
            vec![1.0, 2.0],
            vec![1.5],
            vec![vec![1.0], vec![2.0]],
            vec![1.0, 0.5],
            vec![2.0],
            vec![
                PatienceDistribution::exponential(1.0).unwrap(),
                PatienceDistribution::gamma(3.0, 0.5).unwrap(),
            ],
            vec![PatienceDistribution::uniform(2.0).unwrap()],
        )
        .unwrap();
        let m = MatchingRates::new(vec![vec![0.4], vec![0.7]]).unwrap();
        let grad = mp_gradient(&net, &m).unwrap();
        let eps = 1e-6;
        for j in 0..2 {
            let mut up = m.rows().to_vec();
            up[j][0] += eps;
            let mut dn = m.rows().to_vec();
            dn[j][0] -= eps;
            let fd = (mp_objective(&net, &MatchingRates::new(up).unwrap()).unwrap()
                - mp_objective(&net, &MatchingRates::new(dn).unwrap()).unwrap())
                / (2.0 * eps);
            assert!((grad[j][0] - fd).abs() < 1e-5, "j={j} grad={} fd={fd}", grad[j][0]);
        }
    }

    #[test]
    fn gradient_undefined_on_boundary() {
        let net = one_node_net(
            1.0,
            1.0,
            PatienceDistribution::exponential(1.0).unwrap(),
            PatienceDistribution::exponential(1.0).unwrap(),
        );
        let zero = MatchingRates::zeros(1, 1);
        assert!(matches!(mp_gradient(&net, &zero), Err(Error::GradientUndefined(_))));
        let full = MatchingRates::new(vec![vec![1.0]]).unwrap();
        assert!(matches!(mp_gradient(&net, &full), Err(Error::GradientUndefined(_))));
    }

    #[test]
    fn exponential_trajectory_matches_closed_form() {
        // With memoryless patience the queue obeys Q' = lambda - theta Q - s,
        // so from empty start Q(t) = q* (1 - exp(-theta t)).
        let net = one_node_net(
            2.0,
            1.0,
            PatienceDistribution::exponential(0.5).unwrap(),
            PatienceDistribution::exponential(1.0).unwrap(),
        );
        let m = MatchingRates::new(vec![vec![0.8]]).unwrap();
        let traj = fluid_trajectory(&net, &m, 5.0, Some(0.005)).unwrap();
        let q_lim = (2.0 - 0.8) / 0.5;
        for (idx, &t) in traj.times.iter().enumerate() {
            let expect = q_lim * (1.0 - (-0.5_f64 * t).exp());
            assert!(
                (traj.demand[idx][0] - expect).abs() < 1e-8,
                "t={t} got={} expect={expect}",
                traj.demand[idx][0]
            );
        }
    }

    #[test]
    fn trajectory_settles_at_invariant_state() {
        let net = Network::new(
            vec![1.0],
            vec![1.5],
            vec![vec![1.0]],
            vec![1.0],
            vec![1.0],
            vec![PatienceDistribution::gamma(0.7, 1.0 / 0.7).unwrap()],
            vec![PatienceDistribution::uniform(2.0).unwrap()],
        )
        .unwrap();
        let m = MatchingRates::new(vec![vec![0.6]]).unwrap();
        let traj = fluid_trajectory(&net, &m, 80.0, None).unwrap();
        let state = invariant_state(&net, &m).unwrap();
        let last = traj.times.len() - 1;
        assert!((traj.demand[last][0] - state.q_star[0]).abs() < 1e-5);
        assert!((traj.supply[last][0] - state.i_star[0]).abs() < 1e-5);
    }

    #[test]
    fn trajectory_grid_covers_horizon() {
        let net = one_node_net(
            1.0,
            1.0,
            PatienceDistribution::exponential(1.0).unwrap(),
            PatienceDistribution::exponential(1.0).unwrap(),
        );
        let m = MatchingRates::zeros(1, 1);
        let traj = fluid_trajectory(&net, &m, 1.0, Some(0.3)).unwrap();
        assert_eq!(traj.times.first().copied(), Some(0.0));
        assert!((traj.times.last().unwrap() - 1.0).abs() < 1e-12);
        // Unmatched memoryless queue: lambda/theta (1 - e^{-theta t}).
        // At this deliberately coarse step the fourth-order global error
        // is around 3e-5, so allow 1e-4.
        let last = traj.times.len() - 1;
        assert!((traj.demand[last][0] - (1.0 - (-1.0_f64).exp())).abs() < 1e-4);
    }
}
