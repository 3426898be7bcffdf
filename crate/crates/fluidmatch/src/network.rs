//! Instance types: the bipartite network, matching-rate matrices, and the
//! invariant state they induce.

use crate::dist::PatienceDistribution;
use crate::{Error, Result, FEAS_TOL};

/// A two-sided matching instance: `J` demand nodes, `K` supply nodes,
/// per-edge match values, per-node holding costs and patience distributions.
#[derive(Debug, Clone)]
pub struct Network {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    values: Vec<Vec<f64>>,
    cost_demand: Vec<f64>,
    cost_supply: Vec<f64>,
    demand_patience: Vec<PatienceDistribution>,
    supply_patience: Vec<PatienceDistribution>,
}

impl Network {
    /// Validate and build an instance. Rates must be strictly positive,
    /// values and costs nonnegative, and every dimension consistent.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: Vec<f64>,
        mu: Vec<f64>,
        values: Vec<Vec<f64>>,
        cost_demand: Vec<f64>,
        cost_supply: Vec<f64>,
        demand_patience: Vec<PatienceDistribution>,
        supply_patience: Vec<PatienceDistribution>,
    ) -> Result<Self> {
        let j = lambda.len();
        let k = mu.len();
        if j == 0 || k == 0 {
            return Err(Error::InvalidParameter("need at least one node per side".into()));
        }
        if !lambda.iter().chain(&mu).all(|r| *r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter("arrival rates must be positive and finite".into()));
        }
        if values.len() != j || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidParameter(format!(
                "values must be a {j}x{k} matrix, got {} rows",
                values.len()
            )));
        }
        if values.iter().flatten().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter("match values must be nonnegative".into()));
        }
        if cost_demand.len() != j || cost_supply.len() != k {
            return Err(Error::InvalidParameter("cost vector lengths must match node counts".into()));
        }
        if cost_demand.iter().chain(&cost_supply).any(|c| *c < 0.0 || !c.is_finite()) {
            return Err(Error::InvalidParameter("holding costs must be nonnegative".into()));
        }
        if demand_patience.len() != j || supply_patience.len() != k {
            return Err(Error::InvalidParameter(
                "patience vector lengths must match node counts".into(),
            ));
        }
        for d in demand_patience.iter().chain(&supply_patience) {
            d.validate()?;
        }
        Ok(Self { lambda, mu, values, cost_demand, cost_supply, demand_patience, supply_patience })
    }

    /// Number of demand nodes `J`.
    pub fn j(&self) -> usize {
        self.lambda.len()
    }

    /// Number of supply nodes `K`.
    pub fn k(&self) -> usize {
        self.mu.len()
    }

    /// Demand arrival rates.
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Supply arrival rates.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Match value matrix (J rows, K columns).
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Demand holding costs per job per unit time.
    pub fn cost_demand(&self) -> &[f64] {
        &self.cost_demand
    }

    /// Supply holding costs per job per unit time.
    pub fn cost_supply(&self) -> &[f64] {
        &self.cost_supply
    }

    /// Demand patience distributions.
    pub fn demand_patience(&self) -> &[PatienceDistribution] {
        &self.demand_patience
    }

    /// Supply patience distributions.
    pub fn supply_patience(&self) -> &[PatienceDistribution] {
        &self.supply_patience
    }

    /// Check membership of `m` in the rate polytope (row sums within
    /// tolerance of the arrival-rate caps).
    pub fn check_rates(&self, m: &MatchingRates) -> Result<()> {
        if m.j() != self.j() || m.k() != self.k() {
            return Err(Error::Infeasible(format!(
                "rate matrix is {}x{}, instance is {}x{}",
                m.j(),
                m.k(),
                self.j(),
                self.k()
            )));
        }
        for j in 0..self.j() {
            let s = m.row_sum(j);
            if s > self.lambda[j] + FEAS_TOL {
                return Err(Error::Infeasible(format!(
                    "demand row {j} sums to {s} > lambda {}",
                    self.lambda[j]
                )));
            }
        }
        for k in 0..self.k() {
            let s = m.col_sum(k);
            if s > self.mu[k] + FEAS_TOL {
                return Err(Error::Infeasible(format!(
                    "supply column {k} sums to {s} > mu {}",
                    self.mu[k]
                )));
            }
        }
        Ok(())
    }
}

/// A nonnegative `J x K` matching-rate matrix; membership in the rate
/// polytope is instance-dependent and checked by [`Network::check_rates`].
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingRates {
    rows: Vec<Vec<f64>>,
}

impl MatchingRates {
    /// Build from row-major entries; entries below `-1e-9` are rejected,
    /// small negative rounding noise is clamped to zero.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter("rate matrix must be nonempty".into()));
        }
        let k = rows[0].len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidParameter("rate matrix rows must have equal length".into()));
        }
        let mut rows = rows;
        for row in &mut rows {
            for v in row.iter_mut() {
                if *v < -FEAS_TOL || !v.is_finite() {
                    return Err(Error::InvalidParameter(format!("negative rate entry {v}")));
                }
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        Ok(Self { rows })
    }

    /// All-zero rates.
    pub fn zeros(j: usize, k: usize) -> Self {
        Self { rows: vec![vec![0.0; k]; j] }
    }

    /// Number of demand rows.
    pub fn j(&self) -> usize {
        self.rows.len()
    }

    /// Number of supply columns.
    pub fn k(&self) -> usize {
        self.rows[0].len()
    }

    /// Entry `m_jk`.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.rows[j][k]
    }

    /// Row-major view of the entries.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Total rate consumed by demand node `j`.
    pub fn row_sum(&self, j: usize) -> f64 {
        self.rows[j].iter().sum()
    }

    /// Total rate consumed by supply node `k`.
    pub fn col_sum(&self, k: usize) -> f64 {
        self.rows.iter().map(|r| r[k]).sum()
    }

    /// Sum of all entries.
    pub fn total(&self) -> f64 {
        self.rows.iter().flatten().sum()
    }
}

/// Fluid-model steady state induced by a matching-rate matrix: mean queue
/// lengths per demand node (`q_star`) and supply node (`i_star`).
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantState {
    /// Invariant demand queue lengths, one per demand node.
    pub q_star: Vec<f64>,
    /// Invariant supply queue lengths, one per supply node.
    pub i_star: Vec<f64>,
}
