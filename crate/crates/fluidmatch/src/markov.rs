//! Exact stationary analysis of the single-edge memoryless system as a
//! birth–death chain on the centered state `x = Q - I` (demand queue
//! minus supply queue; at most one side is nonempty under instantaneous
//! matching at reviews of vanishing length).
//!
//! Transition rates with arrival rates `a` (demand), `b` (supply) and
//! per-item reneging rate `theta`:
//!
//! ```text
//! x -> x+1  at  a + max(-x, 0) * theta
//! x -> x-1  at  b + max(x, 0) * theta
//! ```
//!
//! The chain is reversible; detailed balance gives the product form
//! `pi(x) = pi(0) * a^x / prod_{j=1..x} (b + j*theta)` for `x > 0` and
//! symmetrically below zero. Products are accumulated in log space.

use crate::{Error, Result};

/// Validated single-edge specification (unscaled rates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthDeathSpec {
    lambda: f64,
    mu: f64,
    theta: f64,
}

impl BirthDeathSpec {
    /// Demand rate, supply rate, and per-item reneging rate; all must be
    /// positive and finite.
    pub fn new(lambda: f64, mu: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("mu", mu), ("theta", theta)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { lambda, mu, theta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Stationary distribution over the truncated support `{-n..n}`.
#[derive(Debug, Clone)]
pub struct Stationary {
    /// Half-width of the truncated support.
    pub truncation: usize,
    /// Probabilities for states `-truncation ..= truncation`.
    pub probs: Vec<f64>,
}

impl Stationary {
    /// Probability of state `x`.
    pub fn prob(&self, x: i64) -> f64 {
        let idx = x + self.truncation as i64;
        if idx < 0 || idx as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    /// Mean positive part `E[X^+]` (demand queue length).
    pub fn mean_positive(&self) -> f64 {
        (1..=self.truncation as i64).map(|x| x as f64 * self.prob(x)).sum()
    }

    /// Mean negative part `E[X^-]` (supply queue length).
    pub fn mean_negative(&self) -> f64 {
        (1..=self.truncation as i64).map(|x| x as f64 * self.prob(-x)).sum()
    }
}

/// Geometric bound on the probability mass beyond the truncation edge,
/// relative to the (unnormalized) retained mass.
fn tail_bound(log_weights: &[f64], up_rate: f64, down_at_edge: f64) -> f64 {
    let max_log = log_weights.iter().cloned().fold(f64::MIN, f64::max);
    let total: f64 = log_weights.iter().map(|lw| (lw - max_log).exp()).sum();
    let edge = (log_weights[log_weights.len() - 1] - max_log).exp();
    let r = up_rate / down_at_edge;
    if r >= 1.0 {
        return f64::INFINITY;
    }
    edge * r / (1.0 - r) / total
}

/// Stationary distribution with adaptive truncation: start at
/// `ceil(10 * max(a, b) / theta)` and double until both tails hold less
/// than `1e-12` of the mass.
pub fn stationary_distribution(spec: &BirthDeathSpec) -> Result<Stationary> {
    let (a, b, theta) = (spec.lambda, spec.mu, spec.theta);
    let mut n = ((10.0 * a.max(b) / theta).ceil() as usize).max(8);
    for _ in 0..40 {
        // Unnormalized log-weights by detailed balance, outward from 0.
        let mut log_up = vec![0.0f64; n + 1]; // states 0..=n
        for x in 1..=n {
            log_up[x] = log_up[x - 1] + a.ln() - (b + x as f64 * theta).ln();
        }
        let mut log_down = vec![0.0f64; n + 1]; // states 0..=-n
        for x in 1..=n {
            log_down[x] = log_down[x - 1] + b.ln() - (a + x as f64 * theta).ln();
        }
        let upper_tail = tail_bound(&log_up, a, b + (n + 1) as f64 * theta);
        let lower_tail = tail_bound(&log_down, b, a + (n + 1) as f64 * theta);
        if upper_tail < 1e-12 && lower_tail < 1e-12 {
            let max_log = log_up
                .iter()
                .chain(&log_down)
                .cloned()
                .fold(f64::MIN, f64::max);
            let mut probs = vec![0.0; 2 * n + 1];
            for x in 0..=n {
                probs[n + x] = (log_up[x] - max_log).exp();
                probs[n - x] = (log_down[x] - max_log).exp();
            }
            let total: f64 = probs.iter().sum();
            for p in &mut probs {
                *p /= total;
            }
            return Ok(Stationary { truncation: n, probs });
        }
        n *= 2;
    }
    Err(Error::Truncation(format!(
        "tail mass above 1e-12 even at truncation {n}; rates a={a} b={b} theta={theta}"
    )))
}

/// Scaled mean queue lengths `(E[Q]/n, E[I]/n)` for the system with
/// arrival rates `n*lambda`, `n*mu` and unscaled reneging rate `theta`.
pub fn mean_queues(spec: &BirthDeathSpec, n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("scaling must be at least 1".into()));
    }
    let scaled =
        BirthDeathSpec::new(spec.lambda * n as f64, spec.mu * n as f64, spec.theta)?;
    let pi = stationary_distribution(&scaled)?;
    Ok((pi.mean_positive() / n as f64, pi.mean_negative() / n as f64))
}

/// Independent cross-check route: dense Gaussian elimination on the
/// truncated generator (one balance equation replaced by normalization).
/// Quadratic in the state count; intended for validation at modest sizes.
pub fn stationary_by_linear_solve(spec: &BirthDeathSpec, truncation: usize) -> Result<Stationary> {
    let (a, b, theta) = (spec.lambda, spec.mu, spec.theta);
    let size = 2 * truncation + 1;
    if size > 4001 {
        return Err(Error::TooLarge(format!("linear-solve oracle capped at 4001 states, got {size}")));
    }
    let up = |x: i64| a + (-x).max(0) as f64 * theta;
    let down = |x: i64| b + x.max(0) as f64 * theta;
    // Rows: global balance pi^T G = 0 per state, i.e. for each column state s:
    // sum_x pi(x) G(x, s) = 0; the final row enforces sum pi = 1.
    let mut mat = vec![vec![0.0f64; size + 1]; size];
    let state = |idx: usize| idx as i64 - truncation as i64;
    for (row, eq) in mat.iter_mut().enumerate().take(size - 1) {
        let s = state(row);
        let mut out = 0.0;
        if row + 1 < size {
            out += up(s);
            eq[row + 1] += down(s + 1);
        }
        if row > 0 {
            out += down(s);
            eq[row - 1] += up(s - 1);
        }
        eq[row] -= out;
    }
    for col in 0..size {
        mat[size - 1][col] = 1.0;
    }
    mat[size - 1][size] = 1.0;
    // Gaussian elimination with partial pivoting.
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&r1, &r2| mat[r1][col].abs().total_cmp(&mat[r2][col].abs()))
            .unwrap();
        mat.swap(col, pivot);
        let p = mat[col][col];
        if p.abs() < 1e-300 {
            return Err(Error::Solver("singular truncated generator".into()));
        }
        for r in 0..size {
            if r != col && mat[r][col] != 0.0 {
                let f = mat[r][col] / p;
                for c in col..=size {
                    let delta = f * mat[col][c];
                    mat[r][c] -= delta;
                }
            }
        }
    }
    let probs: Vec<f64> = (0..size).map(|r| mat[r][size] / mat[r][r]).collect();
    Ok(Stationary { truncation, probs })
}
