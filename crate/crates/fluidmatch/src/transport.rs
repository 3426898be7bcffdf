//! Transportation linear program with inequality caps, solved by
//! successive maximum-profit augmenting paths.
//!
//! Maximizes `sum w_jk x_jk` over `x >= 0` with `sum_k x_jk <= a_j` and
//! `sum_j x_jk <= b_k`. Flow is pushed along a most-profitable residual
//! path while one exists; choosing the most profitable path first keeps
//! the residual graph free of positive-profit cycles, so a longest-path
//! computation by label correction is well defined. Augmentation amounts
//! are minima of residual caps, so integral caps yield an integral
//! optimal plan with no rounding step.
//!
//! Generic over [`Scalar`]: `f64` for production use, `BigRational` for
//! exact cross-checks.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Optimal transportation plan and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution<S> {
    /// Plan entries, `J` rows by `K` columns.
    pub plan: Vec<Vec<S>>,
    /// Achieved objective `sum w_jk x_jk`.
    pub value: S,
}

/// Residual arc kinds, scanned in a fixed order for determinism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arc {
    FromSource(usize),
    Forward(usize, usize),
    Backward(usize, usize),
    ToSink(usize),
}

/// Solve the capacitated transportation problem. Caps must be
/// nonnegative (values within tolerance below zero are clamped);
/// weights may have any sign, and edges that cannot be used profitably
/// simply carry no flow.
pub fn solve_transport<S: Scalar>(
    row_caps: &[S],
    col_caps: &[S],
    weights: &[Vec<S>],
) -> Result<TransportSolution<S>> {
    let j_n = row_caps.len();
    let k_n = col_caps.len();
    if j_n == 0 || k_n == 0 {
        return Err(Error::InvalidParameter("transport problem needs nonempty caps".into()));
    }
    if weights.len() != j_n || weights.iter().any(|row| row.len() != k_n) {
        return Err(Error::InvalidParameter(format!(
            "weights must be {j_n}x{k_n}, got {} rows",
            weights.len()
        )));
    }
    let clamp_cap = |c: &S, what: &str| -> Result<S> {
        if *c < -S::tol() {
            Err(Error::InvalidParameter(format!("negative {what} cap {c:?}")))
        } else if *c < S::zero() {
            Ok(S::zero())
        } else {
            Ok(c.clone())
        }
    };
    let row_caps: Vec<S> = row_caps.iter().map(|c| clamp_cap(c, "row")).collect::<Result<_>>()?;
    let col_caps: Vec<S> = col_caps.iter().map(|c| clamp_cap(c, "column")).collect::<Result<_>>()?;

    let mut x = vec![vec![S::zero(); k_n]; j_n];
    let mut used_row = vec![S::zero(); j_n];
    let mut used_col = vec![S::zero(); k_n];

    // Node numbering: 0 = source, 1..=J demand, J+1..=J+K supply, last = sink.
    let source = 0usize;
    let sink = j_n + k_n + 1;
    let n_nodes = j_n + k_n + 2;
    let demand = |j: usize| 1 + j;
    let supply = |k: usize| 1 + j_n + k;

    let max_augmentations = 10_000 * (j_n * k_n + j_n + k_n);
    for _round in 0..max_augmentations {
        // Enumerate currently usable residual arcs in a fixed order.
        let mut arcs: Vec<(usize, usize, S, Arc)> = Vec::new();
        for j in 0..j_n {
            if row_caps[j].clone() - used_row[j].clone() > S::tol() {
                arcs.push((source, demand(j), S::zero(), Arc::FromSource(j)));
            }
        }
        for j in 0..j_n {
            for k in 0..k_n {
                arcs.push((demand(j), supply(k), weights[j][k].clone(), Arc::Forward(j, k)));
            }
        }
        for j in 0..j_n {
            for k in 0..k_n {
                if x[j][k] > S::tol() {
                    arcs.push((supply(k), demand(j), -weights[j][k].clone(), Arc::Backward(j, k)));
                }
            }
        }
        for k in 0..k_n {
            if col_caps[k].clone() - used_col[k].clone() > S::tol() {
                arcs.push((supply(k), sink, S::zero(), Arc::ToSink(k)));
            }
        }

        // Longest (max-profit) path by label correction; improvements
        // below tolerance are ignored, which also keeps float rounding
        // from masquerading as a positive cycle. The tolerance scales
        // with the label magnitude: for large weights the rounding noise
        // of `(d + w) - w` style cancellations grows with the weights,
        // and treating that noise as an improvement can record cyclic
        // parent pointers.
        let mut dist: Vec<Option<S>> = vec![None; n_nodes];
        let mut parent: Vec<Option<(usize, Arc)>> = vec![None; n_nodes];
        dist[source] = Some(S::zero());
        for pass in 0..n_nodes {
            let mut improved = false;
            for (u, v, p, kind) in &arcs {
                let Some(du) = dist[*u].clone() else { continue };
                let cand = du + p.clone();
                let better = match &dist[*v] {
                    None => true,
                    Some(dv) => {
                        let scale = S::one() + dv.abs();
                        cand.clone() - dv.clone() > S::tol() * scale
                    }
                };
                if better {
                    dist[*v] = Some(cand.clone());
                    parent[*v] = Some((*u, *kind));
                    improved = true;
                }
            }
            if !improved {
                break;
            }
            if pass == n_nodes - 1 {
                return Err(Error::Solver(
                    "positive-profit cycle in transport residual graph".into(),
                ));
            }
        }

        let Some(profit) = dist[sink].clone() else { break };
        if profit <= S::tol() {
            break;
        }

        // Recover the path and its bottleneck capacity. A well-formed
        // parent chain visits each node at most once; anything longer
        // means the labels produced a parent cycle.
        let mut path = Vec::new();
        let mut node = sink;
        while node != source {
            if path.len() > n_nodes {
                return Err(Error::Solver("cyclic parent chain in transport path".into()));
            }
            let (prev, kind) = parent[node].clone().expect("reachable sink has a parent chain");
            path.push(kind);
            node = prev;
        }
        path.reverse();
        let mut delta: Option<S> = None;
        for kind in &path {
            let cap = match kind {
                Arc::FromSource(j) => Some(row_caps[*j].clone() - used_row[*j].clone()),
                Arc::ToSink(k) => Some(col_caps[*k].clone() - used_col[*k].clone()),
                Arc::Backward(j, k) => Some(x[*j][*k].clone()),
                Arc::Forward(_, _) => None,
            };
            if let Some(c) = cap {
                delta = Some(match delta {
                    None => c,
                    Some(d) => {
                        if c < d {
                            c
                        } else {
                            d
                        }
                    }
                });
            }
        }
        let delta = delta.expect("path contains a source arc");
        if delta <= S::zero() {
            break;
        }
        for kind in &path {
            match kind {
                Arc::FromSource(j) => used_row[*j] = used_row[*j].clone() + delta.clone(),
                Arc::ToSink(k) => used_col[*k] = used_col[*k].clone() + delta.clone(),
                Arc::Forward(j, k) => x[*j][*k] = x[*j][*k].clone() + delta.clone(),
                Arc::Backward(j, k) => {
                    let next = x[*j][*k].clone() - delta.clone();
                    x[*j][*k] = if next < S::zero() { S::zero() } else { next };
                }
            }
        }
    }

    let mut value = S::zero();
    for j in 0..j_n {
        for k in 0..k_n {
            value = value + weights[j][k].clone() * x[j][k].clone();
        }
    }
    Ok(TransportSolution { plan: x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational_from_f64;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn feasible(plan: &[Vec<f64>], rows: &[f64], cols: &[f64]) {
        for (j, row) in plan.iter().enumerate() {
            assert!(row.iter().all(|v| *v >= 0.0));
            assert!(row.iter().sum::<f64>() <= rows[j] + 1e-9);
        }
        for k in 0..cols.len() {
            let s: f64 = plan.iter().map(|r| r[k]).sum();
            assert!(s <= cols[k] + 1e-9);
        }
    }

    #[test]
    fn single_edge_ships_min_of_caps() {
        let sol = solve_transport(&[3.0], &[2.0], &[vec![5.0]]).unwrap();
        assert_eq!(sol.plan[0][0], 2.0);
        assert_eq!(sol.value, 10.0);
    }

    #[test]
    fn unprofitable_edge_stays_idle() {
        let sol = solve_transport(&[3.0], &[2.0], &[vec![-1.0]]).unwrap();
        assert_eq!(sol.plan[0][0], 0.0);
        assert_eq!(sol.value, 0.0);
        let zero = solve_transport(&[3.0], &[2.0], &[vec![0.0]]).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn assignment_picks_the_diagonal() {
        let rows = [1.0, 1.0];
        let cols = [1.0, 1.0];
        let w = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let sol = solve_transport(&rows, &cols, &w).unwrap();
        assert!((sol.value - 4.0).abs() < 1e-12);
        assert!((sol.plan[0][0] - 1.0).abs() < 1e-12);
        assert!((sol.plan[1][1] - 1.0).abs() < 1e-12);
        feasible(&sol.plan, &rows, &cols);
    }

    #[test]
    fn rerouting_through_backward_arcs() {
        // Greedy on the best edge alone is suboptimal: edge (0,0) pays 3
        // but starves the only column that node 1 can use.
        let rows = [1.0, 1.0];
        let cols = [1.0, 1.0];
        let w = vec![vec![3.0, 2.0], vec![2.9, 0.0]];
        let sol = solve_transport(&rows, &cols, &w).unwrap();
        assert!((sol.value - (2.0 + 2.9)).abs() < 1e-12, "value={}", sol.value);
        feasible(&sol.plan, &rows, &cols);
    }

    #[test]
    fn rectangular_instance_matches_hand_optimum() {
        // Row 0 should take columns 1 and 2; row 1 takes column 0.
        let rows = [2.0, 1.0];
        let cols = [1.0, 1.0, 1.5];
        let w = vec![vec![1.0, 4.0, 3.0], vec![2.0, 1.0, 1.0]];
        let sol = solve_transport(&rows, &cols, &w).unwrap();
        // Optimal: x02 = 1, x01 = 1, x10 = 1 for value 3 + 4 + 2 = 9.
        assert!((sol.value - 9.0).abs() < 1e-12, "value={}", sol.value);
        feasible(&sol.plan, &rows, &cols);
    }

    #[test]
    fn integral_caps_give_integral_plan() {
        let rows = [3.0, 4.0, 2.0];
        let cols = [5.0, 1.0, 3.0];
        let w = vec![
            vec![1.7, 0.3, 2.9],
            vec![2.2, 2.6, 0.1],
            vec![0.5, 1.9, 1.4],
        ];
        let sol = solve_transport(&rows, &cols, &w).unwrap();
        for row in &sol.plan {
            for v in row {
                assert_eq!(v.fract(), 0.0, "non-integral entry {v}");
            }
        }
        feasible(&sol.plan, &rows, &cols);
    }

    #[test]
    fn value_is_monotone_in_caps() {
        let w = vec![vec![1.0, 2.0], vec![3.0, 1.0]];
        let base = solve_transport(&[1.0, 1.0], &[1.0, 1.0], &w).unwrap().value;
        let grown = solve_transport(&[1.5, 1.0], &[1.0, 1.5], &w).unwrap().value;
        assert!(grown >= base - 1e-12);
    }

    #[test]
    fn deterministic_under_ties() {
        let rows = [1.0, 1.0];
        let cols = [1.0, 1.0];
        let w = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let a = solve_transport(&rows, &cols, &w).unwrap();
        let b = solve_transport(&rows, &cols, &w).unwrap();
        assert_eq!(a.plan, b.plan);
        assert!((a.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rational_solve() {
        let third = rational_from_f64(1.0) / rational_from_f64(3.0);
        let rows = [third.clone(), BigRational::one()];
        let cols = [BigRational::one()];
        let w = vec![vec![rational_from_f64(2.0)], vec![BigRational::one()]];
        let sol = solve_transport(&rows, &cols, &w).unwrap();
        // Ship 1/3 on the profitable row, 2/3 on the other: 2/3 + 2/3 = 4/3.
        let expect = rational_from_f64(4.0) / rational_from_f64(3.0);
        assert_eq!(sol.value, expect);
        assert_eq!(sol.plan[0][0], third);
        assert!(sol.plan[1][0] == BigRational::one() - third);
    }

    #[test]
    fn zero_caps_give_zero_plan() {
        let sol = solve_transport(&[0.0, 0.0], &[0.0], &[vec![5.0], vec![5.0]]).unwrap();
        assert!(sol.value.is_zero());
        assert!(sol.plan.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(solve_transport::<f64>(&[], &[1.0], &[]).is_err());
        assert!(solve_transport(&[1.0], &[1.0], &[vec![1.0, 2.0]]).is_err());
        assert!(solve_transport(&[-0.5], &[1.0], &[vec![1.0]]).is_err());
    }
}
