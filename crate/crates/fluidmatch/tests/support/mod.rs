//! Shared oracles for the integration suite. Everything here is written
//! independently of the library internals so the two routes can disagree:
//! quadrature instead of closed forms, exact rational pivoting instead of
//! floating-point elimination, and exhaustive dynamic programming instead
//! of successive augmentation.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// A rational from an integer pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational from a float (every finite f64 is rational).
pub fn rat_f(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Solve the square rational system `a x = b` by Gaussian elimination.
/// Returns `None` when `a` is singular.
pub fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] = &a[r][c] - sub;
            }
            let sub = &factor * &b[col];
            b[r] = &b[r] - sub;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Enumerate vertices of `{ x >= 0, row sums <= row_caps, col sums <=
/// col_caps }` by brute-force basis pivoting: take every subset of
/// `J*K` constraints from the full list, force them to equality, solve
/// exactly, and keep the feasible, non-duplicate solutions. Exponential
/// in the instance size, so only suitable for tiny instances.
pub fn vertices_by_pivoting(
    row_caps: &[BigRational],
    col_caps: &[BigRational],
) -> Vec<Vec<Vec<BigRational>>> {
    let j_n = row_caps.len();
    let k_n = col_caps.len();
    let dim = j_n * k_n;
    let n_constraints = dim + j_n + k_n;

    // Constraint `c` as (coefficient row, right-hand side).
    let constraint = |c: usize| -> (Vec<BigRational>, BigRational) {
        let mut row = vec![BigRational::zero(); dim];
        if c < dim {
            row[c] = BigRational::one();
            (row, BigRational::zero())
        } else if c < dim + j_n {
            let j = c - dim;
            for k in 0..k_n {
                row[j * k_n + k] = BigRational::one();
            }
            (row, row_caps[j].clone())
        } else {
            let k = c - dim - j_n;
            for j in 0..j_n {
                row[j * k_n + k] = BigRational::one();
            }
            (row, col_caps[k].clone())
        }
    };

    let mut found = std::collections::BTreeSet::new();
    let mut subset = vec![0usize; dim];
    enumerate_subsets(n_constraints, dim, 0, 0, &mut subset, &mut |chosen| {
        let mut a = Vec::with_capacity(dim);
        let mut b = Vec::with_capacity(dim);
        for &c in chosen {
            let (row, rhs) = constraint(c);
            a.push(row);
            b.push(rhs);
        }
        let Some(x) = solve_rational(a, b) else { return };
        if x.iter().any(|v| v.is_negative()) {
            return;
        }
        for j in 0..j_n {
            let s: BigRational = (0..k_n).map(|k| x[j * k_n + k].clone()).sum();
            if s > row_caps[j] {
                return;
            }
        }
        for k in 0..k_n {
            let s: BigRational = (0..j_n).map(|j| x[j * k_n + k].clone()).sum();
            if s > col_caps[k] {
                return;
            }
        }
        let matrix: Vec<Vec<BigRational>> =
            (0..j_n).map(|j| (0..k_n).map(|k| x[j * k_n + k].clone()).collect()).collect();
        found.insert(matrix);
    });
    found.into_iter().collect()
}

fn enumerate_subsets(
    n: usize,
    size: usize,
    next: usize,
    filled: usize,
    buf: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if filled == size {
        visit(buf);
        return;
    }
    // Not enough items left to complete the subset.
    if n - next < size - filled {
        return;
    }
    for c in next..n {
        buf[filled] = c;
        enumerate_subsets(n, size, c + 1, filled + 1, buf, visit);
    }
}

/// Exhaustive optimum of the integer-capacity transportation problem by
/// dynamic programming over rows, with the residual column capacities as
/// the state (mixed-radix encoded). Exact for small caps; the continuous
/// solver must match it on integral data.
pub fn brute_force_transport(row_caps: &[u64], col_caps: &[u64], weights: &[Vec<f64>]) -> f64 {
    let k_n = col_caps.len();
    let mut stride = vec![1usize; k_n];
    for k in 1..k_n {
        stride[k] = stride[k - 1] * (col_caps[k - 1] as usize + 1);
    }
    let n_states = stride[k_n - 1] * (col_caps[k_n - 1] as usize + 1);
    let full = (0..k_n).map(|k| stride[k] * col_caps[k] as usize).sum::<usize>();

    let mut best = vec![f64::NEG_INFINITY; n_states];
    best[full] = 0.0;
    for (j, &row_cap) in row_caps.iter().enumerate() {
        let mut next = vec![f64::NEG_INFINITY; n_states];
        for (state, &value) in best.iter().enumerate() {
            if value == f64::NEG_INFINITY {
                continue;
            }
            let residual: Vec<u64> =
                (0..k_n).map(|k| (state / stride[k]) as u64 % (col_caps[k] + 1)).collect();
            // Walk every allocation of at most `row_cap` units across the
            // columns, bounded by the residual capacities.
            allocate_row(&residual, &weights[j], &stride, row_cap, 0, state, value, &mut next);
        }
        best = next;
    }
    best.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

#[allow(clippy::too_many_arguments)]
fn allocate_row(
    residual: &[u64],
    w: &[f64],
    stride: &[usize],
    budget: u64,
    k: usize,
    state: usize,
    value: f64,
    next: &mut [f64],
) {
    if k == residual.len() {
        if value > next[state] {
            next[state] = value;
        }
        return;
    }
    let cap = budget.min(residual[k]);
    for a in 0..=cap {
        allocate_row(
            residual,
            w,
            stride,
            budget - a,
            k + 1,
            state - a as usize * stride[k],
            value + a as f64 * w[k],
            next,
        );
    }
}

/// Independent structural check of a claimed polytope vertex: the
/// positive-rate edges must form a forest on the bipartite node set, and
/// each tree may contain at most one node whose capacity is not met
/// exactly. Support and tightness are recomputed here from scratch.
pub fn forest_with_slack(
    rows: &[Vec<f64>],
    row_caps: &[f64],
    col_caps: &[f64],
    tol: f64,
) -> bool {
    let j_n = row_caps.len();
    let k_n = col_caps.len();
    let n = j_n + k_n;
    let mut adj = vec![Vec::new(); n];
    let mut edge_count = 0usize;
    for (j, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if v > tol {
                adj[j].push(j_n + k);
                adj[j_n + k].push(j);
                edge_count += 1;
            }
        }
    }
    let slack: Vec<bool> = (0..n)
        .map(|node| {
            if node < j_n {
                let sum: f64 = rows[node].iter().sum();
                row_caps[node] - sum > tol
            } else {
                let k = node - j_n;
                let sum: f64 = rows.iter().map(|r| r[k]).sum();
                col_caps[k] - sum > tol
            }
        })
        .collect();

    let mut seen = vec![false; n];
    let mut total_edges_seen = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        seen[start] = true;
        let mut nodes = 0usize;
        let mut degree_sum = 0usize;
        let mut slack_nodes = 0usize;
        while let Some(v) = queue.pop_front() {
            nodes += 1;
            degree_sum += adj[v].len();
            if slack[v] {
                slack_nodes += 1;
            }
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let edges = degree_sum / 2;
        total_edges_seen += edges;
        // A connected component is a tree exactly when edges = nodes - 1.
        if edges + 1 != nodes {
            return false;
        }
        if slack_nodes > 1 {
            return false;
        }
    }
    total_edges_seen == edge_count
}

/// The asymmetric 4x4 benchmark instance used across the simulation
/// suite; patience distributions are supplied by the caller so the same
/// rates can be paired with different families.
pub fn four_by_four_network(
    demand_patience: Vec<fluidmatch::dist::PatienceDistribution>,
    supply_patience: Vec<fluidmatch::dist::PatienceDistribution>,
) -> fluidmatch::Network {
    fluidmatch::Network::new(
        vec![3.0, 2.0, 1.0, 3.0],
        vec![2.0, 2.0, 2.0, 2.0],
        vec![
            vec![1.0, 2.0, 3.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0],
            vec![2.0, 1.0, 1.0, 2.0],
            vec![3.0, 3.0, 2.0, 1.0],
        ],
        vec![1.0, 2.0, 1.0, 2.0],
        vec![2.0, 1.0, 2.0, 1.0],
        demand_patience,
        supply_patience,
    )
    .unwrap()
}

/// `n` gamma patience laws with shape 3 and mean 1/3.
pub fn gamma_patience_third(n: usize) -> Vec<fluidmatch::dist::PatienceDistribution> {
    (0..n)
        .map(|_| fluidmatch::dist::PatienceDistribution::gamma_with_mean(3.0, 1.0 / 3.0).unwrap())
        .collect()
}

/// `n` uniform patience laws with mean 1/3.
pub fn uniform_patience_third(n: usize) -> Vec<fluidmatch::dist::PatienceDistribution> {
    (0..n).map(|_| fluidmatch::dist::PatienceDistribution::uniform(3.0).unwrap()).collect()
}

/// Convert a rational matrix to floats.
pub fn to_f64_matrix(m: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let n = v.numer().to_string().parse::<f64>().unwrap();
                    let d = v.denom().to_string().parse::<f64>().unwrap();
                    n / d
                })
                .collect()
        })
        .collect()
}

/// Sup-norm distance between two equally shaped float matrices.
pub fn matrix_gap(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// Match two vertex lists as sets under sup-norm tolerance; returns true
/// when each list is covered by the other.
pub fn same_vertex_set(a: &[Vec<Vec<f64>>], b: &[Vec<Vec<f64>>], tol: f64) -> bool {
    let covered = |xs: &[Vec<Vec<f64>>], ys: &[Vec<Vec<f64>>]| {
        xs.iter().all(|x| ys.iter().any(|y| matrix_gap(x, y) <= tol))
    };
    covered(a, b) && covered(b, a)
}
