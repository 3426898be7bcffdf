//! Priority-set construction from an optimal extreme point, and the
//! greedy reconstruction that certifies the sets encode the point.
//!
//! The construction repeatedly sweeps the remaining support edges in
//! lexicographic order, collecting into the current set every edge whose
//! rate equals the residual capacity of one of its endpoints; capacities
//! shrink as edges are collected, and edges sharing a node with a
//! collected edge wait for a later set. Zero-rate edges form the final,
//! lowest-priority set. A greedy pass that grants each edge the minimum
//! residual capacity of its endpoints, in set order, then reproduces the
//! extreme point exactly.

use serde::{Deserialize, Serialize};

use crate::network::{MatchingRates, Network};
use crate::polytope::ExtremePoint;
use crate::scalar::Scalar;
use crate::{Error, Result, FEAS_TOL};

/// An ordered partition of all `J x K` edges into priority levels.
///
/// The last set always collects exactly the zero-rate edges; the sets
/// before it are pairwise node-disjoint within themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrioritySets {
    /// Priority levels, highest first; the final entry is the zero set.
    pub sets: Vec<Vec<(usize, usize)>>,
    /// Index of the last level before the zero set; `-1` when every edge
    /// has zero rate.
    pub h_max: i64,
}

impl PrioritySets {
    /// The lowest-priority level: edges carrying no rate.
    pub fn zero_set(&self) -> &[(usize, usize)] {
        self.sets.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Check that the levels partition the full `j_n x k_n` edge grid.
    pub fn validate_partition(&self, j_n: usize, k_n: usize) -> Result<()> {
        let mut seen = vec![false; j_n * k_n];
        for (j, k) in self.sets.iter().flatten() {
            if *j >= j_n || *k >= k_n {
                return Err(Error::Structure(format!(
                    "edge ({j},{k}) outside a {j_n}x{k_n} grid"
                )));
            }
            let idx = j * k_n + k;
            if seen[idx] {
                return Err(Error::Structure(format!("edge ({j},{k}) appears twice")));
            }
            seen[idx] = true;
        }
        if !seen.iter().all(|s| *s) {
            return Err(Error::Structure("priority sets do not cover every edge".into()));
        }
        if self.h_max != self.sets.len() as i64 - 2 {
            return Err(Error::Structure(format!(
                "h_max {} inconsistent with {} sets",
                self.h_max,
                self.sets.len()
            )));
        }
        Ok(())
    }
}

/// Locate a cycle in a bipartite edge set, if any, for error reporting.
fn find_cycle(edges: &[(usize, usize)], j_n: usize, k_n: usize) -> Option<Vec<(usize, usize)>> {
    let n = j_n + k_n;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (pos, &(j, k)) in edges.iter().enumerate() {
        adj[j].push((j_n + k, pos));
        adj[j_n + k].push((j, pos));
    }
    let mut color = vec![0u8; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        while let Some((u, via)) = stack.pop() {
            if color[u] != 0 {
                continue;
            }
            color[u] = 1;
            for &(v, pos) in &adj[u] {
                if pos == via {
                    continue;
                }
                if color[v] == 0 {
                    parent[v] = Some((u, pos));
                    stack.push((v, pos));
                } else {
                    // Back edge: walk both endpoints to the root, take the
                    // symmetric difference of the two ancestor paths.
                    let mut cyc = vec![edges[pos]];
                    let mut a = u;
                    while let Some((p, e)) = parent[a] {
                        cyc.push(edges[e]);
                        if p == v {
                            return Some(cyc);
                        }
                        a = p;
                    }
                    // Shared root deeper than v: fall back to reporting the
                    // closing edge only.
                    return Some(vec![edges[pos]]);
                }
            }
        }
    }
    None
}

/// Scalar-generic construction over explicit caps and a rate matrix.
/// Returns the ordered levels, zero set last.
pub fn build_sets_scalar<S: Scalar>(
    lambda: &[S],
    mu: &[S],
    m: &[Vec<S>],
) -> Result<Vec<Vec<(usize, usize)>>> {
    let j_n = lambda.len();
    let k_n = mu.len();
    if m.len() != j_n || m.iter().any(|r| r.len() != k_n) {
        return Err(Error::Structure("rate matrix shape mismatch".into()));
    }
    let mut d: Vec<S> = lambda.to_vec();
    let mut s: Vec<S> = mu.to_vec();
    // Support edges in lexicographic order; the sweep below preserves it.
    let mut e: Vec<(usize, usize)> = (0..j_n)
        .flat_map(|j| (0..k_n).map(move |k| (j, k)))
        .filter(|&(j, k)| m[j][k] > S::tol())
        .collect();
    let mut sets: Vec<Vec<(usize, usize)>> = Vec::new();
    while !e.is_empty() {
        let mut c = e.clone();
        let mut level: Vec<(usize, usize)> = Vec::new();
        while let Some(&(j, k)) = c.first() {
            let tight = m[j][k].near(&d[j]) || m[j][k].near(&s[k]);
            if tight {
                level.push((j, k));
                d[j] = d[j].clone() - m[j][k].clone();
                s[k] = s[k].clone() - m[j][k].clone();
                c.retain(|&(j2, k2)| j2 != j && k2 != k);
            } else {
                c.remove(0);
            }
        }
        if level.is_empty() {
            return Err(Error::Structure(
                "no edge meets a residual capacity; rates are not an extreme point".into(),
            ));
        }
        e.retain(|edge| !level.contains(edge));
        sets.push(level);
    }
    let zero: Vec<(usize, usize)> = (0..j_n)
        .flat_map(|j| (0..k_n).map(move |k| (j, k)))
        .filter(|&(j, k)| m[j][k] <= S::tol())
        .collect();
    sets.push(zero);
    Ok(sets)
}

/// Build the priority levels for an extreme point of an instance's rate
/// polytope. Errors with the offending cycle if the support is not a
/// forest, or if the sweep stalls because the rates are not a vertex.
pub fn build_priority_sets(net: &Network, m_star: &ExtremePoint) -> Result<PrioritySets> {
    if m_star.m.j() != net.j() || m_star.m.k() != net.k() {
        return Err(Error::Structure("extreme point shape does not match instance".into()));
    }
    let support: Vec<(usize, usize)> = (0..net.j())
        .flat_map(|j| (0..net.k()).map(move |k| (j, k)))
        .filter(|&(j, k)| m_star.m.get(j, k) > FEAS_TOL)
        .collect();
    if let Some(cycle) = find_cycle(&support, net.j(), net.k()) {
        return Err(Error::Structure(format!(
            "support contains a cycle through edges {cycle:?}; not an extreme point"
        )));
    }
    let sets = build_sets_scalar(net.lambda(), net.mu(), m_star.m.rows())?;
    let h_max = sets.len() as i64 - 2;
    Ok(PrioritySets { sets, h_max })
}

/// Scalar-generic greedy reconstruction: in level order, grant each edge
/// the smaller residual capacity of its endpoints, counting only usage
/// from strictly earlier levels.
pub fn greedy_scalar<S: Scalar>(
    lambda: &[S],
    mu: &[S],
    sets: &[Vec<(usize, usize)>],
) -> Vec<Vec<S>> {
    let j_n = lambda.len();
    let k_n = mu.len();
    let mut row_used = vec![S::zero(); j_n];
    let mut col_used = vec![S::zero(); k_n];
    let mut y = vec![vec![S::zero(); k_n]; j_n];
    for level in sets {
        let mut grants: Vec<((usize, usize), S)> = Vec::with_capacity(level.len());
        for &(j, k) in level {
            let row_left = lambda[j].clone() - row_used[j].clone();
            let col_left = mu[k].clone() - col_used[k].clone();
            let mut grant = if row_left < col_left { row_left } else { col_left };
            if grant < S::zero() {
                grant = S::zero();
            }
            grants.push(((j, k), grant));
        }
        for ((j, k), grant) in grants {
            row_used[j] = row_used[j].clone() + grant.clone();
            col_used[k] = col_used[k].clone() + grant.clone();
            y[j][k] = grant;
        }
    }
    y
}

/// Greedy reconstruction of the rate matrix encoded by priority levels.
pub fn greedy_yp(net: &Network, sets: &PrioritySets) -> Result<MatchingRates> {
    sets.validate_partition(net.j(), net.k())?;
    MatchingRates::new(greedy_scalar(net.lambda(), net.mu(), &sets.sets))
}
