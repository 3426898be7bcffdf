//! Extreme points of the matching-rate polytope
//! `{m >= 0 : row sums <= a, column sums <= b}`.
//!
//! A vertex of this polytope is supported on a forest of the bipartite
//! graph, and within each tree of the support at most one node constraint
//! is slack. The enumeration walks every acyclic edge subset, designates
//! one candidate slack node (the "root") per tree, solves the remaining
//! tight node equations by peeling leaves, and keeps solutions whose
//! support edges are strictly positive and whose roots are not oversubscribed.
//! Duplicates arising from all-tight trees (where any root works) are
//! removed by value.
//!
//! The engine is generic over [`Scalar`] so the same code path can be
//! replayed in exact rational arithmetic.

use crate::network::{MatchingRates, Network};
use crate::scalar::Scalar;
use crate::{Error, Result, FEAS_TOL};

/// Size guard: enumeration is intended for desk-scale instances.
pub const MAX_EDGES: usize = 20;

/// A vertex of the rate polytope together with its support structure.
#[derive(Debug, Clone)]
pub struct ExtremePoint {
    /// The vertex itself.
    pub m: MatchingRates,
    /// Edges carrying positive rate.
    pub support: Vec<(usize, usize)>,
    /// Demand nodes whose cap the vertex meets exactly.
    pub tight_demand: Vec<bool>,
    /// Supply nodes whose cap the vertex meets exactly.
    pub tight_supply: Vec<bool>,
}

/// Minimal union-find used for cycle detection while growing forests.
struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both endpoints were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn is_acyclic(edges: &[(usize, usize)], j_n: usize, k_n: usize) -> bool {
    let mut dsu = Dsu::new(j_n + k_n);
    edges.iter().all(|&(j, k)| dsu.union(j, j_n + k))
}

/// Enumerate all vertices of `{m >= 0 : row sums <= row_caps, col sums <=
/// col_caps}` as dense matrices, deduplicated by entry values.
pub fn enumerate_vertices<S: Scalar>(row_caps: &[S], col_caps: &[S]) -> Result<Vec<Vec<Vec<S>>>> {
    let j_n = row_caps.len();
    let k_n = col_caps.len();
    if j_n == 0 || k_n == 0 {
        return Err(Error::InvalidParameter("need nonempty caps".into()));
    }
    if j_n * k_n > MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "vertex enumeration supports at most {MAX_EDGES} edges, instance has {}",
            j_n * k_n
        )));
    }
    if row_caps.iter().chain(col_caps).any(|c| *c < S::zero()) {
        return Err(Error::InvalidParameter("caps must be nonnegative".into()));
    }
    let all_edges: Vec<(usize, usize)> =
        (0..j_n).flat_map(|j| (0..k_n).map(move |k| (j, k))).collect();
    let max_forest = j_n + k_n - 1;

    let mut found: Vec<Vec<Vec<S>>> = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    enumerate_rec(
        &all_edges,
        0,
        max_forest,
        j_n,
        k_n,
        row_caps,
        col_caps,
        &mut chosen,
        &mut found,
    );

    // Deduplicate by value: sort lexicographically, drop near-equal neighbors.
    found.sort_by(|a, b| {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found.dedup_by(|a, b| {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| x.near(y))
    });
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec<S: Scalar>(
    all_edges: &[(usize, usize)],
    next: usize,
    max_forest: usize,
    j_n: usize,
    k_n: usize,
    row_caps: &[S],
    col_caps: &[S],
    chosen: &mut Vec<(usize, usize)>,
    found: &mut Vec<Vec<Vec<S>>>,
) {
    if next == all_edges.len() {
        solve_forest(chosen, j_n, k_n, row_caps, col_caps, found);
        return;
    }
    enumerate_rec(all_edges, next + 1, max_forest, j_n, k_n, row_caps, col_caps, chosen, found);
    if chosen.len() < max_forest {
        chosen.push(all_edges[next]);
        if is_acyclic(chosen, j_n, k_n) {
            enumerate_rec(
                all_edges,
                next + 1,
                max_forest,
                j_n,
                k_n,
                row_caps,
                col_caps,
                chosen,
                found,
            );
        }
        chosen.pop();
    }
}

/// Solve one forest for every per-tree root (candidate slack node)
/// assignment, appending feasible strictly-supported solutions.
fn solve_forest<S: Scalar>(
    edges: &[(usize, usize)],
    j_n: usize,
    k_n: usize,
    row_caps: &[S],
    col_caps: &[S],
    found: &mut Vec<Vec<Vec<S>>>,
) {
    let n_nodes = j_n + k_n;
    let cap = |node: usize| -> S {
        if node < j_n {
            row_caps[node].clone()
        } else {
            col_caps[node - j_n].clone()
        }
    };
    // Adjacency: node -> (neighbor, edge position).
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_nodes];
    for (pos, &(j, k)) in edges.iter().enumerate() {
        adj[j].push((j_n + k, pos));
        adj[j_n + k].push((j, pos));
    }
    // Connected components over nodes that touch an edge.
    let mut comp_of = vec![usize::MAX; n_nodes];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n_nodes {
        if comp_of[start] != usize::MAX || adj[start].is_empty() {
            continue;
        }
        let id = components.len();
        let mut queue = vec![start];
        comp_of[start] = id;
        let mut nodes = Vec::new();
        while let Some(u) = queue.pop() {
            nodes.push(u);
            for &(v, _) in &adj[u] {
                if comp_of[v] == usize::MAX {
                    comp_of[v] = id;
                    queue.push(v);
                }
            }
        }
        components.push(nodes);
    }

    // Mixed-radix iteration over one root choice per component.
    let radices: Vec<usize> = components.iter().map(|c| c.len()).collect();
    let mut counter = vec![0usize; components.len()];
    loop {
        let roots: Vec<usize> =
            components.iter().zip(&counter).map(|(c, &i)| c[i]).collect();
        if let Some(values) = solve_trees(edges, &adj, &components, &roots, &cap) {
            let mut m = vec![vec![S::zero(); k_n]; j_n];
            for (pos, &(j, k)) in edges.iter().enumerate() {
                m[j][k] = values[pos].clone();
            }
            found.push(m);
        }
        // Advance the counter; stop after the last combination.
        let mut i = 0;
        loop {
            if i == counter.len() {
                return;
            }
            counter[i] += 1;
            if counter[i] < radices[i] {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Peel leaves toward each root: every non-root node is tight, which fixes
/// its parent edge; accept only strictly positive edges and a root that is
/// not pushed beyond its cap.
fn solve_trees<S: Scalar>(
    edges: &[(usize, usize)],
    adj: &[Vec<(usize, usize)>],
    components: &[Vec<usize>],
    roots: &[usize],
    cap: &impl Fn(usize) -> S,
) -> Option<Vec<S>> {
    let mut values: Vec<Option<S>> = vec![None; edges.len()];
    for (comp, &root) in components.iter().zip(roots) {
        // BFS order with parent pointers.
        let mut order = Vec::with_capacity(comp.len());
        let mut parent_edge: Vec<(usize, Option<usize>)> = Vec::with_capacity(comp.len());
        let mut seen = vec![false; adj.len()];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((root, None));
        seen[root] = true;
        while let Some((u, pe)) = queue.pop_front() {
            order.push(u);
            parent_edge.push((u, pe));
            for &(v, pos) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back((v, Some(pos)));
                }
            }
        }
        // Children before parents: walk BFS order backwards.
        for idx in (0..order.len()).rev() {
            let (u, pe) = (parent_edge[idx].0, parent_edge[idx].1);
            let mut residual = cap(u);
            for &(_, pos) in &adj[u] {
                if Some(pos) != pe {
                    if let Some(v) = &values[pos] {
                        residual = residual - v.clone();
                    }
                }
            }
            match pe {
                Some(pos) => {
                    // Tight non-root node: its parent edge absorbs the rest.
                    if residual <= S::tol() {
                        return None;
                    }
                    values[pos] = Some(residual);
                }
                None => {
                    // Root: may be slack but never oversubscribed.
                    if residual < -S::tol() {
                        return None;
                    }
                }
            }
        }
    }
    Some(values.into_iter().map(|v| v.expect("every edge solved")).collect())
}

/// Certify whether a feasible rate matrix is a vertex of the polytope:
/// its support must be a forest, and each support tree may contain at
/// most one node whose cap is slack. Tightness is judged at `tol`.
pub fn is_vertex(row_caps: &[f64], col_caps: &[f64], m: &MatchingRates, tol: f64) -> bool {
    let j_n = row_caps.len();
    let k_n = col_caps.len();
    let support: Vec<(usize, usize)> = (0..j_n)
        .flat_map(|j| (0..k_n).map(move |k| (j, k)))
        .filter(|&(j, k)| m.get(j, k) > tol)
        .collect();
    if !is_acyclic(&support, j_n, k_n) {
        return false;
    }
    let mut dsu = Dsu::new(j_n + k_n);
    for &(j, k) in &support {
        dsu.union(j, j_n + k);
    }
    let mut slack_count = std::collections::HashMap::new();
    for &(j, k) in &support {
        for (node, slack) in [
            (j, row_caps[j] - m.row_sum(j) > tol),
            (j_n + k, col_caps[k] - m.col_sum(k) > tol),
        ] {
            if slack {
                let c = slack_count.entry(dsu.find(node)).or_insert_with(std::collections::HashSet::new);
                c.insert(node);
            }
        }
    }
    slack_count.values().all(|nodes| nodes.len() <= 1)
}

/// Enumerate the vertices of an instance's rate polytope with support and
/// tightness annotations.
pub fn enumerate_extreme_points(net: &Network) -> Result<Vec<ExtremePoint>> {
    let vertices = enumerate_vertices(net.lambda(), net.mu())?;
    vertices
        .into_iter()
        .map(|rows| {
            let m = MatchingRates::new(rows)?;
            let support: Vec<(usize, usize)> = (0..net.j())
                .flat_map(|j| (0..net.k()).map(move |k| (j, k)))
                .filter(|&(j, k)| m.get(j, k) > FEAS_TOL)
                .collect();
            let tight_demand =
                (0..net.j()).map(|j| (m.row_sum(j) - net.lambda()[j]).abs() <= FEAS_TOL).collect();
            let tight_supply =
                (0..net.k()).map(|k| (m.col_sum(k) - net.mu()[k]).abs() <= FEAS_TOL).collect();
            Ok(ExtremePoint { m, support, tight_demand, tight_supply })
        })
        .collect()
}
