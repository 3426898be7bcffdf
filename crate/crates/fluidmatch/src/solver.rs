//! Matching-rate optimization, dispatched on the hazard-rate monotonicity
//! of the patience distributions.
//!
//! - All hazards constant (memoryless patience): the objective is linear
//!   in the rate matrix, so the problem collapses to a transportation LP
//!   on wait-cost-adjusted weights `v_jk + cD_j/thetaD_j + cS_k/thetaS_k`
//!   plus a constant offset.
//! - All hazards nondecreasing: the objective is convex, so some vertex of
//!   the rate polytope is optimal; evaluate them all and keep the argmax.
//! - All hazards nonincreasing: the objective is concave; conditional
//!   gradient (linear subproblems solved by the transportation LP, step by
//!   golden-section line search) converges to the global optimum.
//! - Mixed classes: no global structure; multi-start conditional gradient
//!   from every vertex plus random feasible points, flagged as heuristic.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::HazardClass;
use crate::fluid::mp_objective;
use crate::network::{MatchingRates, Network};
use crate::polytope::{enumerate_extreme_points, is_vertex};
use crate::transport::solve_transport;
use crate::{Error, Result, FEAS_TOL};

/// Which route produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Transportation LP on wait-cost-adjusted weights.
    Lp,
    /// Exhaustive vertex evaluation.
    VertexEnumeration,
    /// Conditional gradient with line search.
    FrankWolfe,
    /// Multi-start conditional gradient (heuristic).
    MultiStartGradient,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SolverKind::Lp => "lp",
            SolverKind::VertexEnumeration => "vertex-enumeration",
            SolverKind::FrankWolfe => "frank-wolfe",
            SolverKind::MultiStartGradient => "multi-start-gradient",
        };
        f.write_str(name)
    }
}

/// An optimized matching-rate matrix with provenance.
#[derive(Debug, Clone)]
pub struct MpSolution {
    /// The optimizing rates.
    pub m_star: MatchingRates,
    /// Objective value at `m_star`.
    pub objective: f64,
    /// Whether `m_star` is a vertex of the rate polytope.
    pub is_extreme_point: bool,
    /// Route that produced the solution.
    pub solver_used: SolverKind,
    /// False only for the mixed-class heuristic, which cannot certify
    /// global optimality.
    pub global_optimum: bool,
}

/// Conditional-gradient iteration cap and duality-gap target.
const FW_MAX_ITERS: usize = 10_000;
const FW_GAP_TOL: f64 = 1e-8;
/// Starting points for the mixed-class heuristic beyond the vertices.
const MULTISTART_RANDOM: usize = 50;
/// Fixed seed for the heuristic's random starts: results are reproducible.
const MULTISTART_SEED: u64 = 0x6d61_7463_68;

/// Solve the rate-optimization problem, choosing the route from the
/// instance's hazard classes.
pub fn solve_mp(net: &Network) -> Result<MpSolution> {
    let classes: Vec<HazardClass> = net
        .demand_patience()
        .iter()
        .chain(net.supply_patience())
        .map(|d| d.hazard_class())
        .collect();
    let all_constant = classes.iter().all(|c| *c == HazardClass::Constant);
    let none_decreasing = classes.iter().all(|c| *c != HazardClass::Decreasing);
    let none_increasing = classes.iter().all(|c| *c != HazardClass::Increasing);
    if all_constant {
        solve_by_lp(net)
    } else if none_decreasing {
        solve_by_vertex_enumeration(net)
    } else if none_increasing {
        solve_by_frank_wolfe(net)
    } else {
        solve_by_multistart(net)
    }
}

/// Highest achievable long-run profit rate per unit of system scale; the
/// denominator of every performance ratio.
pub fn upper_bound(net: &Network) -> Result<f64> {
    Ok(solve_mp(net)?.objective)
}

/// Exact route for memoryless patience: transportation LP on adjusted
/// weights. Errors if any distribution has a non-constant hazard.
pub fn solve_by_lp(net: &Network) -> Result<MpSolution> {
    let non_constant = net
        .demand_patience()
        .iter()
        .chain(net.supply_patience())
        .any(|d| d.hazard_class() != HazardClass::Constant);
    if non_constant {
        return Err(Error::InvalidParameter(
            "LP route requires constant-hazard patience on every node".into(),
        ));
    }
    let weights: Vec<Vec<f64>> = (0..net.j())
        .map(|j| {
            (0..net.k())
                .map(|k| {
                    net.values()[j][k]
                        + net.cost_demand()[j] / net.demand_patience()[j].theta()
                        + net.cost_supply()[k] / net.supply_patience()[k].theta()
                })
                .collect()
        })
        .collect();
    let sol = solve_transport(net.lambda(), net.mu(), &weights)?;
    let m_star = MatchingRates::new(sol.plan)?;
    let objective = mp_objective(net, &m_star)?;
    let extreme = is_vertex(net.lambda(), net.mu(), &m_star, FEAS_TOL);
    Ok(MpSolution {
        m_star,
        objective,
        is_extreme_point: extreme,
        solver_used: SolverKind::Lp,
        global_optimum: true,
    })
}

/// Convex-objective route: evaluate the objective at every vertex of the
/// rate polytope, in parallel, and keep the best; ties within `1e-9` go to
/// the lexicographically smallest matrix for determinism.
pub fn solve_by_vertex_enumeration(net: &Network) -> Result<MpSolution> {
    let vertices = enumerate_extreme_points(net)?;
    let scored: Vec<(usize, f64)> = vertices
        .par_iter()
        .enumerate()
        .map(|(i, pt)| Ok((i, mp_objective(net, &pt.m)?)))
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, f64)> = None;
    for (i, obj) in scored {
        best = Some(match best {
            None => (i, obj),
            Some((bi, bobj)) => {
                if obj > bobj + 1e-9 {
                    (i, obj)
                } else if obj < bobj - 1e-9 {
                    (bi, bobj)
                } else if lex_less(&vertices[i].m, &vertices[bi].m) {
                    (i, obj)
                } else {
                    (bi, bobj)
                }
            }
        });
    }
    let (idx, objective) = best.expect("polytope always has at least the zero vertex");
    Ok(MpSolution {
        m_star: vertices[idx].m.clone(),
        objective,
        is_extreme_point: true,
        solver_used: SolverKind::VertexEnumeration,
        global_optimum: true,
    })
}

/// Concave-objective route: conditional gradient from the zero matrix.
pub fn solve_by_frank_wolfe(net: &Network) -> Result<MpSolution> {
    let (m_star, objective, _gap) =
        conditional_gradient(net, MatchingRates::zeros(net.j(), net.k()), FW_MAX_ITERS)?;
    let extreme = is_vertex(net.lambda(), net.mu(), &m_star, 1e-7);
    Ok(MpSolution {
        m_star,
        objective,
        is_extreme_point: extreme,
        solver_used: SolverKind::FrankWolfe,
        global_optimum: true,
    })
}

/// Mixed-class heuristic: conditional-gradient ascent from every vertex
/// (when enumerable) plus seeded random feasible starts; best local
/// optimum wins, without a global-optimality certificate.
pub fn solve_by_multistart(net: &Network) -> Result<MpSolution> {
    let mut starts: Vec<MatchingRates> = Vec::new();
    if net.j() * net.k() <= crate::polytope::MAX_EDGES {
        starts.extend(enumerate_extreme_points(net)?.into_iter().map(|pt| pt.m));
    } else {
        starts.push(MatchingRates::zeros(net.j(), net.k()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MULTISTART_SEED);
    for _ in 0..MULTISTART_RANDOM {
        starts.push(sample_feasible(net, &mut rng));
    }
    let finished: Vec<(MatchingRates, f64)> = starts
        .into_par_iter()
        .map(|start| {
            let (m, obj, _gap) = conditional_gradient(net, start, 500)?;
            Ok((m, obj))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(MatchingRates, f64)> = None;
    for (m, obj) in finished {
        best = Some(match best {
            None => (m, obj),
            Some((bm, bobj)) => {
                if obj > bobj + 1e-9 {
                    (m, obj)
                } else if obj < bobj - 1e-9 || !lex_less(&m, &bm) {
                    (bm, bobj)
                } else {
                    (m, obj)
                }
            }
        });
    }
    let (m_star, objective) = best.expect("at least one start");
    let extreme = is_vertex(net.lambda(), net.mu(), &m_star, 1e-7);
    Ok(MpSolution {
        m_star,
        objective,
        is_extreme_point: extreme,
        solver_used: SolverKind::MultiStartGradient,
        global_optimum: false,
    })
}

/// Zero-cost specialization: maximize total match value only. Returns the
/// optimal plan and its value.
pub fn solve_lp_value_only(net: &Network) -> Result<(MatchingRates, f64)> {
    solve_lp_with_caps(net, net.lambda(), net.mu())
}

/// Zero-cost specialization with explicit caps (used for monotonicity
/// checks and snapshot-sized subproblems).
pub fn solve_lp_with_caps(
    net: &Network,
    row_caps: &[f64],
    col_caps: &[f64],
) -> Result<(MatchingRates, f64)> {
    if row_caps.len() != net.j() || col_caps.len() != net.k() {
        return Err(Error::InvalidParameter("cap lengths must match instance".into()));
    }
    let sol = solve_transport(row_caps, col_caps, net.values())?;
    Ok((MatchingRates::new(sol.plan)?, sol.value))
}

/// Row-major lexicographic comparison of rate matrices.
fn lex_less(a: &MatchingRates, b: &MatchingRates) -> bool {
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        for (x, y) in ra.iter().zip(rb) {
            if x < y {
                return true;
            }
            if x > y {
                return false;
            }
        }
    }
    false
}

/// Ceiling for a single wait-cost gradient term. A saturated node with a
/// vanishing hazard wants an unbounded ascent signal, but any value that
/// dominates the match values picks the same linearized direction, and
/// keeping weights moderate preserves float precision inside the
/// transportation solve.
const GRAD_TERM_CAP: f64 = 1e5;

/// Objective gradient extended to the boundary of the polytope by the
/// hazard-rate limits at the patience support endpoints; terms from
/// vanishing hazards are capped at [`GRAD_TERM_CAP`] so saturated
/// increasing-hazard nodes yield a large finite ascent signal instead of
/// an infinity.
fn extended_gradient(net: &Network, m: &MatchingRates) -> Result<Vec<Vec<f64>>> {
    let mut d_terms = Vec::with_capacity(net.j());
    for j in 0..net.j() {
        d_terms.push(boundary_term(
            net.lambda()[j],
            &net.demand_patience()[j],
            net.cost_demand()[j],
            m.row_sum(j),
        )?);
    }
    let mut s_terms = Vec::with_capacity(net.k());
    for k in 0..net.k() {
        s_terms.push(boundary_term(
            net.mu()[k],
            &net.supply_patience()[k],
            net.cost_supply()[k],
            m.col_sum(k),
        )?);
    }
    Ok((0..net.j())
        .map(|j| (0..net.k()).map(|k| net.values()[j][k] + d_terms[j] + s_terms[k]).collect())
        .collect())
}

fn boundary_term(
    rate: f64,
    dist: &crate::dist::PatienceDistribution,
    cost: f64,
    consumed: f64,
) -> Result<f64> {
    if cost == 0.0 {
        return Ok(0.0);
    }
    let s = consumed.clamp(0.0, rate);
    let hazard = if s <= FEAS_TOL {
        dist.hazard_at_right_edge()
    } else if s >= rate - FEAS_TOL {
        dist.hazard_at_origin()
    } else {
        dist.hazard(dist.inverse_cdf(1.0 - s / rate)?)?
    };
    if hazard.is_infinite() {
        return Ok(0.0);
    }
    Ok((cost / hazard.max(1e-12)).min(GRAD_TERM_CAP))
}

/// Conditional-gradient ascent: linear subproblems over the rate polytope
/// solved by the transportation LP, step sizes by golden-section line
/// search on the true objective (monotone ascent). Stops when the duality
/// gap drops below the target or the iteration budget runs out. Returns
/// the iterate, its objective, and the final gap.
fn conditional_gradient(
    net: &Network,
    start: MatchingRates,
    max_iters: usize,
) -> Result<(MatchingRates, f64, f64)> {
    let mut m = start;
    let mut obj = mp_objective(net, &m)?;
    let mut gap = f64::INFINITY;
    for _t in 0..max_iters {
        let grad = extended_gradient(net, &m)?;
        let toward = solve_transport(net.lambda(), net.mu(), &grad)?.plan;
        gap = 0.0;
        for j in 0..net.j() {
            for k in 0..net.k() {
                gap += grad[j][k] * (toward[j][k] - m.get(j, k));
            }
        }
        if gap < FW_GAP_TOL {
            break;
        }
        let blend = |alpha: f64| -> Result<MatchingRates> {
            let rows: Vec<Vec<f64>> = (0..net.j())
                .map(|j| {
                    (0..net.k())
                        .map(|k| m.get(j, k) + alpha * (toward[j][k] - m.get(j, k)))
                        .collect()
                })
                .collect();
            MatchingRates::new(rows)
        };
        let eval = |alpha: f64| -> Result<f64> { mp_objective(net, &blend(alpha)?) };
        let (alpha, val) = golden_max(&eval, 0.0, 1.0, 48)?;
        // Guard monotonicity against line-search noise; a full step is a
        // useful fallback early on.
        let full = eval(1.0)?;
        let (alpha, val) = if full > val { (1.0, full) } else { (alpha, val) };
        if val <= obj + 1e-15 {
            break;
        }
        m = blend(alpha)?;
        obj = val;
    }
    Ok((m, obj, gap))
}

/// Golden-section search for the maximum of a unimodal function on
/// `[lo, hi]`; returns the best abscissa and value seen.
fn golden_max(
    f: &impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    iters: usize,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    if fc >= fd {
        Ok((c, fc))
    } else {
        Ok((d, fd))
    }
}

/// Draw a uniformly scaled random feasible rate matrix (used for
/// heuristic starts and optimality spot checks).
pub fn sample_feasible(net: &Network, rng: &mut impl Rng) -> MatchingRates {
    let j_n = net.j();
    let k_n = net.k();
    let mut rows = vec![vec![0.0; k_n]; j_n];
    for (j, row) in rows.iter_mut().enumerate() {
        let raw: Vec<f64> = (0..k_n).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let budget = rng.gen::<f64>() * net.lambda()[j];
        for (k, r) in raw.iter().enumerate() {
            row[k] = budget * r / total.max(1e-300);
        }
    }
    for k in 0..k_n {
        let col: f64 = rows.iter().map(|r| r[k]).sum();
        if col > net.mu()[k] {
            let shrink = net.mu()[k] / col * (1.0 - 1e-12);
            for row in rows.iter_mut() {
                row[k] *= shrink;
            }
        }
    }
    MatchingRates::new(rows).expect("scaled draw is feasible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::PatienceDistribution;

    fn exp(rate: f64) -> PatienceDistribution {
        PatienceDistribution::exponential(rate).unwrap()
    }

    fn uni(theta: f64) -> PatienceDistribution {
        PatienceDistribution::uniform(theta).unwrap()
    }

    fn gam(shape: f64, scale: f64) -> PatienceDistribution {
        PatienceDistribution::gamma(shape, scale).unwrap()
    }

    #[test]
    fn zero_cost_solution_matches_value_only_lp() {
        let net = Network::new(
            vec![1.0, 2.0],
            vec![1.5, 0.5],
            vec![vec![2.0, 1.0], vec![1.0, 3.0]],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![exp(1.0), exp(2.0)],
            vec![exp(1.0), exp(0.5)],
        )
        .unwrap();
        let sol = solve_mp(&net).unwrap();
        let (_, lp_value) = solve_lp_value_only(&net).unwrap();
        assert_eq!(sol.solver_used, SolverKind::Lp);
        assert!((sol.objective - lp_value).abs() < 1e-9);
        assert!(sol.global_optimum);
    }

    /// Two demand nodes share one supply node; holding costs make the
    /// memoryless route prefer the costlier demand class.
    fn shared_supply_net(
        lambda2: f64,
        c1: f64,
        d1: PatienceDistribution,
        d2: PatienceDistribution,
        s1: PatienceDistribution,
    ) -> Network {
        Network::new(
            vec![1.0, lambda2],
            vec![1.0],
            vec![vec![1.0], vec![1.0]],
            vec![c1, 4.0],
            vec![1.0],
            vec![d1, d2],
            vec![s1],
        )
        .unwrap()
    }

    #[test]
    fn memoryless_route_orders_by_adjusted_weights() {
        // Adjusted weights: edge (0,0) gets 1 + 0 + 1 = 2, edge (1,0)
        // gets 1 + 4 + 1 = 6, so the supply cap goes to demand node 1.
        let net = shared_supply_net(1.0, 0.0, exp(1.0), exp(1.0), exp(1.0));
        let sol = solve_mp(&net).unwrap();
        assert_eq!(sol.solver_used, SolverKind::Lp);
        assert!((sol.m_star.get(0, 0) - 0.0).abs() < 1e-9);
        assert!((sol.m_star.get(1, 0) - 1.0).abs() < 1e-9);
        assert!((sol.objective - 1.0).abs() < 1e-9);
        assert!(sol.is_extreme_point);
    }

    #[test]
    fn memoryless_and_vertex_routes_agree() {
        let net = shared_supply_net(1.0, 0.0, exp(1.0), exp(1.0), exp(1.0));
        let lp = solve_by_lp(&net).unwrap();
        let vx = solve_by_vertex_enumeration(&net).unwrap();
        assert!((lp.objective - vx.objective).abs() < 1e-8);
        // A second, asymmetric instance.
        let net = Network::new(
            vec![0.7, 1.9],
            vec![1.1, 0.4],
            vec![vec![3.0, 0.5], vec![1.0, 2.0]],
            vec![0.3, 1.2],
            vec![0.8, 0.1],
            vec![exp(0.9), exp(2.0)],
            vec![exp(1.5), exp(1.0)],
        )
        .unwrap();
        let lp = solve_by_lp(&net).unwrap();
        let vx = solve_by_vertex_enumeration(&net).unwrap();
        assert!((lp.objective - vx.objective).abs() < 1e-8, "{} vs {}", lp.objective, vx.objective);
    }

    #[test]
    fn patience_shape_changes_the_optimal_edge() {
        // Same rates and costs; memoryless patience favors serving the
        // high-cost demand node, uniform patience favors the other one.
        let e = solve_mp(&shared_supply_net(5.0, 1.0, exp(1.0), exp(1.0), exp(1.0))).unwrap();
        assert!((e.m_star.get(1, 0) - 1.0).abs() < 1e-9);
        assert!((e.objective - -16.0).abs() < 1e-9);
        let u = solve_mp(&shared_supply_net(5.0, 1.0, uni(1.0), uni(1.0), uni(1.0))).unwrap();
        assert_eq!(u.solver_used, SolverKind::VertexEnumeration);
        assert!((u.m_star.get(0, 0) - 1.0).abs() < 1e-9, "m={:?}", u.m_star);
        assert!((u.objective - -19.0).abs() < 1e-9);
    }

    #[test]
    fn solution_invariants_hold_across_routes() {
        let nets = [
            shared_supply_net(1.0, 0.0, exp(1.0), exp(1.0), exp(1.0)),
            shared_supply_net(1.0, 0.0, uni(1.0), uni(2.0), uni(1.0)),
            shared_supply_net(1.0, 0.0, gam(0.7, 1.0 / 0.7), gam(0.5, 2.0), exp(1.0)),
            shared_supply_net(1.0, 0.0, gam(3.0, 1.0 / 3.0), exp(1.0), gam(0.5, 2.0)),
        ];
        for net in &nets {
            let sol = solve_mp(net).unwrap();
            net.check_rates(&sol.m_star).unwrap();
            let direct = mp_objective(net, &sol.m_star).unwrap();
            assert!(
                (sol.objective - direct).abs() < 1e-9,
                "stored {} vs recomputed {direct}",
                sol.objective
            );
        }
    }

    #[test]
    fn concave_route_matches_dense_grid_on_single_edge() {
        // One edge, decreasing-hazard patience both sides: the objective
        // is concave in the single rate; compare with a fine grid search.
        let net = Network::new(
            vec![1.0],
            vec![0.9],
            vec![vec![2.0]],
            vec![0.5],
            vec![0.25],
            vec![gam(0.7, 1.0 / 0.7)],
            vec![gam(0.5, 2.0)],
        )
        .unwrap();
        let sol = solve_mp(&net).unwrap();
        assert_eq!(sol.solver_used, SolverKind::FrankWolfe);
        let mut best = f64::MIN;
        for i in 0..=20_000 {
            let s = 0.9 * i as f64 / 20_000.0;
            let m = MatchingRates::new(vec![vec![s]]).unwrap();
            best = best.max(mp_objective(&net, &m).unwrap());
        }
        assert!(
            (sol.objective - best).abs() < 1e-5,
            "cg {} vs grid {best}",
            sol.objective
        );
        assert!(sol.global_optimum);
    }

    #[test]
    fn mixed_classes_use_the_heuristic_and_beat_every_vertex() {
        let net = Network::new(
            vec![1.0, 0.8],
            vec![1.2],
            vec![vec![1.5], vec![2.0]],
            vec![0.7, 0.2],
            vec![0.4],
            vec![gam(3.0, 1.0 / 3.0), gam(0.5, 2.0)],
            vec![exp(1.0)],
        )
        .unwrap();
        let sol = solve_mp(&net).unwrap();
        assert_eq!(sol.solver_used, SolverKind::MultiStartGradient);
        assert!(!sol.global_optimum);
        net.check_rates(&sol.m_star).unwrap();
        for pt in enumerate_extreme_points(&net).unwrap() {
            let v = mp_objective(&net, &pt.m).unwrap();
            assert!(sol.objective >= v - 1e-7, "vertex beats heuristic: {v} > {}", sol.objective);
        }
    }

    #[test]
    fn value_only_lp_is_monotone_in_arrival_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let lambda: Vec<f64> = (0..3).map(|_| 0.2 + 2.0 * rng.gen::<f64>()).collect();
            let mu: Vec<f64> = (0..2).map(|_| 0.2 + 2.0 * rng.gen::<f64>()).collect();
            let values: Vec<Vec<f64>> =
                (0..3).map(|_| (0..2).map(|_| 3.0 * rng.gen::<f64>()).collect()).collect();
            let net = Network::new(
                lambda.clone(),
                mu.clone(),
                values,
                vec![0.0; 3],
                vec![0.0; 2],
                vec![exp(1.0), exp(1.0), exp(1.0)],
                vec![exp(1.0), exp(1.0)],
            )
            .unwrap();
            let (_, base) = solve_lp_value_only(&net).unwrap();
            let bump = rng.gen_range(0..3);
            let mut grown = lambda.clone();
            grown[bump] += 0.5;
            let (_, more) = solve_lp_with_caps(&net, &grown, &mu).unwrap();
            assert!(more >= base - 1e-9, "F dropped: {base} -> {more}");
        }
    }

    #[test]
    fn vertex_route_beats_random_feasible_points() {
        let net = Network::new(
            vec![1.0, 1.3],
            vec![0.8, 0.9],
            vec![vec![1.0, 2.0], vec![2.0, 0.5]],
            vec![0.5, 0.5],
            vec![0.3, 0.7],
            vec![gam(2.0, 0.5), uni(1.0)],
            vec![gam(5.0, 0.2), exp(1.0)],
        )
        .unwrap();
        let sol = solve_mp(&net).unwrap();
        assert_eq!(sol.solver_used, SolverKind::VertexEnumeration);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2_000 {
            let m = sample_feasible(&net, &mut rng);
            let v = mp_objective(&net, &m).unwrap();
            assert!(sol.objective >= v - 1e-7, "random point beats vertex route");
        }
    }

    #[test]
    fn upper_bound_equals_optimal_objective() {
        let net = shared_supply_net(1.0, 0.0, exp(1.0), exp(1.0), exp(1.0));
        assert_eq!(upper_bound(&net).unwrap(), solve_mp(&net).unwrap().objective);
    }

    #[test]
    fn sampled_points_are_feasible() {
        let net = shared_supply_net(1.0, 0.0, exp(1.0), exp(1.0), exp(1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let m = sample_feasible(&net, &mut rng);
            net.check_rates(&m).unwrap();
        }
    }
}
