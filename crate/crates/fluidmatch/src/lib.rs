//! Matching-rate optimization and discrete-review matching policies for
//! two-sided service platforms in which both waiting demand and waiting
//! supply renege.
//!
//! The model is a bipartite network of `J` demand and `K` supply nodes.
//! Arrivals at each node wait in a FIFO queue, abandon when a sampled
//! patience time expires, and are matched across edges in batches at review
//! instants. The crate is organized in three layers:
//!
//! * analytic: patience-time distributions ([`dist`]), the invariant-state
//!   formulas of the fluid model and their ODE ([`fluid`]), and an exact
//!   birth-death stationary oracle for the single-edge exponential system
//!   ([`markov`]);
//! * optimization: the matching-rate problem over the transportation
//!   polytope ([`solver`]), extreme-point enumeration ([`polytope`]), a
//!   max-profit transportation solver ([`transport`]), and priority-set
//!   construction with its greedy replication check ([`priority`]);
//! * simulation: an event-driven simulator of the stochastic system under
//!   three discrete-review policies, with exact accounting ([`sim`]).
//!
//! Combinatorial modules are generic over [`scalar::Scalar`] so the same
//! algorithms run in `f64` for production and in [`BigRational`] for exact
//! cross-checks; analytic modules are `f64` throughout.
//!
//! [`BigRational`]: num_rational::BigRational

pub mod dist;
pub mod fluid;
pub mod markov;
pub mod numeric;
pub mod polytope;
pub mod priority;
pub mod scalar;
pub mod sim;
pub mod solver;
pub mod transport;

mod network;

pub use network::{InvariantState, MatchingRates, Network};

/// Feasibility and comparison tolerance used by floating-point polytope and
/// solver code. Rational instantiations compare exactly instead.
pub const FEAS_TOL: f64 = 1e-9;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Construction-time parameter validation failed.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An evaluation argument fell outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A rate matrix violates the transportation polytope constraints.
    #[error("infeasible matching rates: {0}")]
    Infeasible(String),
    /// The instance exceeds an enumeration size guard.
    #[error("instance too large: {0}")]
    TooLarge(String),
    /// A support graph or priority-set partition is malformed.
    #[error("structure error: {0}")]
    Structure(String),
    /// The gradient does not extend to the requested boundary point.
    #[error("gradient undefined: {0}")]
    GradientUndefined(String),
    /// A truncated state space failed its tail-mass check.
    #[error("truncation error: {0}")]
    Truncation(String),
    /// An iterative solver failed to reach its termination criterion.
    #[error("solver error: {0}")]
    Solver(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
