//! Scalar abstraction for the combinatorial layers (transportation plans,
//! polytope vertices, priority partitions), which are exact algorithms and
//! run unchanged over floating-point or rational arithmetic.
//!
//! Analytic layers (distributions, fluid dynamics, simulation) are
//! intrinsically `f64` and do not use this trait.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Field-like scalar with an absolute comparison tolerance.
///
/// `f64` uses a `1e-9` tolerance; exact types use zero, making every
/// tolerance check an exact check.
pub trait Scalar: Signed + Clone + PartialOrd + std::fmt::Debug {
    /// Absolute tolerance used for feasibility and tie comparisons.
    fn tol() -> Self;

    /// Whether the value is within tolerance of zero.
    fn near_zero(&self) -> bool {
        self.abs() <= Self::tol()
    }

    /// Whether two values are within tolerance of each other.
    fn near(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).near_zero()
    }
}

impl Scalar for f64 {
    fn tol() -> Self {
        crate::FEAS_TOL
    }
}

impl Scalar for BigRational {
    fn tol() -> Self {
        BigRational::zero()
    }
}

/// Convert an `f64` with an exact binary representation into a rational.
/// Panics on non-finite input; intended for test fixtures and oracles.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float required")
}
