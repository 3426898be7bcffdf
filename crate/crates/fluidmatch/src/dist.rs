//! Patience-time distributions.
//!
//! Waiting demand and supply abandon after a random patience time. The fluid
//! formulas need more than sampling: the CDF `G`, density `g`, hazard rate
//! `h = g/(1-G)`, the excess-life CDF `G_e(x) = theta * int_0^x (1-G(u)) du`
//! (`theta` = 1/mean), and the inverses of `G` and `G_e`. Three families are
//! supported, each parameterized so the mean is explicit:
//!
//! * `Exponential { rate }`: mean `1/rate`, constant hazard;
//! * `Uniform { theta }`: uniform on `[0, 2/theta]`, mean `1/theta`,
//!   increasing hazard;
//! * `Gamma { shape, scale }`: mean `shape * scale`, hazard increasing for
//!   `shape > 1`, decreasing for `shape < 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{invert_monotone, ln_gamma, reg_lower_gamma, reg_upper_gamma};
use crate::{Error, Result};

/// Absolute tolerance for numeric CDF inversion.
const INVERT_XTOL: f64 = 1e-10;

/// Hazard-rate monotonicity, declared analytically per distribution kind.
///
/// Increasing hazards make the invariant queue length concave in the
/// matching rate (so the rate-selection objective is maximized at a vertex);
/// decreasing hazards make it convex (so the objective is concave).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HazardClass {
    /// Constant hazard (exponential, or gamma with shape 1).
    Constant,
    /// Nondecreasing hazard (uniform; gamma with shape > 1).
    Increasing,
    /// Nonincreasing hazard (gamma with shape < 1).
    Decreasing,
}

/// A patience-time distribution with the full functional kit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PatienceDistribution {
    /// Exponential with the given rate; support `[0, inf)`.
    Exponential {
        /// Rate parameter; the mean is `1/rate`.
        rate: f64,
    },
    /// Uniform on `[0, 2/theta]`, so the mean is `1/theta`.
    Uniform {
        /// Reciprocal mean.
        theta: f64,
    },
    /// Gamma with shape-scale parameterization; support `[0, inf)`.
    Gamma {
        /// Shape parameter `k`.
        shape: f64,
        /// Scale parameter `s`; the mean is `k * s`.
        scale: f64,
    },
}

impl PatienceDistribution {
    /// Exponential patience with the given rate.
    pub fn exponential(rate: f64) -> Result<Self> {
        let d = Self::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    /// Uniform patience on `[0, 2/theta]`.
    pub fn uniform(theta: f64) -> Result<Self> {
        let d = Self::Uniform { theta };
        d.validate()?;
        Ok(d)
    }

    /// Gamma patience with the given shape and scale.
    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        let d = Self::Gamma { shape, scale };
        d.validate()?;
        Ok(d)
    }

    /// Gamma patience with unit-variance-style parameterization: mean `mean`
    /// and the given shape (scale is derived).
    pub fn gamma_with_mean(shape: f64, mean: f64) -> Result<Self> {
        if !(mean > 0.0) || !(shape > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma_with_mean requires positive shape and mean, got shape {shape}, mean {mean}"
            )));
        }
        Self::gamma(shape, mean / shape)
    }

    /// Check parameter positivity and finiteness. Deserialized values must
    /// pass through here before use.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            Self::Uniform { theta } => theta > 0.0 && theta.is_finite(),
            Self::Gamma { shape, scale } => {
                shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("non-positive or non-finite parameters: {self:?}")))
        }
    }

    /// Mean patience time `1/theta`.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => 1.0 / rate,
            Self::Uniform { theta } => 1.0 / theta,
            Self::Gamma { shape, scale } => shape * scale,
        }
    }

    /// Reciprocal mean `theta`, the excess-life normalization constant.
    pub fn theta(&self) -> f64 {
        1.0 / self.mean()
    }

    /// Right support edge `H` (`+inf` for unbounded kinds).
    pub fn right_edge(&self) -> f64 {
        match *self {
            Self::Uniform { theta } => 2.0 / theta,
            _ => f64::INFINITY,
        }
    }

    /// Declared hazard monotonicity class.
    pub fn hazard_class(&self) -> HazardClass {
        match *self {
            Self::Exponential { .. } => HazardClass::Constant,
            Self::Uniform { .. } => HazardClass::Increasing,
            Self::Gamma { shape, .. } => {
                if shape > 1.0 {
                    HazardClass::Increasing
                } else if shape < 1.0 {
                    HazardClass::Decreasing
                } else {
                    HazardClass::Constant
                }
            }
        }
    }

    /// CDF `G(x)` for `x >= 0`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.check_nonneg(x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => -(-rate * x).exp_m1(),
            Self::Uniform { theta } => (0.5 * theta * x).min(1.0),
            Self::Gamma { shape, scale } => reg_lower_gamma(shape, x / scale),
        }
    }

    /// Density `g(x)` for `x >= 0`. For gamma with shape < 1 the density
    /// diverges at the origin; `g(0)` is reported as `+inf`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.check_nonneg(x)?;
        Ok(match *self {
            Self::Exponential { rate } => rate * (-rate * x).exp(),
            Self::Uniform { theta } => {
                if x <= 2.0 / theta {
                    0.5 * theta
                } else {
                    0.0
                }
            }
            Self::Gamma { shape, scale } => {
                if x == 0.0 {
                    match shape {
                        s if s > 1.0 => 0.0,
                        s if s < 1.0 => f64::INFINITY,
                        _ => 1.0 / scale,
                    }
                } else {
                    ((shape - 1.0) * (x / scale).ln() - x / scale - ln_gamma(shape)).exp() / scale
                }
            }
        })
    }

    /// Hazard rate `h(x) = g(x)/(1-G(x))` on the interior of the support.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        self.check_nonneg(x)?;
        match *self {
            Self::Exponential { rate } => Ok(rate),
            Self::Uniform { theta } => {
                let edge = 2.0 / theta;
                if x >= edge {
                    Err(Error::Domain(format!("hazard at x = {x} >= support edge {edge}")))
                } else {
                    Ok(1.0 / (edge - x))
                }
            }
            Self::Gamma { shape, scale } => {
                let survival = reg_upper_gamma(shape, x / scale);
                if survival <= 0.0 {
                    return Err(Error::Domain(format!("hazard at x = {x}: survival underflowed")));
                }
                Ok(self.pdf(x)? / survival)
            }
        }
    }

    /// Limit of the hazard at the right support edge (`x -> H`).
    ///
    /// Finite only for the unbounded kinds: exponential tends to its rate
    /// and gamma to `1/scale`; the uniform hazard diverges at the edge, and
    /// `+inf` is returned. Boundary gradient formulas divide by this value.
    pub fn hazard_at_right_edge(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => rate,
            Self::Uniform { .. } => f64::INFINITY,
            Self::Gamma { scale, .. } => 1.0 / scale,
        }
    }

    /// Hazard at the origin, allowing the divergent gamma shape < 1 case
    /// (`+inf`). Boundary gradient formulas divide by this value.
    pub fn hazard_at_origin(&self) -> f64 {
        match *self {
            Self::Exponential { rate } => rate,
            Self::Uniform { theta } => 0.5 * theta,
            Self::Gamma { shape, scale } => match shape {
                s if s > 1.0 => 0.0,
                s if s < 1.0 => f64::INFINITY,
                _ => 1.0 / scale,
            },
        }
    }

    /// Excess-life CDF `G_e(x) = theta * int_0^x (1 - G(u)) du`.
    ///
    /// Exponential is its own excess-life distribution; uniform has a
    /// quadratic closed form; gamma reduces to regularized incomplete gamma
    /// functions through the partial-expectation identity
    /// `int_0^x (1-G) = k s P(k+1, x/s) + x (1 - P(k, x/s))`.
    pub fn excess_life_cdf(&self, x: f64) -> Result<f64> {
        self.check_nonneg(x)?;
        Ok(self.excess_life_cdf_unchecked(x))
    }

    pub(crate) fn excess_life_cdf_unchecked(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => -(-rate * x).exp_m1(),
            Self::Uniform { theta } => {
                if x >= 2.0 / theta {
                    1.0
                } else {
                    theta * x * (1.0 - 0.25 * theta * x)
                }
            }
            Self::Gamma { shape, scale } => {
                let z = x / scale;
                let head = reg_lower_gamma(shape + 1.0, z);
                let tail = z / shape * reg_upper_gamma(shape, z);
                (head + tail).min(1.0)
            }
        }
    }

    /// Inverse CDF (quantile) for `p` in `[0, 1)`.
    pub fn inverse_cdf(&self, p: f64) -> Result<f64> {
        self.check_prob(p)?;
        Ok(match *self {
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Uniform { theta } => 2.0 * p / theta,
            Self::Gamma { shape, scale } => {
                let z = invert_scaled_gamma(|z| reg_lower_gamma(shape, z), shape, scale, p, |z| {
                    ((shape - 1.0) * z.ln() - z - ln_gamma(shape)).exp()
                });
                z * scale
            }
        })
    }

    /// Inverse excess-life CDF for `p` in `[0, 1)`.
    pub fn inverse_excess_life_cdf(&self, p: f64) -> Result<f64> {
        self.check_prob(p)?;
        Ok(self.inverse_excess_life_cdf_unchecked(p))
    }

    pub(crate) fn inverse_excess_life_cdf_unchecked(&self, p: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::Uniform { theta } => 2.0 / theta * (1.0 - (1.0 - p).sqrt()),
            Self::Gamma { shape, scale } => {
                // d/dx G_e(x) = theta (1 - G(x)), computed in z = x/scale.
                let theta = 1.0 / (shape * scale);
                let z = invert_scaled_gamma(
                    |z| self.excess_life_cdf_unchecked(z * scale),
                    shape,
                    scale,
                    p,
                    |z| theta * scale * reg_upper_gamma(shape, z),
                );
                z * scale
            }
        }
    }

    /// Inverse-transform sample of a patience time.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        self.inverse_cdf(u).expect("u in [0,1) by construction")
    }

    fn check_nonneg(&self, x: f64) -> Result<()> {
        if x < 0.0 || x.is_nan() {
            Err(Error::Domain(format!("negative or NaN argument x = {x}")))
        } else {
            Ok(())
        }
    }

    fn check_prob(&self, p: f64) -> Result<()> {
        if (0.0..1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::Domain(format!("probability argument p = {p} outside [0, 1)")))
        }
    }
}

/// Shared bracket-and-refine driver for the two gamma inverses, working in
/// the scaled variable `z = x/scale`. `f` must be a CDF-like increasing map
/// of `z` with `f(0) = 0`, `df` its derivative.
fn invert_scaled_gamma(
    f: impl Fn(f64) -> f64,
    shape: f64,
    _scale: f64,
    p: f64,
    df: impl Fn(f64) -> f64,
) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    // Expand the bracket from a mean + a few standard deviations start.
    let mut hi = shape + 8.0 * shape.sqrt() + 8.0;
    while f(hi) < p {
        hi *= 2.0;
    }
    invert_monotone(|z| f(z) - p, df, 0.0, hi, shape, INVERT_XTOL)
}
