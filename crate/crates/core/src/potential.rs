//! Tip–cantilever surface interaction potentials.
//!
//! A [`PotentialModel`] supplies closed-form derivatives of any order it
//! supports; nothing here differentiates numerically. The Lennard-Jones
//! surface potential is the concrete model used throughout the toolkit,
//! [`ZeroPotential`] is the isolated cantilever.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::roots::bisect_secant;
use crate::units::{mev_to_joule, ANGSTROM};

/// Relative tolerance of the bias-point root.
pub const BIAS_POINT_RTOL: f64 = 1e-12;

/// Default order of Taylor expansions (enough for the sixth-order spectrum).
pub const DEFAULT_TAYLOR_ORDER: usize = 6;

/// An interaction energy `V(x)` of the tip–surface gap `x`.
///
/// Implementors provide analytic derivatives. `derivative(x, 0)` must equal
/// `value(x)`.
pub trait PotentialModel: Debug + Send + Sync {
    fn derivative(&self, x: f64, order: usize) -> Result<f64>;

    fn value(&self, x: f64) -> Result<f64> {
        self.derivative(x, 0)
    }

    /// Highest derivative order available, `None` when unbounded.
    fn max_order(&self) -> Option<usize> {
        None
    }

    /// Gap below which the model is considered in contact. Higher-level
    /// modules reject bias points at or below this distance.
    fn contact_limit(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LennardJonesParams {
    /// Well depth (J).
    pub epsilon: f64,
    /// Zero-crossing distance (m).
    pub sigma: f64,
}

impl LennardJonesParams {
    pub fn new(epsilon: f64, sigma: f64) -> Result<Self> {
        ensure_positive("epsilon", epsilon)?;
        ensure_positive("sigma", sigma)?;
        Ok(Self { epsilon, sigma })
    }

    /// Construct from display units (meV, Å).
    pub fn from_display(epsilon_mev: f64, sigma_angstrom: f64) -> Result<Self> {
        Self::new(mev_to_joule(epsilon_mev), sigma_angstrom * ANGSTROM)
    }

    /// Silicon–silicon interface: ε = 17.4 meV, σ = 3.826 Å.
    pub fn silicon() -> Self {
        Self {
            epsilon: mev_to_joule(17.4),
            sigma: 3.826 * ANGSTROM,
        }
    }
}

/// Fraction of σ that marks the contact region.
pub const CONTACT_FRACTION: f64 = 1.1;

/// `V(x) = 4ε[(σ/x)¹² − (σ/x)⁶]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LennardJones {
    pub params: LennardJonesParams,
}

impl LennardJones {
    pub fn new(params: LennardJonesParams) -> Self {
        Self { params }
    }

    pub fn silicon() -> Self {
        Self::new(LennardJonesParams::silicon())
    }

    /// Inflection point of the potential, where `V''` vanishes:
    /// `x₀ = (26/7)^(1/6) σ`.
    pub fn bias_point_closed_form(&self) -> f64 {
        (26.0_f64 / 7.0).powf(1.0 / 6.0) * self.params.sigma
    }

    /// Potential minimum `2^(1/6) σ`.
    pub fn minimum(&self) -> f64 {
        2f64.powf(1.0 / 6.0) * self.params.sigma
    }

    /// Bracket used by default when searching for the bias point.
    pub fn default_bias_bracket(&self) -> (f64, f64) {
        (1.05 * self.params.sigma, 2.0 * self.params.sigma)
    }
}

/// Rising factorial p(p+1)…(p+n−1).
fn rising_factorial(p: u32, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (p as f64 + i as f64))
}

impl PotentialModel for LennardJones {
    fn derivative(&self, x: f64, order: usize) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain { x });
        }
        let s6 = (self.params.sigma / x).powi(6);
        let s12 = s6 * s6;
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        let bracket = rising_factorial(12, order) * s12 - rising_factorial(6, order) * s6;
        Ok(sign * 4.0 * self.params.epsilon * bracket / x.powi(order as i32))
    }

    fn contact_limit(&self) -> Option<f64> {
        Some(CONTACT_FRACTION * self.params.sigma)
    }
}

/// No surface interaction: the isolated cantilever.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZeroPotential;

impl PotentialModel for ZeroPotential {
    fn derivative(&self, x: f64, _order: usize) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain { x });
        }
        Ok(0.0)
    }
}

/// Taylor coefficients `λₙ = V⁽ⁿ⁾(x)/n!` about an expansion point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorCoefficients {
    pub expansion_point: f64,
    pub coefficients: Vec<f64>,
}

impl TaylorCoefficients {
    pub fn max_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// λₙ, or zero beyond the expansion order.
    pub fn lambda(&self, n: usize) -> f64 {
        self.coefficients.get(n).copied().unwrap_or(0.0)
    }

    /// Residual nonlinear part `Σ_{n≥3} λₙ(−δx)ⁿ` of the expansion.
    pub fn nonlinear_residual(&self, dx: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(3)
            .map(|(n, l)| l * (-dx).powi(n as i32))
            .sum()
    }
}

pub fn taylor_coefficients(
    potential: &dyn PotentialModel,
    x: f64,
    max_order: usize,
) -> Result<TaylorCoefficients> {
    if max_order < 2 {
        return Err(Error::InvalidParameter(format!(
            "Taylor order must be at least 2, got {max_order}"
        )));
    }
    if let Some(available) = potential.max_order() {
        if available < max_order {
            return Err(Error::OrderMismatch {
                have: available,
                need: max_order,
            });
        }
    }
    let mut factorial = 1.0;
    let mut coefficients = Vec::with_capacity(max_order + 1);
    for n in 0..=max_order {
        if n > 0 {
            factorial *= n as f64;
        }
        coefficients.push(potential.derivative(x, n)? / factorial);
    }
    Ok(TaylorCoefficients {
        expansion_point: x,
        coefficients,
    })
}

/// Root of `V''` inside `bracket`: the gap where the surface force gradient
/// vanishes.
pub fn find_bias_point(potential: &dyn PotentialModel, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > 0.0) {
        return Err(Error::Domain { x: lo.min(hi) });
    }
    bisect_secant(|x| potential.derivative(x, 2), lo, hi, BIAS_POINT_RTOL)
}
