use thiserror::Error;

/// Errors raised by the physics and numerics modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("potential evaluated at non-positive distance x = {x:e} m (contact/singular region)")]
    Domain { x: f64 },

    #[error("no sign change of the target function over [{lo:e}, {hi:e}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("gap x = {x:e} m is inside the contact regime (x <= {limit:e} m)")]
    Contact { x: f64, limit: f64 },

    #[error(
        "snap-in instability at x = {x:e} m: effective stiffness {k_eff:e} N/m is not positive"
    )]
    SnapIn { x: f64, k_eff: f64 },

    #[error("Taylor expansion carries order {have}, at least {need} is required")]
    OrderMismatch { have: usize, need: usize },

    #[error("expansion at x = {x:e} m was computed for a different point {expected:e} m")]
    ExpansionPoint { x: f64, expected: f64 },

    #[error("singular input: {0}")]
    Singular(&'static str),

    #[error("Fock truncation {truncation} too small for level {level} and power {power} (need >= {need})")]
    TruncationTooSmall {
        level: usize,
        power: usize,
        truncation: usize,
        need: usize,
    },

    #[error("power {0} must be even")]
    OddPower(usize),

    #[error("cannot label dressed state |{state}>: best overlap {overlap:.3} (near resonance)")]
    LabelingAmbiguity { state: &'static str, overlap: f64 },

    #[error("no avoided crossing found in the sweep range")]
    NoAvoidedCrossing,

    #[error("detuning must be non-zero")]
    ZeroDetuning,

    #[error(
        "dispersive shift is singular: detuning {delta:e} straddles a resonance (eta = {eta:e})"
    )]
    StraddlingResonance { delta: f64, eta: f64 },

    #[error("grid eigensolve not converged: relative change {estimate:e} under grid doubling exceeds {tolerance:e}")]
    NotConverged { estimate: f64, tolerance: f64 },

    #[error("linear response system is singular at omega = {omega:e} rad/s")]
    SingularSystem { omega: f64 },

    #[error("constraint unsatisfiable: {0}")]
    Unsatisfiable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}
