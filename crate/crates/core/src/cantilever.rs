//! Lateral-mode modal constants of the cantilever and its biased operating
//! state next to the tip.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::potential::PotentialModel;
use crate::roots::bisect_secant;
use crate::units::{GIGAPASCAL, HBAR, NANOMETER};

/// Prefactor of the clamped-free fundamental frequency
/// `ω_c = 1.015 √(E w² / (ρ L⁴))`.
pub const FREQUENCY_PREFACTOR: f64 = 1.015;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialParams {
    /// Young's modulus (Pa).
    pub young_modulus: f64,
    /// Mass density (kg/m³).
    pub density: f64,
}

impl MaterialParams {
    pub fn new(young_modulus: f64, density: f64) -> Result<Self> {
        ensure_positive("young_modulus", young_modulus)?;
        ensure_positive("density", density)?;
        Ok(Self {
            young_modulus,
            density,
        })
    }

    /// E = 160 GPa, ρ = 2329 kg/m³.
    pub fn silicon() -> Self {
        Self {
            young_modulus: 160.0 * GIGAPASCAL,
            density: 2329.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantileverGeometry {
    pub length: f64,
    /// Dimension along the oscillation; the moment of inertia goes as w³.
    pub width: f64,
    pub thickness: f64,
}

impl CantileverGeometry {
    pub fn new(length: f64, width: f64, thickness: f64) -> Result<Self> {
        ensure_positive("length", length)?;
        ensure_positive("width", width)?;
        ensure_positive("thickness", thickness)?;
        Ok(Self {
            length,
            width,
            thickness,
        })
    }

    pub fn from_nm(length: f64, width: f64, thickness: f64) -> Result<Self> {
        Self::new(length * NANOMETER, width * NANOMETER, thickness * NANOMETER)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantileverModal {
    /// k = 3EI/L³ (N/m).
    pub spring_constant: f64,
    /// m_eff = k/ω_c² (kg).
    pub effective_mass: f64,
    /// Isolated-cantilever angular frequency (rad/s).
    pub omega_c: f64,
    /// I = t w³ / 12 (m⁴).
    pub moment_of_inertia: f64,
}

pub fn modal_params(geometry: &CantileverGeometry, material: &MaterialParams) -> CantileverModal {
    modal_params_with_prefactor(geometry, material, FREQUENCY_PREFACTOR)
}

/// [`modal_params`] with a custom frequency prefactor. Exposed for
/// sensitivity checks of the validation suite.
pub fn modal_params_with_prefactor(
    geometry: &CantileverGeometry,
    material: &MaterialParams,
    prefactor: f64,
) -> CantileverModal {
    let CantileverGeometry {
        length,
        width,
        thickness,
    } = *geometry;
    let moment_of_inertia = thickness * width.powi(3) / 12.0;
    let spring_constant = 3.0 * material.young_modulus * moment_of_inertia / length.powi(3);
    let omega_c = prefactor
        * (material.young_modulus * width * width / (material.density * length.powi(4))).sqrt();
    CantileverModal {
        spring_constant,
        effective_mass: spring_constant / (omega_c * omega_c),
        omega_c,
        moment_of_inertia,
    }
}

/// How the surface force gradient enters the effective stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StiffnessConvention {
    /// `k_eff = k + V''(x)`, from expanding the Hamiltonian. Can go
    /// negative (snap-in) beyond the inflection point.
    #[default]
    Signed,
    /// `k_eff = k + |V''(x)|`, the form used to draw the anharmonicity maps.
    Magnitude,
}

impl StiffnessConvention {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "signed" => Some(Self::Signed),
            "magnitude" => Some(Self::Magnitude),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Signed => "signed",
            Self::Magnitude => "magnitude",
        }
    }

    fn apply(self, k: f64, curvature: f64) -> f64 {
        match self {
            Self::Signed => k + curvature,
            Self::Magnitude => k + curvature.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasState {
    /// Cantilever–tip gap x (m).
    pub gap: f64,
    /// Static deflection x_c balancing the surface force (m). Diagnostic
    /// only: the linear term cancels and never reaches the spectrum.
    pub equilibrium_offset: f64,
    /// Signed surface-force gradient V''(x) (N/m).
    pub lj_stiffness: f64,
    pub effective_stiffness: f64,
    pub omega_eff: f64,
    pub x_zpf: f64,
    pub convention: StiffnessConvention,
}

/// Zero-point motion `√(ħ / (2 m ω))`.
pub fn zero_point_motion(mass: f64, omega: f64) -> f64 {
    (HBAR / (2.0 * mass * omega)).sqrt()
}

fn check_contact(potential: &dyn PotentialModel, x: f64) -> Result<()> {
    if let Some(limit) = potential.contact_limit() {
        if x <= limit {
            return Err(Error::Contact { x, limit });
        }
    }
    Ok(())
}

pub fn bias_state(
    modal: &CantileverModal,
    potential: &dyn PotentialModel,
    x: f64,
) -> Result<BiasState> {
    bias_state_with(modal, potential, x, StiffnessConvention::Signed)
}

pub fn bias_state_with(
    modal: &CantileverModal,
    potential: &dyn PotentialModel,
    x: f64,
    convention: StiffnessConvention,
) -> Result<BiasState> {
    check_contact(potential, x)?;
    let k = modal.spring_constant;
    let force = -potential.derivative(x, 1)?;
    let curvature = potential.derivative(x, 2)?;
    let k_eff = convention.apply(k, curvature);
    if !(k_eff > 0.0) {
        return Err(Error::SnapIn { x, k_eff });
    }
    let omega_eff = (k_eff / modal.effective_mass).sqrt();
    Ok(BiasState {
        gap: x,
        equilibrium_offset: -force / k,
        lj_stiffness: curvature,
        effective_stiffness: k_eff,
        omega_eff,
        x_zpf: zero_point_motion(modal.effective_mass, omega_eff),
        convention,
    })
}

/// Largest gap in `search` where `k + V''(x)` crosses zero, i.e. the
/// snap-in boundary. `Ok(None)` when the stiffness keeps its sign over the
/// whole interval.
pub fn snap_in_threshold(
    modal: &CantileverModal,
    potential: &dyn PotentialModel,
    search: (f64, f64),
) -> Result<Option<f64>> {
    const SCAN_POINTS: usize = 2000;
    let (lo, hi) = if search.0 <= search.1 {
        search
    } else {
        (search.1, search.0)
    };
    let k = modal.spring_constant;
    let stiffness = |x: f64| potential.derivative(x, 2).map(|v| k + v);

    // scan downward from the top so the largest crossing is found first
    let step = (hi - lo) / SCAN_POINTS as f64;
    let mut upper = hi;
    let mut f_upper = stiffness(upper)?;
    for i in (0..SCAN_POINTS).rev() {
        let lower = lo + step * i as f64;
        let f_lower = stiffness(lower)?;
        if f_lower == 0.0 {
            return Ok(Some(lower));
        }
        if f_lower.signum() != f_upper.signum() && f_upper != 0.0 {
            return bisect_secant(stiffness, lower, upper, 1e-12).map(Some);
        }
        upper = lower;
        f_upper = f_lower;
    }
    Ok(None)
}
