//! One complete qubit design evaluated end to end: modal constants, bias
//! state, spectrum and thermal figures of merit.

use serde::Serialize;

use crate::cantilever::{
    bias_state_with, modal_params, BiasState, CantileverGeometry, CantileverModal, MaterialParams,
    StiffnessConvention,
};
use crate::error::{ensure_non_negative, Result};
use crate::potential::{
    find_bias_point, taylor_coefficients, LennardJones, LennardJonesParams, DEFAULT_TAYLOR_ORDER,
};
use crate::spectrum::{
    perturbative_energies, relative_anharmonicity, relative_frequency_shift, thermal_occupancy,
    Anharmonicity, QubitSpectrum, DEFAULT_N_MAX,
};
use crate::units::{MILLIKELVIN, NANOMETER};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Design {
    pub geometry: CantileverGeometry,
    pub material: MaterialParams,
    pub potential: LennardJonesParams,
    /// Operating gap; `None` places the qubit at the bias point.
    pub gap: Option<f64>,
    /// Bath temperature (K).
    pub temperature: f64,
    pub convention: StiffnessConvention,
}

impl Design {
    /// Silicon cantilever of (495, 10, 12) nm at the bias point, 8 mK.
    pub fn headline() -> Self {
        Self::silicon_nm(495.0, 10.0, 12.0)
    }

    pub fn silicon_nm(length: f64, width: f64, thickness: f64) -> Self {
        Self {
            geometry: CantileverGeometry {
                length: length * NANOMETER,
                width: width * NANOMETER,
                thickness: thickness * NANOMETER,
            },
            material: MaterialParams::silicon(),
            potential: LennardJonesParams::silicon(),
            gap: None,
            temperature: 8.0 * MILLIKELVIN,
            convention: StiffnessConvention::Signed,
        }
    }

    pub fn with_length(self, length: f64) -> Self {
        Self {
            geometry: CantileverGeometry {
                length,
                ..self.geometry
            },
            ..self
        }
    }

    /// The operating gap, solving for the bias point when none is set.
    pub fn resolve_gap(&self) -> Result<f64> {
        match self.gap {
            Some(x) => Ok(x),
            None => {
                let lj = LennardJones::new(self.potential);
                find_bias_point(&lj, lj.default_bias_bracket())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignAnalysis {
    pub modal: CantileverModal,
    pub bias: BiasState,
    pub spectrum: QubitSpectrum,
    pub anharmonicity: Anharmonicity,
    /// |1 − ω₁₀/ω_c|.
    pub delta_omega: f64,
    pub n_thermal: f64,
}

pub fn analyze(design: &Design) -> Result<DesignAnalysis> {
    ensure_non_negative("temperature", design.temperature)?;
    let geometry = CantileverGeometry::new(
        design.geometry.length,
        design.geometry.width,
        design.geometry.thickness,
    )?;
    let material = MaterialParams::new(design.material.young_modulus, design.material.density)?;
    let lj = LennardJones::new(LennardJonesParams::new(
        design.potential.epsilon,
        design.potential.sigma,
    )?);
    let gap = design.resolve_gap()?;
    analyze_at(&modal_params(&geometry, &material), &lj, gap, design)
}

/// Analysis with precomputed modal constants; used by sweeps that share
/// one cantilever across many gaps.
pub(crate) fn analyze_at(
    modal: &CantileverModal,
    lj: &LennardJones,
    gap: f64,
    design: &Design,
) -> Result<DesignAnalysis> {
    let bias = bias_state_with(modal, lj, gap, design.convention)?;
    let taylor = taylor_coefficients(lj, gap, DEFAULT_TAYLOR_ORDER)?;
    let spectrum = perturbative_energies(&bias, &taylor, DEFAULT_N_MAX)?;
    let anharmonicity = relative_anharmonicity(&bias, lj)?;
    Ok(DesignAnalysis {
        modal: *modal,
        delta_omega: relative_frequency_shift(&spectrum, modal),
        n_thermal: thermal_occupancy(spectrum.omega_10, design.temperature),
        bias,
        spectrum,
        anharmonicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::units::{angular_to_mhz, ANGSTROM, PICOMETER};

    #[test]
    fn headline_design() {
        let a = analyze(&Design::headline()).unwrap();
        assert!((angular_to_mhz(a.modal.omega_c) - 54.645).abs() < 1e-3);
        assert!((a.bias.gap / ANGSTROM - 4.7613).abs() < 1e-4);
        assert!((a.bias.x_zpf / PICOMETER - 2.1388).abs() < 1e-3);
        assert!((angular_to_mhz(a.spectrum.omega_10) - 60.0015).abs() < 1e-3);
        assert!((a.anharmonicity.eta_r - 0.089_43).abs() < 1e-4);
        assert!((a.n_thermal - 2.308).abs() < 1e-3);
        assert!((a.delta_omega - 0.098).abs() < 1e-3);
    }

    #[test]
    fn explicit_gap_and_errors() {
        let lj = LennardJones::silicon();
        let d = Design {
            gap: Some(lj.bias_point_closed_form()),
            ..Design::headline()
        };
        let a = analyze(&d).unwrap();
        let b = analyze(&Design::headline()).unwrap();
        assert!((a.spectrum.omega_10 / b.spectrum.omega_10 - 1.0).abs() < 1e-9);

        let contact = Design {
            gap: Some(1.05 * lj.params.sigma),
            ..Design::headline()
        };
        assert!(matches!(analyze(&contact), Err(Error::Contact { .. })));
        let snap = Design {
            gap: Some(1.5 * lj.params.sigma),
            ..Design::headline()
        };
        assert!(matches!(analyze(&snap), Err(Error::SnapIn { .. })));
        let magnitude = Design {
            convention: StiffnessConvention::Magnitude,
            ..snap
        };
        assert!(analyze(&magnitude).is_ok());
    }

    #[test]
    fn zero_temperature_is_empty() {
        let d = Design {
            temperature: 0.0,
            ..Design::headline()
        };
        assert_eq!(analyze(&d).unwrap().n_thermal, 0.0);
        let bad = Design {
            temperature: -1.0,
            ..Design::headline()
        };
        assert!(analyze(&bad).is_err());
    }
}
