//! Perturbative spectrum of the biased cantilever.
//!
//! With `δx = x_zpf (a† + a)`, first-order perturbation theory keeps only the
//! even Taylor terms of the surface potential:
//!
//! ```text
//! E_n ≈ ħω_eff (n + ½) + V(x) + Σ_{k≥2} λ_{2k} x_zpf^{2k} ⟨n|(a†+a)^{2k}|n⟩
//! ```
//!
//! Truncated after the sixth-order term this is the cubic polynomial
//! `E_n = α₀ + α₁n + α₂n² + α₃n³`.

use serde::Serialize;

use crate::cantilever::{BiasState, CantileverModal};
use crate::error::{Error, Result};
use crate::oracle::fock::position_moment_diagonal;
use crate::potential::{PotentialModel, TaylorCoefficients};
use crate::units::{HBAR, K_B};

pub const DEFAULT_N_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitSpectrum {
    /// E_n for n = 0..=n_max (J).
    pub energies: Vec<f64>,
    pub omega_10: f64,
    pub omega_21: f64,
    /// Absolute anharmonicity ω₂₁ − ω₁₀ (rad/s).
    pub eta: f64,
    pub eta_r: f64,
    /// α₀..α₃ (J).
    pub alpha: [f64; 4],
}

impl QubitSpectrum {
    fn from_energies(energies: Vec<f64>, alpha: [f64; 4]) -> Self {
        let omega_10 = (energies[1] - energies[0]) / HBAR;
        let omega_21 = (energies[2] - energies[1]) / HBAR;
        let eta = omega_21 - omega_10;
        Self {
            energies,
            omega_10,
            omega_21,
            eta,
            eta_r: eta / omega_10,
            alpha,
        }
    }

    /// Transition frequency ω_ij = (E_i − E_j)/ħ.
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        (self.energies[i] - self.energies[j]) / HBAR
    }
}

fn check_expansion(bias: &BiasState, taylor: &TaylorCoefficients, need: usize) -> Result<()> {
    if taylor.max_order() < need {
        return Err(Error::OrderMismatch {
            have: taylor.max_order(),
            need,
        });
    }
    let x = bias.gap;
    if (taylor.expansion_point - x).abs() > 1e-12 * x.abs() {
        return Err(Error::ExpansionPoint {
            x,
            expected: taylor.expansion_point,
        });
    }
    Ok(())
}

/// Sixth-order spectrum from the α coefficients.
pub fn perturbative_energies(
    bias: &BiasState,
    taylor: &TaylorCoefficients,
    n_max: usize,
) -> Result<QubitSpectrum> {
    check_expansion(bias, taylor, 6)?;
    let n_max = n_max.max(2);
    let hw = HBAR * bias.omega_eff;
    let z4 = bias.x_zpf.powi(4);
    let z6 = bias.x_zpf.powi(6);
    let l4 = taylor.lambda(4);
    let l6 = taylor.lambda(6);
    let alpha = [
        15.0 * l6 * z6 + 3.0 * l4 * z4 + 0.5 * hw + taylor.lambda(0),
        40.0 * l6 * z6 + 6.0 * l4 * z4 + hw,
        30.0 * l6 * z6 + 6.0 * l4 * z4,
        20.0 * l6 * z6,
    ];
    let energies = (0..=n_max)
        .map(|n| {
            let n = n as f64;
            alpha[0] + n * (alpha[1] + n * (alpha[2] + n * alpha[3]))
        })
        .collect();
    Ok(QubitSpectrum::from_energies(energies, alpha))
}

/// First-order spectrum keeping every even Taylor term up to `max_order`,
/// with the diagonal moments taken from a truncated Fock basis.
///
/// For `max_order = 6` this reproduces [`perturbative_energies`]. The
/// `alpha` field is left as the sixth-order truncation.
pub fn perturbative_energies_to_order(
    bias: &BiasState,
    taylor: &TaylorCoefficients,
    n_max: usize,
    max_order: usize,
) -> Result<QubitSpectrum> {
    check_expansion(bias, taylor, max_order.max(4))?;
    let n_max = n_max.max(2);
    let hw = HBAR * bias.omega_eff;
    let mut energies = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut e = hw * (n as f64 + 0.5) + taylor.lambda(0);
        for power in (4..=max_order).step_by(2) {
            let moment = position_moment_diagonal(n, power)?;
            e += taylor.lambda(power) * bias.x_zpf.powi(power as i32) * moment;
        }
        energies.push(e);
    }
    let sixth = perturbative_energies(bias, taylor, n_max)
        .map(|s| s.alpha)
        .unwrap_or([0.0; 4]);
    Ok(QubitSpectrum::from_energies(energies, sixth))
}

/// Closed-form anharmonicity quantities at a bias state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anharmonicity {
    pub eta_r: f64,
    /// Absolute anharmonicity (rad/s).
    pub eta: f64,
    /// r₀ = 2ħω_eff / (x_zpf⁴ V⁗).
    pub r0: f64,
    /// r₁ = V⁽⁶⁾ x_zpf² / (4 V⁗).
    pub r1: f64,
}

pub fn relative_anharmonicity(
    bias: &BiasState,
    potential: &dyn PotentialModel,
) -> Result<Anharmonicity> {
    let x = bias.gap;
    let v4 = potential.derivative(x, 4)?;
    if v4 == 0.0 {
        return Err(Error::Singular(
            "fourth derivative of the potential vanishes",
        ));
    }
    let v6 = potential.derivative(x, 6)?;
    let z = bias.x_zpf;
    let z4 = z.powi(4);
    let r0 = 2.0 * HBAR * bias.omega_eff / (z4 * v4);
    let r1 = v6 * z * z / (4.0 * v4);
    Ok(Anharmonicity {
        eta_r: (1.0 + 2.0 * r1) / (1.0 + r1 + r0),
        eta: z4 * v4 * (1.0 + 2.0 * r1) / (2.0 * HBAR),
        r0,
        r1,
    })
}

/// δ_ω = |1 − ω₁₀/ω_c|.
pub fn relative_frequency_shift(spectrum: &QubitSpectrum, modal: &CantileverModal) -> f64 {
    (1.0 - spectrum.omega_10 / modal.omega_c).abs()
}

/// Bose–Einstein occupancy `1/(exp(ħω/k_BT) − 1)`; zero at T = 0.
pub fn thermal_occupancy(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}
