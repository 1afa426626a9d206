//! Qubit, mechanical readout resonator and microwave resonator chain.
//!
//! The three modes are a (qubit, treated as an oscillator), b (mechanical
//! readout) and c (microwave, in the frame of the drive). Frequencies and
//! rates are angular.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::oracle::grid::golden_section_minimum;
use crate::units::{ghz_to_angular, khz_to_angular, mhz_to_angular, FEMTOMETER, NANOMETER};

/// κ/ω_m at and above which the sideband is no longer resolved.
pub const RESOLVED_SIDEBAND_LIMIT: f64 = 0.1;
/// G_EM/Δ_r above which adiabatic elimination is flagged.
pub const ELIMINATION_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CqadConfig {
    pub omega_q: f64,
    pub omega_m: f64,
    pub omega_r: f64,
    pub omega_d: f64,
    /// Qubit–mechanics exchange coupling.
    pub g: f64,
    /// γ_i, intrinsic qubit damping.
    pub qubit_damping: f64,
    /// Γ_i, intrinsic mechanical damping.
    pub mech_damping: f64,
    pub kappa_i: f64,
    pub kappa_e: f64,
    /// Intracavity drive photon number.
    pub n_d: f64,
    /// Participation ratio of the mechanical capacitance.
    pub participation: f64,
    /// Vacuum gap of the mechanical capacitor (m).
    pub gap: f64,
    /// Zero-point motion of the mechanical readout resonator (m).
    pub x_zpf: f64,
}

impl Default for CqadConfig {
    /// Illustrative operating point around the 60 MHz qubit: red-sideband
    /// drive, Q = 10⁴ readout mechanics, Q = 10¹⁰ qubit.
    fn default() -> Self {
        let omega_q = mhz_to_angular(60.0);
        let omega_m = mhz_to_angular(67.0);
        let omega_r = ghz_to_angular(5.0);
        Self {
            omega_q,
            omega_m,
            omega_r,
            omega_d: omega_r - omega_m,
            g: mhz_to_angular(1.0),
            qubit_damping: omega_q / 1e10,
            mech_damping: khz_to_angular(6.7),
            kappa_i: mhz_to_angular(0.1),
            kappa_e: mhz_to_angular(1.0),
            n_d: 1e4,
            participation: 0.5,
            gap: 60.0 * NANOMETER,
            x_zpf: 4.0 * FEMTOMETER,
        }
    }
}

impl CqadConfig {
    pub fn kappa(&self) -> f64 {
        self.kappa_i + self.kappa_e
    }

    /// Δ_r = ω_r − ω_d.
    pub fn delta_r(&self) -> f64 {
        self.omega_r - self.omega_d
    }

    pub fn resolved_sideband(&self) -> bool {
        self.kappa() / self.omega_m < RESOLVED_SIDEBAND_LIMIT
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("qubit_damping", self.qubit_damping),
            ("mech_damping", self.mech_damping),
            ("kappa_i", self.kappa_i),
            ("kappa_e", self.kappa_e),
            ("n_d", self.n_d),
            ("g", self.g),
        ] {
            ensure_non_negative(name, v)?;
        }
        ensure_positive("gap", self.gap)?;
        if !(self.participation >= 0.0 && self.participation <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "participation must lie in [0, 1], got {}",
                self.participation
            )));
        }
        Ok(())
    }

    /// G_EM of the current drive.
    pub fn parametric_coupling(&self) -> Result<f64> {
        Ok(parametric_coupling(electromech_coupling(self)?, self.n_d))
    }

    /// Returns a copy whose drive photon number produces `big_g`.
    pub fn with_parametric_coupling(&self, big_g: f64) -> Result<Self> {
        let g_em = electromech_coupling(self)?;
        ensure_positive("g_EM", g_em)?;
        ensure_non_negative("G_EM", big_g)?;
        Ok(Self {
            n_d: (big_g / g_em).powi(2),
            ..*self
        })
    }
}

/// g_EM = q ω_r X_zpf / (2d).
pub fn electromech_coupling(cfg: &CqadConfig) -> Result<f64> {
    ensure_positive("gap", cfg.gap)?;
    Ok(cfg.participation * cfg.omega_r * cfg.x_zpf / (2.0 * cfg.gap))
}

/// G_EM = g_EM √n_d.
pub fn parametric_coupling(g_em: f64, n_d: f64) -> f64 {
    g_em * n_d.max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveReadout {
    pub g_em: f64,
    pub big_g_em: f64,
    /// δ = ω_m − Δ_r.
    pub delta: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub alpha: Complex64,
    pub omega_m_tilde: f64,
    pub gamma_e: f64,
    pub gamma_total: f64,
    pub warnings: Vec<String>,
}

fn serialize_complex<S: serde::Serializer>(
    z: &Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Eliminates the microwave mode, leaving a damped and shifted mechanical
/// readout resonator.
pub fn adiabatic_elimination(cfg: &CqadConfig) -> Result<EffectiveReadout> {
    cfg.validate()?;
    let g_em = electromech_coupling(cfg)?;
    let big_g = parametric_coupling(g_em, cfg.n_d);
    let kappa = cfg.kappa();
    let delta_r = cfg.delta_r();
    let delta = cfg.omega_m - delta_r;
    let alpha = Complex64::new(0.0, big_g) / Complex64::new(-kappa / 2.0, delta);
    let denom = 4.0 * delta * delta + kappa * kappa;
    let (shift, gamma_e) = if big_g == 0.0 {
        (0.0, 0.0)
    } else {
        (
            4.0 * big_g * big_g * delta / denom,
            4.0 * big_g * big_g * kappa / denom,
        )
    };

    let mut warnings = Vec::new();
    if delta_r == 0.0 || big_g / delta_r.abs() > ELIMINATION_LIMIT {
        warnings.push(format!(
            "G_EM/Delta_r = {:.3e} exceeds {ELIMINATION_LIMIT}; adiabatic elimination is unreliable",
            big_g / delta_r.abs()
        ));
    }
    if !cfg.resolved_sideband() {
        warnings.push(format!(
            "kappa/omega_m = {:.3e} is outside the resolved-sideband regime",
            kappa / cfg.omega_m
        ));
    }
    Ok(EffectiveReadout {
        g_em,
        big_g_em: big_g,
        delta,
        alpha,
        omega_m_tilde: cfg.omega_m + shift,
        gamma_e,
        gamma_total: cfg.mech_damping + gamma_e,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSpectrum {
    pub omega: Vec<f64>,
    /// c_out / c_in,e at the external port.
    pub reflection: Vec<Complex64>,
    pub qubit_susc: Vec<f64>,
    pub mech_susc: Vec<f64>,
    pub mw_susc: Vec<f64>,
}

impl ResponseSpectrum {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

fn drift_matrix(cfg: &CqadConfig, big_g: f64) -> Matrix3<Complex64> {
    let c = Complex64::new;
    let ig = c(0.0, cfg.g);
    let ibg = c(0.0, big_g);
    let zero = c(0.0, 0.0);
    Matrix3::new(
        c(cfg.qubit_damping / 2.0, cfg.omega_q),
        ig,
        zero,
        ig,
        c(cfg.mech_damping / 2.0, cfg.omega_m),
        ibg,
        zero,
        ibg,
        c(cfg.kappa() / 2.0, cfg.delta_r()),
    )
}

struct PointResponse {
    reflection: Complex64,
    diag: [f64; 3],
}

fn respond(drift: &Matrix3<Complex64>, kappa_e: f64, omega: f64) -> Result<PointResponse> {
    let m = drift - Matrix3::from_diagonal_element(Complex64::new(0.0, omega));
    let lu = m.lu();
    let mut diag = [0.0; 3];
    let mut s_cc = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve(&e).ok_or(Error::SingularSystem { omega })?;
        if !col.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::SingularSystem { omega });
        }
        diag[j] = col[j].norm();
        if j == 2 {
            s_cc = col[2];
        }
    }
    Ok(PointResponse {
        reflection: Complex64::new(1.0, 0.0) - kappa_e * s_cc,
        diag,
    })
}

/// Steady-state response of the linearized three-mode system to a probe at
/// each `omega` (drive frame for the microwave mode). Points are evaluated
/// in parallel and returned in grid order.
pub fn frequency_response(cfg: &CqadConfig, omega: &[f64]) -> Result<ResponseSpectrum> {
    if omega.is_empty() {
        return Err(Error::InvalidParameter("empty frequency grid".into()));
    }
    cfg.validate()?;
    let drift = drift_matrix(cfg, cfg.parametric_coupling()?);
    let points: Vec<PointResponse> = omega
        .par_iter()
        .map(|&w| respond(&drift, cfg.kappa_e, w))
        .collect::<Result<_>>()?;
    let mut out = ResponseSpectrum {
        omega: omega.to_vec(),
        reflection: Vec::with_capacity(points.len()),
        qubit_susc: Vec::with_capacity(points.len()),
        mech_susc: Vec::with_capacity(points.len()),
        mw_susc: Vec::with_capacity(points.len()),
    };
    for p in points {
        out.reflection.push(p.reflection);
        out.qubit_susc.push(p.diag[0]);
        out.mech_susc.push(p.diag[1]);
        out.mw_susc.push(p.diag[2]);
    }
    Ok(out)
}

/// Evenly spaced grid of `points` frequencies on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linewidth {
    pub center: f64,
    /// Full width at half maximum of |χ_bb|².
    pub fwhm: f64,
}

/// Center and FWHM of the mechanical power susceptibility |S_bb(ω)|²
/// within `center ± span`.
pub fn mechanical_linewidth(
    cfg: &CqadConfig,
    center: f64,
    span: f64,
    points: usize,
) -> Result<Linewidth> {
    let grid = linear_grid(center - span, center + span, points.max(101));
    let spectrum = frequency_response(cfg, &grid)?;
    let drift = drift_matrix(cfg, cfg.parametric_coupling()?);
    let power = |w: f64| respond(&drift, cfg.kappa_e, w).map(|p| p.diag[1].powi(2));

    let (imax, _) = spectrum
        .mech_susc
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    if imax == 0 || imax == grid.len() - 1 {
        return Err(Error::InvalidParameter(
            "mechanical peak lies on the edge of the search window".into(),
        ));
    }
    let peak_at = golden_section_minimum(
        |w| -power(w).unwrap_or(0.0),
        grid[imax - 1],
        grid[imax + 1],
        1e-15 * center.abs().max(1.0),
    );
    let half = 0.5 * power(peak_at)?;
    let excess = |w: f64| power(w).map(|p| p - half);

    let left = (0..imax)
        .rev()
        .find(|&i| spectrum.mech_susc[i].powi(2) < half)
        .ok_or_else(|| Error::InvalidParameter("no half maximum below the peak".into()))?;
    let right = (imax + 1..grid.len())
        .find(|&i| spectrum.mech_susc[i].powi(2) < half)
        .ok_or_else(|| Error::InvalidParameter("no half maximum above the peak".into()))?;
    let rtol = 1e-12;
    let lo = crate::roots::bisect_secant(excess, grid[left], peak_at, rtol)?;
    let hi = crate::roots::bisect_secant(excess, peak_at, grid[right], rtol)?;
    Ok(Linewidth {
        center: peak_at,
        fwhm: hi - lo,
    })
}

/// χ = −g²η / (Δ(Δ + η)) with Δ = ω_cavity − ω_q.
pub fn dispersive_shift(g: f64, eta: f64, delta: f64) -> Result<f64> {
    let scale = delta.abs().max(eta.abs());
    let pole = 1e-12 * scale;
    if delta.abs() <= pole || (delta + eta).abs() <= pole {
        return Err(Error::StraddlingResonance { delta, eta });
    }
    Ok(-g * g * eta / (delta * (delta + eta)))
}

/// J = g₁g₂(1/Δ₁ + 1/Δ₂)/2.
pub fn bus_coupling(g1: f64, g2: f64, delta1: f64, delta2: f64) -> Result<f64> {
    if delta1 == 0.0 || delta2 == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    Ok(0.5 * g1 * g2 * (1.0 / delta1 + 1.0 / delta2))
}

/// Occupancy left after mixing the intrinsic bath with a cold engineered
/// channel, n·Γ_i/(Γ_i + Γ_e). Ignores the back-action floor.
pub fn cooling_estimate(n_th: f64, gamma_i: f64, gamma_e: f64) -> Result<f64> {
    ensure_non_negative("Gamma_i", gamma_i)?;
    if gamma_e == f64::INFINITY {
        return Ok(0.0);
    }
    ensure_non_negative("Gamma_e", gamma_e)?;
    let total = gamma_i + gamma_e;
    if total == 0.0 {
        return Ok(n_th);
    }
    Ok(n_th * gamma_i / total)
}

/// Δ = ω̃_m − ω_q, the qubit–readout detuning seen by the dispersive
/// formulas.
pub fn qubit_readout_detuning(cfg: &CqadConfig, readout: &EffectiveReadout) -> f64 {
    readout.omega_m_tilde - cfg.omega_q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::multimode::{jc_dispersive_oracle, two_qubit_bus_oracle};
    use crate::units::{angular_to_hz, angular_to_mhz, hz_to_angular};
    use proptest::prelude::*;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn electromechanical_rates() {
        let cfg = CqadConfig::default();
        let g_em = electromech_coupling(&cfg).unwrap();
        assert!((angular_to_hz(g_em) - 83.33).abs() < 0.01);
        let doubled = CqadConfig {
            gap: 2.0 * cfg.gap,
            ..cfg
        };
        assert!(rel(electromech_coupling(&doubled).unwrap(), 0.5 * g_em) < 1e-15);
        let none = CqadConfig {
            participation: 0.0,
            ..cfg
        };
        assert_eq!(electromech_coupling(&none).unwrap(), 0.0);
        assert!(electromech_coupling(&CqadConfig { gap: 0.0, ..cfg }).is_err());

        let g83 = hz_to_angular(83.0);
        assert!(rel(parametric_coupling(g83, 1e4), khz_to_angular(8.3)) < 1e-12);
        assert_eq!(parametric_coupling(g83, 1.0), g83);
        assert_eq!(parametric_coupling(g83, 0.0), 0.0);
    }

    fn resonant(big_g: f64, kappa: f64) -> CqadConfig {
        let cfg = CqadConfig {
            kappa_i: 0.0,
            kappa_e: kappa,
            ..CqadConfig::default()
        };
        // exact red sideband, free of rounding in ω_r − ω_d
        let cfg = CqadConfig {
            omega_m: cfg.delta_r(),
            ..cfg
        };
        cfg.with_parametric_coupling(big_g).unwrap()
    }

    #[test]
    fn resonant_purcell_rate() {
        let cfg = resonant(mhz_to_angular(0.1), mhz_to_angular(1.0));
        let r = adiabatic_elimination(&cfg).unwrap();
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.omega_m_tilde, cfg.omega_m);
        let expected = 4.0 * r.big_g_em.powi(2) / cfg.kappa();
        assert!(rel(r.gamma_e, expected) < 1e-12);
        assert!((angular_to_mhz(r.gamma_e) - 0.04).abs() < 1e-9);
        assert!(rel(r.gamma_total, cfg.mech_damping + r.gamma_e) < 1e-15);
    }

    #[test]
    fn undriven_readout_is_bare() {
        let cfg = CqadConfig {
            n_d: 0.0,
            ..CqadConfig::default()
        };
        let r = adiabatic_elimination(&cfg).unwrap();
        assert_eq!(r.omega_m_tilde, cfg.omega_m);
        assert_eq!(r.gamma_e, 0.0);
        assert_eq!(r.gamma_total, cfg.mech_damping);
    }

    #[test]
    fn elimination_warnings() {
        let cfg = CqadConfig {
            kappa_e: mhz_to_angular(10.0),
            ..CqadConfig::default()
        };
        let r = adiabatic_elimination(&cfg).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(!cfg.resolved_sideband());
        let strong = CqadConfig::default()
            .with_parametric_coupling(0.2 * CqadConfig::default().delta_r())
            .unwrap();
        assert!(adiabatic_elimination(&strong).unwrap().warnings[0].contains("G_EM"));
    }

    proptest! {
        #[test]
        fn purcell_rate_symmetry(detune in -5.0f64..5.0, g_mhz in 0.001f64..0.5, k_mhz in 0.1f64..3.0) {
            let base = resonant(mhz_to_angular(g_mhz), mhz_to_angular(k_mhz));
            let shifted = |d: f64| CqadConfig { omega_d: base.omega_d - mhz_to_angular(d), ..base };
            let plus = adiabatic_elimination(&shifted(detune)).unwrap();
            let minus = adiabatic_elimination(&shifted(-detune)).unwrap();
            let peak = adiabatic_elimination(&base).unwrap();
            prop_assert!(rel(plus.gamma_e, minus.gamma_e) < 1e-9);
            prop_assert!(plus.gamma_e <= peak.gamma_e * (1.0 + 1e-12));
            let s_plus = plus.omega_m_tilde - base.omega_m;
            let s_minus = minus.omega_m_tilde - base.omega_m;
            prop_assert!((s_plus + s_minus).abs() <= 1e-9 * s_plus.abs().max(1e-30));
            prop_assert!(rel(plus.alpha.norm_sqr() * base.kappa(), plus.gamma_e) < 1e-12);
        }
    }

    #[test]
    fn uncoupled_response() {
        let cfg = CqadConfig {
            g: 0.0,
            n_d: 0.0,
            ..CqadConfig::default()
        };
        let dr = cfg.delta_r();
        let grid = linear_grid(dr - mhz_to_angular(5.0), dr + mhz_to_angular(5.0), 401);
        let s = frequency_response(&cfg, &grid).unwrap();
        assert_eq!(s.len(), 401);
        let (imin, rmin) = s
            .reflection
            .iter()
            .map(|r| r.norm())
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_eq!(imin, 200);
        let expected = (cfg.kappa_i - cfg.kappa_e).abs() / cfg.kappa();
        assert!((rmin - expected).abs() < 1e-12);
        assert!(s.reflection.iter().all(|r| r.norm() <= 1.0 + 1e-9));

        let lw = mechanical_linewidth(&cfg, cfg.omega_m, 20.0 * cfg.mech_damping, 401).unwrap();
        assert!(rel(lw.fwhm, cfg.mech_damping) < 1e-6);
        assert!((lw.center - cfg.omega_m).abs() < 1e-6 * cfg.mech_damping);
    }

    #[test]
    fn reduced_model_linewidth() {
        let base = CqadConfig {
            g: 0.0,
            ..CqadConfig::default()
        };
        let omega_m = base.omega_m;
        let cfg = CqadConfig {
            omega_d: base.omega_r - 0.5 * omega_m,
            kappa_i: 0.0,
            kappa_e: 0.05 * omega_m,
            ..base
        };
        let cfg = cfg.with_parametric_coupling(0.05 * cfg.delta_r()).unwrap();
        let r = adiabatic_elimination(&cfg).unwrap();
        assert!(r.warnings.is_empty());
        let lw = mechanical_linewidth(&cfg, r.omega_m_tilde, 20.0 * r.gamma_total, 801).unwrap();
        assert!(rel(lw.fwhm, r.gamma_total) < 0.05);
        assert!((lw.center - r.omega_m_tilde).abs() < 0.05 * r.gamma_total);
    }

    #[test]
    fn normal_mode_splitting() {
        let base = CqadConfig::default();
        let cfg = CqadConfig {
            omega_q: base.omega_m,
            n_d: 0.0,
            mech_damping: base.omega_m / 1e6,
            ..base
        };
        let span = 3.0 * cfg.g;
        let grid = linear_grid(cfg.omega_m - span, cfg.omega_m + span, 6001);
        let s = frequency_response(&cfg, &grid).unwrap();
        let peaks: Vec<f64> = (1..grid.len() - 1)
            .filter(|&i| s.mech_susc[i] > s.mech_susc[i - 1] && s.mech_susc[i] > s.mech_susc[i + 1])
            .map(|i| grid[i])
            .collect();
        assert_eq!(peaks.len(), 2);
        let step = grid[1] - grid[0];
        assert!(((peaks[1] - peaks[0]) - 2.0 * cfg.g).abs() < 2.0 * step);
    }

    #[test]
    fn lossless_resonance_is_singular() {
        let cfg = CqadConfig {
            g: 0.0,
            n_d: 0.0,
            qubit_damping: 0.0,
            mech_damping: 0.0,
            kappa_i: 0.0,
            kappa_e: 0.0,
            ..CqadConfig::default()
        };
        let e = frequency_response(&cfg, &[cfg.omega_q]).unwrap_err();
        assert!(matches!(e, Error::SingularSystem { .. }));
        assert!(frequency_response(&cfg, &[]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn passive_reflection_bound(
            g in 0.0f64..3.0, big_g in 0.0f64..2.0, ki in 0.0f64..2.0, ke in 0.0f64..2.0,
            gm in 0.0f64..0.1, gq in 0.0f64..0.1,
        ) {
            let cfg = CqadConfig {
                g: mhz_to_angular(g),
                kappa_i: mhz_to_angular(ki),
                kappa_e: mhz_to_angular(ke) + 1.0,
                mech_damping: mhz_to_angular(gm),
                qubit_damping: mhz_to_angular(gq),
                ..CqadConfig::default()
            }
            .with_parametric_coupling(mhz_to_angular(big_g))
            .unwrap();
            let grid = linear_grid(mhz_to_angular(50.0), mhz_to_angular(80.0), 301);
            let s = frequency_response(&cfg, &grid).unwrap();
            prop_assert!(s.reflection.iter().all(|r| r.norm() <= 1.0 + 1e-9));
        }
    }

    #[test]
    fn response_is_order_stable() {
        let cfg = CqadConfig::default();
        let grid = linear_grid(mhz_to_angular(55.0), mhz_to_angular(75.0), 257);
        let a = frequency_response(&cfg, &grid).unwrap();
        let serial: Vec<Complex64> = grid
            .iter()
            .map(|&w| {
                respond(
                    &drift_matrix(&cfg, cfg.parametric_coupling().unwrap()),
                    cfg.kappa_e,
                    w,
                )
                .unwrap()
                .reflection
            })
            .collect();
        assert_eq!(a.reflection, serial);
    }

    #[test]
    fn dispersive_shift_values() {
        let g = mhz_to_angular(1.0);
        let chi = dispersive_shift(g, mhz_to_angular(5.34), mhz_to_angular(4.3)).unwrap();
        assert!((chi / TWO_PI / 1e6 + 0.1288).abs() < 1e-4);
        assert!(chi < 0.0);
        assert_eq!(dispersive_shift(0.0, 1.0, 2.0).unwrap(), 0.0);
        assert!(matches!(
            dispersive_shift(g, 1.0, 0.0),
            Err(Error::StraddlingResonance { .. })
        ));
        assert!(matches!(
            dispersive_shift(g, 1.0, -1.0),
            Err(Error::StraddlingResonance { .. })
        ));
    }

    #[test]
    fn dispersive_shift_against_oracle() {
        let (wq, eta) = (mhz_to_angular(60.0), mhz_to_angular(5.34));
        for (delta_mhz, ratio) in [(10.0, 0.15), (20.0, 0.05), (8.0, 0.1)] {
            let delta = mhz_to_angular(delta_mhz);
            let g = ratio * delta;
            let formula = dispersive_shift(g, eta, delta).unwrap();
            let oracle =
                jc_dispersive_oracle([0.0, wq, 2.0 * wq - eta], wq + delta, g, 15).unwrap();
            assert!(rel(oracle, formula) < 0.10, "Δ={delta_mhz} g/Δ={ratio}");
        }
    }

    #[test]
    fn bus_coupling_values() {
        let g = mhz_to_angular(1.0);
        let j = bus_coupling(g, g, mhz_to_angular(4.35), mhz_to_angular(4.35)).unwrap();
        assert!((angular_to_mhz(j) - 0.23).abs() < 0.01);
        let j = bus_coupling(g, g, mhz_to_angular(4.0), mhz_to_angular(5.0)).unwrap();
        assert!((angular_to_mhz(j) - 0.225).abs() < 1e-12);
        assert_eq!(bus_coupling(0.0, g, 1.0, 1.0).unwrap(), 0.0);
        assert!(matches!(
            bus_coupling(g, g, 0.0, 1.0),
            Err(Error::ZeroDetuning)
        ));
    }

    #[test]
    fn bus_coupling_against_oracle() {
        let w = mhz_to_angular(60.0);
        for (d1, d2) in [(10.0, 10.0), (10.0, 12.0), (15.0, 20.0)] {
            let (d1, d2) = (mhz_to_angular(d1), mhz_to_angular(d2));
            let g = 0.1 * d1.min(d2);
            let formula = bus_coupling(g, g, d1, d2).unwrap();
            let oracle = two_qubit_bus_oracle(w, w + d1 - d2, w + d1, g, g).unwrap();
            assert!(rel(oracle, formula) < 0.10);
        }
    }

    #[test]
    fn cooling_mixing() {
        assert_eq!(cooling_estimate(2.3, 1.0, 0.0).unwrap(), 2.3);
        assert!((cooling_estimate(2.3, 1.0, 9.0).unwrap() - 0.23).abs() < 1e-15);
        assert_eq!(cooling_estimate(2.3, 1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(cooling_estimate(2.3, -1.0, 0.0).is_err());
    }

    #[test]
    fn quoted_detuning_convention() {
        // ω̃_m ≈ 2π × 64.35 MHz against the 60.0015 MHz qubit
        let cfg = CqadConfig {
            omega_q: mhz_to_angular(60.0015),
            omega_m: mhz_to_angular(64.35),
            n_d: 0.0,
            ..CqadConfig::default()
        };
        let r = adiabatic_elimination(&cfg).unwrap();
        let delta = qubit_readout_detuning(&cfg, &r);
        let g = mhz_to_angular(1.0);
        let j = bus_coupling(g, g, delta, delta).unwrap();
        assert!((angular_to_mhz(j) - 0.23).abs() < 0.01);
        let chi = dispersive_shift(g, mhz_to_angular(5.366), delta).unwrap();
        let khz = chi.abs() / TWO_PI / 1e3;
        assert!((110.0..=170.0).contains(&khz));
    }
}
