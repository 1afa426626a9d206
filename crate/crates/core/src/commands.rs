//! Subcommand bodies: each turns a resolved configuration into an output
//! object (SI values plus display-unit twins) and any warnings.

use serde_json::{json, Map, Value};

use crate::cantilever::{bias_state_with, modal_params, snap_in_threshold};
use crate::config::RunConfig;
use crate::cqad::{
    adiabatic_elimination, bus_coupling, cooling_estimate, dispersive_shift, frequency_response,
    linear_grid, qubit_readout_detuning, CqadConfig, ResponseSpectrum,
};
use crate::design::{analyze, DesignAnalysis};
use crate::error::Result;
use crate::explorer::{
    feasible_designs, optimize_length, sweep, LengthSearch, SweepResult, SweepRow,
};
use crate::oracle::grid::{
    grid_eigensolve_unchecked, total_potential, PotentialPart, CONVERGENCE_TOLERANCE,
};
use crate::oracle::multimode::{jc_dispersive_oracle, two_qubit_bus_oracle};
use crate::potential::{taylor_coefficients, LennardJones};
use crate::report::number;
use crate::spectrum::{perturbative_energies, thermal_occupancy};
use crate::units::{angular_to_mhz, ANGSTROM, NANOMETER, PICOMETER};
use crate::validate::{run_validation_suite, SuiteOptions, ValidationReport};

#[derive(Debug, Clone, Default)]
pub struct CommandOutput {
    pub outputs: Value,
    pub warnings: Vec<String>,
    /// Physics-level failure: the command ran but a check or oracle failed.
    pub failed: bool,
}

fn mhz(omega: f64) -> Value {
    number(angular_to_mhz(omega))
}

fn lj(cfg: &RunConfig) -> LennardJones {
    LennardJones::new(cfg.potential)
}

pub fn bias(cfg: &RunConfig) -> Result<CommandOutput> {
    let design = cfg.design();
    let lj = lj(cfg);
    let modal = modal_params(&cfg.geometry, &cfg.material);
    let gap = design.resolve_gap()?;
    let state = bias_state_with(&modal, &lj, gap, design.convention)?;
    let sigma = cfg.potential.sigma;
    // approached from far away, where the tip first snaps to the surface
    let snap_in = snap_in_threshold(&modal, &lj, (gap, 3.0 * sigma))
        .ok()
        .flatten();
    let mut warnings = Vec::new();
    if snap_in.is_none() {
        warnings.push("no snap-in crossing found between the gap and 3 sigma".into());
    }
    let outputs = json!({
        "auto_bias": design.gap.is_none(),
        "convention": state.convention.as_str(),
        "gap_m": number(state.gap),
        "gap_angstrom": number(state.gap / ANGSTROM),
        "gap_over_sigma": number(state.gap / sigma),
        "equilibrium_offset_m": number(state.equilibrium_offset),
        "equilibrium_offset_pm": number(state.equilibrium_offset / PICOMETER),
        "spring_constant_n_per_m": number(modal.spring_constant),
        "lj_stiffness_n_per_m": number(state.lj_stiffness),
        "effective_stiffness_n_per_m": number(state.effective_stiffness),
        "effective_mass_kg": number(modal.effective_mass),
        "omega_c_rad_s": number(modal.omega_c),
        "omega_c_mhz": mhz(modal.omega_c),
        "omega_eff_rad_s": number(state.omega_eff),
        "omega_eff_mhz": mhz(state.omega_eff),
        "x_zpf_m": number(state.x_zpf),
        "x_zpf_pm": number(state.x_zpf / PICOMETER),
        "snap_in_gap_m": snap_in.map_or(Value::Null, number),
        "snap_in_gap_over_sigma": snap_in.map_or(Value::Null, |x| number(x / sigma)),
    });
    Ok(CommandOutput {
        outputs,
        warnings,
        failed: false,
    })
}

fn analysis(cfg: &RunConfig) -> Result<(DesignAnalysis, Vec<f64>)> {
    let design = cfg.design();
    let a = analyze(&design)?;
    let energies = if cfg.spectrum.n_max == a.spectrum.energies.len() - 1 {
        a.spectrum.energies.clone()
    } else {
        let taylor =
            taylor_coefficients(&lj(cfg), a.bias.gap, crate::potential::DEFAULT_TAYLOR_ORDER)?;
        perturbative_energies(&a.bias, &taylor, cfg.spectrum.n_max)?.energies
    };
    Ok((a, energies))
}

pub fn spectrum(cfg: &RunConfig) -> Result<CommandOutput> {
    let (a, energies) = analysis(cfg)?;
    let s = &a.spectrum;
    let e0 = energies[0];
    let levels: Vec<Value> = energies
        .iter()
        .map(|e| mhz((e - e0) / crate::units::HBAR))
        .collect();
    let outputs = json!({
        "gap_m": number(a.bias.gap),
        "gap_angstrom": number(a.bias.gap / ANGSTROM),
        "omega_c_rad_s": number(a.modal.omega_c),
        "omega_c_mhz": mhz(a.modal.omega_c),
        "omega_10_rad_s": number(s.omega_10),
        "omega_10_mhz": mhz(s.omega_10),
        "omega_21_rad_s": number(s.omega_21),
        "omega_21_mhz": mhz(s.omega_21),
        "eta_rad_s": number(s.eta),
        "eta_mhz": mhz(s.eta),
        "eta_r": number(s.eta_r),
        "eta_r_closed_form": number(a.anharmonicity.eta_r),
        "delta_omega": number(a.delta_omega),
        "n_thermal": number(a.n_thermal),
        "temperature_k": number(cfg.spectrum.temperature),
        "x_zpf_m": number(a.bias.x_zpf),
        "x_zpf_pm": number(a.bias.x_zpf / PICOMETER),
        "alpha_j": s.alpha.iter().map(|&v| number(v)).collect::<Vec<_>>(),
        "energies_j": energies.iter().map(|&v| number(v)).collect::<Vec<_>>(),
        "levels_above_ground_mhz": levels,
    });
    Ok(CommandOutput {
        outputs,
        warnings: Vec::new(),
        failed: false,
    })
}

fn row_json(r: &SweepRow) -> Value {
    json!({
        "length_m": number(r.length),
        "length_nm": number(r.length / NANOMETER),
        "gap_m": number(r.gap),
        "gap_over_sigma": number(r.gap_sigma),
        "omega_c_mhz": mhz(r.omega_c),
        "omega_10_mhz": mhz(r.omega_10),
        "eta_r": number(r.eta_r),
        "eta_mhz": mhz(r.eta),
        "delta_omega": number(r.delta_omega),
        "n_thermal": number(r.n_thermal),
        "x_zpf_pm": number(r.x_zpf / PICOMETER),
        "k_eff_n_per_m": number(r.k_eff),
        "flag": r.flag.as_str(),
    })
}

/// Sweep summary plus the raw result for CSV writers.
pub fn sweep_command(cfg: &RunConfig) -> Result<(CommandOutput, SweepResult)> {
    let spec = cfg.sweep_spec();
    let result = sweep(&spec)?;
    let constraints = cfg.sweep.constraints;
    let feasible = feasible_designs(&result, &constraints);
    let flagged = result.rows.iter().filter(|r| !r.is_ok()).count();
    let mut warnings = Vec::new();
    if flagged > 0 {
        warnings.push(format!(
            "{flagged} grid points flagged (contact, snap-in or failed)"
        ));
    }

    let search = LengthSearch {
        min: cfg.sweep.length_min,
        max: cfg.sweep.length_max,
        ..LengthSearch::default()
    };
    let base = crate::design::Design {
        convention: cfg.sweep.convention,
        ..cfg.design()
    };
    let optimum = match optimize_length(&base, &constraints, &search) {
        Ok((length, row)) => {
            json!({"length_nm": number(length / NANOMETER), "row": row_json(&row)})
        }
        Err(e) => {
            warnings.push(format!("length optimization: {e}"));
            Value::Null
        }
    };
    let outputs = json!({
        "convention": spec.convention.as_str(),
        "grid_points": result.rows.len(),
        "length_points": spec.lengths.len(),
        "gap_points": spec.gaps_sigma.len(),
        "flagged": flagged,
        "feasible": feasible.rows.len(),
        "best_feasible": feasible.rows.first().map_or(Value::Null, row_json),
        "optimal_length": optimum,
    });
    Ok((
        CommandOutput {
            outputs,
            warnings,
            failed: false,
        },
        result,
    ))
}

pub struct CqadRun {
    pub output: CommandOutput,
    pub config: CqadConfig,
    pub spectrum: ResponseSpectrum,
}

pub fn cqad(cfg: &RunConfig) -> Result<CqadRun> {
    let (a, _) = analysis(cfg)?;
    let c = cfg.cqad.resolve(a.spectrum.omega_10);
    let readout = adiabatic_elimination(&c)?;
    let delta = cfg
        .cqad
        .detuning
        .unwrap_or_else(|| qubit_readout_detuning(&c, &readout));
    let mut warnings = readout.warnings.clone();

    let chi = dispersive_shift(c.g, a.spectrum.eta, delta);
    let j = bus_coupling(c.g, c.g, delta, delta);
    if let Err(e) = &chi {
        warnings.push(format!("dispersive shift: {e}"));
    }
    if (c.g / delta).abs() > 0.2 {
        warnings.push(format!(
            "g/Delta = {:.3} exceeds the dispersive regime (0.2)",
            (c.g / delta).abs()
        ));
    }
    let n_readout = thermal_occupancy(readout.omega_m_tilde, cfg.spectrum.temperature);
    let cooled = cooling_estimate(n_readout, c.mech_damping, readout.gamma_e)?;

    let grid = linear_grid(
        cfg.cqad.probe_start,
        cfg.cqad.probe_stop,
        cfg.cqad.probe_points,
    );
    let spectrum = frequency_response(&c, &grid)?;
    let (dip_at, dip) = spectrum
        .omega
        .iter()
        .zip(&spectrum.reflection)
        .map(|(&w, r)| (w, r.norm()))
        .fold((f64::NAN, f64::INFINITY), |best, x| {
            if x.1 < best.1 {
                x
            } else {
                best
            }
        });

    let outputs = json!({
        "omega_q_mhz": mhz(c.omega_q),
        "omega_m_mhz": mhz(c.omega_m),
        "delta_r_mhz": mhz(c.delta_r()),
        "kappa_mhz": mhz(c.kappa()),
        "resolved_sideband": c.resolved_sideband(),
        "g_em_rad_s": number(readout.g_em),
        "g_em_hz": number(readout.g_em / std::f64::consts::TAU),
        "big_g_em_rad_s": number(readout.big_g_em),
        "big_g_em_mhz": mhz(readout.big_g_em),
        "mech_detuning_mhz": mhz(readout.delta),
        "alpha": [number(readout.alpha.re), number(readout.alpha.im)],
        "omega_m_tilde_rad_s": number(readout.omega_m_tilde),
        "omega_m_tilde_mhz": mhz(readout.omega_m_tilde),
        "gamma_e_rad_s": number(readout.gamma_e),
        "gamma_e_khz": number(angular_to_mhz(readout.gamma_e) * 1e3),
        "gamma_total_khz": number(angular_to_mhz(readout.gamma_total) * 1e3),
        "qubit_readout_detuning_mhz": mhz(delta),
        "chi_rad_s": chi.as_ref().map_or(Value::Null, |&v| number(v)),
        "chi_khz": chi.as_ref().map_or(Value::Null, |&v| number(angular_to_mhz(v) * 1e3)),
        "bus_j_rad_s": j.as_ref().map_or(Value::Null, |&v| number(v)),
        "bus_j_mhz": j.as_ref().map_or(Value::Null, |&v| mhz(v)),
        "readout_n_thermal": number(n_readout),
        "readout_n_cooled": number(cooled),
        "probe_points": spectrum.len(),
        "reflection_min_abs": number(dip),
        "reflection_min_at_mhz": mhz(dip_at),
    });
    Ok(CqadRun {
        output: CommandOutput {
            outputs,
            warnings,
            failed: false,
        },
        config: c,
        spectrum,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn error_entry(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

/// Grid, Jaynes–Cummings and bus oracles against their closed forms.
/// Oracle errors are recorded in the outputs and mark the run failed.
pub fn oracle(cfg: &RunConfig) -> Result<CommandOutput> {
    let (a, _) = analysis(cfg)?;
    let lj = lj(cfg);
    let mut out = Map::new();
    let mut warnings = Vec::new();
    let mut failed = false;

    let grid = |part: PotentialPart| {
        total_potential(&a.modal, &lj, a.bias.gap).and_then(|p| {
            grid_eigensolve_unchecked(
                &p.with_part(part),
                a.modal.effective_mass,
                a.bias.x_zpf,
                &cfg.oracle.grid,
                3,
            )
        })
    };
    let grid_json = |r: &crate::oracle::grid::OracleResult| {
        json!({
            "omega_10_mhz": mhz(r.transition(1, 0)),
            "eta_mhz": mhz(r.anharmonicity()),
            "omega_10_relative_deviation": number(rel(r.transition(1, 0), a.spectrum.omega_10)),
            "eta_relative_deviation": number(rel(r.anharmonicity(), a.spectrum.eta)),
            "convergence_estimate": number(r.convergence_estimate),
            "converged": r.convergence_estimate <= CONVERGENCE_TOLERANCE,
        })
    };
    match grid(cfg.oracle.part) {
        Ok(r) => {
            if r.convergence_estimate > CONVERGENCE_TOLERANCE {
                failed = true;
                warnings.push(format!(
                    "grid oracle not converged: estimate {:.3e} exceeds {:.0e}",
                    r.convergence_estimate, CONVERGENCE_TOLERANCE
                ));
            }
            out.insert("grid".into(), grid_json(&r));
        }
        Err(e) => {
            failed = true;
            warnings.push(format!("grid oracle: {e}"));
            out.insert("grid".into(), error_entry(e));
        }
    }
    if cfg.oracle.part == PotentialPart::Full {
        // diagnostic only: the part perturbation theory sees at first order
        let even = grid(PotentialPart::EvenPart).map_or_else(error_entry, |r| grid_json(&r));
        out.insert("grid_even_part".into(), even);
    }
    out.insert("perturbative_omega_10_mhz".into(), mhz(a.spectrum.omega_10));
    out.insert("perturbative_eta_mhz".into(), mhz(a.spectrum.eta));

    let c = cfg.cqad.resolve(a.spectrum.omega_10);
    let delta = match cfg.cqad.detuning {
        Some(d) => Ok(d),
        None => adiabatic_elimination(&c).map(|r| qubit_readout_detuning(&c, &r)),
    };
    match delta {
        Ok(delta) => {
            let (w, g, eta) = (c.omega_q, c.g, a.spectrum.eta);
            out.insert("detuning_mhz".into(), mhz(delta));
            out.insert("g_over_delta".into(), number(g / delta));
            // transmon-style ladder, the form the closed-form χ describes
            let jc = (
                jc_dispersive_oracle(
                    [0.0, w, 2.0 * w - eta],
                    w + delta,
                    g,
                    cfg.oracle.photon_truncation,
                ),
                dispersive_shift(g, eta, delta),
            );
            let entry = match jc {
                (Ok(o), Ok(f)) => json!({
                    "oracle_khz": number(angular_to_mhz(o) * 1e3),
                    "formula_khz": number(angular_to_mhz(f) * 1e3),
                    "relative_deviation": number(rel(o, f)),
                }),
                (Err(e), _) | (_, Err(e)) => {
                    failed = true;
                    warnings.push(format!("JC oracle: {e}"));
                    error_entry(e)
                }
            };
            out.insert("dispersive_shift".into(), entry);
            let bus = (
                two_qubit_bus_oracle(w, w, w + delta, g, g),
                bus_coupling(g, g, delta, delta),
            );
            let entry = match bus {
                (Ok(o), Ok(f)) => json!({
                    "oracle_mhz": mhz(o),
                    "formula_mhz": mhz(f.abs()),
                    "relative_deviation": number(rel(o, f.abs())),
                }),
                (Err(e), _) | (_, Err(e)) => {
                    failed = true;
                    warnings.push(format!("bus oracle: {e}"));
                    error_entry(e)
                }
            };
            out.insert("bus_coupling".into(), entry);
        }
        Err(e) => {
            failed = true;
            warnings.push(format!("readout detuning: {e}"));
            out.insert("detuning_mhz".into(), error_entry(e));
        }
    }
    Ok(CommandOutput {
        outputs: Value::Object(out),
        warnings,
        failed,
    })
}

pub fn validate(prefactor: f64) -> (CommandOutput, ValidationReport) {
    let report = run_validation_suite(&SuiteOptions { prefactor });
    let warnings = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            let detail = c
                .detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default();
            format!(
                "FAIL {}: measured {}, expected {}{detail}",
                c.name, c.measured, c.expected
            )
        })
        .collect();
    let output = CommandOutput {
        outputs: serde_json::to_value(&report).expect("validation report serializes"),
        warnings,
        failed: !report.all_passed(),
    };
    (output, report)
}
