//! Acceptance criteria for the toolkit, one test per criterion. Each prints
//! a single PASS/FAIL line with the measured values.

use std::io::Write;
use std::time::Instant;

use afq::cantilever::{bias_state, modal_params, CantileverGeometry, MaterialParams};
use afq::cqad::{
    adiabatic_elimination, bus_coupling, dispersive_shift, mechanical_linewidth, CqadConfig,
};
use afq::design::{analyze, Design, DesignAnalysis};
use afq::explorer::{sweep, write_csv, SweepSpec};
use afq::oracle::fock::fock_matrix_element;
use afq::oracle::grid::{grid_eigensolve, grid_eigensolve_unchecked, total_potential, GridSpec};
use afq::oracle::multimode::{jc_dispersive_oracle, two_qubit_bus_oracle};
use afq::potential::{find_bias_point, LennardJones, LennardJonesParams};
use afq::spectrum::thermal_occupancy;
use afq::units::{angular_to_mhz, mhz_to_angular, MILLIKELVIN, PICOMETER};
use afq::Error;

struct Criterion {
    id: u32,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Self {
            id,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool, measured: String) {
        let line = format!("{what} = {measured}");
        if ok {
            self.notes.push(line);
        } else {
            self.failures.push(line);
        }
    }

    fn within(&mut self, what: &str, v: f64, lo: f64, hi: f64) {
        self.check(
            what,
            (lo..=hi).contains(&v),
            format!("{v:.6} (want [{lo}, {hi}])"),
        );
    }

    fn at_most(&mut self, what: &str, v: f64, bound: f64) {
        self.check(what, v <= bound, format!("{v:.6e} (want <= {bound:e})"));
    }

    fn finish(self) {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut parts = self.failures.clone();
        parts.extend(self.notes);
        // straight to stdout so the line survives libtest output capture
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "\n{status} criterion {}: {}",
            self.id,
            parts.join("; ")
        );
        drop(out);
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.id,
            self.failures
        );
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn at_bias_point(length_nm: f64, width_nm: f64, thickness_nm: f64) -> DesignAnalysis {
    analyze(&Design::silicon_nm(length_nm, width_nm, thickness_nm)).expect("design analyzes")
}

#[test]
fn criterion_1_headline_design() {
    let mut c = Criterion::new(1);
    let start = Instant::now();
    let a = at_bias_point(495.0, 10.0, 12.0);
    let elapsed = start.elapsed().as_secs_f64();
    c.within(
        "omega_c/2pi (MHz)",
        angular_to_mhz(a.modal.omega_c),
        54.0,
        56.0,
    );
    c.within("x_zpf (pm)", a.bias.x_zpf / PICOMETER, 2.12, 2.16);
    c.within(
        "omega_10/2pi (MHz)",
        angular_to_mhz(a.spectrum.omega_10),
        59.0,
        61.0,
    );
    c.within("eta_r", a.spectrum.eta_r, 0.086, 0.092);
    c.within("eta/2pi (MHz)", angular_to_mhz(a.spectrum.eta), 5.0, 5.5);
    c.at_most("runtime (s)", elapsed, 1.0);
    c.finish();
}

#[test]
fn criterion_2_bias_point() {
    let mut c = Criterion::new(2);
    let lj = LennardJones::new(LennardJonesParams::silicon());
    let sigma = lj.params.sigma;
    let exact = (26.0f64 / 7.0).powf(1.0 / 6.0) * sigma;
    let x0 = find_bias_point(&lj, lj.default_bias_bracket()).expect("bias point");
    c.at_most("relative error vs (26/7)^(1/6) sigma", rel(x0, exact), 1e-9);
    c.within("x0/sigma", x0 / sigma, 1.244_45, 1.244_47);
    c.finish();
}

#[test]
fn criterion_3_grid_oracle() {
    let mut c = Criterion::new(3);
    let a = at_bias_point(495.0, 10.0, 12.0);
    let lj = LennardJones::silicon();
    let start = Instant::now();
    let potential = total_potential(&a.modal, &lj, a.bias.gap).unwrap();
    let solve = |gated: bool| {
        let f = if gated {
            grid_eigensolve
        } else {
            grid_eigensolve_unchecked
        };
        f(
            &potential,
            a.modal.effective_mass,
            a.bias.x_zpf,
            &GridSpec::default(),
            3,
        )
    };
    let result = solve(true);
    let elapsed = start.elapsed().as_secs_f64();
    if let Err(e @ Error::NotConverged { .. }) = &result {
        c.check("grid eigensolve", false, e.to_string());
    }
    // a non-converged solve still reports how far the levels are off
    let result = match result {
        Err(Error::NotConverged { .. }) => solve(false),
        other => other,
    };
    match result {
        Ok(r) => {
            c.at_most(
                "omega_10 relative deviation",
                rel(r.transition(1, 0), a.spectrum.omega_10),
                0.01,
            );
            c.at_most(
                "eta relative deviation",
                rel(r.anharmonicity(), a.spectrum.eta),
                0.03,
            );
            c.at_most("convergence estimate", r.convergence_estimate, 1e-4);
        }
        Err(e) => c.check("grid eigensolve", false, e.to_string()),
    }
    c.at_most("runtime (s)", elapsed, 10.0);
    c.finish();
}

#[test]
fn criterion_4_thermal_occupancy() {
    let mut c = Criterion::new(4);
    let t = 8.0 * MILLIKELVIN;
    c.within(
        "n_th(60 MHz)",
        thermal_occupancy(mhz_to_angular(60.0), t),
        2.25,
        2.35,
    );
    c.within(
        "n_th(115 MHz)",
        thermal_occupancy(mhz_to_angular(115.0), t),
        0.96,
        1.06,
    );
    c.finish();
}

#[test]
fn criterion_5_alternative_designs() {
    let mut c = Criterion::new(5);
    let a = at_bias_point(345.0, 10.0, 12.0);
    c.check(
        "L=345 omega_10/2pi (MHz)",
        angular_to_mhz(a.spectrum.omega_10) >= 115.0,
        format!("{:.4} (want >= 115)", angular_to_mhz(a.spectrum.omega_10)),
    );
    c.at_most("L=345 n_th", a.n_thermal, 1.0);
    c.within("L=345 eta_r", a.spectrum.eta_r, 0.018, 0.028);
    let b = at_bias_point(457.0, 18.0, 24.0);
    c.at_most("(18,24) L=457 n_th", b.n_thermal, 1.0);
    c.at_most("(18,24) L=457 eta_r", b.spectrum.eta_r, 0.0015);
    c.finish();
}

#[test]
fn criterion_6_effective_readout() {
    let mut c = Criterion::new(6);
    let base = CqadConfig {
        g: 0.0,
        kappa_i: 0.0,
        ..CqadConfig::default()
    };
    // δ = 0: drive detuned by exactly the mechanical frequency
    let resonant = CqadConfig {
        omega_d: base.omega_r - base.omega_m,
        ..base
    }
    .with_parametric_coupling(mhz_to_angular(0.1))
    .unwrap();
    let r = adiabatic_elimination(&resonant).unwrap();
    let formula = 4.0 * r.big_g_em.powi(2) / resonant.kappa();
    c.at_most(
        "Gamma_e vs 4G^2/kappa at delta=0",
        rel(r.gamma_e, formula),
        1e-12,
    );

    // G/Δ_r = 0.05 and κ/ω_m = 0.05, with Δ_r = ω_m/2 so the mechanics sits
    // well inside the weak-coupling window of the cavity
    let cfg = CqadConfig {
        omega_d: base.omega_r - 0.5 * base.omega_m,
        kappa_e: 0.05 * base.omega_m,
        ..base
    };
    let cfg = cfg.with_parametric_coupling(0.05 * cfg.delta_r()).unwrap();
    let r = adiabatic_elimination(&cfg).unwrap();
    let lw = mechanical_linewidth(&cfg, r.omega_m_tilde, 20.0 * r.gamma_total, 801).unwrap();
    c.at_most(
        "3-mode FWHM vs Gamma_i + Gamma_e",
        rel(lw.fwhm, r.gamma_total),
        0.05,
    );
    c.finish();
}

#[test]
fn criterion_7_dispersive_physics() {
    let mut c = Criterion::new(7);
    let g = mhz_to_angular(1.0);
    let j = bus_coupling(g, g, mhz_to_angular(4.35), mhz_to_angular(4.35)).unwrap();
    c.within("degenerate J/2pi (MHz)", angular_to_mhz(j), 0.22, 0.24);

    let w = mhz_to_angular(60.0);
    let delta = mhz_to_angular(10.0);
    let mut worst_bus: f64 = 0.0;
    for ratio in [0.02, 0.05, 0.1] {
        let gb = ratio * delta;
        let oracle = two_qubit_bus_oracle(w, w, w + delta, gb, gb).unwrap();
        let formula = bus_coupling(gb, gb, delta, delta).unwrap();
        worst_bus = worst_bus.max(rel(oracle, formula));
    }
    c.at_most("bus oracle vs formula, g/Delta <= 0.1", worst_bus, 0.10);

    let eta = mhz_to_angular(5.366);
    let mut worst_chi: f64 = 0.0;
    for ratio in [0.05, 0.1, 0.15] {
        let gc = ratio * delta;
        let oracle = jc_dispersive_oracle([0.0, w, 2.0 * w - eta], w + delta, gc, 20).unwrap();
        let formula = dispersive_shift(gc, eta, delta).unwrap();
        worst_chi = worst_chi.max(rel(oracle, formula));
    }
    c.at_most("JC oracle vs chi formula, g/Delta <= 0.15", worst_chi, 0.10);

    // readout pulled to about 64.35 MHz against a 60.0 MHz qubit
    let chi = dispersive_shift(g, eta, mhz_to_angular(64.35 - 60.0015)).unwrap();
    c.within(
        "readout-neighbourhood |chi|/2pi (kHz)",
        angular_to_mhz(chi).abs() * 1e3,
        110.0,
        170.0,
    );
    c.finish();
}

#[test]
fn criterion_8_property_sweep() {
    let mut c = Criterion::new(8);
    let spec = SweepSpec::anharmonicity_map(100, 100);
    let start = Instant::now();
    let first = sweep(&spec).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    c.at_most("100x100 runtime (s)", elapsed, 30.0);

    let x0 = LennardJones::new(spec.potential).bias_point_closed_form() / spec.potential.sigma;
    let nearest = (0..spec.gaps_sigma.len())
        .min_by(|&i, &j| {
            (spec.gaps_sigma[i] - x0)
                .abs()
                .total_cmp(&(spec.gaps_sigma[j] - x0).abs())
        })
        .unwrap();
    let n_gap = spec.gaps_sigma.len();
    let misplaced = first
        .rows
        .chunks(n_gap)
        .filter(|col| {
            let best = (0..n_gap)
                .filter(|&i| col[i].is_ok())
                .max_by(|&i, &j| col[i].eta_r.total_cmp(&col[j].eta_r));
            best != Some(nearest)
        })
        .count();
    c.check(
        "lengths whose eta_r argmax is off x0",
        misplaced == 0,
        misplaced.to_string(),
    );

    let column: Vec<f64> = first
        .rows
        .chunks(n_gap)
        .map(|col| col[nearest].eta_r)
        .collect();
    let monotone = column.windows(2).all(|w| w[1] > w[0]);
    c.check(
        "eta_r increasing in L at x0",
        monotone,
        monotone.to_string(),
    );

    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&first, &mut a).unwrap();
    write_csv(&sweep(&spec).unwrap(), &mut b).unwrap();
    c.check(
        "CSV byte-identical across runs",
        a == b,
        format!("{} bytes", a.len()),
    );
    c.finish();
}

#[test]
fn criterion_9_matrix_elements() {
    let mut c = Criterion::new(9);
    let mut worst: f64 = 0.0;
    for n in 0..=5usize {
        let x = n as f64;
        let p4 = 6.0 * x * x + 6.0 * x + 3.0;
        let p6 = 20.0 * x.powi(3) + 30.0 * x * x + 40.0 * x + 15.0;
        worst = worst.max((fock_matrix_element(n, 4, 20).unwrap() - p4).abs());
        worst = worst.max((fock_matrix_element(n, 6, 20).unwrap() - p6).abs());
    }
    c.at_most("max |<n|x^p|n> - closed form|", worst, 1e-9);
    c.finish();
}

/// Cross-check of the modal chain without the design layer: the bias-state
/// frequency at x₀ equals ω_c because the surface curvature vanishes there.
#[test]
fn modal_chain_consistency() {
    let geometry = CantileverGeometry::from_nm(495.0, 10.0, 12.0).unwrap();
    let modal = modal_params(&geometry, &MaterialParams::silicon());
    let lj = LennardJones::silicon();
    let state = bias_state(&modal, &lj, lj.bias_point_closed_form()).unwrap();
    assert!(rel(state.omega_eff, modal.omega_c) < 1e-9);
}
