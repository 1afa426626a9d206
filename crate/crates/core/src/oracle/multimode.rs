//! Brute-force diagonalizations of the few-mode readout and bus
//! Hamiltonians. All frequencies are angular (rad/s) and energies are
//! quoted as E/ħ.

use nalgebra::{DMatrix, Matrix2, Matrix3, SymmetricEigen};

use crate::error::{Error, Result};

/// Minimum squared overlap between a dressed state and the bare product
/// state it is labeled with. At |Δ| = 2g the |e,1⟩ overlap of a
/// harmonic-ladder qubit is 0.79.
pub const LABEL_OVERLAP_MIN: f64 = 0.8;

/// Dispersive shift measured on a three-level ladder coupled to a single
/// truncated bosonic mode by `g (σ⁺ c + σ⁻ c†)` with harmonic matrix
/// elements (√2 g between the first and second excited levels).
///
/// `qubit_levels` are E/ħ of |g⟩, |e⟩, |f⟩. Returns
/// `½[(E_e1 − E_e0) − (E_g1 − E_g0)]`, where the dressed states are
/// labeled by maximum overlap with the bare product states.
pub fn jc_dispersive_oracle(
    qubit_levels: [f64; 3],
    omega_cavity: f64,
    g: f64,
    photon_truncation: usize,
) -> Result<f64> {
    if photon_truncation < 10 {
        return Err(Error::InvalidParameter(format!(
            "photon truncation must be >= 10, got {photon_truncation}"
        )));
    }
    if qubit_levels.iter().any(|l| !l.is_finite()) || !omega_cavity.is_finite() {
        return Err(Error::InvalidParameter("non-finite frequency".into()));
    }
    let photons = photon_truncation;
    let dim = 3 * photons;
    let index = |q: usize, n: usize| q * photons + n;

    // rotating frame of the cavity: subtract ω_c × (total excitations)
    let frame = |q: usize, n: usize| omega_cavity * (q + n) as f64;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for q in 0..3 {
        for n in 0..photons {
            h[(index(q, n), index(q, n))] =
                qubit_levels[q] - qubit_levels[0] + omega_cavity * n as f64 - frame(q, n);
        }
    }
    for q in 0..2 {
        for n in 0..photons - 1 {
            let c = g * ((q + 1) as f64).sqrt() * ((n + 1) as f64).sqrt();
            h[(index(q + 1, n), index(q, n + 1))] = c;
            h[(index(q, n + 1), index(q + 1, n))] = c;
        }
    }
    let eig = SymmetricEigen::new(h);

    let mut used = Vec::with_capacity(4);
    let mut dressed = |q: usize, n: usize, name: &'static str| -> Result<f64> {
        let row = index(q, n);
        let (best, overlap) = (0..dim)
            .map(|j| (j, eig.eigenvectors[(row, j)].powi(2)))
            .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if overlap < LABEL_OVERLAP_MIN || used.contains(&best) {
            return Err(Error::LabelingAmbiguity {
                state: name,
                overlap,
            });
        }
        used.push(best);
        Ok(eig.eigenvalues[best] + frame(q, n))
    };
    let g0 = dressed(0, 0, "g,0")?;
    let g1 = dressed(0, 1, "g,1")?;
    let e0 = dressed(1, 0, "e,0")?;
    let e1 = dressed(1, 1, "e,1")?;
    Ok(0.5 * ((e1 - e0) - (g1 - g0)))
}

fn bus_hamiltonian(omega_q1: f64, omega_q2: f64, omega_bus: f64, g1: f64, g2: f64) -> Matrix3<f64> {
    Matrix3::new(
        omega_q1, 0.0, g1, //
        0.0, omega_q2, g2, //
        g1, g2, omega_bus,
    )
}

/// Eigenpairs of the single-excitation sector; returns the two
/// qubit-like states (smallest bus weight) as (energy, vector).
fn qubit_like_states(h: Matrix3<f64>) -> [(f64, [f64; 3]); 2] {
    let eig = SymmetricEigen::new(h);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| {
        eig.eigenvectors[(2, a)]
            .abs()
            .partial_cmp(&eig.eigenvectors[(2, b)].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let pick = |j: usize| {
        let v = eig.eigenvectors.column(j);
        (eig.eigenvalues[j], [v[0], v[1], v[2]])
    };
    let mut states = [pick(order[0]), pick(order[1])];
    if states[0].0 > states[1].0 {
        states.swap(0, 1);
    }
    states
}

/// Bus-mediated qubit–qubit exchange coupling |J|.
///
/// Diagonalizes the single-excitation sector of two two-level qubits
/// coupled to one bus mode and builds the exact effective Hamiltonian on
/// the qubit subspace (symmetric orthogonalization of the projected
/// qubit-like eigenvectors). |J| is its off-diagonal element; for
/// degenerate qubits it equals half the avoided-crossing splitting.
pub fn two_qubit_bus_oracle(
    omega_q1: f64,
    omega_q2: f64,
    omega_bus: f64,
    g1: f64,
    g2: f64,
) -> Result<f64> {
    let states = qubit_like_states(bus_hamiltonian(omega_q1, omega_q2, omega_bus, g1, g2));
    // columns: projections of the two dressed qubit states onto |q1>, |q2>
    let b = Matrix2::new(
        states[0].1[0],
        states[1].1[0],
        states[0].1[1],
        states[1].1[1],
    );
    let svd = b.svd(true, true);
    let weight = svd.singular_values.min();
    if weight * weight < LABEL_OVERLAP_MIN {
        return Err(Error::LabelingAmbiguity {
            state: "qubit subspace",
            overlap: weight * weight,
        });
    }
    let u = svd.u.unwrap() * svd.v_t.unwrap();
    let energies = Matrix2::new(states[0].0, 0.0, 0.0, states[1].0);
    let h_eff = u * energies * u.transpose();
    Ok(h_eff[(0, 1)].abs())
}

/// Half the minimum splitting of the two qubit-like levels while qubit 1
/// is swept across `omega_q2 ± span`.
///
/// Returns the half-splitting and the qubit-1 frequency where it occurs.
pub fn avoided_crossing_half_splitting(
    omega_q2: f64,
    omega_bus: f64,
    g1: f64,
    g2: f64,
    span: f64,
    points: usize,
) -> Result<(f64, f64)> {
    let points = points.max(11);
    let splitting = |w1: f64| {
        let s = qubit_like_states(bus_hamiltonian(w1, omega_q2, omega_bus, g1, g2));
        s[1].0 - s[0].0
    };
    let step = 2.0 * span / (points - 1) as f64;
    let sweep: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let w = omega_q2 - span + step * i as f64;
            (w, splitting(w))
        })
        .collect();
    let (imin, _) = sweep
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .unwrap();
    if imin == 0 || imin == points - 1 {
        return Err(Error::NoAvoidedCrossing);
    }
    let w = super::grid::golden_section_minimum(
        splitting,
        sweep[imin - 1].0,
        sweep[imin + 1].0,
        1e-12 * omega_q2.abs().max(1.0),
    );
    Ok((0.5 * splitting(w), w))
}
