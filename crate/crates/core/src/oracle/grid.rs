//! Position-grid eigensolver for the full one-dimensional qubit Hamiltonian
//! `p²/2m + V_q(δx)`.
//!
//! The Laplacian is the 3-point central difference with Dirichlet walls, so
//! the Hamiltonian is a symmetric tridiagonal matrix. The lowest levels are
//! isolated by Sturm-sequence bisection, which needs O(N) work per probe and
//! no dense storage.

use serde::Serialize;

use crate::cantilever::{bias_state, CantileverModal};
use crate::error::{Error, Result};
use crate::potential::PotentialModel;
use crate::units::HBAR;

/// Tolerance on the relative change of E₂ − E₀ under one grid doubling.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-4;
pub const MAX_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Half width of the domain in units of the length scale (x_zpf).
    pub half_width: f64,
    /// Fraction of the distance to a hard wall that stays inside the domain.
    pub right_clip: f64,
    /// Number of grid points including both Dirichlet endpoints.
    pub points: usize,
    /// Domain centre in units of the length scale.
    pub offset: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: 15.0,
            right_clip: 0.9,
            points: 4001,
            offset: 0.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 201 || self.points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid points must be odd and >= 201, got {}",
                self.points
            )));
        }
        if !(self.half_width > 0.0) || !(self.right_clip > 0.0 && self.right_clip < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grid half_width must be > 0 and right_clip in (0, 1), got {} and {}",
                self.half_width, self.right_clip
            )));
        }
        Ok(())
    }

    /// Same domain with twice as many intervals.
    pub fn doubled(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    fn domain(&self, length_scale: f64, walls: (f64, f64)) -> (f64, f64) {
        let centre = self.offset * length_scale;
        let half = self.half_width * length_scale;
        let lo = (centre - half).max(self.right_clip * walls.0);
        let hi = (centre + half).min(self.right_clip * walls.1);
        (lo, hi)
    }
}

/// A one-dimensional potential energy landscape for the grid solver.
///
/// Energies are split into a constant [`reference`](Self::reference) and a
/// relative part so that the large static offsets of the cantilever problem
/// never enter the eigensolve.
pub trait GridPotential {
    fn relative_energy(&self, dx: f64) -> f64;

    fn reference(&self) -> f64 {
        0.0
    }

    /// Positions of hard walls (left, right); infinite when absent.
    fn walls(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn energy(&self, dx: f64) -> f64 {
        self.reference() + self.relative_energy(dx)
    }
}

impl<F: Fn(f64) -> f64> GridPotential for F {
    fn relative_energy(&self, dx: f64) -> f64 {
        self(dx)
    }
}

/// Which part of `V_q` the oracle diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialPart {
    /// The complete landscape, odd terms included.
    #[default]
    Full,
    /// `[V_q(δx) + V_q(−δx)]/2`: only the terms first-order perturbation
    /// theory can see.
    EvenPart,
}

/// `V_q(δx) = ½k(x_c + δx)² + V(x − δx)` for a cantilever biased at gap x.
#[derive(Debug, Clone, Copy)]
pub struct TotalPotential<'a> {
    pub spring_constant: f64,
    pub equilibrium_offset: f64,
    pub gap: f64,
    pub x_zpf: f64,
    pub part: PotentialPart,
    potential: &'a dyn PotentialModel,
    surface_at_gap: f64,
}

pub fn total_potential<'a>(
    modal: &CantileverModal,
    potential: &'a dyn PotentialModel,
    x: f64,
) -> Result<TotalPotential<'a>> {
    let bias = bias_state(modal, potential, x)?;
    Ok(TotalPotential {
        spring_constant: modal.spring_constant,
        equilibrium_offset: bias.equilibrium_offset,
        gap: x,
        x_zpf: bias.x_zpf,
        part: PotentialPart::Full,
        potential,
        surface_at_gap: potential.value(x)?,
    })
}

impl TotalPotential<'_> {
    pub fn with_part(self, part: PotentialPart) -> Self {
        Self { part, ..self }
    }

    fn full_relative(&self, dx: f64) -> f64 {
        let r = self.gap - dx;
        if r <= 0.0 {
            return f64::INFINITY;
        }
        let surface = match self.potential.value(r) {
            Ok(v) => v - self.surface_at_gap,
            Err(_) => return f64::INFINITY,
        };
        0.5 * self.spring_constant * dx * (2.0 * self.equilibrium_offset + dx) + surface
    }
}

impl GridPotential for TotalPotential<'_> {
    fn relative_energy(&self, dx: f64) -> f64 {
        match self.part {
            PotentialPart::Full => self.full_relative(dx),
            PotentialPart::EvenPart => 0.5 * (self.full_relative(dx) + self.full_relative(-dx)),
        }
    }

    fn reference(&self) -> f64 {
        0.5 * self.spring_constant * self.equilibrium_offset.powi(2) + self.surface_at_gap
    }

    fn walls(&self) -> (f64, f64) {
        match self.part {
            PotentialPart::Full => (f64::NEG_INFINITY, self.gap),
            PotentialPart::EvenPart => (-self.gap, self.gap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Lowest eigenvalues (J), ascending.
    pub eigenvalues: Vec<f64>,
    /// Relative change of E₂ − E₀ under one grid doubling.
    pub convergence_estimate: f64,
    pub grid: GridSpec,
}

impl OracleResult {
    /// (E_i − E_j)/ħ.
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        (self.eigenvalues[i] - self.eigenvalues[j]) / HBAR
    }

    /// (E₂ − 2E₁ + E₀)/ħ.
    pub fn anharmonicity(&self) -> f64 {
        self.transition(2, 1) - self.transition(1, 0)
    }
}

/// Lowest `n_levels` eigenvalues of `−(ħ²/2m) d²/dδx² + V(δx)`.
///
/// `length_scale` (normally x_zpf) sets the domain through `grid`.
/// Fails with [`Error::NotConverged`] when doubling the grid moves
/// E₂ − E₀ by more than [`CONVERGENCE_TOLERANCE`].
pub fn grid_eigensolve(
    potential: &dyn GridPotential,
    mass: f64,
    length_scale: f64,
    grid: &GridSpec,
    n_levels: usize,
) -> Result<OracleResult> {
    let result = grid_eigensolve_unchecked(potential, mass, length_scale, grid, n_levels)?;
    if !(result.convergence_estimate <= CONVERGENCE_TOLERANCE) {
        return Err(Error::NotConverged {
            estimate: result.convergence_estimate,
            tolerance: CONVERGENCE_TOLERANCE,
        });
    }
    Ok(result)
}

/// [`grid_eigensolve`] without the convergence gate; the estimate is still
/// reported.
pub fn grid_eigensolve_unchecked(
    potential: &dyn GridPotential,
    mass: f64,
    length_scale: f64,
    grid: &GridSpec,
    n_levels: usize,
) -> Result<OracleResult> {
    grid.validate()?;
    if n_levels == 0 || n_levels > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "n_levels must be in 1..={MAX_LEVELS}, got {n_levels}"
        )));
    }
    if !(mass > 0.0) || !(length_scale > 0.0) {
        return Err(Error::InvalidParameter(
            "mass and length scale must be positive".into(),
        ));
    }
    let solve_levels = n_levels.max(3);
    let coarse = lowest_levels(potential, mass, length_scale, grid, solve_levels)?;
    let fine = lowest_levels(potential, mass, length_scale, &grid.doubled(), solve_levels)?;
    let gap_coarse = coarse[2] - coarse[0];
    let gap_fine = fine[2] - fine[0];
    let convergence_estimate = ((gap_fine - gap_coarse) / gap_fine).abs();
    let reference = potential.reference();
    Ok(OracleResult {
        eigenvalues: coarse[..n_levels].iter().map(|e| e + reference).collect(),
        convergence_estimate,
        grid: *grid,
    })
}

/// Relative eigenvalues (reference not added).
fn lowest_levels(
    potential: &dyn GridPotential,
    mass: f64,
    length_scale: f64,
    grid: &GridSpec,
    n_levels: usize,
) -> Result<Vec<f64>> {
    let (lo, hi) = grid.domain(length_scale, potential.walls());
    if !(hi > lo) {
        return Err(Error::InvalidParameter("empty grid domain".into()));
    }
    let step = (hi - lo) / (grid.points - 1) as f64;
    let hopping = HBAR * HBAR / (2.0 * mass * step * step);

    // interior points only; endpoints carry the Dirichlet condition
    let diagonal: Vec<f64> = (1..grid.points - 1)
        .map(|i| {
            let v = potential.relative_energy(lo + step * i as f64) / hopping;
            2.0 + if v.is_finite() { v.min(1e30) } else { 1e30 }
        })
        .collect();
    let levels = TridiagonalToeplitzOffDiagonal::new(diagonal).lowest(n_levels);
    Ok(levels.into_iter().map(|e| e * hopping).collect())
}

/// Symmetric tridiagonal matrix with off-diagonal entries all equal to −1.
struct TridiagonalToeplitzOffDiagonal {
    diagonal: Vec<f64>,
}

impl TridiagonalToeplitzOffDiagonal {
    fn new(diagonal: Vec<f64>) -> Self {
        Self { diagonal }
    }

    /// Number of eigenvalues strictly below `mu` (Sturm sequence count).
    fn count_below(&self, mu: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diagonal.iter().enumerate() {
            q = if i == 0 { d - mu } else { d - mu - 1.0 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + mu.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lowest(&self, n: usize) -> Vec<f64> {
        let n = n.min(self.diagonal.len());
        let min_d = self.diagonal.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_d = self
            .diagonal
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let (lower, upper) = (min_d - 2.0, max_d + 2.0);
        let mut out = Vec::with_capacity(n);
        let mut floor = lower;
        for k in 0..n {
            let (mut a, mut b) = (floor, upper);
            for _ in 0..2000 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if self.count_below(m) > k {
                    b = m;
                } else {
                    a = m;
                }
            }
            let value = 0.5 * (a + b);
            out.push(value);
            floor = a;
        }
        out
    }
}

/// Golden-section search for a local minimum of `f` inside `[lo, hi]`.
pub fn golden_section_minimum<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantilever::{modal_params, CantileverGeometry, MaterialParams};
    use crate::potential::{LennardJones, ZeroPotential};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // a light, MHz-scale oscillator in SI units
    const MASS: f64 = 3.357e-20;
    const OMEGA: f64 = 3.43e8;

    fn zpf() -> f64 {
        (HBAR / (2.0 * MASS * OMEGA)).sqrt()
    }

    #[test]
    fn sturm_count_small_matrix() {
        // [[2,-1],[-1,2]] has eigenvalues 1 and 3
        let t = TridiagonalToeplitzOffDiagonal::new(vec![2.0, 2.0]);
        assert_eq!(t.count_below(0.5), 0);
        assert_eq!(t.count_below(2.0), 1);
        assert_eq!(t.count_below(3.5), 2);
        let l = t.lowest(2);
        assert!((l[0] - 1.0).abs() < 1e-15 && (l[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_spectrum() {
        let k = MASS * OMEGA * OMEGA;
        let v = move |dx: f64| 0.5 * k * dx * dx;
        let r = grid_eigensolve(&v, MASS, zpf(), &GridSpec::default(), 6).unwrap();
        for (n, e) in r.eigenvalues.iter().enumerate() {
            let exact = HBAR * OMEGA * (n as f64 + 0.5);
            assert!(rel(*e, exact) < 1e-5, "n={n} rel={}", rel(*e, exact));
        }
        for w in r.eigenvalues.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(r.eigenvalues[0] > 0.0);
    }

    #[test]
    fn harmonic_spectrum_fine_grid() {
        let k = MASS * OMEGA * OMEGA;
        let v = move |dx: f64| 0.5 * k * dx * dx;
        let grid = GridSpec {
            half_width: 12.0,
            points: 16001,
            ..Default::default()
        };
        let r = grid_eigensolve(&v, MASS, zpf(), &grid, 4).unwrap();
        for (n, e) in r.eigenvalues.iter().enumerate() {
            let exact = HBAR * OMEGA * (n as f64 + 0.5);
            assert!(rel(*e, exact) < 1e-6);
        }
    }

    #[test]
    fn convergence_is_second_order() {
        let k = MASS * OMEGA * OMEGA;
        let v = move |dx: f64| 0.5 * k * dx * dx;
        let base = GridSpec {
            points: 1001,
            ..Default::default()
        };
        let a = grid_eigensolve_unchecked(&v, MASS, zpf(), &base, 3).unwrap();
        let b = grid_eigensolve_unchecked(&v, MASS, zpf(), &base.doubled(), 3).unwrap();
        let ratio = a.convergence_estimate / b.convergence_estimate;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn small_quartic_first_order_shift() {
        let k = MASS * OMEGA * OMEGA;
        let hw = HBAR * OMEGA;
        let z = zpf();
        let lambda4 = 1e-3 * hw / z.powi(4);
        let harmonic = move |dx: f64| 0.5 * k * dx * dx;
        let quartic = move |dx: f64| 0.5 * k * dx * dx + lambda4 * dx.powi(4);
        let grid = GridSpec::default();
        let e0 = grid_eigensolve(&harmonic, MASS, z, &grid, 3)
            .unwrap()
            .eigenvalues[0];
        let e1 = grid_eigensolve(&quartic, MASS, z, &grid, 3)
            .unwrap()
            .eigenvalues[0];
        // first order 3c plus the second-order ground shift −42c²
        let c = lambda4 * z.powi(4) / hw;
        let expected = (3.0 * c - 42.0 * c * c) * hw;
        assert!(((e1 - e0) - expected).abs() < 1e-3 * expected);
    }

    #[test]
    fn translation_invariance() {
        let k = MASS * OMEGA * OMEGA;
        let z = zpf();
        let shift = 3.0 * z;
        let v = move |dx: f64| 0.5 * k * dx * dx + 1e-3 * HBAR * OMEGA * (dx / z).powi(4);
        let moved = move |dx: f64| v(dx - shift);
        let grid = GridSpec::default();
        let a = grid_eigensolve(&v, MASS, z, &grid, 5).unwrap();
        let b = grid_eigensolve(
            &moved,
            MASS,
            z,
            &GridSpec {
                offset: 3.0,
                ..grid
            },
            5,
        )
        .unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!(rel(*x, *y) < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let v = |dx: f64| dx * dx;
        let g = GridSpec {
            points: 200,
            ..Default::default()
        };
        assert!(grid_eigensolve(&v, 1.0, 1.0, &g, 3).is_err());
        assert!(grid_eigensolve(&v, 1.0, 1.0, &GridSpec::default(), 11).is_err());
    }

    fn headline() -> (CantileverModal, LennardJones) {
        let g = CantileverGeometry::from_nm(495.0, 10.0, 12.0).unwrap();
        (
            modal_params(&g, &MaterialParams::silicon()),
            LennardJones::silicon(),
        )
    }

    #[test]
    fn zero_potential_is_parabola() {
        let (m, _) = headline();
        let vq = total_potential(&m, &ZeroPotential, 1e-9).unwrap();
        assert_eq!(vq.equilibrium_offset, 0.0);
        for dx in [-1e-11, 0.0, 2e-11] {
            assert!((vq.energy(dx) - 0.5 * m.spring_constant * dx * dx).abs() < 1e-40);
        }
    }

    #[test]
    fn total_potential_local_minimum_at_origin() {
        let (m, lj) = headline();
        let vq = total_potential(&m, &lj, lj.bias_point_closed_form()).unwrap();
        let z = vq.x_zpf;
        let xmin = golden_section_minimum(|d| vq.relative_energy(d), -0.3 * z, 0.3 * z, 1e-6 * z);
        assert!(xmin.abs() < 0.1 * z, "min at {} x_zpf", xmin / z);
        // hard wall toward the tip
        assert!(vq.relative_energy(0.999 * vq.gap) > 1e-15);
        assert_eq!(vq.relative_energy(vq.gap), f64::INFINITY);
    }

    #[test]
    fn even_part_is_symmetric() {
        let (m, lj) = headline();
        let vq = total_potential(&m, &lj, lj.bias_point_closed_form())
            .unwrap()
            .with_part(PotentialPart::EvenPart);
        let z = vq.x_zpf;
        for s in [0.5, 2.0, 7.0] {
            let a = vq.relative_energy(s * z);
            let b = vq.relative_energy(-s * z);
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }
}
