//! Ladder-operator matrices in a truncated Fock basis.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Annihilation operator `a` on `dim` Fock states: `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    a
}

/// Dimensionless position `a + a†`.
pub fn position(dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    &a + a.transpose()
}

/// ⟨n|(a† + a)^power|n⟩ evaluated by repeated matrix multiplication in a
/// basis of `truncation` states.
///
/// The truncation must leave room above `n` so the result is exact:
/// `truncation ≥ n + power + 5`.
pub fn fock_matrix_element(n: usize, power: usize, truncation: usize) -> Result<f64> {
    if !power.is_multiple_of(2) {
        return Err(Error::OddPower(power));
    }
    let need = n + power + 5;
    if truncation < need {
        return Err(Error::TruncationTooSmall {
            level: n,
            power,
            truncation,
            need,
        });
    }
    let x = position(truncation);
    let mut acc = DMatrix::<f64>::identity(truncation, truncation);
    for _ in 0..power {
        acc = &acc * &x;
    }
    Ok(acc[(n, n)])
}

/// Same as [`fock_matrix_element`] with the smallest valid truncation.
pub fn position_moment_diagonal(n: usize, power: usize) -> Result<f64> {
    fock_matrix_element(n, power, n + power + 5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutator_below_cutoff() {
        let a = annihilation(8);
        let c = &a * a.transpose() - a.transpose() * &a;
        for i in 0..7 {
            assert!((c[(i, i)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn low_moments() {
        assert_eq!(fock_matrix_element(0, 2, 10).unwrap(), 1.0);
        assert!((fock_matrix_element(0, 4, 10).unwrap() - 3.0).abs() < 1e-12);
        assert!((fock_matrix_element(1, 6, 12).unwrap() - 105.0).abs() < 1e-9);
    }

    #[test]
    fn quartic_and_sextic_polynomials() {
        for n in 0..=5usize {
            let nf = n as f64;
            let p4 = 6.0 * nf * nf + 6.0 * nf + 3.0;
            let p6 = 20.0 * nf.powi(3) + 30.0 * nf * nf + 40.0 * nf + 15.0;
            assert!((position_moment_diagonal(n, 4).unwrap() - p4).abs() < 1e-9);
            assert!((position_moment_diagonal(n, 6).unwrap() - p6).abs() < 1e-9);
        }
    }

    #[test]
    fn second_moment_is_two_n_plus_one() {
        for n in 0..10 {
            let m = position_moment_diagonal(n, 2).unwrap();
            assert!((m - (2 * n + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_checked() {
        let e = fock_matrix_element(2, 4, 10).unwrap_err();
        assert!(matches!(e, Error::TruncationTooSmall { need: 11, .. }));
        assert!(matches!(
            fock_matrix_element(0, 3, 20),
            Err(Error::OddPower(3))
        ));
    }
}
