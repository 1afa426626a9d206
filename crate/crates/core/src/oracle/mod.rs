//! Independent numerical references used to check the closed-form and
//! perturbative results.

pub mod fock;
pub mod grid;
pub mod multimode;
