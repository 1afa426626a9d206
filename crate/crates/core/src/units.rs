//! Physical constants and display-unit conversions.
//!
//! Everything inside the crate is strict SI (J, m, kg, s, rad/s). The helpers
//! here are used only at the I/O boundary.

use std::f64::consts::PI;

/// Reduced Planck constant (J·s), CODATA 2018 exact.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge (C), exact; converts eV to J.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

pub const NANOMETER: f64 = 1e-9;
pub const ANGSTROM: f64 = 1e-10;
pub const PICOMETER: f64 = 1e-12;
pub const FEMTOMETER: f64 = 1e-15;
pub const GIGAPASCAL: f64 = 1e9;
pub const MILLIKELVIN: f64 = 1e-3;

pub fn mev_to_joule(mev: f64) -> f64 {
    mev * 1e-3 * ELECTRON_VOLT
}

pub fn joule_to_mev(joule: f64) -> f64 {
    joule / (1e-3 * ELECTRON_VOLT)
}

/// Cyclic frequency in Hz to angular frequency.
pub fn hz_to_angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

pub fn mhz_to_angular(mhz: f64) -> f64 {
    hz_to_angular(mhz * 1e6)
}

pub fn angular_to_mhz(omega: f64) -> f64 {
    angular_to_hz(omega) * 1e-6
}

pub fn khz_to_angular(khz: f64) -> f64 {
    hz_to_angular(khz * 1e3)
}

pub fn ghz_to_angular(ghz: f64) -> f64 {
    hz_to_angular(ghz * 1e9)
}
