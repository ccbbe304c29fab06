//! CODATA 2018 constants and the unit conversions built from them.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Planck constant, J s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability, N/A^2.
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Hartree energy in cm^-1.
pub const HARTREE_CM: f64 = 219_474.631_363_20;
/// Atomic unit of angular frequency, E_h / hbar, in rad/s.
pub const ATOMIC_FREQUENCY: f64 = 4.134_137_333_518_2e16;

/// One atomic unit of polarizability, 4 pi eps0 a0^3, in C m^2 / V.
pub const POLARIZABILITY_AU: f64 = 4.0 * PI * EPSILON_0 * BOHR_RADIUS * BOHR_RADIUS * BOHR_RADIUS;

/// Frequency shift in Hz per (a.u. of polarizability) per (W/m^2) of
/// intensity, magnitude of `-(1/4) alpha |E|^2 / h` with `|E|^2 = 2I/(eps0 c)`.
pub const SHIFT_HZ_PER_AU_PER_W_M2: f64 = POLARIZABILITY_AU / (2.0 * EPSILON_0 * C * H);

/// Wavenumber in cm^-1 to angular frequency in rad/s.
pub fn wavenumber_to_angular(cm: f64) -> f64 {
    2.0 * PI * C * 100.0 * cm
}

/// Vacuum wavelength in m to angular frequency in rad/s.
pub fn wavelength_to_angular(lambda: f64) -> f64 {
    2.0 * PI * C / lambda
}

pub fn angular_to_wavelength(omega: f64) -> f64 {
    2.0 * PI * C / omega
}

/// Angular frequency in rad/s to atomic units.
pub fn angular_to_atomic(omega: f64) -> f64 {
    omega / ATOMIC_FREQUENCY
}

/// Squared field amplitude |E|^2 (V^2/m^2) of a traveling wave of intensity `intensity` (W/m^2).
pub fn intensity_to_field_squared(intensity: f64) -> f64 {
    2.0 * intensity / (EPSILON_0 * C)
}

/// Light shift in Hz of a level with polarizability `alpha_au` in a field of
/// intensity `intensity` (W/m^2): `-(1/4) alpha |E|^2 / h`.
pub fn light_shift_hz(alpha_au: f64, intensity: f64) -> f64 {
    -alpha_au * intensity * SHIFT_HZ_PER_AU_PER_W_M2
}

/// Converts a frequency shift in Hz to an equivalent temperature in mK.
pub fn hz_to_millikelvin(hz: f64) -> f64 {
    hz * H / K_B * 1e3
}

/// Intensity in MW/cm^2 to W/m^2.
pub fn mw_per_cm2(value: f64) -> f64 {
    value * 1e10
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn shift_factor_matches_unit_chain() {
        // 1 MW/cm^2 = 1e10 W/m^2; |E|^2 = 2I/(eps0 c); alpha_SI = 1.64877727436e-41 C m^2/V
        let e2 = 2.0 * 1e10 / (8.8541878128e-12 * 299792458.0);
        let alpha_si = 1.648_777_274_36e-41;
        let by_hand = 0.25 * alpha_si * e2 / 6.62607015e-34;
        assert_relative_eq!(light_shift_hz(-1.0, 1e10), by_hand, max_relative = 1e-9);
        // ~46.9 kHz per a.u. at 1 MW/cm^2
        assert!((by_hand - 46_870.0).abs() < 50.0);
    }

    #[test]
    fn atomic_frequency_consistent_with_hartree_wavenumber() {
        let omega = wavenumber_to_angular(HARTREE_CM);
        assert_relative_eq!(angular_to_atomic(omega), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn wavelength_round_trip() {
        let w = wavelength_to_angular(852.0e-9);
        assert_relative_eq!(angular_to_wavelength(w), 852.0e-9, max_relative = 1e-15);
    }
}
