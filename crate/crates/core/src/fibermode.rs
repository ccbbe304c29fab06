//! Fundamental HE11 mode of a step-index fiber with an infinite cladding.
//!
//! The propagation constant β solves
//!
//! ```text
//! J0(ha)/(ha J1(ha)) = −(n1² + n2²)/(2n1²) · K1'(qa)/(qa K1(qa)) + 1/(ha)² − R
//! R = sqrt( ((n1² − n2²)/(2n1²))² (K1'(qa)/(qa K1(qa)))² + (β/(n1 k))² (1/(qa)² + 1/(ha)²)² )
//! ```
//!
//! with `h = sqrt(n1²k² − β²)` and `q = sqrt(β² − n2²k²)`. Field components
//! carry the phase `exp(i(βz − φ))` (clockwise circulation).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::{bessel_j012, bessel_j1_prime, bessel_k012, bessel_k1_prime};
use crate::constants::{wavelength_to_angular, MU_0};
use crate::quad::integrate;
use crate::roots::{bisect, sign_changes};
use crate::stark::FieldEnvelope;
use crate::{Error, Result};

/// Points scanned in `(n2 k, n1 k)` before bisection.
pub const SCAN_POINTS: usize = 400;
/// Relative tolerance of the Poynting-flux quadrature.
const POWER_TOL: f64 = 1e-12;
/// Exterior integration stops at `a + TAIL / q`; the integrand there is below e^-80.
const TAIL: f64 = 40.0;

/// Refractive index of fused silica (three-term Sellmeier fit, Malitson),
/// `wavelength` in m.
pub fn fused_silica_index(wavelength: f64) -> f64 {
    let l2 = (wavelength * 1e6).powi(2);
    let term = |b: f64, c: f64| b * l2 / (l2 - c * c);
    (1.0 + term(0.696_166_3, 0.068_404_3) + term(0.407_942_6, 0.116_241_4) + term(0.897_479_4, 9.896_161)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberSpec {
    /// Core radius, m.
    pub a: f64,
    pub n1: f64,
    pub n2: f64,
    /// Vacuum wavelength, m.
    pub wavelength: f64,
}

impl FiberSpec {
    pub fn new(a: f64, n1: f64, n2: f64, wavelength: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::FiberSpec(format!("core radius must be positive, got {a}")));
        }
        if !(n2 >= 1.0 && n1 > n2 && n1.is_finite()) {
            return Err(Error::FiberSpec(format!("need n1 > n2 >= 1, got n1 = {n1}, n2 = {n2}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::FiberSpec(format!("wavelength must be positive, got {wavelength}")));
        }
        Ok(FiberSpec { a, n1, n2, wavelength })
    }

    /// Silica core in vacuum, n1 from [`fused_silica_index`].
    pub fn silica(a: f64, wavelength: f64) -> Result<Self> {
        FiberSpec::new(a, fused_silica_index(wavelength), 1.0, wavelength)
    }

    pub fn k(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn omega(&self) -> f64 {
        wavelength_to_angular(self.wavelength)
    }

    /// Normalized frequency `V = k a sqrt(n1² − n2²)`.
    pub fn v_number(&self) -> f64 {
        self.k() * self.a * (self.n1 * self.n1 - self.n2 * self.n2).sqrt()
    }

    fn hq(&self, beta: f64) -> (f64, f64) {
        let k = self.k();
        let h = (self.n1 * self.n1 * k * k - beta * beta).max(0.0).sqrt();
        let q = (beta * beta - self.n2 * self.n2 * k * k).max(0.0).sqrt();
        (h, q)
    }

    /// Left minus right side of the eigenvalue equation.
    pub fn eigenvalue_function(&self, beta: f64) -> f64 {
        let (h, q) = self.hq(beta);
        let (ha, qa) = (h * self.a, q * self.a);
        let (n1s, n2s) = (self.n1 * self.n1, self.n2 * self.n2);
        let [j0, j1, _] = bessel_j012(ha);
        let [_, k1, _] = bessel_k012(qa);
        let kk = bessel_k1_prime(qa) / (qa * k1);
        let b = beta / (self.n1 * self.k());
        let geo = 1.0 / (qa * qa) + 1.0 / (ha * ha);
        let r = (((n1s - n2s) / (2.0 * n1s)).powi(2) * kk * kk + b * b * geo * geo).sqrt();
        j0 / (ha * j1) + (n1s + n2s) / (2.0 * n1s) * kk - 1.0 / (ha * ha) + r
    }

    /// The textbook hybrid-mode characteristic equation for ν = 1, as a
    /// difference of both sides.
    pub fn standard_form(&self, beta: f64) -> f64 {
        let (h, q) = self.hq(beta);
        let (u, w) = (h * self.a, q * self.a);
        let [_, j1, _] = bessel_j012(u);
        let [_, k1, _] = bessel_k012(w);
        let jj = bessel_j1_prime(u) / (u * j1);
        let kk = bessel_k1_prime(w) / (w * k1);
        let ratio = (self.n2 / self.n1).powi(2);
        let b = beta / (self.n1 * self.k());
        (jj + kk) * (jj + ratio * kk) - b * b * (1.0 / (u * u) + 1.0 / (w * w)).powi(2)
    }
}

/// A solved HE11 mode. `amplitude` is A in V/m and `power` the matching
/// guided power in W.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberMode {
    pub spec: FiberSpec,
    /// Propagation constant, rad/m.
    pub beta: f64,
    /// Exterior decay constant, rad/m.
    pub q: f64,
    /// Interior transverse wavenumber, rad/m.
    pub h: f64,
    pub s: f64,
    pub amplitude: f64,
    pub power: f64,
}

/// Cylindrical components `(E_r, E_φ, E_z)` and `∂E_z/∂r` without the phase factor.
type Components = (Complex64, Complex64, Complex64, Complex64);

/// Solves for the HE11 propagation constant; the returned mode has A = 1.
pub fn solve_fundamental_mode(spec: &FiberSpec) -> Result<FiberMode> {
    let k = spec.k();
    let (lo, hi) = (spec.n2 * k, spec.n1 * k);
    let f = |b: f64| spec.eigenvalue_function(b);
    let mut best: Option<f64> = None;
    for (a, b) in sign_changes(f, lo, hi, SCAN_POINTS) {
        let edge = f(a).abs().min(f(b).abs());
        let Some(root) = bisect(f, a, b, 0.0) else { continue };
        // a pole of J0/J1 also flips sign; there |f| grows instead of vanishing
        if root.value.is_finite() && root.value.abs() <= edge {
            best = Some(best.map_or(root.x, |x: f64| x.max(root.x)));
        }
    }
    let beta = best.ok_or(Error::Cutoff { v: spec.v_number() })?;
    let (h, q) = spec.hq(beta);
    let (ha, qa) = (h * spec.a, q * spec.a);
    let [_, j1, _] = bessel_j012(ha);
    let [_, k1, _] = bessel_k012(qa);
    let s = (1.0 / (ha * ha) + 1.0 / (qa * qa)) / (bessel_j1_prime(ha) / (ha * j1) + bessel_k1_prime(qa) / (qa * k1));
    let mut mode = FiberMode { spec: *spec, beta, q, h, s, amplitude: 1.0, power: 0.0 };
    mode.power = mode.integrated_power()?;
    Ok(mode)
}

/// Rescales A so the guided power equals `power` (W).
pub fn normalize_power(mode: &FiberMode, power: f64) -> Result<FiberMode> {
    if !(power >= 0.0 && power.is_finite()) {
        return Err(Error::Argument(format!("power must be non-negative, got {power}")));
    }
    let unit = if mode.amplitude == 0.0 {
        FiberMode { amplitude: 1.0, ..*mode }.integrated_power()?
    } else {
        mode.power / (mode.amplitude * mode.amplitude)
    };
    Ok(FiberMode { amplitude: (power / unit).sqrt(), power, ..*mode })
}

impl FiberMode {
    pub fn solve(spec: &FiberSpec) -> Result<Self> {
        solve_fundamental_mode(spec)
    }

    /// Solves and normalizes in one step.
    pub fn with_power(spec: &FiberSpec, power: f64) -> Result<Self> {
        normalize_power(&solve_fundamental_mode(spec)?, power)
    }

    /// `|f(β)| / (β |f'(β)|)`: the relative error in β implied by the
    /// eigenvalue equation.
    pub fn eigenvalue_residual(&self) -> f64 {
        let f = |b: f64| self.spec.eigenvalue_function(b);
        let d = 1e-7 * self.beta;
        let slope = (f(self.beta + d) - f(self.beta - d)) / (2.0 * d);
        f(self.beta).abs() / (self.beta * slope.abs())
    }

    pub fn omega(&self) -> f64 {
        self.spec.omega()
    }

    fn interior_coefficient(&self) -> f64 {
        let a = self.spec.a;
        self.amplitude * self.q * bessel_k012(self.q * a)[1] / (self.h * bessel_j012(self.h * a)[1])
    }

    fn components(&self, r: f64) -> Components {
        let i = Complex64::i();
        let s = self.s;
        if r < self.spec.a {
            let c = self.interior_coefficient();
            let [j0, j1, j2] = bessel_j012(self.h * r);
            let dj1 = if r > 0.0 { bessel_j1_prime(self.h * r) } else { 0.5 };
            (
                i * c * ((1.0 - s) * j0 - (1.0 + s) * j2),
                Complex64::from(c * ((1.0 - s) * j0 + (1.0 + s) * j2)),
                Complex64::from(c * 2.0 * self.h / self.beta * j1),
                Complex64::from(c * 2.0 * self.h / self.beta * self.h * dj1),
            )
        } else {
            let a = self.amplitude;
            let [k0, k1, k2] = bessel_k012(self.q * r);
            (
                i * a * ((1.0 - s) * k0 + (1.0 + s) * k2),
                Complex64::from(a * ((1.0 - s) * k0 - (1.0 + s) * k2)),
                Complex64::from(a * 2.0 * self.q / self.beta * k1),
                Complex64::from(a * 2.0 * self.q / self.beta * self.q * bessel_k1_prime(self.q * r)),
            )
        }
    }

    /// `(E_r, E_φ, E_z)` in V/m at any point, inside or outside the core.
    pub fn cylindrical(&self, r: f64, phi: f64, z: f64) -> [Complex64; 3] {
        let (er, ep, ez, _) = self.components(r);
        let ph = Complex64::from_polar(1.0, self.beta * z - phi);
        [er * ph, ep * ph, ez * ph]
    }

    /// Time-averaged axial Poynting flux at radius `r`, W/m².
    pub fn poynting_flux(&self, r: f64) -> f64 {
        let (er, ep, ez, dez) = self.components(r);
        let wm = self.omega() * MU_0;
        let i = Complex64::i();
        let hr = if r > 0.0 { -(ez / r + ep * self.beta) / wm } else { Complex64::from(0.0) };
        let hp = (er * self.beta + i * dez) / wm;
        0.5 * (er * hp.conj() - ep * hr.conj()).re
    }

    /// Guided power (W) re-integrated from the fields at the current amplitude.
    pub fn integrated_power(&self) -> Result<f64> {
        let a = self.spec.a;
        let flux = |r: f64| 2.0 * PI * r * self.poynting_flux(r);
        let inner = integrate(flux, 0.0, a, POWER_TOL)?;
        let outer = integrate(flux, a, a + TAIL / self.q, POWER_TOL)?;
        Ok(inner + outer)
    }

    /// Spherical components of the exterior field at `(r, φ, z)`.
    pub fn field_envelope(&self, r: f64, phi: f64, z: f64) -> Result<FieldEnvelope> {
        if !(r > self.spec.a) {
            return Err(Error::InsideCore { r, a: self.spec.a });
        }
        let i = Complex64::i();
        let sqrt2 = std::f64::consts::SQRT_2;
        let a = self.amplitude;
        let [k0, k1, k2] = bessel_k012(self.q * r);
        let bz = self.beta * z;
        Ok(FieldEnvelope::new(
            i * (sqrt2 * a * (1.0 + self.s) * k2) * Complex64::from_polar(1.0, bz - 2.0 * phi),
            Complex64::from(a * 2.0 * self.q / self.beta * k1) * Complex64::from_polar(1.0, bz - phi),
            -i * (sqrt2 * a * (1.0 - self.s) * k0) * Complex64::from_polar(1.0, bz),
            self.omega(),
        ))
    }

    /// Field envelopes at every radius of `grid` (φ = 0, z = 0).
    pub fn radial_profile(&self, grid: &[f64]) -> Result<RadialProfile> {
        let fields = grid.iter().map(|&r| self.field_envelope(r, 0.0, 0.0)).collect::<Result<Vec<_>>>()?;
        Ok(RadialProfile { r: grid.to_vec(), fields })
    }
}

/// Exterior field envelopes along a radial line.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    /// Radii, m.
    pub r: Vec<f64>,
    pub fields: Vec<FieldEnvelope>,
}
