//! Two-color evanescent potentials around a nanofiber.
//!
//! At each radius the red- and blue-detuned guided modes are normalized to
//! their powers, the ground level gets the summed scalar shift and the
//! excited manifold is diagonalized in the summed Stark operators. The
//! shift spectrum does not depend on φ or z, so every point is evaluated at
//! φ = 0, z = 0.

use rayon::prelude::*;
use serde::Serialize;

use crate::atomdata::{AtomDatabase, Sublevel};
use crate::constants::hz_to_millikelvin;
use crate::fibermode::{fused_silica_index, FiberMode, FiberSpec};
use crate::stark::{FieldEnvelope, StarkSystem};
use crate::wigner::HalfInt;
use crate::{Error, Result};

/// Default radial grid: this many log-spaced points from 1.02a to a + 2 µm.
pub const DEFAULT_GRID_POINTS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamRole {
    Red,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BeamConfig {
    /// Vacuum wavelength, m.
    pub wavelength: f64,
    /// Guided power, W.
    pub power: f64,
    pub role: BeamRole,
}

impl BeamConfig {
    pub fn red(wavelength: f64, power: f64) -> Self {
        BeamConfig { wavelength, power, role: BeamRole::Red }
    }

    pub fn blue(wavelength: f64, power: f64) -> Self {
        BeamConfig { wavelength, power, role: BeamRole::Blue }
    }
}

/// Fiber geometry shared by both colors. The core index defaults to fused
/// silica at each wavelength unless overridden.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiberTemplate {
    /// Core radius, m.
    pub a: f64,
    pub n2: f64,
    pub n1_red: Option<f64>,
    pub n1_blue: Option<f64>,
}

impl FiberTemplate {
    pub fn silica(a: f64) -> Self {
        FiberTemplate { a, n2: 1.0, n1_red: None, n1_blue: None }
    }

    pub fn spec(&self, beam: &BeamConfig) -> Result<FiberSpec> {
        let n1 = match beam.role {
            BeamRole::Red => self.n1_red,
            BeamRole::Blue => self.n1_blue,
        }
        .unwrap_or_else(|| fused_silica_index(beam.wavelength));
        FiberSpec::new(self.a, n1, self.n2, beam.wavelength)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrapProfile {
    /// Core radius, m.
    pub a: f64,
    /// Radii, m, strictly increasing.
    pub r: Vec<f64>,
    /// Ground-level potential, Hz.
    pub ground: Vec<f64>,
    /// Excited sublevels tracked, ordered by M_F.
    pub labels: Vec<Sublevel>,
    /// Excited potentials, Hz, indexed `[point][label]`.
    pub excited: Vec<Vec<f64>>,
    /// Excited minus ground, Hz, indexed `[point][label]`.
    pub transition: Vec<Vec<f64>>,
}

/// Location and size of a potential minimum away from the surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrapSummary {
    /// Radius of the minimum, m.
    pub r_min: f64,
    /// `−U(r_min)`, Hz.
    pub depth: f64,
    /// Highest point between the surface and the minimum, relative to
    /// `U(r_min)`, Hz.
    pub barrier: f64,
}

impl TrapSummary {
    pub fn depth_mk(&self) -> f64 {
        hz_to_millikelvin(self.depth)
    }

    pub fn barrier_mk(&self) -> f64 {
        hz_to_millikelvin(self.barrier)
    }
}

impl TrapProfile {
    pub fn ground_mk(&self) -> Vec<f64> {
        self.ground.iter().map(|&u| hz_to_millikelvin(u)).collect()
    }

    /// Potential of excited label `k` along the grid, Hz.
    pub fn excited_curve(&self, k: usize) -> Vec<f64> {
        self.excited.iter().map(|row| row[k]).collect()
    }

    /// Largest |transition shift| over the grid and labels, Hz.
    pub fn max_transition_shift(&self) -> f64 {
        self.transition.iter().flatten().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn characterize(&self) -> Option<TrapSummary> {
        characterize(&self.r, &self.ground)
    }

    pub fn characterize_excited(&self, k: usize) -> Option<TrapSummary> {
        characterize(&self.r, &self.excited_curve(k))
    }
}

/// `n` log-spaced radii from `1.02a` to `a + span`.
pub fn log_grid(a: f64, span: f64, n: usize) -> Vec<f64> {
    let (lo, hi) = ((1.02 * a).ln(), (a + span).ln());
    match n {
        0 => Vec::new(),
        1 => vec![1.02 * a],
        _ => (0..n).map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp()).collect(),
    }
}

pub fn default_grid(a: f64) -> Vec<f64> {
    log_grid(a, 2e-6, DEFAULT_GRID_POINTS)
}

/// Computes the two-color profile for cesium 6S1/2 (ground) and the F = 5
/// family of 6P3/2.
pub fn two_color_profile(
    fiber: &FiberTemplate,
    red: &BeamConfig,
    blue: &BeamConfig,
    grid: &[f64],
    db: &AtomDatabase,
) -> Result<TrapProfile> {
    TwoColorTrap::new(db, *fiber, *red, *blue)?.profile(grid)
}

/// Solved modes and Stark systems for repeated profile evaluation.
#[derive(Clone, Debug)]
pub struct TwoColorTrap {
    pub fiber: FiberTemplate,
    pub red: BeamConfig,
    pub blue: BeamConfig,
    red_mode: FiberMode,
    blue_mode: FiberMode,
    upper: StarkSystem,
    lower: StarkSystem,
    family: HalfInt,
}

impl TwoColorTrap {
    pub fn new(db: &AtomDatabase, fiber: FiberTemplate, red: BeamConfig, blue: BeamConfig) -> Result<Self> {
        Self::with_levels(db, fiber, red, blue, "6P3/2", "6S1/2", HalfInt::from_int(5))
    }

    pub fn with_levels(
        db: &AtomDatabase,
        fiber: FiberTemplate,
        red: BeamConfig,
        blue: BeamConfig,
        upper: &str,
        lower: &str,
        family: HalfInt,
    ) -> Result<Self> {
        for b in [&red, &blue] {
            if !(b.power >= 0.0 && b.power.is_finite()) {
                return Err(Error::Beam(format!("power must be non-negative, got {} W", b.power)));
            }
            if !(b.wavelength > 0.0 && b.wavelength.is_finite()) {
                return Err(Error::Beam(format!("wavelength must be positive, got {} m", b.wavelength)));
            }
        }
        if red.role != BeamRole::Red || blue.role != BeamRole::Blue {
            return Err(Error::Beam("beam roles must be one red and one blue".into()));
        }
        if red.wavelength <= blue.wavelength {
            return Err(Error::Beam(format!(
                "red wavelength {:.3} nm must exceed blue wavelength {:.3} nm",
                red.wavelength * 1e9,
                blue.wavelength * 1e9
            )));
        }
        let red_mode = FiberMode::with_power(&fiber.spec(&red)?, red.power)?;
        let blue_mode = FiberMode::with_power(&fiber.spec(&blue)?, blue.power)?;
        let upper = StarkSystem::for_level(db, upper)?;
        let lower = StarkSystem::for_level(db, lower)?;
        if !upper.manifold().families().contains(&family) {
            return Err(Error::UnknownFamily(family));
        }
        Ok(TwoColorTrap { fiber, red, blue, red_mode, blue_mode, upper, lower, family })
    }

    pub fn red_mode(&self) -> &FiberMode {
        &self.red_mode
    }

    pub fn blue_mode(&self) -> &FiberMode {
        &self.blue_mode
    }

    /// Field envelopes of both colors at radius `r` (φ = 0, z = 0).
    pub fn fields(&self, r: f64) -> Result<[FieldEnvelope; 2]> {
        Ok([self.red_mode.field_envelope(r, 0.0, 0.0)?, self.blue_mode.field_envelope(r, 0.0, 0.0)?])
    }

    /// Ground potential and excited family potentials (Hz) at `r`.
    pub fn point(&self, r: f64) -> Result<(f64, Vec<(Sublevel, f64)>)> {
        let fields = self.fields(r)?;
        let ground = self.lower.scalar_shift(&fields);
        let excited = self.upper.light_shifts(&fields)?.family(self.family);
        Ok((ground, excited))
    }

    pub fn profile(&self, grid: &[f64]) -> Result<TrapProfile> {
        let a = self.fiber.a;
        if grid.is_empty() {
            return Err(Error::Argument("radial grid is empty".into()));
        }
        if grid[0] <= a {
            return Err(Error::InsideCore { r: grid[0], a });
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument("radial grid must be strictly increasing".into()));
        }
        let points: Vec<(f64, Vec<(Sublevel, f64)>)> =
            grid.par_iter().map(|&r| self.point(r)).collect::<Result<Vec<_>>>()?;
        let labels: Vec<Sublevel> = points[0].1.iter().map(|(l, _)| *l).collect();
        let ground: Vec<f64> = points.iter().map(|p| p.0).collect();
        let excited: Vec<Vec<f64>> = points.iter().map(|p| p.1.iter().map(|(_, u)| *u).collect()).collect();
        let transition = excited
            .iter()
            .zip(&ground)
            .map(|(row, g)| row.iter().map(|u| u - g).collect())
            .collect();
        Ok(TrapProfile { a, r: grid.to_vec(), ground, labels, excited, transition })
    }
}

/// Finds the global minimum of `u` over `r` and, if it is interior and
/// attractive, refines it with a parabola through its neighbours.
pub fn characterize(r: &[f64], u: &[f64]) -> Option<TrapSummary> {
    if r.len() != u.len() || r.len() < 3 {
        return None;
    }
    let k = (0..u.len()).min_by(|&x, &y| u[x].total_cmp(&u[y]))?;
    if k == 0 || k == u.len() - 1 || u[k] >= 0.0 {
        return None;
    }
    let (x0, x1, x2) = (r[k - 1], r[k], r[k + 1]);
    let (y0, y1, y2) = (u[k - 1], u[k], u[k + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    let (r_min, u_min) = if curv > 0.0 {
        let slope = d01 - curv * (x0 + x1);
        let xv = (-slope / (2.0 * curv)).clamp(x0, x2);
        let yv = y1 + (xv - x1) * (d01 + curv * (xv - x0));
        (xv, yv.min(y1))
    } else {
        (x1, y1)
    };
    let barrier = u[..k].iter().fold(f64::MIN, |m, &v| m.max(v)) - u_min;
    if barrier <= 0.0 {
        return None;
    }
    Some(TrapSummary { r_min, depth: -u_min, barrier })
}
