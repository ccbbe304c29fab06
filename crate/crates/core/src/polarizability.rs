//! Dynamic scalar and tensor polarizabilities of a fine-structure level from
//! a sum over its E1 couplings, in atomic units.
//!
//! Each coupling contributes with the damped resonance factor
//!
//! ```text
//! ω0 (ω0² − ω² + γ²/4) / ((ω0² − ω² + γ²/4)² + γ² ω²)
//! ```
//!
//! where ω0 is the signed transition frequency (negative for partners below
//! the level) and γ the sum of both decay rates. [`Damping::Neglected`] drops
//! γ, which leaves the plain dispersive `ω0 / (ω0² − ω²)`.

use serde::Serialize;

use crate::atomdata::AtomDatabase;
use crate::constants::angular_to_atomic;
use crate::wigner::{six_j, HalfInt};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Damping {
    #[default]
    Included,
    Neglected,
}

/// Scalar and tensor polarizabilities of one level at one frequency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polarizability {
    /// α0, a.u.
    pub scalar: f64,
    /// α2, a.u. (exactly 0 for J = 1/2).
    pub tensor: f64,
    /// Field angular frequency, rad/s.
    pub omega: f64,
    pub state: String,
    #[serde(skip)]
    pub j: HalfInt,
}

impl Polarizability {
    /// `α(M_J) = α0 + α2 (3 M_J² − J(J+1)) / (J(2J−1))` for a field along z.
    pub fn sublevel(&self, m_j: HalfInt) -> f64 {
        if self.j.twice() < 2 {
            return self.scalar;
        }
        let j = self.j.value();
        let m = m_j.value();
        self.scalar + self.tensor * (3.0 * m * m - j * (j + 1.0)) / (j * (2.0 * j - 1.0))
    }

    /// `(α0 + α2, α0 − α2)`: the |M_J| = J and |M_J| = J − 1 values for
    /// J = 3/2. For other J the weights of the stretched and next sublevel
    /// are used; for J = 1/2 both equal α0.
    pub fn stretched_combinations(&self) -> (f64, f64) {
        if self.j.twice() < 2 {
            return (self.scalar, self.scalar);
        }
        (self.sublevel(self.j), self.sublevel(self.j - HalfInt::ONE))
    }
}

#[derive(Clone, Debug)]
struct Term {
    omega0: f64,
    gamma: f64,
    scalar_weight: f64,
    tensor_weight: f64,
}

/// The sum-over-states of one level, precomputed for fast frequency sweeps.
#[derive(Clone, Debug)]
pub struct StatePolarizability {
    label: String,
    j: HalfInt,
    terms: Vec<Term>,
}

impl StatePolarizability {
    pub fn new(db: &AtomDatabase, label: &str) -> Result<Self> {
        let state = db.level(label)?;
        let couplings = db.couplings(label)?;
        if couplings.is_empty() {
            return Err(Error::NoTransitions(label.to_string()));
        }
        let j = state.j;
        let jv = j.value();
        let scalar_pref = 2.0 / (3.0 * (2.0 * jv + 1.0));
        let tensor_pref = if j.twice() >= 2 {
            4.0 * (5.0 * jv * (2.0 * jv - 1.0) / (6.0 * (jv + 1.0) * (2.0 * jv + 1.0) * (2.0 * jv + 3.0))).sqrt()
        } else {
            0.0
        };
        let terms = couplings
            .iter()
            .map(|c| {
                let d2 = c.reduced_dipole * c.reduced_dipole;
                let tensor_weight = if tensor_pref == 0.0 {
                    0.0
                } else {
                    let phase = if ((j.twice() + c.partner_j.twice()) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let sj = six_j(j, HalfInt::ONE, c.partner_j, HalfInt::ONE, j, HalfInt::from_int(2))?;
                    tensor_pref * phase * sj * d2
                };
                Ok(Term {
                    omega0: angular_to_atomic(c.frequency),
                    gamma: angular_to_atomic(c.linewidth),
                    scalar_weight: scalar_pref * d2,
                    tensor_weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StatePolarizability { label: label.to_string(), j, terms })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    /// Transition frequencies |ω0| of every coupling, rad/s.
    pub fn pole_frequencies(&self) -> Vec<f64> {
        self.terms
            .iter()
            .map(|t| t.omega0.abs() * crate::constants::ATOMIC_FREQUENCY)
            .collect()
    }

    /// Evaluates α0 and α2 at angular frequency `omega` (rad/s).
    pub fn at(&self, omega: f64, damping: Damping) -> Polarizability {
        let w = angular_to_atomic(omega);
        let (mut scalar, mut tensor) = (0.0, 0.0);
        for t in &self.terms {
            let g = match damping {
                Damping::Included => t.gamma,
                Damping::Neglected => 0.0,
            };
            let x = t.omega0 * t.omega0 - w * w + 0.25 * g * g;
            let factor = t.omega0 * x / (x * x + g * g * w * w);
            scalar += t.scalar_weight * factor;
            tensor += t.tensor_weight * factor;
        }
        Polarizability { scalar, tensor, omega, state: self.label.clone(), j: self.j }
    }
}

pub fn polarizability(db: &AtomDatabase, state: &str, omega: f64, damping: Damping) -> Result<Polarizability> {
    Ok(StatePolarizability::new(db, state)?.at(omega, damping))
}

/// Dynamic scalar polarizability α0 (a.u.) of `state` at `omega` (rad/s).
pub fn scalar_polarizability(db: &AtomDatabase, state: &str, omega: f64) -> Result<f64> {
    Ok(polarizability(db, state, omega, Damping::Included)?.scalar)
}

/// Dynamic tensor polarizability α2 (a.u.); exactly 0 for J = 1/2.
pub fn tensor_polarizability(db: &AtomDatabase, state: &str, omega: f64) -> Result<f64> {
    Ok(polarizability(db, state, omega, Damping::Included)?.tensor)
}

/// `(α0 + α2, α0 − α2)` of `state` at `omega`.
pub fn stretched_combinations(db: &AtomDatabase, state: &str, omega: f64) -> Result<(f64, f64)> {
    Ok(polarizability(db, state, omega, Damping::Included)?.stretched_combinations())
}
