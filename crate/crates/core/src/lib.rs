//! Light shifts of cesium hyperfine sublevels in optical fields, the
//! fundamental guided mode of a vacuum-clad subwavelength fiber, and
//! two-color evanescent trap potentials built from both.
//!
//! The crate is organised bottom-up:
//!
//! * [`wigner`]: 3-j and 6-j symbols evaluated with exact integer arithmetic.
//! * [`atomdata`]: the level/transition/hyperfine database and its text format.
//! * [`polarizability`]: dynamic scalar and tensor polarizabilities.
//! * [`eigen`]: Jacobi eigensolver for the small Hermitian Hamiltonians.
//! * [`stark`]: hyperfine + dynamic Stark Hamiltonian, diagonalization and
//!   adiabatic sublevel labels.
//! * [`fibermode`]: HE11 propagation constant, evanescent field envelope and
//!   power normalization.
//! * [`magic`]: magic-wavelength crossings of stretched-state polarizabilities.
//! * [`trap`]: two-color radial potentials and trap characterization.

pub mod atomdata;
pub mod bessel;
pub mod constants;
pub mod eigen;
mod error;
pub mod fibermode;
pub mod magic;
pub mod polarizability;
pub mod quad;
pub mod roots;
pub mod stark;
pub mod trap;
pub mod wigner;

pub use atomdata::{AtomDatabase, Coupling, FineState, HfsManifold, Sublevel, Transition};
pub use error::{Error, Result};
pub use fibermode::{FiberMode, FiberSpec, RadialProfile};
pub use magic::{Branch, Crossing, DetuningSide, MagicCluster};
pub use polarizability::{Damping, Polarizability};
pub use stark::{FieldEnvelope, ShiftSpectrum, StarkSystem};
pub use trap::{BeamConfig, BeamRole, TrapProfile, TrapSummary};
pub use wigner::HalfInt;
