use thiserror::Error;

use crate::wigner::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum argument: {0}")]
    Argument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("database contains no level records")]
    EmptyDatabase,

    #[error("transition {upper} -> {lower} references undeclared level {missing}")]
    DanglingLevel {
        upper: String,
        lower: String,
        missing: String,
    },

    #[error("duplicate transition between {0} and {1}")]
    DuplicateTransition(String, String),

    #[error("invalid database record: {0}")]
    InvalidRecord(String),

    #[error("unknown level {0}")]
    UnknownLevel(String),

    #[error("no hyperfine constants for level {0}")]
    MissingHfs(String),

    #[error("level {0} has no transitions in the database")]
    NoTransitions(String),

    #[error("field frequency {field} rad/s does not match polarizability frequency {pol} rad/s")]
    FrequencyMismatch { field: f64, pol: f64 },

    #[error("eigen-decomposition failed: residual {residual:.3e} relative to norm {norm:.3e} (dimension {dim})")]
    Eigen { residual: f64, norm: f64, dim: usize },

    #[error("no guided HE11 root between n2*k and n1*k (V = {v:.4})")]
    Cutoff { v: f64 },

    #[error("invalid fiber parameters: {0}")]
    FiberSpec(String),

    #[error("field evaluated at r = {r:.6e} m inside the core (a = {a:.6e} m)")]
    InsideCore { r: f64, a: f64 },

    #[error("quadrature did not converge: estimated error {error:.3e} on {value:.6e}")]
    Quadrature { value: f64, error: f64 },

    #[error("invalid wavelength window: {0}")]
    Window(String),

    #[error("expected one sum and one difference crossing in a magic cluster, got {sum} and {difference}")]
    ClusterSize { sum: usize, difference: usize },

    #[error("hyperfine family F = {0} not present in manifold")]
    UnknownFamily(HalfInt),

    #[error("invalid beam configuration: {0}")]
    Beam(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
