use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Scalar payloads are reported as `f64` regardless of the working precision.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate generators: Im(omega2/omega1) vanishes")]
    DegenerateGenerators,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lattice cell area is {found}, expected {expected}")]
    AreaMismatch { expected: f64, found: f64 },

    #[error("argument {z_re}+{z_im}i lies within {tolerance} of a pole")]
    Pole { z_re: f64, z_im: f64, tolerance: f64 },

    #[error("series did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("theta series requires Im(tau) > 0, got {0}")]
    ThetaDomain(f64),

    #[error("square-root branch is ambiguous: {0}")]
    BranchAmbiguity(String),

    #[error("Fock truncation {got} is too small, need at least {required}")]
    TruncationInsufficient { required: usize, got: usize },

    #[error("quadrature node at distance {distance} from puncture {m},{n} falls inside the exclusion disk")]
    NearPole { m: i64, n: i64, distance: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
