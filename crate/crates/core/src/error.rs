use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Identity or structural property of a 4-index array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `R_ijkl = -R_jikl`
    FirstPairAntisymmetry,
    /// `R_ijkl = -R_ijlk`
    SecondPairAntisymmetry,
    /// `R_ijkl = R_klij`
    PairExchange,
    /// `R_ijkl + R_iklj + R_iljk = 0`
    FirstBianchi,
    /// `Σ_i W_ijil = 0`
    TraceFree,
    /// `A_ij = A_ji`
    MatrixSymmetry,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::FirstPairAntisymmetry => "first-pair antisymmetry R_ijkl = -R_jikl",
            Identity::SecondPairAntisymmetry => "second-pair antisymmetry R_ijkl = -R_ijlk",
            Identity::PairExchange => "pair exchange R_ijkl = R_klij",
            Identity::FirstBianchi => "first Bianchi identity R_ijkl + R_iklj + R_iljk = 0",
            Identity::TraceFree => "trace-free condition sum_i W_ijil = 0",
            Identity::MatrixSymmetry => "matrix symmetry A_ij = A_ji",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension {n}: need n >= {min}")]
    InvalidDimension { n: usize, min: usize },

    #[error("unsupported dimension {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{identity} violated at index {index:?}")]
    IdentityViolated { identity: Identity, index: [usize; 4] },

    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("degenerate (n, k) = ({n}, {k}): {reason}")]
    Degenerate { n: usize, k: usize, reason: &'static str },

    #[error("C = {c} outside the regime C > N/3 = {threshold}")]
    OutOfRegime { c: String, threshold: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("preconditions failed: {}", .0.join("; "))]
    Preconditions(Vec<String>),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
