use std::path::PathBuf;
use thiserror::Error;

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad user input: malformed files, violated preconditions, unusable flags.
    Input,
    /// Numerical breakdown: singular systems, pivot collapse, pole hits.
    Numerical,
    /// An iteration that did not converge within its budget.
    NonConvergence,
    /// Filesystem trouble.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed zero file at line {line}: {reason}")]
    MalformedZeroLine { line: usize, reason: String },

    #[error("zero file ordinates not strictly increasing at line {line}")]
    NonIncreasingZeros { line: usize },

    #[error("ordinate at line {line} carries {found} digits, {required} required")]
    InsufficientZeroDigits {
        line: usize,
        found: u32,
        required: u32,
    },

    #[error("need {required} zeros but only {available} are available")]
    InsufficientZeros { required: usize, available: usize },

    #[error("zero #{index} verified to {verified} digits, context needs {required}")]
    InsufficientZeroPrecision {
        index: usize,
        verified: u32,
        required: u32,
    },

    #[error("working precision ({capacity} digits) below the {required} digits claimed for the zero")]
    InsufficientPrecision { capacity: u32, required: u32 },

    #[error("imaginary height {height:.1} exceeds the eta acceleration budget of {budget:.0}")]
    EtaBudgetExceeded { height: f64, budget: f64 },

    #[error("zeta has a pole at s = 1")]
    ZetaPole,

    #[error("s lies within 10^-10 of a zero of 1 - 2*2^(-s); use a different representation there")]
    NearEtaFactorZero,

    #[error("Newton iteration did not converge within {max_iter} steps")]
    NewtonNonConvergence { max_iter: usize },

    #[error("derivative modulus fell below breakdown threshold during Newton iteration")]
    DerivativeBreakdown,

    #[error("refinement drifted off the critical line: |Re(s) - 1/2| = {drift:.3e}")]
    CriticalLineDrift { drift: f64 },

    #[error("refinement left the isolation window around the starting ordinate")]
    RefinementEscaped,

    #[error("pivot modulus below 10^(-{capacity}+10): system singular to working precision")]
    SingularSystem { capacity: u32 },

    #[error("ladder elimination broke down at M = {failing_m}; fall back to per-M pivoted solves")]
    LadderBreakdown { failing_m: usize },

    #[error("Cramer oracle limited to M <= 4, got M = {m}")]
    CramerTooLarge { m: usize },

    #[error("leading minor determinant modulus below breakdown threshold")]
    CramerBreakdown,

    #[error("tables have mismatched N: {n1} vs {n2}")]
    MismatchedTables { n1: usize, n2: usize },

    #[error("accuracy estimation needs the finer table at >= 2x the precision ({fine} vs {coarse} bits)")]
    EstimatePrecisionRatio { coarse: u32, fine: u32 },

    #[error("table carries no accuracy estimate; recompute without --no-estimate")]
    MissingAccuracyEstimate,

    #[error("rational evaluation denominator modulus below threshold")]
    RationalDenominatorVanishes,

    #[error("empty window: no points with n <= {window}")]
    EmptyWindow { window: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed table file {path}: {reason}")]
    MalformedTable { path: PathBuf, reason: String },

    #[error("malformed decimal value: {0}")]
    MalformedNumber(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            MalformedZeroLine { .. }
            | NonIncreasingZeros { .. }
            | InsufficientZeroDigits { .. }
            | InsufficientZeros { .. }
            | InsufficientZeroPrecision { .. }
            | InsufficientPrecision { .. }
            | EtaBudgetExceeded { .. }
            | CramerTooLarge { .. }
            | MismatchedTables { .. }
            | EstimatePrecisionRatio { .. }
            | MissingAccuracyEstimate
            | EmptyWindow { .. }
            | InvalidArgument(_)
            | MalformedTable { .. }
            | MalformedNumber(_) => ErrorCategory::Input,

            ZetaPole
            | NearEtaFactorZero
            | DerivativeBreakdown
            | SingularSystem { .. }
            | LadderBreakdown { .. }
            | CramerBreakdown
            | RationalDenominatorVanishes => ErrorCategory::Numerical,

            NewtonNonConvergence { .. } | CriticalLineDrift { .. } | RefinementEscaped => {
                ErrorCategory::NonConvergence
            }

            Io { .. } => ErrorCategory::Io,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
