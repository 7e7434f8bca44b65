use thiserror::Error;

/// Errors raised anywhere in the solution / partner pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {what} at z = {re} + {im}i")]
    Pole { what: &'static str, re: f64, im: f64 },

    #[error("numeric failure in {stage}: {detail}")]
    Numeric { stage: &'static str, detail: String },

    #[error("exceptional energy E = {energy}: {reason}; perturb E or use the band-edge eigenfunction")]
    ExceptionalEnergy { energy: f64, reason: String },

    #[error("branch selection failed: {0}")]
    BranchSelection(String),

    #[error("seed has a node near x = {location}")]
    NodalSeed { location: f64 },

    #[error("Wronskian of the seeds vanishes near x = {location}")]
    NodalWronskian { location: f64 },

    #[error("value expected to be real has imaginary part {imag:e} (real part {real:e}) at x = {x}")]
    Reality { x: f64, real: f64, imag: f64 },

    #[error("product solution vanishes on the integration path near x = {location}")]
    Path { location: f64 },

    #[error("energy {energy} outside the scanned range [{lo}, {hi}]")]
    Range { energy: f64, lo: f64, hi: f64 },

    #[error("null action: energy {energy} equals a factorization energy")]
    NullAction { energy: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            stage,
            detail: detail.into(),
        }
    }

    /// True for failures caused by invalid input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Range { .. }
                | Error::NodalSeed { .. }
                | Error::NodalWronskian { .. }
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole { .. } => "pole",
            Error::Numeric { .. } => "numeric",
            Error::ExceptionalEnergy { .. } => "exceptional-energy",
            Error::BranchSelection(_) => "branch-selection",
            Error::NodalSeed { .. } => "nodal-seed",
            Error::NodalWronskian { .. } => "nodal-wronskian",
            Error::Reality { .. } => "reality",
            Error::Path { .. } => "path",
            Error::Range { .. } => "range",
            Error::NullAction { .. } => "null-action",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
