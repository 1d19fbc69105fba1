use thiserror::Error;

/// Where in an image an error happened, and during which solver stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelLocation {
    pub row: usize,
    pub col: usize,
}

impl std::fmt::Display for PixelLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// The logarithm between the two points is not defined (antipodal points
    /// on a sphere, rotations by π on SO(3)).
    #[error("cut locus: {base} and {target} are (nearly) conjugate")]
    CutLocus { base: String, target: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Input outside the domain of a map, e.g. a matrix that is not SPD.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("mean iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    NonConverged { residual: f64, iterations: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("pixel {pixel} violates the {manifold} point invariants: {reason}")]
    Invariant {
        manifold: String,
        pixel: usize,
        reason: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{stage} at pixel {location}: {source}")]
    AtPixel {
        stage: &'static str,
        location: PixelLocation,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn at(self, stage: &'static str, row: usize, col: usize) -> Self {
        Error::AtPixel {
            stage,
            location: PixelLocation { row, col },
            source: Box::new(self),
        }
    }

    pub(crate) fn cut_locus<A: std::fmt::Debug, B: std::fmt::Debug>(base: &A, target: &B) -> Self {
        Error::CutLocus {
            base: format!("{base:?}"),
            target: format!("{target:?}"),
        }
    }

    /// The innermost error, with pixel context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPixel { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self.root() {
            Error::CutLocus { .. } | Error::NonConverged { .. } => ErrorClass::Numerical,
            Error::Argument(_) | Error::Config(_) => ErrorClass::Usage,
            _ => ErrorClass::Data,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
