use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} lies outside the model domain (conformal factor {factor})")]
    OutOfDomain { point: [f64; 3], factor: f64 },

    #[error("immersion is degenerate at ({u}, {v}): coordinate tangents are dependent")]
    DegenerateImmersion { u: f64, v: f64 },

    #[error("parameter ({u}, {v}) is closer than {margin} to the patch boundary")]
    NearBoundary { u: f64, v: f64, margin: f64 },

    #[error("base curve is not unit speed at s = {s} (speed {speed})")]
    NotArcLength { s: f64, speed: f64 },

    #[error("geodesic-circle radius needs m > 0, got m = {m}")]
    InvalidBase { m: f64 },

    #[error("outside the region of validity: {0}")]
    OutOfRegion(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("jet carries derivatives up to order {have}, order {need} is required")]
    JetOrder { have: usize, need: usize },

    #[error("mean curvature is not constant: spread {spread:e} exceeds {tol:e}")]
    NotCmc { spread: f64, tol: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
