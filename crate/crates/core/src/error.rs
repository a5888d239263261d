use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no projective class")]
    ZeroVector,

    #[error("vector lies outside the closed ball (normalized form value {0:e})")]
    ExteriorVector(f64),

    #[error("point must be interior (u > 0)")]
    NotInterior,

    #[error("point must lie on the boundary (u = 0) or be infinity")]
    NotBoundary,

    #[error("the point at infinity is not allowed here")]
    InfinityNotAllowed,

    #[error("matrix is not J-unitary (max deviation {deviation:e} > {tol:e})")]
    NotJUnitary { deviation: f64, tol: f64 },

    #[error("rotation part is not unitary (max deviation {0:e})")]
    NonUnitaryRotation(f64),

    #[error("the identity has no isolated fixed points")]
    IdentityInput,

    #[error("coincident points: {0}")]
    CoincidentPoints(&'static str),

    #[error("element table exceeded the cap of {0} entries")]
    TableCapExceeded(usize),

    #[error("center is fixed by table element {0}")]
    FixedCenter(String),

    #[error("unsupported group class: {0}")]
    UnsupportedGroupClass(String),

    #[error("invalid subgroup descriptor: {0}")]
    InvalidSubgroup(String),

    #[error("degenerate quadruple: {0}")]
    DegenerateQuad(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by numerical properties of the input rather
    /// than by malformed arguments.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotJUnitary { .. }
                | Error::NonUnitaryRotation(_)
                | Error::ExteriorVector(_)
                | Error::FixedCenter(_)
                | Error::TableCapExceeded(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
