use thiserror::Error;

/// Validation failures for polygons and other geometric inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("vertex {index} repeats the previous vertex")]
    Repeated { index: usize },
    #[error("vertex {index} is collinear with its neighbours")]
    Collinear { index: usize },
    #[error("polygon is not convex at vertex {index}")]
    NotConvex { index: usize },
    #[error("polygon boundary winds {turns} times around its interior")]
    NotSimple { turns: i64 },
    #[error("degenerate triangle: the three points are collinear")]
    DegenerateTriangle,
    #[error("affine map is singular")]
    SingularMap,
    #[error("half-plane normal must be non-zero and finite")]
    ZeroNormal,
    #[error("point ({x}, {y}) lies outside the container")]
    OutsideContainer { x: f64, y: f64 },
}

/// Top-level error for the library's fallible operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty point sample")]
    EmptySample,
    #[error("corner points Z_i are not pairwise distinct (edge {edge})")]
    CoincidentCorners { edge: usize },
    #[error("only {accepted} of {reps} replications satisfy the regularity event (rate {rate:.4}); at least {required} needed")]
    TooFewAccepted {
        accepted: u64,
        reps: u64,
        rate: f64,
        required: u64,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
