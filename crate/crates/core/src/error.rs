use thiserror::Error;

/// Errors raised by the simplicial-set layer (construction, operators, maps).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsetError {
    #[error("duplicate simplex id `{0}`")]
    DuplicateId(String),
    #[error("unknown simplex `{0}`")]
    UnknownSimplex(String),
    #[error("simplex `{id}` of dimension {dim} needs {expected} faces, found {found}")]
    FaceCount {
        id: String,
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("face {index} of `{id}` has dimension {found}, expected {expected}")]
    FaceDimension {
        id: String,
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("degeneracy indices must be strictly decreasing, got {0:?}")]
    DegeneracyOrder(Vec<u32>),
    #[error("operator index {index} out of range for a simplex of dimension {dim}")]
    DimensionMismatch { index: u32, dim: usize },
    #[error("face index {index} out of range for a simplex of dimension {dim}")]
    FaceIndex { index: u32, dim: usize },
    #[error("invalid monotone map: {0}")]
    InvalidMonotone(String),
    #[error("map image of `{id}` has dimension {found}, expected {expected}")]
    MapDimension {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("map has {found} images but the source has {expected} nondegenerate simplices")]
    MapArity { expected: usize, found: usize },
    #[error("maps are not composable")]
    NotComposable,
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Errors from JSON and text (de)serialisation.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected schema `{expected}`, found `{found}`")]
    Schema { expected: String, found: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("{0}")]
    Invalid(String),
}
