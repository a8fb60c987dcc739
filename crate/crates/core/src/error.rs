use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("point index {index} outside carrier of size {size}")]
    PointOutOfRange { index: usize, size: usize },

    #[error("carrier must be non-empty")]
    EmptyCarrier,

    #[error("distance table must be {expected}x{expected}, got a row of length {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("negative distance {value} at ({x}, {y})")]
    NegativeDistance { x: String, y: String, value: String },

    #[error("asymmetric distance: d({x}, {y}) = {forward} but d({y}, {x}) = {backward}")]
    Asymmetric {
        x: String,
        y: String,
        forward: String,
        backward: String,
    },

    #[error("missing distance for pair ({x}, {y})")]
    MissingDistance { x: String, y: String },

    #[error("invalid rational `{0}`: expected an integer or `p/q`")]
    InvalidRational(String),

    #[error("self-map is not total: no image for `{0}`")]
    MissingImage(String),

    #[error("image f({x}) = {image} is not in Y")]
    ImageOutsideSubspace { x: String, image: String },

    #[error("contraction constant {0} outside [0, 1)")]
    ConstantOutOfRange(String),

    #[error("integrand outside the admissible class: {0}")]
    OutsideOmega(String),

    #[error("upper integration limit must be non-negative, got {0}")]
    NegativeLimit(String),

    #[error("{what} has {size} points; at most {max} are supported")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("{field}: {message}")]
    Document { field: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
