use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("minimal polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error(
        "polynomial has {real_roots} real roots but degree {degree}; field is not totally real"
    )]
    NotTotallyReal { real_roots: usize, degree: usize },
    #[error("polynomial is reducible over Q: {0}")]
    NotIrreducible(String),

    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("embedding index {index} out of range 1..={degree}")]
    BadIndex { index: usize, degree: usize },

    #[error("matrix determinant is not 1")]
    NotUnimodular,
    #[error("element is not hyperbolic at the requested embedding")]
    NotHyperbolic,
    #[error("all translation lengths vanish; no translation direction")]
    NoTranslationDirection,
    #[error("hyperbolic elements share a fixed point")]
    CommonFixedPoint,
    #[error("no ping-pong certificate found with powers up to {0}")]
    SchottkyNotFound(u32),
    #[error("geometry undecidable at working precision")]
    GeometryDegenerate,
    #[error("element is elliptic or parabolic at this embedding")]
    NotElliptic,

    #[error("invalid q = {0}")]
    BadQ(i64),
    #[error("group construction failed validation: {0}")]
    ConstructionInvalid(String),
    #[error("invalid group spec: {0}")]
    BadSpec(String),

    #[error("empty cloud")]
    EmptyCloud,
    #[error("nothing to plot")]
    EmptyData,
    #[error("question needs at least two embeddings")]
    DegreeOne,
    #[error("no element matching the pattern within budget ({0})")]
    WitnessNotFound(String),
}

impl Error {
    /// Variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::NotMonic => "NotMonic",
            Error::NotSquarefree => "NotSquarefree",
            Error::NotTotallyReal { .. } => "NotTotallyReal",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::BadIndex { .. } => "BadIndex",
            Error::NotUnimodular => "NotUnimodular",
            Error::NotHyperbolic => "NotHyperbolic",
            Error::NoTranslationDirection => "NoTranslationDirection",
            Error::CommonFixedPoint => "CommonFixedPoint",
            Error::SchottkyNotFound(_) => "SchottkyNotFound",
            Error::GeometryDegenerate => "GeometryDegenerate",
            Error::NotElliptic => "NotElliptic",
            Error::BadQ(_) => "BadQ",
            Error::ConstructionInvalid(_) => "ConstructionInvalid",
            Error::BadSpec(_) => "BadSpec",
            Error::EmptyCloud => "EmptyCloud",
            Error::EmptyData => "EmptyData",
            Error::DegreeOne => "DegreeOne",
            Error::WitnessNotFound(_) => "WitnessNotFound",
        }
    }
}
