use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension error: expected {expected}, got {got}")]
    Dimension { expected: String, got: usize },

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("polynomial has a root in the current field; deflate instead of adjoining")]
    NotIrreducible,

    #[error("adjunction of degree {0} is not supported on the exact path")]
    UnsupportedDegree(usize),

    #[error("irreducibility of the polynomial could not be certified over this field")]
    Uncertified,

    #[error("elements belong to incompatible field towers")]
    TowerMismatch,

    #[error("det(Ax - By) vanishes identically")]
    ZeroDetForm,

    #[error("singular member {0} has rank below n-1")]
    RankDeficient(usize),

    #[error("stacked linear forms are linearly dependent")]
    SingularStack,

    #[error("root coordinate vanishes; the scalar in the adjugate identity is zero")]
    ZeroRootCoordinate,

    #[error("family is degenerate: delta(a, b) = 0")]
    DegenerateFamily,

    #[error("input matrix is singular")]
    SingularInput,

    #[error("no syzygy of the expected shape fits the samples")]
    NoSyzygyInShape,

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("numeric root isolation failed: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::Dimension { .. } => "DimensionError",
            Error::NotSymmetric(..) => "NotSymmetric",
            Error::NotIrreducible => "NotIrreducible",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::Uncertified => "Uncertified",
            Error::TowerMismatch => "TowerMismatch",
            Error::ZeroDetForm => "ZeroDetForm",
            Error::RankDeficient(_) => "RankDeficient",
            Error::SingularStack => "SingularStack",
            Error::ZeroRootCoordinate => "ZeroRootCoordinate",
            Error::DegenerateFamily => "DegenerateFamily",
            Error::SingularInput => "SingularInput",
            Error::NoSyzygyInShape => "NoSyzygyInShape",
            Error::Calibration(_) => "CalibrationError",
            Error::Numeric(_) => "NumericError",
        }
    }

    /// Whether the error is the caller's fault rather than a property of the
    /// mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Dimension { .. } | Error::NotSymmetric(..))
    }
}
