use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate map: |ad - bc| = {det:e} is below the construction threshold")]
    DegenerateMap { det: f64 },

    #[error("derivative requested at the pole of the map")]
    PoleDerivative,

    #[error("pole of the map lies inside the closed disc (distance to disc {gap:e})")]
    PoleInsideDisc { gap: f64 },

    #[error("invalid disc: center ({re}, {im}), radius {radius}")]
    InvalidDisc { re: f64, im: f64, radius: f64 },

    #[error("maps do not send the unit disc strictly inside itself: {}", .offenders.join(", "))]
    NotInMD { offenders: Vec<String> },

    #[error("empty generator set")]
    EmptyGeneratorSet,

    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),

    #[error("unknown generator name `{0}`")]
    UnknownName(String),

    #[error("generator index {index} out of range for an alphabet of {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("word has an empty period")]
    EmptyPeriod,

    #[error("generator `{0}` is not tangent and has no gamma value")]
    MissingGamma(String),

    #[error("points do not form a tangency pair: {0}")]
    NotTangentPair(String),

    #[error("conjugated map is not affine (|c| = {c:e})")]
    NotAffine { c: f64 },

    #[error("invalid affine map: a = {a}, Re(b) = {re_b}")]
    InvalidAffine { a: f64, re_b: f64 },

    #[error("composition sequence is of limit-point type")]
    NotLimitDisc,

    #[error("gamma series diverges (period product {product})")]
    SeriesDiverges { product: f64 },

    #[error("empty prefix")]
    EmptyPrefix,

    #[error("no interior minimum: gammas must include values both above and below 1")]
    NoInteriorMinimum,

    #[error("hypothesis violated by generators: {}", .offenders.join(", "))]
    HypothesisViolated { offenders: Vec<String> },

    #[error("dimension formula needs at least two generators (log of alphabet size is 0)")]
    LogBaseDegenerate,

    #[error("tangency graph is not complete")]
    GraphNotComplete,

    #[error("tangent generator construction failed: {0}")]
    ConstructionFailed(String),

    #[error("orbit became numerically unstable at step {step}")]
    OrbitUnstable { step: usize },

    #[error("trace too short: {len} steps, need at least {needed}")]
    TraceTooShort { len: usize, needed: usize },

    #[error("sample point lies outside the closed unit disc")]
    PointOutsideClosedDisc,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolated { .. }
            | Error::GraphNotComplete
            | Error::LogBaseDegenerate
            | Error::NotLimitDisc
            | Error::NoInteriorMinimum => 3,
            Error::NoConvergence { .. }
            | Error::OrbitUnstable { .. }
            | Error::SeriesDiverges { .. }
            | Error::NotAffine { .. }
            | Error::PoleInsideDisc { .. }
            | Error::PoleDerivative
            | Error::ConstructionFailed(_) => 4,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
