use crate::ratfunc::RatError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operator variable mismatch: {0} vs {1}")]
    VarMismatch(String, String),
    #[error("substitution scale must be nonzero")]
    ZeroScale,
    #[error("operator variable {0} does not act on this quasi-exponential")]
    NotActing(String),
    #[error("not in the supported class: {0}")]
    Unsupported(String),
    #[error("codegree witness not found <= {0}")]
    NoCodegreeWitness(usize),
    #[error("involution a needs a codegree witness, which this wave function lacks")]
    MissingWitness,
    #[error("caps insufficient or input outside supported class: {0}")]
    CapsInsufficient(String),
    #[error("evaluation point on coefficient pole")]
    PoleAtPoint,
    #[error("operator is not in the span of the basis: {0}")]
    NotInSpan(String),
    #[error("degenerate ansatz: {0}")]
    Degenerate(String),
    #[error("spectral element not found with degree <= {0}")]
    NoSpectralElement(usize),
    #[error("non-exact division: {0}")]
    NonExact(String),
    #[error("wave function is not fixed under ac")]
    NotAcFixed,
    #[error("pole on contour")]
    PoleOnContour,
    #[error("divergent kernel")]
    DivergentKernel,
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl From<RatError> for Error {
    fn from(_: RatError) -> Self {
        Error::ZeroDenominator
    }
}

pub type Result<T> = std::result::Result<T, Error>;
