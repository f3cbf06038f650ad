use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported division by non-monomial {0}")]
    UnsupportedDivision(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("letter {0} escapes the carrier")]
    CarrierEscape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("resonant word {0}")]
    Resonance(String),
    #[error("divergent index {0}")]
    Divergent(String),
    #[error("closed form unavailable: {0}")]
    ClosedFormUnavailable(String),
    #[error("singularity at {0} is not simple")]
    NotSimple(String),
    #[error("unreachable branch: {0}")]
    Unreachable(String),
    #[error("point {0} lies on the singular set")]
    OnSingularSet(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors raised by the mathematics rather than by malformed input.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Parse(_) | Error::CarrierMismatch(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::UnsupportedDivision(_) => "unsupported_division",
            Error::CarrierMismatch(_) => "carrier_mismatch",
            Error::CarrierEscape(_) => "carrier_escape",
            Error::Precondition(_) => "precondition",
            Error::NotInvertible(_) => "not_invertible",
            Error::Resonance(_) => "resonance",
            Error::Divergent(_) => "divergent",
            Error::ClosedFormUnavailable(_) => "closed_form_unavailable",
            Error::NotSimple(_) => "not_simple",
            Error::Unreachable(_) => "unreachable",
            Error::OnSingularSet(_) => "on_singular_set",
            Error::Quadrature(_) => "quadrature",
            Error::Parse(_) => "parse",
        }
    }
}
