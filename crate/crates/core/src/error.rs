use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: f64, found: String },
    #[error("series is not a Lie element (residual {0:e})")]
    NonLie(f64),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole at {0} lies on the path")]
    PoleOnPath(String),
    #[error("adaptive integration failed to reach tolerance {0:e}")]
    StepSize(f64),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("{0} is not a puncture of the connection")]
    NotAPuncture(String),
    #[error("regularization extrapolation residual {residual:e} exceeds {tol:e}")]
    Extrapolation { residual: f64, tol: f64 },
    #[error("no Frobenius action given for letter `{0}`")]
    MissingAction(String),
    #[error("invalid Frobenius data: {0}")]
    InvalidFrobenius(String),
    #[error("case not covered by the closed formula: {0}")]
    UnclassifiedCase(String),
    #[error("eigenform data rejected: {0}")]
    InvalidEigenform(String),
    #[error("s = {0} lies outside the convergence region")]
    Convergence(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("local factor has a pole at s = {0}")]
    LocalPole(String),
    #[error("unsupported local type: {0}")]
    UnsupportedLocal(String),
    #[error("missing epsilon factor at p = {0}")]
    MissingEpsilon(u64),
    #[error("cusp is not near 0: {0}")]
    CuspNotNearZero(String),
    #[error("form is not cuspidal: {0}")]
    NotCuspidal(String),
    #[error("inner-product table incomplete: {0}")]
    IncompleteTable(String),
    #[error("orthogonality condition not declared")]
    OrthNotDeclared,
    #[error("missing diagonal residue for {0}")]
    MissingResidue(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
