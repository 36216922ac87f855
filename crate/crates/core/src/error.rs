use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDenominator,
    #[error("unknown coordinate {0}")]
    UnknownCoordinate(String),
    #[error("pole at the evaluation point")]
    PoleAtPoint,
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("incompatible channel counts {0} and {1}")]
    ChannelMismatch(usize, usize),
    #[error("degree error: {0}")]
    DegreeError(String),
    #[error("coordinate map misses target coordinate {0}")]
    MapIncomplete(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not a k-contact form: {0}")]
    NotKContact(String),
    #[error("symmetries are not supplementary to the distribution")]
    NotSupplementary,
    #[error("not a symmetry: {0}")]
    NotASymmetry(String),
    #[error("bad coordinate partition: {0}")]
    PartitionError(String),
    #[error("k-function is not eta-Hamiltonian")]
    NotHamiltonian,
    #[error("form is not in Darboux normal form")]
    NotDarboux,
    #[error("k-vector field does not solve the HDW equations")]
    NotAnHdwSolution,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unknown algebra {0}")]
    UnknownAlgebra(String),
    #[error("unknown corpus {0}")]
    UnknownCorpus(String),
    #[error("vector field depends on derivative coordinate {0}")]
    NotProjectable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal identity failed: {0}")]
    IdentityViolated(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::UnknownCoordinate(_) => "UnknownCoordinate",
            Error::PoleAtPoint => "PoleAtPoint",
            Error::ChartMismatch => "ChartMismatch",
            Error::ChannelMismatch(..) => "ChannelMismatch",
            Error::DegreeError(_) => "DegreeError",
            Error::MapIncomplete(_) => "MapIncomplete",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotKContact(_) => "NotKContact",
            Error::NotSupplementary => "NotSupplementary",
            Error::NotASymmetry(_) => "NotASymmetry",
            Error::PartitionError(_) => "PartitionError",
            Error::NotHamiltonian => "NotHamiltonian",
            Error::NotDarboux => "NotDarboux",
            Error::NotAnHdwSolution => "NotAnHdwSolution",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::UnknownAlgebra(_) => "UnknownAlgebra",
            Error::UnknownCorpus(_) => "UnknownCorpus",
            Error::NotProjectable(_) => "NotProjectable",
            Error::Unsupported(_) => "Unsupported",
            Error::IdentityViolated(_) => "IdentityViolated",
            Error::InvalidChart(_) => "InvalidChart",
            Error::Syntax { .. } => "SyntaxError",
        }
    }
}
