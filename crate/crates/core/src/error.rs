use thiserror::Error;

use crate::gluing::Interval;
use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // rationals
    #[error("cannot parse {text:?} as a rational")]
    Parse { text: String },
    #[error("zero denominator in {text:?}")]
    ZeroDenominator { text: String },

    // joint distributions
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: Rational },
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: Rational },
    #[error("{vars} variables need {expected} probabilities, got {actual}")]
    LengthMismatch {
        vars: usize,
        expected: usize,
        actual: usize,
    },
    #[error("label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("unknown variable {0:?}")]
    UnknownLabel(String),
    #[error("variable list is empty")]
    EmptyVariables,
    #[error("{0:?} is not a permutation of the distribution's variables")]
    NotAPermutation(Vec<String>),
    #[error("{vars} variables exceed the cap of {cap}")]
    TooLarge { vars: usize, cap: usize },

    // graphs and models
    #[error("edge ({0}, {1}) closes a cycle")]
    CycleDetected(String, String),
    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },
    #[error("self loop on {0:?}")]
    SelfLoop(String),
    #[error("edge ({0}, {1}) listed twice")]
    DuplicateEdge(String, String),
    #[error("graph has no edges")]
    NoEdges,
    #[error("edge distributions do not match the graph: {0}")]
    EdgeMismatch(String),
    #[error("incident edges disagree on the marginal of {0:?}")]
    InconsistentAtVertex(String),
    #[error("model is not marginally consistent")]
    InconsistentModel,

    // gluing
    #[error("inputs disagree on the overlap marginal")]
    OverlapMismatch,
    #[error("glue inputs are malformed: {0}")]
    VariableCollision(String),
    #[error("parameter {index} = {value} lies outside {allowed}")]
    ParamOutOfBox {
        index: usize,
        value: Rational,
        allowed: Box<Interval>,
    },
    #[error("expected {expected} parameters, got {actual}")]
    ParamCount { expected: usize, actual: usize },
    #[error("graph is not a path")]
    NotAPath,
    #[error("graph is not a star")]
    NotAStar,
    #[error("target joint does not reproduce the step's inputs")]
    NotInFamily,
    #[error("family inputs are not marginals of the canonical joint")]
    NotCanonicalFamily,

    // oracle
    #[error("scan resolution must be positive")]
    ResolutionZero,
    #[error("parameter coordinate {coord} out of range ({count} parameters)")]
    NoSuchParam { coord: usize, count: usize },
    #[error("solver witness failed substitution check")]
    WitnessRejected,

    // files
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {reason}")]
    Semantic { location: String, reason: Box<Error> },
    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn at(self, location: impl Into<String>) -> Error {
        Error::Semantic {
            location: location.into(),
            reason: Box::new(self),
        }
    }
}
