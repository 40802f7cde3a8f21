use thiserror::Error;

/// Errors raised by the library.
///
/// Axiom violations are not errors: they are report content. Errors are
/// reserved for malformed input, unmet preconditions, and internal
/// consistency failures (the latter classified by [`Error::is_internal`]).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("complex is not pure: chamber {chamber} has {found} vertices, expected {expected}")]
    NotPure {
        chamber: String,
        found: usize,
        expected: usize,
    },
    #[error("bad labelling: {0}")]
    BadLabelling(String),
    #[error("duplicate declaration: {0}")]
    Duplicate(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("chambers {0} and {1} lie in different gallery components")]
    Disconnected(String, String),
    #[error("not a face of the complex: {0}")]
    NotAFace(String),
    #[error("operation needs a labelled complex")]
    NeedsLabels,
    #[error("geodesic count between {from} and {to} exceeds cap {cap}")]
    CapExceeded {
        from: String,
        to: String,
        cap: usize,
    },
    #[error("relation is not a partial order; cycle: {}", cycle.join(" < "))]
    NotAPartialOrder { cycle: Vec<String> },
    #[error("no unique minimum of the residue of {face} in the order of {chamber}")]
    NoUniqueMinimum { face: String, chamber: String },
    #[error("gate property fails at face {face}, chamber {chamber}: {reason}")]
    GatePropertyFails {
        face: String,
        chamber: String,
        reason: String,
    },
    #[error("no opposite chamber for {0}")]
    NoOpposite(String),
    #[error("several opposite chambers for {chamber}: {}", candidates.join(", "))]
    MultipleOpposites {
        chamber: String,
        candidates: Vec<String>,
    },
    #[error("not a permutation of the chambers: {0}")]
    NotAPermutation(String),
    #[error("not a shelling at chamber {chamber}: intersection with earlier chambers contains {witness}")]
    NotAShelling { chamber: String, witness: String },
    #[error("restriction map needs exactly one chamber with empty restriction, found {0}")]
    BadRestrictionMap(usize),
    #[error("complex must be thin: facet {0} is not in exactly two chambers")]
    ThinnessRequired(String),
    #[error("euler characteristic mismatch: {0}")]
    EulerMismatch(String),
    #[error("n-gon needs n >= 3, got {0}")]
    BadN(usize),
    #[error("size exceeds desk scale: {0}")]
    ScaleExceeded(String),
    #[error("degenerate normal: {0}")]
    DegenerateNormal(String),
    #[error("realizability failure: {0}")]
    RealizabilityFailure(String),
    #[error("arrangement is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("product undefined: {0}")]
    ProductUndefined(String),
    #[error("chain has {} closed classes; stationary distribution is not unique", classes.len())]
    ReducibleChain { classes: Vec<Vec<String>> },
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("band is not graded: {0}")]
    NotGraded(String),
    #[error("not a band: {0}")]
    NotABand(String),
    #[error("field order {0} is not prime")]
    NonPrimeField(u32),
    #[error("chamber {0} is not in the apartment")]
    NotInApartment(String),
    #[error("chambers {0} and {1} are not opposite")]
    NotOpposite(String, String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Errors that indicate a broken identity inside the library rather than
    /// bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::EulerMismatch(_)
                | Error::RealizabilityFailure(_)
                | Error::OracleMismatch(_)
                | Error::Inconsistent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
