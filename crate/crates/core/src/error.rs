use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("'{0}' is not a letter; expected a-z for generators or A-Z for their inverses")]
    InvalidLetter(char),

    #[error("letter '{letter}' is not in the alphabet of group {group}")]
    UnknownLetter { letter: char, group: String },

    #[error("generating set is not closed under inverses: {0}")]
    NonSymmetricGenerators(String),

    #[error("requested radius {requested} exceeds the BFS budget of {budget}")]
    BudgetExceeded { requested: u64, budget: u32 },

    #[error("transition positions {0} and {1} overlap")]
    OverlappingPositions(usize, usize),

    #[error("transition position {position} is out of range for a word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("expected a non-negative integer, got {0}")]
    NegativeInput(String),

    #[error("points span an affine subspace of dimension {span}, not the full dimension {dim}")]
    DegenerateHull { span: usize, dim: usize },

    #[error("hulls are only supported in dimensions 1 to 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("the origin is not interior to the hull; facet functionals cannot be normalised")]
    OriginNotInterior,

    #[error("no rearrangement of {target} found with words of length <= {max_len}")]
    SearchFailed { target: String, max_len: usize },

    #[error("invalid {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}
