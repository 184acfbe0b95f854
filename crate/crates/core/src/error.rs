use thiserror::Error;

/// Everything that can go wrong while building or querying spaces and maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point `{0}` is missing from its own minimal open set")]
    MissingSelf(String),
    #[error("`{inner}` lies in the minimal open set of `{outer}` but U_{inner} is not contained in U_{outer}")]
    NotTransitive { outer: String, inner: String },
    #[error("a space needs at least one point")]
    EmptySpace,
    #[error("{what}: size {got} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("point index {index} is outside a universe of {universe} points")]
    OutOfUniverse { index: usize, universe: usize },
    #[error("cannot take a subspace on the empty set")]
    EmptySubspace,
    #[error("the subset argument must be nonempty")]
    EmptySubset,
    #[error("value at point `{0}` is empty")]
    EmptyValue(String),
    #[error("an m-constant map needs a nonempty value")]
    EmptyConstantValue,
    #[error("space is not a registered product")]
    NotAProduct,
    #[error("domain/codomain mismatch: {0}")]
    DomainMismatch(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("map `{0}` is not m-continuous")]
    NotContinuous(String),
    #[error("square does not commute at point `{0}`")]
    NotCommuting(String),
    #[error("the pullback has no points")]
    EmptyPullback,
    #[error("subset {0} is not open")]
    NotOpen(String),
    #[error("space is not m-pathwise connected: no m-path from {from} to {to}")]
    NotPathConnected { from: String, to: String },
    #[error("map is not surjective")]
    NotSurjective,
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("bad model parameters: {0}")]
    BadParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
