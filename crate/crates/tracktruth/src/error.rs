//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space has no worlds")]
    EmptySpace,
    #[error("too many {kind}: {count} exceeds the limit of {max}")]
    TooLarge {
        kind: &'static str,
        count: usize,
        max: usize,
    },
    #[error("duplicate world name `{0}`")]
    DuplicateWorldName(String),
    #[error("duplicate observable label `{0}`")]
    DuplicateObservableLabel(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown observable `{0}`")]
    UnknownObservable(String),
    #[error("world id {0} out of range (space has {1} worlds)")]
    WorldOutOfRange(usize, usize),
    #[error("preorder dimension {order} does not match the space's {space} worlds")]
    DimensionMismatch { order: usize, space: usize },
    #[error("layers do not partition the worlds: {0}")]
    BadLayers(String),
    #[error("relation is not reflexive on its domain")]
    NotReflexive,
    #[error("relation is not transitive")]
    NotTransitive,
    #[error("order is not total; this operation is defined for total orders only")]
    NotTotal,
    #[error("enumeration bound exceeded: {count} worlds > bound {bound}")]
    EnumerationBound { count: usize, bound: usize },
    #[error("stream cycle must be nonempty")]
    EmptyCycle,
    #[error("space is not negation-closed: `{0}` has no complement observable")]
    NotNegationClosed(String),
    #[error("world `{0}` satisfies no observable, so no sound stream for it exists")]
    NoSoundStream(String),
    #[error("space is not finitely identifiable: world `{0}` has no definite tell-tale set")]
    NotFinitelyIdentifiable(String),
    #[error("step {pos}: {source}")]
    AtStep {
        pos: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("search budget exceeded: more than {budget} nodes explored")]
    BudgetExceeded { budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
