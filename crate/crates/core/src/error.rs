use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed entity: {0}")]
    MalformedEntity(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("no pullback of `{f}` and `{g}`")]
    NoPullback { f: String, g: String },
    #[error("category has no terminal object")]
    NoTerminal,
    #[error("slice category requires a base object")]
    MissingBase,
    #[error("no cartesian lift of `{base_morphism}` at `{object}`")]
    NoLift { object: String, base_morphism: String },
    #[error("indexed category is not strict: {0}")]
    NonStrict(String),
    #[error("cleavage is not split: {0}")]
    NonSplitCleavage(String),
    #[error("mismatched base: {0}")]
    MismatchedBase(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("mismatched judgements: {0}")]
    MismatchedJudgements(String),
    #[error("construction too large: {what} ({size} > {limit})")]
    TooLarge { what: String, size: usize, limit: usize },
    #[error("fibration is not faithful: {0}")]
    NotFaithful(String),
    #[error("functor is not a fibration: {0}")]
    NotAFibration(String),
    #[error("function-type pullback property unavailable: {0}")]
    StageTwoUnavailable(String),
}
