//! Finite categories, functors, and natural transformations as validated data.

mod category;
mod derived;
mod functor;
mod limits;

pub use category::{CategoryBuilder, FinCategory, Mor, MorphismData, Obj};
pub use derived::{derived_category, ArrowCategory, DerivedKind, SectionsCategory, SliceCategory};
pub use functor::{FinFunctor, NatTransformation};
pub use limits::{
    has_all_pullbacks, pullback, pullback_of_functors, terminal_object, FunctorPullback, PullbackResult,
};

use crate::report::Report;

/// Anything whose laws can be checked exhaustively.
pub enum Entity<'a> {
    Category(&'a FinCategory),
    Functor(&'a FinFunctor),
    Transformation(&'a NatTransformation),
}

/// Lists every violated category, functor, or naturality law.
pub fn validate(entity: Entity<'_>) -> Report {
    match entity {
        Entity::Category(c) => c.validate(),
        Entity::Functor(f) => f.validate(),
        Entity::Transformation(t) => t.validate(),
    }
}
