//! The comma monad `p ↦ (p/p)` on fibrations over a fixed base, and its lift to gcwfs.

mod comma;
mod lift;

#[cfg(test)]
mod tests;

pub use comma::{check_monad_laws_fib, mult, t_fib, t_fib_morphism, unit, CommaFibration};
pub use lift::{
    check_judgement_correspondence, check_monad_laws_gcwf, check_t_gcwf, coercion_as_term, iterate, iterate_bounded,
    lifted_size, max_objects, sizes, subtyping_as_type, t_gcwf, t_gcwf_morphism, GcwfMonadData, DEFAULT_MAX_OBJECTS,
};
