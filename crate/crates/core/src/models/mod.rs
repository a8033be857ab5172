//! Constructors for example gcwfs and the generators that feed them.

mod doctrine;
mod finset;
mod heyting;
mod kernel_pair;
mod subobject;

#[cfg(test)]
mod tests;

pub use doctrine::{doctrine_gcwf, Doctrine};
pub use finset::{finset_skeleton, function_values, MAX_FINSET};
pub use heyting::{chain_fibration, context_category, heyting_sample, heyting_spec, HeytingAlgebra, HeytingFiberSpec};
pub use kernel_pair::{kernel_pair_gcwf, kernel_pair_gcwf_in, ArrowClass, KernelPair};
pub use subobject::{subobject_gcwf, Subobject};
