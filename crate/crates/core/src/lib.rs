//! Finite categories, Grothendieck fibrations, generalized categories with families,
//! and the subtyping monad, all as explicit, exhaustively checkable data.

pub mod error;
pub mod fibration;
pub mod fincat;
pub mod funty;
pub mod gcwf;
pub mod io;
pub mod models;
pub mod monad;
pub mod report;

pub use error::{Error, Result};
pub use report::{CheckEntry, Report, Status};
