//! Dependent type theory engine with parametricity and univalent
//! parametricity translations, used to transport programs, statements
//! and proofs across type equivalences.

pub mod cli;
pub mod eval;
pub mod kernel;
pub mod registry;
pub mod stdlib;
pub mod translate;

pub use kernel::{GlobalContext, GlobalEnv, KernelError, Level, LocalCtx, Term};
