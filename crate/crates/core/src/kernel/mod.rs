//! Term syntax, typing and conversion for CCω with explicit universe
//! levels, a fixed set of built-in inductives and 16-bit primitives.

pub mod builtins;
pub mod env;
pub mod pretty;
pub mod syntax;
pub mod term;
pub mod typing;

pub use env::{Entry, GlobalContext, GlobalEnv, LocalCtx, Origin, RelKind, Triple};
pub use term::{Builtin, Level, Name, PrimOp, Term, TermKind};
pub use typing::{check, conv, head_beta, infer, wf_global_context, CheckResult, Kernel, KernelError, Shown};

/// `subst(t, k, u)`: replaces variable `k` of `t` by `u`.
pub fn subst(t: &Term, k: u32, u: &Term) -> Term {
    t.subst(k, u)
}

/// `shift(t, amount, cutoff)`: lifts free variables at or above `cutoff`.
pub fn shift(t: &Term, amount: u32, cutoff: u32) -> Term {
    t.lift(amount, cutoff)
}
