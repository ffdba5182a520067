//! Registered relations between constants, witness resolution and the
//! two transport modes.

mod ops;

use thiserror::Error;

pub use ops::{compute_goal, GoalOutcome, Resolution, Route, Transported, Verdict};

use crate::cli::module::{self, Decl};
use crate::eval::DEFAULT_BUDGET;
use crate::kernel::syntax::{elaborate, Raw, SyntaxError};
use crate::kernel::{Entry, GlobalContext, GlobalEnv, Kernel, KernelError, LocalCtx, Name, Origin, Term};
use crate::translate::{param_rel, translate_in, uparam_rel, Mode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error("{component} is ill-typed: {cause}")]
    IllTyped { component: String, cause: KernelError },
    #[error("a relation for `{0}` and `{1}` is already registered")]
    DuplicateRelation(Name, Name),
    #[error("the type of `{0}` mentions constants with no registered relation")]
    MissingPrefix(Name, #[source] KernelError),
    #[error("no relation registered for constant `{0}`")]
    UnresolvedConstant(Name),
    #[error("`{0}` has no unfoldable body")]
    Opaque(Name),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// What processing one declaration produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    Declared(Name),
    Related(Name),
    Transported(Transported),
    Goal(GoalOutcome),
}

/// An environment together with its registered relations.
#[derive(Clone)]
pub struct Session {
    pub env: GlobalEnv,
    pub delta: GlobalContext,
    pub budget: u64,
    /// Give each new definition a self-relation translated from its body.
    pub derive_relations: bool,
}

impl Session {
    pub fn new(env: GlobalEnv) -> Session {
        Session { env, delta: GlobalContext::new(), budget: DEFAULT_BUDGET, derive_relations: false }
    }

    pub fn elab(&self, raw: &Raw) -> Result<Term, SyntaxError> {
        elaborate(raw, &mut Vec::new(), &self.env)
    }

    pub fn declare(&mut self, entry: Entry) -> Result<(), RegistryError> {
        let name = entry.name.to_string();
        Kernel::declare(&mut self.env, entry).map_err(|cause| RegistryError::IllTyped { component: name, cause })
    }

    /// Processes a def, axiom or trusted declaration.
    pub fn add_constant(&mut self, d: &Decl) -> Result<(), RegistryError> {
        let (name, ty, body, reducible, origin) = match d {
            Decl::Def { name, ty, body, opaque } => (name, ty, Some(body), !opaque, Origin::Defined),
            Decl::Axiom { name, ty } => (name, ty, None, false, Origin::Axiom),
            Decl::Trusted { name, ty } => (name, ty, None, false, Origin::TrustedPrelude),
            _ => unreachable!("add_constant on a relation declaration"),
        };
        let ty = self.elab(ty)?;
        let body = body.map(|b| self.elab(b)).transpose()?;
        self.declare(Entry { name: Name::from(name.as_str()), ty, body, reducible, origin })?;
        if self.derive_relations && origin == Origin::Defined {
            self.derive_self_relations(name)?;
        }
        Ok(())
    }

    /// Installs `c_ur` and `c_pr`, the translations of `c`'s body, as the
    /// self-relations of `c`, and reports whether both were installed.
    /// Bodies mentioning unrelated constants or whose translation does not
    /// check are left without one; opaque definitions get trusted relations.
    pub fn derive_self_relations(&mut self, name: &str) -> Result<bool, RegistryError> {
        let e = self.env.get(name).cloned().ok_or_else(|| RegistryError::UnknownName(name.to_string()))?;
        let head = Term::cnst_n(e.name.clone());
        let empty = GlobalContext::new();
        for (mode, tag) in [(Mode::Univalent, "ur"), (Mode::Param, "pr")] {
            let rel = match mode {
                Mode::Univalent => uparam_rel(&self.env, &empty, &e.ty),
                Mode::Param => param_rel(&self.env, &empty, &e.ty),
            };
            let body = match &e.body {
                Some(b) if e.reducible => translate_in(&self.env, &empty, mode, &LocalCtx::new(), b).map(|r| Some(r.0)),
                _ => Ok(None),
            };
            let (rel, body) = match (rel, body) {
                (Ok(r), Ok(b)) => (r, b),
                _ => return Ok(false),
            };
            let rname = Name::from(format!("{}_{}", name, tag).as_str());
            let ty = Term::apps(rel, [head.clone(), head.clone()]);
            let origin = if body.is_some() { Origin::Defined } else { Origin::TrustedPrelude };
            let entry = Entry { name: rname.clone(), ty, reducible: body.is_some(), body, origin };
            // a translated body can fail to check when its typing needs
            // reduction of a relation proof that is only a variable
            if Kernel::declare(&mut self.env, entry).is_err() {
                return Ok(false);
            }
            self.env.set_self_relation(mode.kind(), &head, Term::cnst_n(rname));
        }
        Ok(true)
    }

    /// Processes one declaration in order.
    pub fn process(&mut self, d: &Decl) -> Result<Outcome, RegistryError> {
        match d {
            Decl::Def { name, .. } | Decl::Axiom { name, .. } | Decl::Trusted { name, .. } => {
                self.add_constant(d)?;
                Ok(Outcome::Declared(Name::from(name.as_str())))
            }
            Decl::RelateType { a, b, equiv, rel, coh } => {
                let (equiv, rel, coh) = (self.elab(equiv)?, self.elab(rel)?, self.elab(coh)?);
                Ok(Outcome::Related(self.register_type_relation(a, b, &equiv, &rel, &coh)?))
            }
            Decl::RelateTerm { c, c2, proof } => {
                let proof = self.elab(proof)?;
                Ok(Outcome::Related(self.register_term_relation(c, c2, &proof)?))
            }
            Decl::Transport { name, source, mode } => Ok(Outcome::Transported(match mode {
                module::Mode::BlackBox => self.transport_black_box(name, source)?,
                module::Mode::WhiteBox => self.transport_white_box(name, source)?,
            })),
            Decl::Goal { name, ty } => {
                let p = self.elab(ty)?;
                Ok(Outcome::Goal(self.prove_goal(name, &p)?))
            }
        }
    }
}
