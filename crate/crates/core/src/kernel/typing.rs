use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::builtins::{builtin_type, prim_type};
use super::env::{Entry, GlobalContext, GlobalEnv, LocalCtx};
use super::pretty::print_short;
use super::term::{Builtin, Level, Name, Term, TermKind};
use crate::eval::{Machine, DEFAULT_BUDGET};

/// Term wrapper whose `Display` is cut short, for error messages.
#[derive(Clone, PartialEq)]
pub struct Shown(pub Term);

impl fmt::Display for Shown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_short(&self.0, 240))
    }
}

impl fmt::Debug for Shown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("unbound variable #{index} in a context of length {depth}")]
    UnboundVariable { index: u32, depth: usize },
    #[error("unknown constant `{0}`")]
    UnknownConstant(Name),
    #[error("not a function: {term} has type {ty}")]
    NotAFunction { term: Shown, ty: Shown },
    #[error("not a type: {term} has type {ty}")]
    NotAType { term: Shown, ty: Shown },
    #[error("type mismatch at {term}: expected {expected}, found {actual}")]
    TypeMismatch { term: Shown, expected: Shown, actual: Shown },
    #[error("conversion failure for {term}: expected {expected}, found {actual}")]
    ConversionFailure { term: Shown, expected: Shown, actual: Shown },
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("ill-formed telescope at position {position}: {cause}")]
    IllFormedTelescope { position: usize, cause: Box<KernelError> },
    #[error("constant `{0}` is already declared")]
    DuplicateConstant(Name),
    #[error("constant `{0}` has no relation in the global context and no self-relation")]
    UnrelatedConstant(Name),
    #[error("universe level mismatch: {0}")]
    LevelMismatch(String),
}

impl KernelError {
    pub fn is_budget(&self) -> bool {
        match self {
            KernelError::BudgetExceeded(_) => true,
            KernelError::IllFormedTelescope { cause, .. } => cause.is_budget(),
            _ => false,
        }
    }
}

pub type CheckResult = Result<(), KernelError>;

/// Typechecker over a frozen environment. Each conversion test runs under
/// its own step budget.
pub struct Kernel<'a> {
    pub env: &'a GlobalEnv,
    pub budget: u64,
    /// Reduction steps spent by all conversions so far.
    pub steps: u64,
    // types of closed compound terms, valid in every context
    closed: HashMap<Term, Term>,
}

impl<'a> Kernel<'a> {
    pub fn new(env: &'a GlobalEnv) -> Kernel<'a> {
        Kernel { env, budget: DEFAULT_BUDGET, steps: 0, closed: HashMap::new() }
    }

    pub fn with_budget(env: &'a GlobalEnv, budget: u64) -> Kernel<'a> {
        Kernel { env, budget, steps: 0, closed: HashMap::new() }
    }

    pub fn whnf(&mut self, t: &Term) -> Result<Term, KernelError> {
        let mut m = Machine::new(self.env, self.budget);
        let r = m.whnf(t);
        self.steps += m.steps;
        r.map_err(|_| KernelError::BudgetExceeded(self.budget))
    }

    pub fn infer(&mut self, ctx: &mut LocalCtx, t: &Term) -> Result<Term, KernelError> {
        let compound = matches!(t.kind(), TermKind::App(..) | TermKind::Lam(..) | TermKind::Pi(..));
        if !compound || t.lbr() > 0 {
            return self.infer_uncached(ctx, t);
        }
        if let Some(ty) = self.closed.get(t) {
            return Ok(ty.clone());
        }
        let ty = self.infer_uncached(ctx, t)?;
        self.closed.insert(t.clone(), ty.clone());
        Ok(ty)
    }

    fn infer_uncached(&mut self, ctx: &mut LocalCtx, t: &Term) -> Result<Term, KernelError> {
        match t.kind() {
            TermKind::Sort(l) => Ok(Term::sort_l(l.succ())),
            TermKind::Var(k) => ctx.lookup(*k).ok_or(KernelError::UnboundVariable { index: *k, depth: ctx.len() }),
            TermKind::Const(n) => self
                .env
                .get(n)
                .map(|e| e.ty.clone())
                .ok_or_else(|| KernelError::UnknownConstant(n.clone())),
            TermKind::Ind(b) => Ok(builtin_type(*b)),
            TermKind::Int(_) => Ok(Term::ind(Builtin::Int16)),
            TermKind::Prim(p) => Ok(prim_type(*p)),
            TermKind::Pi(x, a, b) => {
                let la = self.infer_sort(ctx, a)?;
                ctx.push(x.clone(), a.clone());
                let lb = self.infer_sort(ctx, b);
                ctx.pop();
                Ok(Term::sort_l(la.max(lb?)))
            }
            TermKind::Lam(x, a, b) => {
                self.infer_sort(ctx, a)?;
                ctx.push(x.clone(), a.clone());
                let tb = self.infer(ctx, b);
                ctx.pop();
                Ok(Term::pi_n(x.clone(), a.clone(), tb?))
            }
            TermKind::App(..) => {
                let (h, args) = t.unfold_apps();
                let mut ty = self.infer(ctx, &h)?;
                let mut sofar = h;
                for a in args {
                    let w = match ty.kind() {
                        TermKind::Pi(..) => ty.clone(),
                        _ => self.whnf(&ty)?,
                    };
                    let (dom, cod) = match w.kind() {
                        TermKind::Pi(_, d, c) => (d.clone(), c.clone()),
                        _ => return Err(KernelError::NotAFunction { term: Shown(sofar), ty: Shown(w) }),
                    };
                    let ta = self.infer(ctx, &a)?;
                    if !self.conv(&ta, &dom)? {
                        return Err(KernelError::TypeMismatch {
                            term: Shown(a.clone()),
                            expected: Shown(dom),
                            actual: Shown(ta),
                        });
                    }
                    ty = cod.instantiate(&a);
                    sofar = Term::app(sofar, a);
                }
                Ok(ty)
            }
        }
    }

    pub fn infer_sort(&mut self, ctx: &mut LocalCtx, t: &Term) -> Result<Level, KernelError> {
        let ty = self.infer(ctx, t)?;
        if let Some(l) = ty.as_sort() {
            return Ok(l);
        }
        let w = self.whnf(&ty)?;
        w.as_sort().ok_or(KernelError::NotAType { term: Shown(t.clone()), ty: Shown(w) })
    }

    pub fn check(&mut self, ctx: &mut LocalCtx, t: &Term, ty: &Term) -> CheckResult {
        let actual = self.infer(ctx, t)?;
        if self.conv(&actual, ty)? {
            Ok(())
        } else {
            Err(KernelError::ConversionFailure { term: Shown(t.clone()), expected: Shown(ty.clone()), actual: Shown(actual) })
        }
    }

    /// Convertibility by comparing weak-head normal forms structurally,
    /// which decides equality of full normal forms without η.
    pub fn conv(&mut self, a: &Term, b: &Term) -> Result<bool, KernelError> {
        let mut m = Machine::new(self.env, self.budget);
        let r = conv_with(&mut m, a, b);
        self.steps += m.steps;
        r.map_err(|_| KernelError::BudgetExceeded(self.budget))
    }

    /// Checks and inserts a declaration.
    pub fn declare(env: &mut GlobalEnv, entry: Entry) -> CheckResult {
        if env.contains(&entry.name) {
            return Err(KernelError::DuplicateConstant(entry.name.clone()));
        }
        {
            let mut k = Kernel::new(env);
            let mut ctx = LocalCtx::new();
            k.infer_sort(&mut ctx, &entry.ty)?;
            if let Some(body) = &entry.body {
                k.check(&mut ctx, body, &entry.ty)?;
            }
        }
        env.insert_unchecked(entry);
        Ok(())
    }
}

fn atomic_eq(a: &Term, b: &Term) -> bool {
    match (a.kind(), b.kind()) {
        (TermKind::Var(x), TermKind::Var(y)) => x == y,
        (TermKind::Const(x), TermKind::Const(y)) => x == y,
        (TermKind::Ind(x), TermKind::Ind(y)) => x == y,
        (TermKind::Int(x), TermKind::Int(y)) => x == y,
        (TermKind::Prim(x), TermKind::Prim(y)) => x == y,
        (TermKind::Sort(x), TermKind::Sort(y)) => x == y,
        _ => false,
    }
}

pub(crate) fn conv_with(m: &mut Machine, a: &Term, b: &Term) -> Result<bool, crate::eval::EvalError> {
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = work.pop() {
        if x == y {
            continue;
        }
        if same_head_args(m, &x, &y)? {
            continue;
        }
        let wx = m.whnf(&x)?;
        let wy = m.whnf(&y)?;
        match (wx.kind(), wy.kind()) {
            (TermKind::Pi(_, a1, b1), TermKind::Pi(_, a2, b2)) | (TermKind::Lam(_, a1, b1), TermKind::Lam(_, a2, b2)) => {
                work.push((b1.clone(), b2.clone()));
                work.push((a1.clone(), a2.clone()));
            }
            (TermKind::Pi(..), _) | (_, TermKind::Pi(..)) | (TermKind::Lam(..), _) | (_, TermKind::Lam(..)) => {
                return Ok(false)
            }
            _ => {
                let (h1, args1) = wx.unfold_apps();
                let (h2, args2) = wy.unfold_apps();
                if args1.len() != args2.len() || !atomic_eq(&h1, &h2) {
                    return Ok(false);
                }
                for (p, q) in args1.into_iter().zip(args2).rev() {
                    work.push((p, q));
                }
            }
        }
    }
    Ok(true)
}

/// `c a1 .. an` against `c b1 .. bn`: compares the arguments before
/// unfolding `c`. A failure here is not final; the caller unfolds.
fn same_head_args(m: &mut Machine, x: &Term, y: &Term) -> Result<bool, crate::eval::EvalError> {
    let (h1, a1) = x.unfold_apps();
    let (h2, a2) = y.unfold_apps();
    match (h1.as_const(), h2.as_const()) {
        (Some(c1), Some(c2)) if c1 == c2 && a1.len() == a2.len() && !a1.is_empty() && m.env.is_reducible(c1) => {
            for (p, q) in a1.iter().zip(&a2) {
                if !conv_with(m, p, q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}

pub fn infer(env: &GlobalEnv, ctx: &LocalCtx, t: &Term) -> Result<Term, KernelError> {
    let mut ctx = ctx.clone();
    let ty = Kernel::new(env).infer(&mut ctx, t)?;
    Ok(head_beta(&ty))
}

pub fn check(env: &GlobalEnv, ctx: &LocalCtx, t: &Term, ty: &Term) -> CheckResult {
    let mut ctx = ctx.clone();
    Kernel::new(env).check(&mut ctx, t, ty)
}

pub fn conv(env: &GlobalEnv, a: &Term, b: &Term) -> Result<bool, KernelError> {
    Kernel::new(env).conv(a, b)
}

/// Contracts β-redexes at the head only (no δ), keeping constant names.
pub fn head_beta(t: &Term) -> Term {
    let mut cur = t.clone();
    loop {
        let (h, args) = cur.unfold_apps();
        match (h.kind(), args.first()) {
            (TermKind::Lam(_, _, b), Some(a)) => {
                let r = b.instantiate(a);
                cur = Term::apps(r, args[1..].iter().cloned());
            }
            _ => return cur,
        }
    }
}

/// Every witness must relate its pair at the relation computed from the
/// triples before it.
pub fn wf_global_context(env: &GlobalEnv, delta: &GlobalContext) -> CheckResult {
    for (pos, t) in delta.triples().iter().enumerate() {
        let wrap = |cause: KernelError| KernelError::IllFormedTelescope { position: pos, cause: Box::new(cause) };
        let sym = |n: &Name| crate::translate::symbol(env, n).ok_or_else(|| wrap(KernelError::UnknownConstant(n.clone())));
        let (left, right) = (sym(&t.left)?, sym(&t.right)?);
        let left_ty = infer(env, &LocalCtx::new(), &left).map_err(wrap)?;
        let prefix = delta.prefix(pos);
        let rel = crate::translate::uparam_rel(env, &prefix, &left_ty).map_err(wrap)?;
        let expected = Term::apps(rel, [left, right]);
        check(env, &LocalCtx::new(), &t.witness, &expected).map_err(wrap)?;
    }
    Ok(())
}
