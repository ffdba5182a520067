//! Call-by-name reduction: weak-head normalization on an explicit frame
//! stack, full normalization on a task stack, step accounting and the
//! axiom-stuck check.

pub mod iota;

use std::collections::HashSet;

use thiserror::Error;

use crate::kernel::builtins::major_index;
use crate::kernel::{Builtin, GlobalEnv, Name, Origin, PrimOp, Term, TermKind};
use crate::stdlib::literals::prim_eval;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum EvalError {
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(u64),
}

#[derive(Clone, Debug)]
pub struct NormResult {
    pub normal_form: Term,
    pub steps: u64,
    pub budget_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub effective: bool,
    pub stuck_axioms: Vec<Name>,
    pub steps: u64,
}

enum Frame {
    /// Waiting for the scrutinee of `elim pre _`.
    Elim { elim: Builtin, pre: Vec<Term>, spine: Vec<Term> },
    /// Waiting for the next literal argument of a primitive.
    Prim { op: PrimOp, done: Vec<Term>, todo: Vec<Term>, spine: Vec<Term> },
}

/// Rebuilds `head a1 .. an` from a spine stored in reverse.
fn close(head: Term, spine: Vec<Term>) -> Term {
    Term::apps(head, spine.into_iter().rev())
}

fn unwind(mut cur: Term, frames: Vec<Frame>) -> Term {
    for f in frames.into_iter().rev() {
        cur = match f {
            Frame::Elim { elim, mut pre, spine } => {
                pre.push(cur);
                close(Term::apps(Term::ind(elim), pre), spine)
            }
            Frame::Prim { op, mut done, todo, spine } => {
                done.push(cur);
                done.extend(todo.into_iter().rev());
                close(Term::apps(Term::prim(op), done), spine)
            }
        };
    }
    cur
}

pub struct Machine<'a> {
    pub env: &'a GlobalEnv,
    pub steps: u64,
    pub budget: u64,
}

impl<'a> Machine<'a> {
    pub fn new(env: &'a GlobalEnv, budget: u64) -> Machine<'a> {
        Machine { env, steps: 0, budget }
    }

    fn tick(&mut self) {
        self.steps += 1;
    }

    pub fn whnf(&mut self, t: &Term) -> Result<Term, EvalError> {
        let (r, hit) = self.whnf_partial(t);
        if hit {
            Err(EvalError::BudgetExceeded(self.budget))
        } else {
            Ok(r)
        }
    }

    /// Runs to weak-head normal form or until the budget runs out, in which
    /// case the reduct reached so far comes back with the flag set.
    pub fn whnf_partial(&mut self, t: &Term) -> (Term, bool) {
        let mut frames: Vec<Frame> = Vec::new();
        let mut head = t.clone();
        let mut spine: Vec<Term> = Vec::new();
        loop {
            if self.steps >= self.budget {
                // one more firing would overrun; hand back what we have
                if self.redex_ahead(&head, &spine) || !frames.is_empty() {
                    self.steps = self.budget + 1;
                    return (unwind(close(head, spine), frames), true);
                }
            }
            match head.kind() {
                TermKind::App(f, a) => {
                    spine.push(a.clone());
                    head = f.clone();
                    continue;
                }
                TermKind::Lam(_, _, b) if !spine.is_empty() => {
                    let a = spine.pop().unwrap();
                    head = b.instantiate(&a);
                    self.tick();
                    continue;
                }
                TermKind::Const(n) if self.env.is_reducible(n) => {
                    head = self.env.get(n).and_then(|e| e.body.clone()).unwrap();
                    self.tick();
                    continue;
                }
                TermKind::Ind(b) => {
                    if let Some(m) = major_index(*b) {
                        if spine.len() > m {
                            let pre: Vec<Term> = (0..m).map(|_| spine.pop().unwrap()).collect();
                            let major = spine.pop().unwrap();
                            frames.push(Frame::Elim { elim: *b, pre, spine: std::mem::take(&mut spine) });
                            head = major;
                            continue;
                        }
                    }
                }
                TermKind::Prim(op) if spine.len() >= op.arity() => {
                    let mut todo: Vec<Term> = (0..op.arity()).map(|_| spine.pop().unwrap()).collect();
                    todo.reverse();
                    let first = todo.pop().unwrap();
                    frames.push(Frame::Prim { op: *op, done: Vec::new(), todo, spine: std::mem::take(&mut spine) });
                    head = first;
                    continue;
                }
                _ => {}
            }
            // (head, spine) is weak-head normal; hand it to the innermost frame
            let mut val = close(head, spine);
            loop {
                match frames.pop() {
                    None => return (val, false),
                    Some(Frame::Elim { elim, pre, spine: outer }) => match iota::contract(elim, &pre, &val) {
                        Some(r) => {
                            self.tick();
                            head = r;
                            spine = outer;
                            break;
                        }
                        None => {
                            let mut args = pre;
                            args.push(val);
                            val = close(Term::apps(Term::ind(elim), args), outer);
                        }
                    },
                    Some(Frame::Prim { op, mut done, mut todo, spine: outer }) => {
                        done.push(val);
                        if let Some(next) = todo.pop() {
                            frames.push(Frame::Prim { op, done, todo, spine: outer });
                            head = next;
                            spine = Vec::new();
                            break;
                        }
                        let lits: Option<Vec<u16>> = done
                            .iter()
                            .map(|a| match a.kind() {
                                TermKind::Int(v) => Some(*v),
                                _ => None,
                            })
                            .collect();
                        match lits {
                            Some(vs) => {
                                self.tick();
                                head = prim_eval(op, &vs);
                                spine = outer;
                                break;
                            }
                            None => val = close(Term::apps(Term::prim(op), done), outer),
                        }
                    }
                }
            }
        }
    }

    /// Whether the state can take a step without first descending into a
    /// frame.
    fn redex_ahead(&self, head: &Term, spine: &[Term]) -> bool {
        match head.kind() {
            TermKind::App(..) => true,
            TermKind::Lam(..) => !spine.is_empty(),
            TermKind::Const(n) => self.env.is_reducible(n),
            TermKind::Ind(b) => major_index(*b).map(|m| spine.len() > m).unwrap_or(false),
            TermKind::Prim(op) => spine.len() >= op.arity(),
            _ => false,
        }
    }

    /// Full normal form under binders. On budget exhaustion the partially
    /// reduced term is returned with the flag set.
    pub fn normalize(&mut self, t: &Term) -> (Term, bool) {
        enum Task {
            Norm(Term),
            Lam(Name),
            Pi(Name),
            Apps(Term, usize),
        }
        let mut hit = false;
        let mut tasks = vec![Task::Norm(t.clone())];
        let mut vals: Vec<Term> = Vec::new();
        while let Some(task) = tasks.pop() {
            match task {
                Task::Norm(u) => {
                    if hit {
                        vals.push(u);
                        continue;
                    }
                    let (w, h) = self.whnf_partial(&u);
                    if h {
                        hit = true;
                        vals.push(w);
                        continue;
                    }
                    match w.kind() {
                        TermKind::Lam(x, a, b) => {
                            tasks.push(Task::Lam(x.clone()));
                            tasks.push(Task::Norm(b.clone()));
                            tasks.push(Task::Norm(a.clone()));
                        }
                        TermKind::Pi(x, a, b) => {
                            tasks.push(Task::Pi(x.clone()));
                            tasks.push(Task::Norm(b.clone()));
                            tasks.push(Task::Norm(a.clone()));
                        }
                        TermKind::App(..) => {
                            let (h, args) = w.unfold_apps();
                            tasks.push(Task::Apps(h, args.len()));
                            for a in args.into_iter().rev() {
                                tasks.push(Task::Norm(a));
                            }
                        }
                        _ => vals.push(w),
                    }
                }
                Task::Lam(x) => {
                    let b = vals.pop().unwrap();
                    let a = vals.pop().unwrap();
                    vals.push(Term::lam_n(x, a, b));
                }
                Task::Pi(x) => {
                    let b = vals.pop().unwrap();
                    let a = vals.pop().unwrap();
                    vals.push(Term::pi_n(x, a, b));
                }
                Task::Apps(h, n) => {
                    let args = vals.split_off(vals.len() - n);
                    vals.push(Term::apps(h, args));
                }
            }
        }
        (vals.pop().unwrap(), hit)
    }
}

pub fn whnf(env: &GlobalEnv, t: &Term, budget: u64) -> Result<Term, EvalError> {
    Machine::new(env, budget).whnf(t)
}

pub fn normalize(env: &GlobalEnv, t: &Term, budget: u64) -> NormResult {
    let mut m = Machine::new(env, budget);
    let (normal_form, budget_hit) = m.normalize(t);
    NormResult { normal_form, steps: m.steps.min(budget), budget_hit }
}

/// One reduction step at the leftmost-outermost position reachable by
/// weak-head reduction, or `None` when `t` is weak-head normal.
pub fn step_once(env: &GlobalEnv, t: &Term) -> Option<Term> {
    let mut m = Machine::new(env, 1);
    let (r, hit) = m.whnf_partial(t);
    if hit || m.steps == 1 {
        Some(r)
    } else {
        None
    }
}

/// Axiom constants occurring in `t`, in first-occurrence order.
pub fn axioms_in(env: &GlobalEnv, t: &Term) -> Vec<Name> {
    let mut out: Vec<Name> = Vec::new();
    t.for_each_const(&mut |n| {
        if env.origin(n) == Some(Origin::Axiom) && !out.contains(n) {
            out.push(n.clone());
        }
    });
    out
}

/// Leading arguments of a built-in that only carry types: parameters of
/// constructors, parameters and motives of eliminators.
fn type_args(b: Builtin) -> usize {
    use Builtin::*;
    match b {
        NatRect(_) | BoolRect(_) | NRect(_) | PosRect(_) | EmptyRect(_) => 1,
        ListRect(..) => 2,
        SigTRect(..) | SumRect(..) | EqRect(..) => 3,
        _ => b.ctor_params(),
    }
}

/// Axioms met while reducing `t` in computationally relevant positions:
/// under binders, in eliminator branches and scrutinees, in constructor
/// fields and in arguments of stuck constants. Types and motives are not
/// entered, and an axiom's own arguments are not explored.
pub fn relevant_axioms(env: &GlobalEnv, t: &Term, budget: u64) -> Result<(Vec<Name>, u64), EvalError> {
    let mut m = Machine::new(env, budget);
    let mut out: Vec<Name> = Vec::new();
    let mut seen: HashSet<Term> = HashSet::new();
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        // sibling branches of stuck eliminators often repeat subterms
        if !seen.insert(u.clone()) {
            continue;
        }
        let w = m.whnf(&u)?;
        if let TermKind::Lam(_, _, b) = w.kind() {
            todo.push(b.clone());
            continue;
        }
        let (h, args) = w.unfold_apps();
        let skip = match h.kind() {
            TermKind::Const(n) if env.origin(n) == Some(Origin::Axiom) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
                args.len()
            }
            TermKind::Ind(b) if b.is_type_former() => args.len(),
            TermKind::Ind(b) => type_args(*b),
            TermKind::Pi(..) | TermKind::Sort(_) => args.len(),
            _ => 0,
        };
        todo.extend(args.into_iter().skip(skip).rev());
    }
    Ok((out, m.steps))
}

/// A term is effective when no axiom blocks its computation.
pub fn effectiveness(env: &GlobalEnv, t: &Term, budget: u64) -> Result<AxiomReport, EvalError> {
    let (stuck_axioms, steps) = relevant_axioms(env, t, budget)?;
    Ok(AxiomReport { effective: stuck_axioms.is_empty(), stuck_axioms, steps })
}
