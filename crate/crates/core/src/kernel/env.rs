use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::builtins::{builtin_type, prim_type};
use super::syntax::Resolve;
use super::term::{Builtin, Name, PrimOp, Term, TermKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Defined,
    Axiom,
    TrustedPrelude,
    Primitive,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::Defined => "defined",
            Origin::Axiom => "axiom",
            Origin::TrustedPrelude => "trusted-prelude",
            Origin::Primitive => "primitive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: Name,
    pub ty: Term,
    pub body: Option<Term>,
    pub reducible: bool,
    pub origin: Origin,
}

/// Which translation a self-relation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelKind {
    /// plain parametricity relation
    Param,
    /// univalent relation
    Univalent,
}

/// Global constants plus the self-relations attached to symbols that are
/// related to themselves.
#[derive(Clone, Default)]
pub struct GlobalEnv {
    entries: HashMap<Name, Entry>,
    order: Vec<Name>,
    self_rel: HashMap<(RelKind, String), Term>,
}

/// Key under which a head symbol's self-relation is stored.
pub fn head_key(t: &Term) -> Option<String> {
    match t.kind() {
        TermKind::Const(n) => Some(n.to_string()),
        TermKind::Ind(b) => Some(b.surface()),
        TermKind::Prim(p) => Some(p.name().to_string()),
        _ => None,
    }
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Entry> {
        self.order.iter().map(move |n| &self.entries[n])
    }

    /// Inserts without checking. Callers go through `Kernel::declare`
    /// unless the entry was checked elsewhere.
    pub fn insert_unchecked(&mut self, e: Entry) {
        if !self.entries.contains_key(&e.name) {
            self.order.push(e.name.clone());
        }
        self.entries.insert(e.name.clone(), e);
    }

    pub fn is_reducible(&self, name: &str) -> bool {
        self.entries.get(name).map(|e| e.reducible && e.body.is_some()).unwrap_or(false)
    }

    pub fn origin(&self, name: &str) -> Option<Origin> {
        self.entries.get(name).map(|e| e.origin)
    }

    pub fn set_self_relation(&mut self, kind: RelKind, head: &Term, rel: Term) {
        if let Some(k) = head_key(head) {
            self.self_rel.insert((kind, k), rel);
        }
    }

    pub fn self_relation(&self, kind: RelKind, head: &Term) -> Option<Term> {
        head_key(head).and_then(|k| self.self_rel.get(&(kind, k)).cloned())
    }

    pub fn self_related_builtin(&self, kind: RelKind, b: Builtin) -> bool {
        self.self_rel.contains_key(&(kind, b.surface()))
    }

    pub fn self_related_prim(&self, kind: RelKind, p: PrimOp) -> bool {
        self.self_rel.contains_key(&(kind, p.name().to_string()))
    }
}

impl Resolve for GlobalEnv {
    fn global(&self, name: &str) -> Option<Term> {
        self.entries.get(name).map(|e| Term::cnst_n(e.name.clone()))
    }
}

/// Ordered list of binder types, innermost last.
#[derive(Clone, Debug, Default)]
pub struct LocalCtx {
    entries: Vec<(Name, Term)>,
}

impl LocalCtx {
    pub fn new() -> LocalCtx {
        LocalCtx::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: Name, ty: Term) {
        self.entries.push((name, ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    /// Type of variable `k`, valid in the full context.
    pub fn lookup(&self, k: u32) -> Option<Term> {
        let n = self.entries.len();
        let k = k as usize;
        if k >= n {
            return None;
        }
        Some(self.entries[n - 1 - k].1.lift(k as u32 + 1, 0))
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// One registered relation `left ≈ right` with its witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub left: Name,
    pub right: Name,
    pub witness: Term,
}

/// Telescope of related constant pairs.
#[derive(Clone, Debug, Default)]
pub struct GlobalContext {
    triples: Vec<Triple>,
    // symbol key -> whether it reaches a related symbol; reset on push
    reach: RefCell<HashMap<String, bool>>,
}

impl GlobalContext {
    pub fn new() -> GlobalContext {
        GlobalContext::default()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn push(&mut self, t: Triple) {
        self.triples.push(t);
        self.reach.get_mut().clear();
    }

    pub fn prefix(&self, n: usize) -> GlobalContext {
        GlobalContext { triples: self.triples[..n].to_vec(), ..Default::default() }
    }

    /// Whether `t` mentions a related symbol, directly or through the types
    /// and bodies of the constants it uses.
    pub fn reaches(&self, env: &GlobalEnv, t: &Term) -> bool {
        if self.triples.is_empty() {
            return false;
        }
        let mut memo = self.reach.take();
        let r = self.reaches_in(env, t, &mut memo);
        *self.reach.borrow_mut() = memo;
        r
    }

    fn reaches_in(&self, env: &GlobalEnv, t: &Term, memo: &mut HashMap<String, bool>) -> bool {
        match t.kind() {
            TermKind::Sort(_) | TermKind::Var(_) => false,
            TermKind::Int(_) => self.lookup("int16").is_some(),
            TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) | TermKind::App(a, b) => {
                self.reaches_in(env, a, memo) || self.reaches_in(env, b, memo)
            }
            TermKind::Const(_) | TermKind::Ind(_) | TermKind::Prim(_) => {
                let key = head_key(t).unwrap();
                if self.lookup(&key).is_some() {
                    return true;
                }
                if let Some(&r) = memo.get(&key) {
                    return r;
                }
                memo.insert(key.clone(), false);
                let r = match t.kind() {
                    TermKind::Const(n) => env.get(n).is_some_and(|e| {
                        self.reaches_in(env, &e.ty, memo) || e.body.as_ref().is_some_and(|b| self.reaches_in(env, b, memo))
                    }),
                    TermKind::Ind(b) => self.reaches_in(env, &builtin_type(*b), memo),
                    TermKind::Prim(p) => self.reaches_in(env, &prim_type(*p), memo),
                    _ => unreachable!(),
                };
                memo.insert(key, r);
                r
            }
        }
    }

    pub fn lookup(&self, left: &str) -> Option<&Triple> {
        self.triples.iter().find(|t| &*t.left == left)
    }

    pub fn relates(&self, left: &str, right: &str) -> bool {
        self.triples.iter().any(|t| &*t.left == left && &*t.right == right)
    }

    pub fn without(&self, left: &str) -> GlobalContext {
        GlobalContext {
            triples: self.triples.iter().filter(|t| &*t.left != left).cloned().collect(),
            ..Default::default()
        }
    }
}
