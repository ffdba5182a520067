use std::fmt;
use std::rc::Rc;

pub type Name = Rc<str>;

/// Universe index `i` of `Type_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(pub u32);

impl Level {
    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }

    pub fn max(self, other: Level) -> Level {
        Level(self.0.max(other.0))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Built-in inductive heads, constructors and eliminators. Universe
/// parameters are carried explicitly by the polymorphic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Nat,
    O,
    S,
    NatRect(u32),
    Bool,
    True,
    False,
    BoolRect(u32),
    Pos,
    XI,
    XO,
    XH,
    PosRect(u32),
    BinN,
    N0,
    Npos,
    NRect(u32),
    List(u32),
    Nil(u32),
    Cons(u32),
    ListRect(u32, u32),
    SigT(u32, u32),
    ExistT(u32, u32),
    SigTRect(u32, u32, u32),
    Eq(u32),
    EqRefl(u32),
    EqRect(u32, u32),
    Sum(u32, u32),
    Inl(u32, u32),
    Inr(u32, u32),
    SumRect(u32, u32, u32),
    Empty,
    EmptyRect(u32),
    Unit,
    Tt,
    Int16,
}

impl Builtin {
    pub fn base_name(&self) -> &'static str {
        use Builtin::*;
        match self {
            Nat => "nat",
            O => "O",
            S => "S",
            NatRect(_) => "nat_rect",
            Bool => "bool",
            True => "true",
            False => "false",
            BoolRect(_) => "bool_rect",
            Pos => "positive",
            XI => "xI",
            XO => "xO",
            XH => "xH",
            PosRect(_) => "positive_rect",
            BinN => "N",
            N0 => "N0",
            Npos => "Npos",
            NRect(_) => "N_rect",
            List(_) => "list",
            Nil(_) => "nil",
            Cons(_) => "cons",
            ListRect(..) => "list_rect",
            SigT(..) => "sigT",
            ExistT(..) => "existT",
            SigTRect(..) => "sigT_rect",
            Eq(_) => "eq",
            EqRefl(_) => "eq_refl",
            EqRect(..) => "eq_rect",
            Sum(..) => "sum",
            Inl(..) => "inl",
            Inr(..) => "inr",
            SumRect(..) => "sum_rect",
            Empty => "Empty",
            EmptyRect(_) => "Empty_rect",
            Unit => "unit",
            Tt => "tt",
            Int16 => "int16",
        }
    }

    pub fn levels(&self) -> Vec<u32> {
        use Builtin::*;
        match *self {
            NatRect(i) | BoolRect(i) | PosRect(i) | NRect(i) | List(i) | Nil(i) | Cons(i)
            | Eq(i) | EqRefl(i) | EmptyRect(i) => vec![i],
            ListRect(i, j) | SigT(i, j) | ExistT(i, j) | EqRect(i, j) | Sum(i, j) | Inl(i, j)
            | Inr(i, j) => vec![i, j],
            SigTRect(i, j, k) | SumRect(i, j, k) => vec![i, j, k],
            _ => vec![],
        }
    }

    /// Number of universe parameters expected by `from_parts`.
    pub fn arity_of(name: &str) -> Option<usize> {
        Builtin::from_parts(name, &[0, 0, 0]).map(|b| b.levels().len())
    }

    /// Builds a builtin from its surface name and level arguments. Missing
    /// levels default to 0.
    pub fn from_parts(name: &str, lv: &[u32]) -> Option<Builtin> {
        use Builtin::*;
        let l = |k: usize| lv.get(k).copied().unwrap_or(0);
        Some(match name {
            "nat" => Nat,
            "O" => O,
            "S" => S,
            "nat_rect" => NatRect(l(0)),
            "bool" => Bool,
            "true" => True,
            "false" => False,
            "bool_rect" => BoolRect(l(0)),
            "positive" => Pos,
            "xI" => XI,
            "xO" => XO,
            "xH" => XH,
            "positive_rect" => PosRect(l(0)),
            "N" => BinN,
            "N0" => N0,
            "Npos" => Npos,
            "N_rect" => NRect(l(0)),
            "list" => List(l(0)),
            "nil" => Nil(l(0)),
            "cons" => Cons(l(0)),
            "list_rect" => ListRect(l(0), l(1)),
            "sigT" => SigT(l(0), l(1)),
            "existT" => ExistT(l(0), l(1)),
            "sigT_rect" => SigTRect(l(0), l(1), l(2)),
            "eq" => Eq(l(0)),
            "eq_refl" => EqRefl(l(0)),
            "eq_rect" => EqRect(l(0), l(1)),
            "sum" => Sum(l(0), l(1)),
            "inl" => Inl(l(0), l(1)),
            "inr" => Inr(l(0), l(1)),
            "sum_rect" => SumRect(l(0), l(1), l(2)),
            "Empty" => Empty,
            "Empty_rect" => EmptyRect(l(0)),
            "unit" => Unit,
            "tt" => Tt,
            "int16" => Int16,
            _ => return None,
        })
    }

    /// Surface spelling including level annotations, e.g. `sigT@{1,0}`.
    pub fn surface(&self) -> String {
        level_suffixed(self.base_name(), &self.levels())
    }

    pub fn is_type_former(&self) -> bool {
        use Builtin::*;
        matches!(
            self,
            Nat | Bool | Pos | BinN | List(_) | SigT(..) | Eq(_) | Sum(..) | Empty | Unit | Int16
        )
    }

    pub fn is_constructor(&self) -> bool {
        use Builtin::*;
        matches!(
            self,
            O | S | True | False | XI | XO | XH | N0 | Npos | Nil(_) | Cons(_) | ExistT(..)
                | EqRefl(_) | Inl(..) | Inr(..) | Tt
        )
    }

    /// Number of type parameters a constructor takes before its fields.
    pub fn ctor_params(&self) -> usize {
        use Builtin::*;
        match self {
            Nil(_) | Cons(_) => 1,
            ExistT(..) | EqRefl(_) | Inl(..) | Inr(..) => 2,
            _ => 0,
        }
    }
}

pub fn level_suffixed(base: &str, lv: &[u32]) -> String {
    match lv.len() {
        0 => base.to_string(),
        1 => format!("{}@{}", base, lv[0]),
        _ => {
            let parts: Vec<String> = lv.iter().map(|l| l.to_string()).collect();
            format!("{}@{{{}}}", base, parts.join(","))
        }
    }
}

/// Machine-integer primitives at width 16.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimOp {
    Lsl,
    Add16,
    Mul16,
    ToN16,
}

impl PrimOp {
    pub fn name(&self) -> &'static str {
        match self {
            PrimOp::Lsl => "lsl",
            PrimOp::Add16 => "add16",
            PrimOp::Mul16 => "mul16",
            PrimOp::ToN16 => "int16_to_N",
        }
    }

    pub fn from_name(s: &str) -> Option<PrimOp> {
        Some(match s {
            "lsl" => PrimOp::Lsl,
            "add16" => PrimOp::Add16,
            "mul16" => PrimOp::Mul16,
            "int16_to_N" => PrimOp::ToN16,
            _ => return None,
        })
    }

    pub fn arity(&self) -> usize {
        match self {
            PrimOp::ToN16 => 1,
            _ => 2,
        }
    }
}

pub enum TermKind {
    Sort(Level),
    Var(u32),
    Const(Name),
    Lam(Name, Term, Term),
    Pi(Name, Term, Term),
    App(Term, Term),
    Ind(Builtin),
    Int(u16),
    Prim(PrimOp),
}

struct Node {
    kind: TermKind,
    // one past the largest loose de Bruijn index
    lbr: u32,
    // structural hash ignoring binder names
    digest: u64,
}

/// Shared, immutable term. Equality is α-equality: binder names are
/// ignored.
#[derive(Clone)]
pub struct Term(Rc<Node>);

impl Drop for Node {
    fn drop(&mut self) {
        // deep spines (unary numerals) would overflow the stack otherwise
        let mut stack: Vec<Term> = Vec::new();
        take_children(&mut self.kind, &mut stack);
        while let Some(t) = stack.pop() {
            if let Ok(mut node) = Rc::try_unwrap(t.0) {
                take_children(&mut node.kind, &mut stack);
            }
        }
    }
}

fn take_children(kind: &mut TermKind, out: &mut Vec<Term>) {
    let k = std::mem::replace(kind, TermKind::Sort(Level(0)));
    match k {
        TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) | TermKind::App(a, b) => {
            out.push(a);
            out.push(b);
        }
        _ => {}
    }
}

impl Term {
    fn mk(kind: TermKind) -> Term {
        let lbr = match &kind {
            TermKind::Var(i) => i + 1,
            TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) => a.lbr().max(b.lbr().saturating_sub(1)),
            TermKind::App(f, a) => f.lbr().max(a.lbr()),
            _ => 0,
        };
        let digest = match &kind {
            TermKind::Sort(l) => mix(1, l.0 as u64),
            TermKind::Var(i) => mix(2, *i as u64),
            TermKind::Const(n) => mix(3, str_hash(n)),
            TermKind::Lam(_, a, b) => mix(mix(4, a.0.digest), b.0.digest),
            TermKind::Pi(_, a, b) => mix(mix(5, a.0.digest), b.0.digest),
            TermKind::App(f, a) => mix(mix(6, f.0.digest), a.0.digest),
            TermKind::Ind(b) => mix(7, std_hash(b)),
            TermKind::Int(v) => mix(8, *v as u64),
            TermKind::Prim(p) => mix(9, *p as u64),
        };
        Term(Rc::new(Node { kind, lbr, digest }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// One past the largest free de Bruijn index (0 for closed terms).
    pub fn lbr(&self) -> u32 {
        self.0.lbr
    }

    pub fn is_closed(&self) -> bool {
        self.0.lbr == 0
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    pub fn sort(l: u32) -> Term {
        Term::mk(TermKind::Sort(Level(l)))
    }

    pub fn sort_l(l: Level) -> Term {
        Term::mk(TermKind::Sort(l))
    }

    pub fn var(i: u32) -> Term {
        Term::mk(TermKind::Var(i))
    }

    pub fn cnst(name: &str) -> Term {
        Term::mk(TermKind::Const(Rc::from(name)))
    }

    pub fn cnst_n(name: Name) -> Term {
        Term::mk(TermKind::Const(name))
    }

    pub fn lam(x: &str, a: Term, b: Term) -> Term {
        Term::mk(TermKind::Lam(Rc::from(x), a, b))
    }

    pub fn lam_n(x: Name, a: Term, b: Term) -> Term {
        Term::mk(TermKind::Lam(x, a, b))
    }

    pub fn pi(x: &str, a: Term, b: Term) -> Term {
        Term::mk(TermKind::Pi(Rc::from(x), a, b))
    }

    pub fn pi_n(x: Name, a: Term, b: Term) -> Term {
        Term::mk(TermKind::Pi(x, a, b))
    }

    /// Non-dependent arrow; `b` lives in the outer scope.
    pub fn arrow(a: Term, b: Term) -> Term {
        Term::pi("_", a, b.lift(1, 0))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(TermKind::App(f, a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn ind(b: Builtin) -> Term {
        Term::mk(TermKind::Ind(b))
    }

    pub fn int(v: u16) -> Term {
        Term::mk(TermKind::Int(v))
    }

    pub fn prim(p: PrimOp) -> Term {
        Term::mk(TermKind::Prim(p))
    }

    /// Splits an application spine into head and arguments.
    pub fn unfold_apps(&self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut cur = self.clone();
        while let TermKind::App(f, a) = cur.kind() {
            args.push(a.clone());
            let f = f.clone();
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head(&self) -> Term {
        let mut cur = self.clone();
        loop {
            let next = match cur.kind() {
                TermKind::App(f, _) => f.clone(),
                _ => return cur,
            };
            cur = next;
        }
    }

    pub fn as_const(&self) -> Option<&Name> {
        match self.kind() {
            TermKind::Const(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_ind(&self) -> Option<Builtin> {
        match self.kind() {
            TermKind::Ind(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_sort(&self) -> Option<Level> {
        match self.kind() {
            TermKind::Sort(l) => Some(*l),
            _ => None,
        }
    }

    /// Rebuilds the term, replacing every loose variable. `f` receives the
    /// variable index and the number of binders crossed so far.
    pub fn map_vars(&self, depth: u32, f: &mut dyn FnMut(u32, u32) -> Term) -> Term {
        if self.lbr() <= depth {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(i) => f(*i, depth),
            TermKind::Lam(x, a, b) => Term::lam_n(x.clone(), a.map_vars(depth, f), b.map_vars(depth + 1, f)),
            TermKind::Pi(x, a, b) => Term::pi_n(x.clone(), a.map_vars(depth, f), b.map_vars(depth + 1, f)),
            TermKind::App(g, a) => Term::app(g.map_vars(depth, f), a.map_vars(depth, f)),
            _ => self.clone(),
        }
    }

    /// Adds `n` to every variable at or above `cutoff`.
    pub fn lift(&self, n: u32, cutoff: u32) -> Term {
        if n == 0 || self.lbr() <= cutoff {
            return self.clone();
        }
        self.map_vars(cutoff, &mut |i, d| if i >= d { Term::var(i + n) } else { Term::var(i) })
    }

    /// Removes `n` binders at `cutoff`; fails if one of them is referenced.
    pub fn lower(&self, n: u32, cutoff: u32) -> Option<Term> {
        if n == 0 || self.lbr() <= cutoff {
            return Some(self.clone());
        }
        let mut ok = true;
        let t = self.map_vars(cutoff, &mut |i, d| {
            if i < d {
                Term::var(i)
            } else if i < d + n {
                ok = false;
                Term::var(i)
            } else {
                Term::var(i - n)
            }
        });
        ok.then_some(t)
    }

    /// Replaces variable `k` by `u` and closes the gap. `u` is taken relative
    /// to the scope outside the substituted binder; it is lifted by `k` and by
    /// every binder crossed.
    pub fn subst(&self, k: u32, u: &Term) -> Term {
        if self.lbr() <= k {
            return self.clone();
        }
        self.map_vars(k, &mut |i, d| {
            if i == d {
                u.lift(d, 0)
            } else if i > d {
                Term::var(i - 1)
            } else {
                Term::var(i)
            }
        })
    }

    /// β-instantiation of a binder body.
    pub fn instantiate(&self, u: &Term) -> Term {
        self.subst(0, u)
    }

    /// Does variable `k` occur in the term?
    pub fn has_var(&self, k: u32) -> bool {
        if self.lbr() <= k {
            return false;
        }
        match self.kind() {
            TermKind::Var(i) => *i == k,
            TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) => a.has_var(k) || b.has_var(k + 1),
            TermKind::App(f, a) => f.has_var(k) || a.has_var(k),
            _ => false,
        }
    }

    /// Visits every constant name in the term.
    pub fn for_each_const(&self, f: &mut dyn FnMut(&Name)) {
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            match t.kind() {
                TermKind::Const(n) => f(n),
                TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) | TermKind::App(a, b) => {
                    stack.push(b.clone());
                    stack.push(a.clone());
                }
                _ => {}
            }
        }
    }

    /// Number of nodes (iterative; suitable for deep terms).
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            n += 1;
            match t.kind() {
                TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) | TermKind::App(a, b) => {
                    stack.push(b.clone());
                    stack.push(a.clone());
                }
                _ => {}
            }
        }
        n
    }
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(29) ^ (x >> 7)
}

fn std_hash<T: std::hash::Hash>(x: &T) -> u64 {
    use std::hash::Hasher;
    // DefaultHasher::new uses fixed keys, so digests are stable within a build
    let mut h = std::collections::hash_map::DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

fn str_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.digest);
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.0.digest != other.0.digest {
            return false;
        }
        let mut stack = vec![(self.clone(), other.clone())];
        while let Some((a, b)) = stack.pop() {
            if a.ptr_eq(&b) {
                continue;
            }
            if a.lbr() != b.lbr() {
                return false;
            }
            match (a.kind(), b.kind()) {
                (TermKind::Sort(x), TermKind::Sort(y)) if x == y => {}
                (TermKind::Var(x), TermKind::Var(y)) if x == y => {}
                (TermKind::Const(x), TermKind::Const(y)) if x == y => {}
                (TermKind::Ind(x), TermKind::Ind(y)) if x == y => {}
                (TermKind::Int(x), TermKind::Int(y)) if x == y => {}
                (TermKind::Prim(x), TermKind::Prim(y)) if x == y => {}
                (TermKind::Lam(_, a1, b1), TermKind::Lam(_, a2, b2))
                | (TermKind::Pi(_, a1, b1), TermKind::Pi(_, a2, b2))
                | (TermKind::App(a1, b1), TermKind::App(a2, b2)) => {
                    stack.push((b1.clone(), b2.clone()));
                    stack.push((a1.clone(), a2.clone()));
                }
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::pretty::print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::pretty::print(self))
    }
}
