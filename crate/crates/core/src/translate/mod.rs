//! The three translations: plain parametricity, the prime (white-box)
//! renaming, and univalent parametricity, plus the abstraction checker.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::kernel::env::head_key;
use crate::kernel::{
    Builtin, CheckResult, GlobalContext, GlobalEnv, Kernel, KernelError, LocalCtx, Name, PrimOp, RelKind, Term,
    TermKind,
};

/// Resolves a constant, built-in or primitive by its surface name.
pub fn symbol(env: &GlobalEnv, name: &str) -> Option<Term> {
    if env.contains(name) {
        return Some(Term::cnst(name));
    }
    if let Some(p) = PrimOp::from_name(name) {
        return Some(Term::prim(p));
    }
    let (base, lv) = match name.split_once('@') {
        None => (name, Vec::new()),
        Some((b, rest)) => {
            let rest = rest.trim_start_matches('{').trim_end_matches('}');
            let lv: Option<Vec<u32>> = rest.split(',').map(|s| s.trim().parse().ok()).collect();
            (b, lv?)
        }
    };
    let b = Builtin::from_parts(base, &lv)?;
    (b.levels().len() == lv.len()).then(|| Term::ind(b))
}

fn unrelated(t: &Term) -> KernelError {
    KernelError::UnrelatedConstant(Name::from(head_key(t).unwrap_or_else(|| "literal".into()).as_str()))
}

/// Self-relations are derived with no registered relations, so they only
/// stand for a symbol that reaches nothing related.
fn self_relation(env: &GlobalEnv, delta: &GlobalContext, kind: RelKind, t: &Term) -> Option<Term> {
    if delta.reaches(env, t) {
        None
    } else {
        env.self_relation(kind, t)
    }
}

/// Replaces every Δ-related symbol by its partner; other symbols must be
/// self-related.
pub fn prime_translate(env: &GlobalEnv, delta: &GlobalContext, t: &Term) -> Result<Term, KernelError> {
    prime_in(env, delta, t, &mut HashMap::new())
}

// Compound results are memoized: unary literals nest every suffix.
fn prime_in(env: &GlobalEnv, delta: &GlobalContext, t: &Term, memo: &mut HashMap<Term, Term>) -> Result<Term, KernelError> {
    let r = match t.kind() {
        TermKind::Var(_) | TermKind::Sort(_) => return Ok(t.clone()),
        TermKind::Const(_) | TermKind::Ind(_) | TermKind::Prim(_) => {
            let key = head_key(t).unwrap();
            if let Some(tr) = delta.lookup(&key) {
                return symbol(env, &tr.right).ok_or_else(|| KernelError::UnknownConstant(tr.right.clone()));
            }
            return if self_relation(env, delta, RelKind::Univalent, t).is_some() {
                Ok(t.clone())
            } else {
                Err(unrelated(t))
            };
        }
        TermKind::Int(_) => {
            return if delta.lookup("int16").is_some() {
                Err(KernelError::UnrelatedConstant(Name::from("int16 literal")))
            } else {
                Ok(t.clone())
            };
        }
        _ if memo.contains_key(t) => return Ok(memo[t].clone()),
        TermKind::Lam(x, a, b) => Term::lam_n(x.clone(), prime_in(env, delta, a, memo)?, prime_in(env, delta, b, memo)?),
        TermKind::Pi(x, a, b) => Term::pi_n(x.clone(), prime_in(env, delta, a, memo)?, prime_in(env, delta, b, memo)?),
        TermKind::App(f, a) => Term::app(prime_in(env, delta, f, memo)?, prime_in(env, delta, a, memo)?),
    };
    memo.insert(t.clone(), r.clone());
    Ok(r)
}

/// Left copy of a source term inside the translated context.
pub fn left(t: &Term) -> Term {
    t.map_vars(0, &mut |i, d| if i < d { Term::var(i) } else { Term::var(3 * (i - d) + 2 + d) })
}

/// Right copy: primed, then placed inside the translated context.
pub fn right(env: &GlobalEnv, delta: &GlobalContext, t: &Term) -> Result<Term, KernelError> {
    Ok(placed_right(&prime_translate(env, delta, t)?))
}

fn placed_right(t: &Term) -> Term {
    t.map_vars(0, &mut |i, d| if i < d { Term::var(i) } else { Term::var(3 * (i - d) + 1 + d) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Param,
    Univalent,
}

impl Mode {
    pub fn kind(self) -> RelKind {
        match self {
            Mode::Param => RelKind::Param,
            Mode::Univalent => RelKind::Univalent,
        }
    }
}

/// How one node of a translation was produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    Sort(u32),
    Var(u32),
    /// A symbol's registered or built-in relation.
    Symbol(Term),
    Literal,
    Lam(Option<u32>),
    Pi(Option<(u32, u32)>),
    App,
}

/// Derivation tree of a translation; `replay` rebuilds the term from it.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub goal: Term,
    pub rule: Rule,
    pub children: Vec<Trace>,
}

impl Trace {
    /// Short description of the rule, e.g. `FP_forall@{0,0}` or `Δ: plus`.
    pub fn label(&self, delta: &GlobalContext) -> String {
        match &self.rule {
            Rule::Sort(l) => format!("FP_Type@{}", l),
            Rule::Var(k) => format!("var #{}", k),
            Rule::Literal => "literal".into(),
            Rule::Lam(_) => "lambda".into(),
            Rule::Pi(Some((i, j))) => format!("FP_forall@{{{},{}}}", i, j),
            Rule::Pi(None) => "pi".into(),
            Rule::App => self.children[0].label(delta),
            Rule::Symbol(w) => {
                let key = head_key(&self.goal).unwrap_or_default();
                match w.as_const() {
                    Some(n) if n.starts_with("FP_") => n.to_string(),
                    _ if delta.lookup(&key).is_some() => format!("Δ: {}", key),
                    _ => format!("self: {}", key),
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Trace::size).sum::<usize>()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Trace, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:width$}{:?}", "", t.rule_name(), width = depth * 2)?;
            for c in &t.children {
                go(c, depth + 1, f)?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

impl Trace {
    fn rule_name(&self) -> String {
        match &self.rule {
            Rule::Symbol(w) => format!("symbol {}", crate::kernel::pretty::print_short(w, 60)),
            r => format!("{:?}", r),
        }
    }
}

fn pi_family(mode: Mode, i: u32, j: u32) -> String {
    match mode {
        Mode::Univalent => format!("FP_forall@{{{},{}}}", i, j),
        Mode::Param => unreachable!(),
    }
}

struct Translator<'a> {
    env: &'a GlobalEnv,
    delta: &'a GlobalContext,
    mode: Mode,
    src: LocalCtx,
    primes: RefCell<HashMap<Term, Term>>,
}

impl<'a> Translator<'a> {
    fn level(&self, t: &Term) -> Result<u32, KernelError> {
        let mut k = Kernel::new(self.env);
        let mut ctx = self.src.clone();
        Ok(k.infer_sort(&mut ctx, t)?.0)
    }

    fn right(&self, t: &Term) -> Result<Term, KernelError> {
        Ok(placed_right(&prime_in(self.env, self.delta, t, &mut self.primes.borrow_mut())?))
    }

    fn constant(&self, name: &str) -> Result<Term, KernelError> {
        if self.env.contains(name) {
            Ok(Term::cnst(name))
        } else {
            Err(KernelError::LevelMismatch(format!("no prelude instance `{}`", name)))
        }
    }

    fn symbol_relation(&self, t: &Term) -> Result<Term, KernelError> {
        let key = head_key(t).unwrap();
        if let Some(tr) = self.delta.lookup(&key) {
            return Ok(tr.witness.clone());
        }
        self_relation(self.env, self.delta, self.mode.kind(), t).ok_or_else(|| unrelated(t))
    }

    /// Type of the relation binder for a variable of type `a`, valid two
    /// binders below the point where `a`'s relation `ra` was computed.
    fn rel_binder(&self, a: &Term, ra: &Term, level: Option<u32>) -> Result<Term, KernelError> {
        let (x, x2) = (Term::var(1), Term::var(0));
        Ok(match (self.mode, level) {
            (Mode::Univalent, Some(i)) => Term::apps(
                self.constant(&format!("ur_rel@{}", i))?,
                [left(a).lift(2, 0), self.right(a)?.lift(2, 0), ra.lift(2, 0), x, x2],
            ),
            _ => Term::apps(ra.lift(2, 0), [x, x2]),
        })
    }

    fn tr(&mut self, t: &Term) -> Result<(Term, Trace), KernelError> {
        let node = |rule: Rule, children: Vec<Trace>| Trace { goal: t.clone(), rule, children };
        match t.kind() {
            TermKind::Sort(l) => {
                let w = self.sort(l.0)?;
                Ok((w, node(Rule::Sort(l.0), vec![])))
            }
            TermKind::Var(k) => Ok((Term::var(3 * k), node(Rule::Var(*k), vec![]))),
            TermKind::Const(_) | TermKind::Ind(_) | TermKind::Prim(_) => {
                let w = self.symbol_relation(t)?;
                Ok((w.clone(), node(Rule::Symbol(w), vec![])))
            }
            TermKind::Int(v) => {
                if self.delta.lookup("int16").is_some() {
                    return Err(KernelError::UnrelatedConstant(Name::from("int16 literal")));
                }
                Ok((literal_relation(*v), node(Rule::Literal, vec![])))
            }
            TermKind::App(..) => {
                let (h, args) = t.unfold_apps();
                let (wh, th) = self.tr(&h)?;
                let mut children = vec![th];
                let mut out = Vec::with_capacity(3 * args.len());
                for a in &args {
                    let (wa, ta) = self.tr(a)?;
                    out.push(left(a));
                    out.push(self.right(a)?);
                    out.push(wa);
                    children.push(ta);
                }
                Ok((Term::apps(wh, out), node(Rule::App, children)))
            }
            TermKind::Lam(x, a, b) => {
                let i = match self.mode {
                    Mode::Univalent => Some(self.level(a)?),
                    Mode::Param => None,
                };
                let (ra, ta) = self.tr(a)?;
                self.src.push(x.clone(), a.clone());
                let rb = self.tr(b);
                self.src.pop();
                let (rb, tb) = rb?;
                let w = self.lam_node(x, a, &ra, i, rb)?;
                Ok((w, node(Rule::Lam(i), vec![ta, tb])))
            }
            TermKind::Pi(x, a, b) => {
                let (ra, ta) = self.tr(a)?;
                let ij = match self.mode {
                    Mode::Univalent => {
                        let i = self.level(a)?;
                        self.src.push(x.clone(), a.clone());
                        let j = self.level(b);
                        self.src.pop();
                        Some((i, j?))
                    }
                    Mode::Param => None,
                };
                self.src.push(x.clone(), a.clone());
                let rb = self.tr(b);
                self.src.pop();
                let (rb, tb) = rb?;
                let w = self.pi_node(x, a, b, &ra, ij, rb)?;
                Ok((w, node(Rule::Pi(ij), vec![ta, tb])))
            }
        }
    }

    fn sort(&self, l: u32) -> Result<Term, KernelError> {
        match self.mode {
            Mode::Univalent => self.constant(&format!("FP_Type@{}", l)),
            Mode::Param => Ok(param_sort(l)),
        }
    }

    fn lam_node(&self, x: &Name, a: &Term, ra: &Term, i: Option<u32>, body: Term) -> Result<Term, KernelError> {
        let (x1, xr) = primed_names(x);
        Ok(Term::lam_n(
            x.clone(),
            left(a),
            Term::lam_n(x1, self.right(a)?.lift(1, 0), Term::lam_n(xr, self.rel_binder(a, ra, i)?, body)),
        ))
    }

    fn pi_node(
        &self,
        x: &Name,
        a: &Term,
        b: &Term,
        ra: &Term,
        ij: Option<(u32, u32)>,
        rb: Term,
    ) -> Result<Term, KernelError> {
        let (x1, xr) = primed_names(x);
        match (self.mode, ij) {
            (Mode::Univalent, Some((i, j))) => {
                let fam = Term::lam_n(x.clone(), a.clone(), b.clone());
                let rel = self.lam_node(x, a, ra, Some(i), rb)?;
                Ok(Term::apps(
                    self.constant(&pi_family(self.mode, i, j))?,
                    [left(a), self.right(a)?, ra.clone(), left(&fam), self.right(&fam)?, rel],
                ))
            }
            _ => {
                // λ f f'. Π x x' xR. [B] (f x) (f' x')
                let whole = Term::pi_n(x.clone(), a.clone(), b.clone());
                let body = Term::apps(
                    rb.lift(2, 3),
                    [Term::app(Term::var(4), Term::var(2)), Term::app(Term::var(3), Term::var(1))],
                );
                let inner = Term::pi_n(
                    x.clone(),
                    left(a).lift(2, 0),
                    Term::pi_n(
                        x1,
                        self.right(a)?.lift(3, 0),
                        Term::pi_n(xr, Term::apps(ra.lift(4, 0), [Term::var(1), Term::var(0)]), body),
                    ),
                );
                Ok(Term::lam("f", left(&whole), Term::lam("f'", self.right(&whole)?.lift(1, 0), inner)))
            }
        }
    }

    /// Rebuilds a translation from its trace.
    fn replay(&mut self, tr: &Trace) -> Result<Term, KernelError> {
        let t = &tr.goal;
        match (&tr.rule, t.kind()) {
            (Rule::Sort(l), _) => self.sort(*l),
            (Rule::Var(k), _) => Ok(Term::var(3 * k)),
            (Rule::Symbol(w), _) => Ok(w.clone()),
            (Rule::Literal, TermKind::Int(v)) => Ok(literal_relation(*v)),
            (Rule::App, _) => {
                let (_, args) = t.unfold_apps();
                let wh = self.replay(&tr.children[0])?;
                let mut out = Vec::new();
                for (a, c) in args.iter().zip(&tr.children[1..]) {
                    out.push(left(a));
                    out.push(self.right(a)?);
                    out.push(self.replay(c)?);
                }
                Ok(Term::apps(wh, out))
            }
            (Rule::Lam(i), TermKind::Lam(x, a, _)) => {
                let ra = self.replay(&tr.children[0])?;
                self.src.push(x.clone(), a.clone());
                let rb = self.replay(&tr.children[1]);
                self.src.pop();
                self.lam_node(x, a, &ra, *i, rb?)
            }
            (Rule::Pi(ij), TermKind::Pi(x, a, b)) => {
                let ra = self.replay(&tr.children[0])?;
                self.src.push(x.clone(), a.clone());
                let rb = self.replay(&tr.children[1]);
                self.src.pop();
                self.pi_node(x, a, b, &ra, *ij, rb?)
            }
            _ => Err(KernelError::LevelMismatch("trace does not match its goal".into())),
        }
    }
}

fn primed_names(x: &Name) -> (Name, Name) {
    (Name::from(format!("{}'", x).as_str()), Name::from(format!("{}_R", x).as_str()))
}

/// `λ A B. A -> B -> Type@l`
fn param_sort(l: u32) -> Term {
    Term::lam(
        "A",
        Term::sort(l),
        Term::lam("B", Term::sort(l), Term::arrow(Term::var(1), Term::arrow(Term::var(0), Term::sort(l)))),
    )
}

/// Machine integers are related to themselves by equality.
fn literal_relation(v: u16) -> Term {
    Term::apps(Term::ind(Builtin::EqRefl(0)), [Term::ind(Builtin::Int16), Term::int(v)])
}

fn translator<'a>(env: &'a GlobalEnv, delta: &'a GlobalContext, mode: Mode, ctx: &LocalCtx) -> Translator<'a> {
    Translator { env, delta, mode, src: ctx.clone(), primes: RefCell::default() }
}

/// Plain parametricity translation of a closed term.
pub fn param_translate(env: &GlobalEnv, delta: &GlobalContext, t: &Term) -> Result<Term, KernelError> {
    Ok(translator(env, delta, Mode::Param, &LocalCtx::new()).tr(t)?.0)
}

/// Univalent parametricity translation of a closed term.
pub fn uparam_translate(env: &GlobalEnv, delta: &GlobalContext, t: &Term) -> Result<Term, KernelError> {
    Ok(uparam_traced(env, delta, t)?.0)
}

pub fn uparam_traced(env: &GlobalEnv, delta: &GlobalContext, t: &Term) -> Result<(Term, Trace), KernelError> {
    translate_in(env, delta, Mode::Univalent, &LocalCtx::new(), t)
}

/// Translation of a term typed in the source context `ctx`.
pub fn translate_in(
    env: &GlobalEnv,
    delta: &GlobalContext,
    mode: Mode,
    ctx: &LocalCtx,
    t: &Term,
) -> Result<(Term, Trace), KernelError> {
    translator(env, delta, mode, ctx).tr(t)
}

pub fn replay(env: &GlobalEnv, delta: &GlobalContext, mode: Mode, trace: &Trace) -> Result<Term, KernelError> {
    translator(env, delta, mode, &LocalCtx::new()).replay(trace)
}

/// The relation a closed type induces between its two copies:
/// `ur_rel@i A A' [A]`, of type `A -> A' -> Type@i`.
pub fn uparam_rel(env: &GlobalEnv, delta: &GlobalContext, a: &Term) -> Result<Term, KernelError> {
    rel_in(env, delta, Mode::Univalent, &LocalCtx::new(), a)
}

/// Relation induced by a type under plain parametricity, `[A]`.
pub fn param_rel(env: &GlobalEnv, delta: &GlobalContext, a: &Term) -> Result<Term, KernelError> {
    rel_in(env, delta, Mode::Param, &LocalCtx::new(), a)
}

fn rel_in(env: &GlobalEnv, delta: &GlobalContext, mode: Mode, ctx: &LocalCtx, a: &Term) -> Result<Term, KernelError> {
    let t = translator(env, delta, mode, ctx);
    let (w, _) = translator(env, delta, mode, ctx).tr(a)?;
    match mode {
        Mode::Param => Ok(w),
        Mode::Univalent => {
            let i = t.level(a)?;
            Ok(Term::apps(t.constant(&format!("ur_rel@{}", i))?, [left(a), t.right(a)?, w]))
        }
    }
}

/// Expands every binder `x : A` into `x : A, x' : A', x_R : [A] x x'`.
pub fn translate_local_ctx(env: &GlobalEnv, delta: &GlobalContext, ctx: &LocalCtx) -> Result<LocalCtx, KernelError> {
    translate_ctx_mode(env, delta, Mode::Univalent, ctx)
}

pub fn translate_ctx_mode(
    env: &GlobalEnv,
    delta: &GlobalContext,
    mode: Mode,
    ctx: &LocalCtx,
) -> Result<LocalCtx, KernelError> {
    let mut out = LocalCtx::new();
    let mut prefix = LocalCtx::new();
    for (x, a) in ctx.entries() {
        let t = translator(env, delta, mode, &prefix);
        let (ra, _) = translator(env, delta, mode, &prefix).tr(a)?;
        let i = match mode {
            Mode::Univalent => Some(t.level(a)?),
            Mode::Param => None,
        };
        let (x1, xr) = primed_names(x);
        out.push(x.clone(), left(a));
        out.push(x1, t.right(a)?.lift(1, 0));
        out.push(xr, t.rel_binder(a, &ra, i)?);
        prefix.push(x.clone(), a.clone());
    }
    Ok(out)
}

/// A univalent relation between two types, packed as a `URType` term.
#[derive(Clone, Debug)]
pub struct URWitness {
    pub term: Term,
    pub left: Term,
    pub right: Term,
    pub level: u32,
    /// Canonical-equality attachments; absent means the default identity map.
    pub can_left: Option<Term>,
    pub can_right: Option<Term>,
}

impl URWitness {
    fn project(&self, f: &str) -> Term {
        Term::apps(
            Term::cnst(&format!("{}@{}", f, self.level)),
            [self.left.clone(), self.right.clone(), self.term.clone()],
        )
    }

    pub fn rel(&self) -> Term {
        self.project("ur_rel")
    }

    pub fn equiv(&self) -> Term {
        self.project("ur_equiv")
    }

    pub fn coh(&self) -> Term {
        self.project("ur_coh")
    }

    /// The forward map `A -> B`.
    pub fn forward(&self) -> Term {
        self.project("ur_down")
    }

    /// The inverse map `B -> A`.
    pub fn backward(&self) -> Term {
        self.project("ur_up")
    }
}

#[derive(Clone, Debug)]
pub struct AbstractionReport {
    pub name: String,
    pub left_check: CheckResult,
    pub right_check: CheckResult,
    pub relation_check: CheckResult,
    pub derived_prime: Option<Term>,
    pub derived_witness: Option<Term>,
    /// Reduction steps spent by the three checks.
    pub steps: u64,
}

impl AbstractionReport {
    pub fn ok(&self) -> bool {
        self.left_check.is_ok() && self.right_check.is_ok() && self.relation_check.is_ok()
    }

    pub fn first_error(&self) -> Option<&KernelError> {
        [&self.left_check, &self.right_check, &self.relation_check].into_iter().find_map(|r| r.as_ref().err())
    }
}

/// Checks `t : A`, `t' : A'` and `[t] : [A]• t t'`.
pub fn abstraction_check(env: &GlobalEnv, delta: &GlobalContext, name: &str, t: &Term, a: &Term) -> AbstractionReport {
    let mut k = Kernel::new(env);
    let mut ctx = LocalCtx::new();
    let left_check = k.check(&mut ctx, t, a);
    let prime = prime_translate(env, delta, t).and_then(|tp| Ok((tp, prime_translate(env, delta, a)?)));
    let right_check = match &prime {
        Ok((tp, ap)) => k.check(&mut ctx, tp, ap),
        Err(e) => Err(e.clone()),
    };
    let witness = uparam_translate(env, delta, t);
    let relation_check = match (&witness, &prime) {
        (Ok(w), Ok((tp, _))) => uparam_rel(env, delta, a)
            .and_then(|rel| k.check(&mut ctx, w, &Term::apps(rel, [t.clone(), tp.clone()]))),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    AbstractionReport {
        name: name.to_string(),
        left_check,
        right_check,
        relation_check,
        derived_prime: prime.ok().map(|p| p.0),
        derived_witness: witness.ok(),
        steps: k.steps,
    }
}
