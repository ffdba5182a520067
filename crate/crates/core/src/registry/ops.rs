use crate::eval::normalize;
use crate::kernel::env::head_key;
use crate::kernel::{Builtin, Entry, Kernel, KernelError, LocalCtx, Name, Origin, Term, TermKind, Triple};
use crate::translate::{prime_translate, uparam_rel, uparam_traced, Trace, URWitness};

use super::{RegistryError, Session};

/// Result of witness resolution for a closed type.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Term,
    pub witness: URWitness,
    pub trace: Trace,
}

#[derive(Clone, Debug)]
pub struct Transported {
    pub name: Name,
    pub term: Term,
    pub ty: Term,
    /// Constant holding the proof that source and result are related.
    pub relatedness: Name,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Route {
    pub verdict: Verdict,
    pub steps: u64,
    pub normal_form: Option<Term>,
    /// Normal forms of the goal head's arguments.
    pub args: Vec<Term>,
    /// `eq_refl` of the computed normal form, when it holds.
    pub proof: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct GoalOutcome {
    pub goal: Term,
    pub replaced: Term,
    pub route: Route,
    pub proof: Option<Term>,
}

pub(crate) fn sanitize(s: &str) -> String {
    let out: String = s.chars().map(|c| if c.is_alphanumeric() || c == '_' || c == '\'' { c } else { '_' }).collect();
    out.trim_end_matches('_').to_string()
}

fn ill(component: &str) -> impl FnOnce(KernelError) -> RegistryError + '_ {
    move |cause| RegistryError::IllTyped { component: component.to_string(), cause }
}

/// Normalizes the arguments of `p`'s head one by one, then `p` itself, and
/// decides whether the result is a reflexive equation.
pub fn compute_goal(env: &crate::kernel::GlobalEnv, p: &Term, budget: u64) -> Route {
    let inconclusive = |steps| Route { verdict: Verdict::Inconclusive, steps, normal_form: None, args: Vec::new(), proof: None };
    let (h, args) = p.unfold_apps();
    let mut steps = 0;
    let mut nfs = Vec::with_capacity(args.len());
    for a in &args {
        let r = normalize(env, a, budget - steps);
        steps += r.steps;
        if r.budget_hit {
            return inconclusive(budget);
        }
        nfs.push(r.normal_form);
    }
    let r = normalize(env, &Term::apps(h, nfs.clone()), budget - steps);
    steps += r.steps;
    if r.budget_hit {
        return inconclusive(budget);
    }
    let nf = r.normal_form;
    let (eh, eargs) = nf.unfold_apps();
    let proof = match (eh.as_ind(), eargs.as_slice()) {
        (Some(Builtin::Eq(i)), [a, x, y]) if x == y => {
            Some(Term::apps(Term::ind(Builtin::EqRefl(i)), [a.clone(), x.clone()]))
        }
        _ => None,
    };
    let verdict = if proof.is_some() { Verdict::Holds } else { Verdict::Refuted };
    Route { verdict, steps, normal_form: Some(nf), args: nfs, proof }
}

impl Session {
    fn symbol(&self, name: &str) -> Result<Term, RegistryError> {
        crate::translate::symbol(&self.env, name).ok_or_else(|| RegistryError::UnknownName(name.to_string()))
    }

    fn kernel(&self) -> Kernel<'_> {
        Kernel::with_budget(&self.env, self.budget)
    }

    fn level_of(&self, a: &Term) -> Result<u32, KernelError> {
        Ok(self.kernel().infer_sort(&mut LocalCtx::new(), a)?.0)
    }

    fn define(&mut self, name: &str, ty: Term, body: Term) -> Result<Name, RegistryError> {
        let n = Name::from(name);
        self.declare(Entry { name: n.clone(), ty, body: Some(body), reducible: true, origin: Origin::Defined })?;
        Ok(n)
    }

    fn fresh(&self, base: &str) -> String {
        let base = sanitize(base);
        if !self.env.contains(&base) {
            return base;
        }
        (1..).map(|k| format!("{}_{}", base, k)).find(|n| !self.env.contains(n)).unwrap()
    }

    /// Rejects a second relation with the same left constant.
    fn check_unrelated(&self, left: &str) -> Result<(), RegistryError> {
        match self.delta.lookup(left) {
            Some(t) => Err(RegistryError::DuplicateRelation(t.left.clone(), t.right.clone())),
            None => Ok(()),
        }
    }

    /// Registers `A ⋈ B` from its three components, together with the
    /// inverted entry `B ⋈ A`. Returns the name of the forward witness.
    pub fn register_type_relation(
        &mut self,
        a: &str,
        b: &str,
        equiv: &Term,
        rel: &Term,
        coh: &Term,
    ) -> Result<Name, RegistryError> {
        let (ta, tb) = (self.symbol(a)?, self.symbol(b)?);
        let (ka, kb) = (head_key(&ta).unwrap(), head_key(&tb).unwrap());
        self.check_unrelated(&ka)?;
        self.check_unrelated(&kb)?;
        let i = self.level_of(&ta).map_err(ill(a))?;
        let j = self.level_of(&tb).map_err(ill(b))?;
        if i != j {
            return Err(RegistryError::IllTyped {
                component: b.to_string(),
                cause: KernelError::LevelMismatch(format!("{} lives at level {}, {} at level {}", a, i, b, j)),
            });
        }
        let c = |n: &str| Term::cnst(&format!("{}@{}", n, i));
        let rel_ty = Term::arrow(ta.clone(), Term::arrow(tb.lift(1, 0), Term::sort(i)));
        let mut k = self.kernel();
        let mut ctx = LocalCtx::new();
        k.check(&mut ctx, rel, &rel_ty).map_err(ill("rel"))?;
        k.check(&mut ctx, equiv, &Term::apps(c("Equiv"), [ta.clone(), tb.clone()])).map_err(ill("equiv"))?;
        let coh_ty = Term::apps(c("URCoh"), [ta.clone(), tb.clone(), rel.clone(), equiv.clone()]);
        k.check(&mut ctx, coh, &coh_ty).map_err(ill("coh"))?;

        let ur = |x: &Term, y: &Term| Term::apps(c("URType"), [x.clone(), y.clone()]);
        let fwd_name = self.fresh(&format!("univrel_{}_{}", ka, kb));
        let body = Term::apps(c("ur_mk"), [ta.clone(), tb.clone(), rel.clone(), equiv.clone(), coh.clone()]);
        let fwd = self.define(&fwd_name, ur(&ta, &tb), body)?;
        let bwd_name = self.fresh(&format!("univrel_{}_{}", kb, ka));
        let body = Term::apps(c("ur_sym"), [ta.clone(), tb.clone(), Term::cnst_n(fwd.clone())]);
        let bwd = self.define(&bwd_name, ur(&tb, &ta), body)?;
        self.delta.push(Triple { left: Name::from(ka.as_str()), right: Name::from(b), witness: Term::cnst_n(fwd.clone()) });
        self.delta.push(Triple { left: Name::from(kb.as_str()), right: Name::from(a), witness: Term::cnst_n(bwd) });
        Ok(fwd)
    }

    /// Registers `c ≈ c'` with a proof of `[type of c] c c'`.
    pub fn register_term_relation(&mut self, c: &str, c2: &str, proof: &Term) -> Result<Name, RegistryError> {
        let (tc, tc2) = (self.symbol(c)?, self.symbol(c2)?);
        let key = head_key(&tc).unwrap();
        self.check_unrelated(&key)?;
        let mut k = self.kernel();
        let mut ctx = LocalCtx::new();
        let ty = k.infer(&mut ctx, &tc)?;
        let missing = |e: KernelError| match e {
            KernelError::UnrelatedConstant(_) => RegistryError::MissingPrefix(Name::from(c), e),
            e => RegistryError::Kernel(e),
        };
        let rel = uparam_rel(&self.env, &self.delta, &ty).map_err(missing)?;
        let ty2 = prime_translate(&self.env, &self.delta, &ty).map_err(missing)?;
        k.check(&mut ctx, &tc2, &ty2).map_err(ill("right"))?;
        let rel_ty = Term::apps(rel, [tc, tc2]);
        k.check(&mut ctx, proof, &rel_ty).map_err(ill("proof"))?;
        let witness = match proof.kind() {
            TermKind::Const(n) => n.clone(),
            _ => {
                let n = self.fresh(&format!("univrel_{}", key));
                self.define(&n, rel_ty, proof.clone())?
            }
        };
        self.delta.push(Triple { left: Name::from(key.as_str()), right: Name::from(c2), witness: Term::cnst_n(witness.clone()) });
        Ok(witness)
    }

    /// Derives the partner of a closed type and the witness relating them.
    pub fn resolve_witness(&self, a: &Term) -> Result<Resolution, RegistryError> {
        let unresolved = |e: KernelError| match e {
            KernelError::UnrelatedConstant(n) => RegistryError::UnresolvedConstant(n),
            e => RegistryError::Kernel(e),
        };
        let level = self.level_of(a)?;
        let target = prime_translate(&self.env, &self.delta, a).map_err(unresolved)?;
        let (term, trace) = uparam_traced(&self.env, &self.delta, a).map_err(unresolved)?;
        let can = |t: &Term| {
            let n = format!("can_{}", head_key(t)?);
            self.env.contains(&n).then(|| Term::cnst(&n))
        };
        let witness = URWitness {
            term,
            left: a.clone(),
            right: target.clone(),
            level,
            can_left: can(a),
            can_right: can(&target),
        };
        Ok(Resolution { target, witness, trace })
    }

    fn source(&self, source: &str) -> Result<(Term, Entry), RegistryError> {
        let t = self.symbol(source)?;
        let key = head_key(&t).unwrap();
        let e = self.env.get(&key).cloned().ok_or_else(|| RegistryError::UnknownName(source.to_string()))?;
        Ok((t, e))
    }

    fn finish_transport(
        &mut self,
        name: &str,
        source: &str,
        term: Term,
        ty: Term,
        rel_ty: Term,
        rel: Term,
    ) -> Result<Transported, RegistryError> {
        let n = self.define(name, ty.clone(), term.clone())?;
        let rname = self.fresh(&format!("univrel_{}", source));
        let relatedness = self.define(&rname, rel_ty, rel)?;
        // a second transport of the same constant is defined but not registered
        if self.delta.lookup(source).is_none() {
            self.delta.push(Triple {
                left: Name::from(source),
                right: n.clone(),
                witness: Term::cnst_n(relatedness.clone()),
            });
        }
        Ok(Transported { name: n, term, ty, relatedness })
    }

    /// Defines `name` as the image of `source` under the forward map of
    /// its type's witness; the body of `source` is not inspected.
    pub fn transport_black_box(&mut self, name: &str, source: &str) -> Result<Transported, RegistryError> {
        let (t, e) = self.source(source)?;
        let r = self.resolve_witness(&e.ty)?;
        let w = &r.witness;
        let term = Term::app(w.forward(), t.clone());
        let refl = Term::cnst(&format!("ur_refl_down@{}", w.level));
        let rel = Term::apps(refl, [w.left.clone(), w.right.clone(), w.term.clone(), t.clone()]);
        let rel_ty = Term::apps(w.rel(), [t, Term::cnst(name)]);
        self.finish_transport(name, source, term, r.target, rel_ty, rel)
    }

    /// Defines `name` as the translated body of `source`.
    pub fn transport_white_box(&mut self, name: &str, source: &str) -> Result<Transported, RegistryError> {
        let (t, e) = self.source(source)?;
        let body = match (&e.body, e.reducible) {
            (Some(b), true) => b.clone(),
            _ => return Err(RegistryError::Opaque(e.name.clone())),
        };
        let unrelated = |e: KernelError| match e {
            KernelError::UnrelatedConstant(n) => RegistryError::UnresolvedConstant(n),
            e => RegistryError::Kernel(e),
        };
        let term = prime_translate(&self.env, &self.delta, &body).map_err(unrelated)?;
        let ty = prime_translate(&self.env, &self.delta, &e.ty).map_err(unrelated)?;
        let (rel, _) = uparam_traced(&self.env, &self.delta, &body).map_err(unrelated)?;
        let rel_ty = Term::apps(uparam_rel(&self.env, &self.delta, &e.ty).map_err(unrelated)?, [t, Term::cnst(name)]);
        self.finish_transport(name, source, term, ty, rel_ty, rel)
    }

    /// The related goal and the map sending its proofs back to `p`.
    pub fn replace_goal(&self, p: &Term) -> Result<(Term, Term, Resolution), RegistryError> {
        let r = self.resolve_witness(p)?;
        let backward = r.witness.backward();
        Ok((r.target.clone(), backward, r))
    }

    /// Proves `p` by computing on the replaced goal, and defines `name`
    /// as the proof when the computation succeeds.
    pub fn prove_goal(&mut self, name: &str, p: &Term) -> Result<GoalOutcome, RegistryError> {
        self.level_of(p).map_err(ill(name))?;
        let (replaced, backward, _) = self.replace_goal(p)?;
        let route = compute_goal(&self.env, &replaced, self.budget);
        let proof = match &route.proof {
            Some(refl) => {
                self.kernel().check(&mut LocalCtx::new(), refl, &replaced).map_err(ill("computed proof"))?;
                let proof = Term::app(backward, refl.clone());
                self.declare(Entry {
                    name: Name::from(name),
                    ty: p.clone(),
                    body: Some(proof.clone()),
                    reducible: false,
                    origin: Origin::Defined,
                })?;
                Some(proof)
            }
            None => None,
        };
        Ok(GoalOutcome { goal: p.clone(), replaced, route, proof })
    }

    /// Decides `p` by computing on it directly.
    pub fn compute_direct(&self, p: &Term) -> Route {
        compute_goal(&self.env, p, self.budget)
    }
}
