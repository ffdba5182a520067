//! Self-relations of the built-in symbols. Type formers use the prelude
//! witnesses, first-order constructors and eliminators use the prelude
//! bodies `X_urb` / `X_prb`, everything else gets a trusted constant whose
//! type is computed by the translations.

use crate::kernel::builtins::{builtin_type, prim_type};
use crate::kernel::{Builtin, Entry, Name, Origin, PrimOp, RelKind, Term};
use crate::registry::{RegistryError, Session};
use crate::translate::{param_rel, uparam_rel};

/// Built-ins with a self-relation, type formers first.
pub fn related_builtins() -> Vec<Builtin> {
    use Builtin::*;
    let mut v = vec![Nat, Bool, Pos, BinN, Unit, Empty, Int16, List(0), Sum(0, 0)];
    for i in 0..=1 {
        v.push(Eq(i));
        for j in 0..=1 {
            v.push(SigT(i, j));
        }
    }
    v.extend([O, S, True, False, XI, XO, XH, N0, Npos, Tt, Nil(0), Cons(0), Inl(0, 0), Inr(0, 0)]);
    for i in 0..=1 {
        v.extend([NatRect(i), BoolRect(i), PosRect(i), NRect(i), EmptyRect(i), ListRect(0, i), SumRect(0, 0, i)]);
        v.push(EqRefl(i));
        for j in 0..=1 {
            v.push(ExistT(i, j));
            v.push(EqRect(i, j));
            for k in 0..=1 {
                v.push(SigTRect(i, j, k));
            }
        }
    }
    v
}

/// Prelude witness relating a type former to itself.
fn former_witness(b: Builtin) -> Option<String> {
    use Builtin::*;
    Some(match b {
        Nat => "FP_nat".into(),
        Bool => "FP_bool".into(),
        Pos => "FP_positive".into(),
        BinN => "FP_N".into(),
        Unit => "FP_unit".into(),
        Empty => "FP_Empty".into(),
        Int16 => "FP_int16".into(),
        List(0) => "FP_list".into(),
        Sum(0, 0) => "FP_sum".into(),
        Eq(i) => format!("FP_eq@{}", i),
        SigT(i, j) => format!("FP_Sigma@{{{},{}}}", i, j),
        _ => return None,
    })
}

fn suffixed(base: &str, tag: &str, lv: &[u32]) -> String {
    crate::kernel::term::level_suffixed(&format!("{}_{}", base, tag), lv)
}

fn install(s: &mut Session, head: &Term, ty: Term, name: String, kind: RelKind, body: Option<Term>) -> Result<(), RegistryError> {
    let origin = if body.is_some() { Origin::Defined } else { Origin::TrustedPrelude };
    let reducible = body.is_some();
    s.declare(Entry { name: Name::from(name.as_str()), ty, body, reducible, origin })?;
    s.env.set_self_relation(kind, head, Term::cnst(&name));
    Ok(())
}

fn prelude_body(s: &Session, base: &str, tag: &str, lv: &[u32]) -> Option<Term> {
    let n = suffixed(base, tag, lv);
    s.env.contains(&n).then(|| Term::cnst(&n))
}

fn relate(s: &mut Session, head: Term, ty: Term, base: &str, lv: &[u32], witness: Option<String>) -> Result<(), RegistryError> {
    let empty = crate::kernel::GlobalContext::new();
    let rel = uparam_rel(&s.env, &empty, &ty)?;
    let uty = Term::apps(rel, [head.clone(), head.clone()]);
    let body = witness.map(|w| Term::cnst(&w)).or_else(|| prelude_body(s, base, "urb", lv));
    install(s, &head, uty, suffixed(base, "ur", lv), RelKind::Univalent, body)?;
    let prel = param_rel(&s.env, &empty, &ty)?;
    let pty = Term::apps(prel, [head.clone(), head.clone()]);
    // constructor relations are the same term in both translations
    let body = prelude_body(s, base, "prb", lv).or_else(|| prelude_body(s, base, "urb", lv));
    install(s, &head, pty, suffixed(base, "pr", lv), RelKind::Param, body)
}

pub fn install_builtin_relations(s: &mut Session) -> Result<(), RegistryError> {
    for b in related_builtins() {
        let head = Term::ind(b);
        relate(s, head, builtin_type(b), b.base_name(), &b.levels(), former_witness(b))?;
    }
    for p in [PrimOp::Lsl, PrimOp::Add16, PrimOp::Mul16, PrimOp::ToN16] {
        relate(s, Term::prim(p), prim_type(p), p.name(), &[], None)?;
    }
    Ok(())
}
