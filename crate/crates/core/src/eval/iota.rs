//! ι-rules: one row per built-in eliminator.

use crate::kernel::{Builtin, Term};

pub struct IotaRow {
    pub name: &'static str,
    pub matches: fn(Builtin) -> bool,
    /// Arguments before the scrutinee.
    pub major: usize,
    /// Fires on the eliminator, its leading arguments, the constructor and
    /// the constructor's fields (parameters stripped).
    pub fire: fn(Builtin, &[Term], Builtin, &[Term]) -> Option<Term>,
}

fn rec(elim: Builtin, pre: &[Term], major: &Term) -> Term {
    Term::apps(Term::ind(elim), pre.iter().cloned().chain(std::iter::once(major.clone())))
}

pub static TABLE: &[IotaRow] = &[
    IotaRow {
        name: "nat_rect",
        matches: |b| matches!(b, Builtin::NatRect(_)),
        major: 3,
        fire: |e, pre, c, f| match c {
            Builtin::O => Some(pre[1].clone()),
            Builtin::S => Some(Term::apps(pre[2].clone(), [f[0].clone(), rec(e, pre, &f[0])])),
            _ => None,
        },
    },
    IotaRow {
        name: "bool_rect",
        matches: |b| matches!(b, Builtin::BoolRect(_)),
        major: 3,
        fire: |_, pre, c, _| match c {
            Builtin::True => Some(pre[1].clone()),
            Builtin::False => Some(pre[2].clone()),
            _ => None,
        },
    },
    IotaRow {
        name: "positive_rect",
        matches: |b| matches!(b, Builtin::PosRect(_)),
        major: 4,
        fire: |e, pre, c, f| match c {
            Builtin::XI => Some(Term::apps(pre[1].clone(), [f[0].clone(), rec(e, pre, &f[0])])),
            Builtin::XO => Some(Term::apps(pre[2].clone(), [f[0].clone(), rec(e, pre, &f[0])])),
            Builtin::XH => Some(pre[3].clone()),
            _ => None,
        },
    },
    IotaRow {
        name: "N_rect",
        matches: |b| matches!(b, Builtin::NRect(_)),
        major: 3,
        fire: |_, pre, c, f| match c {
            Builtin::N0 => Some(pre[1].clone()),
            Builtin::Npos => Some(Term::app(pre[2].clone(), f[0].clone())),
            _ => None,
        },
    },
    IotaRow {
        name: "list_rect",
        matches: |b| matches!(b, Builtin::ListRect(..)),
        major: 4,
        fire: |e, pre, c, f| match c {
            Builtin::Nil(_) => Some(pre[2].clone()),
            Builtin::Cons(_) => {
                Some(Term::apps(pre[3].clone(), [f[0].clone(), f[1].clone(), rec(e, pre, &f[1])]))
            }
            _ => None,
        },
    },
    IotaRow {
        name: "sigT_rect",
        matches: |b| matches!(b, Builtin::SigTRect(..)),
        major: 4,
        fire: |_, pre, c, f| match c {
            Builtin::ExistT(..) => Some(Term::apps(pre[3].clone(), [f[0].clone(), f[1].clone()])),
            _ => None,
        },
    },
    IotaRow {
        name: "eq_rect",
        matches: |b| matches!(b, Builtin::EqRect(..)),
        major: 5,
        fire: |_, pre, c, _| match c {
            Builtin::EqRefl(_) => Some(pre[3].clone()),
            _ => None,
        },
    },
    IotaRow {
        name: "sum_rect",
        matches: |b| matches!(b, Builtin::SumRect(..)),
        major: 5,
        fire: |_, pre, c, f| match c {
            Builtin::Inl(..) => Some(Term::app(pre[3].clone(), f[0].clone())),
            Builtin::Inr(..) => Some(Term::app(pre[4].clone(), f[0].clone())),
            _ => None,
        },
    },
    IotaRow {
        name: "Empty_rect",
        matches: |b| matches!(b, Builtin::EmptyRect(_)),
        major: 1,
        fire: |_, _, _, _| None,
    },
];

pub fn row(b: Builtin) -> Option<&'static IotaRow> {
    TABLE.iter().find(|r| (r.matches)(b))
}

fn ctor_arity(c: Builtin) -> usize {
    use Builtin::*;
    match c {
        S | XI | XO | Npos => 1,
        Nil(_) => 1,
        Cons(_) => 3,
        ExistT(..) => 4,
        EqRefl(_) => 2,
        Inl(..) | Inr(..) => 3,
        _ => 0,
    }
}

/// Contracts `elim pre scrutinee` when the scrutinee (in whnf) is a fully
/// applied constructor.
pub fn contract(elim: Builtin, pre: &[Term], scrutinee: &Term) -> Option<Term> {
    let r = row(elim)?;
    let (h, args) = scrutinee.unfold_apps();
    let c = h.as_ind()?;
    if !c.is_constructor() || args.len() != ctor_arity(c) {
        return None;
    }
    (r.fire)(elim, pre, c, &args[c.ctor_params()..])
}
