use std::cell::RefCell;
use std::collections::HashMap;

use super::syntax::{read_term, NoGlobals};
use super::term::{Builtin, PrimOp, Term};

fn signature(b: Builtin) -> String {
    use Builtin::*;
    let m = |i: u32, j: u32| i.max(j);
    match b {
        Nat | Bool | Pos | BinN | Empty | Unit | Int16 => "Type@0".into(),
        O => "nat".into(),
        S => "nat -> nat".into(),
        NatRect(i) => format!(
            "forall (P : nat -> Type@{i}), P O -> (forall (n : nat), P n -> P (S n)) -> forall (n : nat), P n"
        ),
        True | False => "bool".into(),
        BoolRect(i) => format!("forall (P : bool -> Type@{i}), P true -> P false -> forall (b : bool), P b"),
        XI | XO => "positive -> positive".into(),
        XH => "positive".into(),
        PosRect(i) => format!(
            "forall (P : positive -> Type@{i}), (forall (p : positive), P p -> P (xI p)) -> \
             (forall (p : positive), P p -> P (xO p)) -> P xH -> forall (p : positive), P p"
        ),
        N0 => "N".into(),
        Npos => "positive -> N".into(),
        NRect(i) => format!(
            "forall (P : N -> Type@{i}), P N0 -> (forall (p : positive), P (Npos p)) -> forall (n : N), P n"
        ),
        List(i) => format!("Type@{i} -> Type@{i}"),
        Nil(i) => format!("forall (A : Type@{i}), list@{i} A"),
        Cons(i) => format!("forall (A : Type@{i}), A -> list@{i} A -> list@{i} A"),
        ListRect(i, j) => format!(
            "forall (A : Type@{i}) (P : list@{i} A -> Type@{j}), P (nil@{i} A) -> \
             (forall (a : A) (l : list@{i} A), P l -> P (cons@{i} A a l)) -> forall (l : list@{i} A), P l"
        ),
        SigT(i, j) => format!("forall (A : Type@{i}), (A -> Type@{j}) -> Type@{}", m(i, j)),
        ExistT(i, j) => format!(
            "forall (A : Type@{i}) (P : A -> Type@{j}) (x : A), P x -> sigT@{{{i},{j}}} A P"
        ),
        SigTRect(i, j, k) => format!(
            "forall (A : Type@{i}) (P : A -> Type@{j}) (P0 : sigT@{{{i},{j}}} A P -> Type@{k}), \
             (forall (x : A) (p : P x), P0 (existT@{{{i},{j}}} A P x p)) -> \
             forall (s : sigT@{{{i},{j}}} A P), P0 s"
        ),
        Eq(i) => format!("forall (A : Type@{i}), A -> A -> Type@{i}"),
        EqRefl(i) => format!("forall (A : Type@{i}) (x : A), eq@{i} A x x"),
        EqRect(i, j) => format!(
            "forall (A : Type@{i}) (x : A) (P : forall (a : A), eq@{i} A x a -> Type@{j}), \
             P x (eq_refl@{i} A x) -> forall (y : A) (e : eq@{i} A x y), P y e"
        ),
        Sum(i, j) => format!("Type@{i} -> Type@{j} -> Type@{}", m(i, j)),
        Inl(i, j) => format!("forall (A : Type@{i}) (B : Type@{j}), A -> sum@{{{i},{j}}} A B"),
        Inr(i, j) => format!("forall (A : Type@{i}) (B : Type@{j}), B -> sum@{{{i},{j}}} A B"),
        SumRect(i, j, k) => format!(
            "forall (A : Type@{i}) (B : Type@{j}) (P : sum@{{{i},{j}}} A B -> Type@{k}), \
             (forall (a : A), P (inl@{{{i},{j}}} A B a)) -> (forall (b : B), P (inr@{{{i},{j}}} A B b)) -> \
             forall (s : sum@{{{i},{j}}} A B), P s"
        ),
        EmptyRect(i) => format!("forall (P : Empty -> Type@{i}) (e : Empty), P e"),
        Tt => "unit".into(),
    }
}

thread_local! {
    static CACHE: RefCell<HashMap<Builtin, Term>> = RefCell::new(HashMap::new());
}

/// Type of a built-in symbol.
pub fn builtin_type(b: Builtin) -> Term {
    if let Some(t) = CACHE.with(|c| c.borrow().get(&b).cloned()) {
        return t;
    }
    let t = read_term(&signature(b), &NoGlobals)
        .unwrap_or_else(|e| panic!("built-in signature of {:?} does not parse: {}", b, e));
    CACHE.with(|c| c.borrow_mut().insert(b, t.clone()));
    t
}

pub fn prim_type(p: PrimOp) -> Term {
    let src = match p {
        PrimOp::ToN16 => "int16 -> N",
        _ => "int16 -> int16 -> int16",
    };
    read_term(src, &NoGlobals).expect("primitive signature parses")
}

/// Position of the scrutinee among an eliminator's arguments.
pub fn major_index(b: Builtin) -> Option<usize> {
    use Builtin::*;
    Some(match b {
        NatRect(_) | BoolRect(_) | NRect(_) => 3,
        PosRect(_) | ListRect(..) | SigTRect(..) => 4,
        EqRect(..) | SumRect(..) => 5,
        EmptyRect(_) => 1,
        _ => return None,
    })
}
