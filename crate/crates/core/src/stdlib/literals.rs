//! Numeric literals: unary `nat`, binary `N`, 16-bit `int16`.

use crate::kernel::{Builtin, PrimOp, Term, TermKind};

/// Largest value accepted as a unary `nat` literal.
pub const NAT_LITERAL_BOUND: u64 = 1 << 16;

pub fn mk_nat(n: u64) -> Term {
    let s = Term::ind(Builtin::S);
    let mut t = Term::ind(Builtin::O);
    for _ in 0..n {
        t = Term::app(s.clone(), t);
    }
    t
}

pub fn mk_pos(p: u64) -> Term {
    assert!(p > 0, "positive literal must be nonzero");
    let bits = 64 - p.leading_zeros();
    let mut t = Term::ind(Builtin::XH);
    for i in (0..bits - 1).rev() {
        let c = if (p >> i) & 1 == 1 { Builtin::XI } else { Builtin::XO };
        t = Term::app(Term::ind(c), t);
    }
    t
}

pub fn mk_n(n: u64) -> Term {
    if n == 0 {
        Term::ind(Builtin::N0)
    } else {
        Term::app(Term::ind(Builtin::Npos), mk_pos(n))
    }
}

/// Decodes a closed `S (S .. O)` tower.
pub fn read_nat(t: &Term) -> Option<u64> {
    let mut n = 0u64;
    let mut cur = t.clone();
    loop {
        match cur.kind() {
            TermKind::Ind(Builtin::O) => return Some(n),
            TermKind::App(f, a) if f.as_ind() == Some(Builtin::S) => {
                n += 1;
                let next = a.clone();
                cur = next;
            }
            _ => return None,
        }
    }
}

pub fn read_pos(t: &Term) -> Option<u64> {
    // digits are innermost-most-significant, so collect then fold
    let mut digits = Vec::new();
    let mut cur = t.clone();
    loop {
        match cur.kind() {
            TermKind::Ind(Builtin::XH) => break,
            TermKind::App(f, a) => {
                match f.as_ind()? {
                    Builtin::XI => digits.push(1u64),
                    Builtin::XO => digits.push(0),
                    _ => return None,
                }
                let next = a.clone();
                cur = next;
            }
            _ => return None,
        }
    }
    let mut v: u64 = 1;
    for d in digits.into_iter().rev() {
        v = v.checked_mul(2)?.checked_add(d)?;
    }
    Some(v)
}

pub fn read_n(t: &Term) -> Option<u64> {
    match t.kind() {
        TermKind::Ind(Builtin::N0) => Some(0),
        TermKind::App(f, p) if f.as_ind() == Some(Builtin::Npos) => read_pos(p),
        _ => None,
    }
}

pub fn read_bool(t: &Term) -> Option<bool> {
    match t.as_ind()? {
        Builtin::True => Some(true),
        Builtin::False => Some(false),
        _ => None,
    }
}

/// Folds a primitive applied to literals.
pub fn prim_eval(op: PrimOp, args: &[u16]) -> Term {
    match op {
        PrimOp::Lsl => {
            let (x, p) = (args[0], args[1]);
            Term::int(if p >= 16 { 0 } else { x << p })
        }
        PrimOp::Add16 => Term::int(args[0].wrapping_add(args[1])),
        PrimOp::Mul16 => Term::int(args[0].wrapping_mul(args[1])),
        PrimOp::ToN16 => mk_n(args[0] as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        for n in [0u64, 1, 2, 3, 5, 8, 255, 65_536, 6_250_600, 631_250_600] {
            assert_eq!(read_n(&mk_n(n)), Some(n));
        }
    }

    #[test]
    fn unary_round_trip() {
        assert_eq!(read_nat(&mk_nat(0)), Some(0));
        assert_eq!(read_nat(&mk_nat(1000)), Some(1000));
    }

    #[test]
    fn five_is_xi_xo_xh() {
        let t = mk_pos(5);
        let expect = Term::app(Term::ind(Builtin::XI), Term::app(Term::ind(Builtin::XO), Term::ind(Builtin::XH)));
        assert_eq!(t, expect);
    }
}
