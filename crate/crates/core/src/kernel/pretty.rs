//! Printer producing surface syntax that parses back to the same term.

use std::collections::BTreeSet;

use super::syntax::is_keyword;
use super::term::{Builtin, Name, Term, TermKind};

pub fn print(t: &Term) -> String {
    let mut p = Printer { names: Vec::new(), out: String::new() };
    p.term(t, 0);
    p.out
}

/// Printed form cut to at most `max` characters.
pub fn print_short(t: &Term, max: usize) -> String {
    let s = print(t);
    if s.chars().count() <= max {
        s
    } else {
        let cut: String = s.chars().take(max).collect();
        format!("{} …", cut)
    }
}

/// Value of a closed unary numeral `S (S ... O)`.
pub fn nat_literal(t: &Term) -> Option<u64> {
    let mut n = 0u64;
    let mut cur = t.clone();
    loop {
        let next = match cur.kind() {
            TermKind::Ind(Builtin::O) => return Some(n),
            TermKind::App(f, a) if f.as_ind() == Some(Builtin::S) => a.clone(),
            _ => return None,
        };
        n += 1;
        cur = next;
    }
}

fn pos_literal(t: &Term) -> Option<u64> {
    let mut digits = Vec::new();
    let mut cur = t.clone();
    loop {
        let next = match cur.kind() {
            TermKind::Ind(Builtin::XH) => break,
            TermKind::App(f, a) => match f.as_ind() {
                Some(Builtin::XI) => {
                    digits.push(1u64);
                    a.clone()
                }
                Some(Builtin::XO) => {
                    digits.push(0u64);
                    a.clone()
                }
                _ => return None,
            },
            _ => return None,
        };
        if digits.len() > 62 {
            return None;
        }
        cur = next;
    }
    let mut v = 1u64;
    for d in digits.iter().rev() {
        v = 2 * v + d;
    }
    Some(v)
}

/// Value of a closed binary numeral built from `N0`/`Npos`.
pub fn n_literal(t: &Term) -> Option<u64> {
    match t.kind() {
        TermKind::Ind(Builtin::N0) => Some(0),
        TermKind::App(f, p) if f.as_ind() == Some(Builtin::Npos) => pos_literal(p),
        _ => None,
    }
}

struct Printer {
    names: Vec<Name>,
    out: String,
}

fn collect_globals(t: &Term, acc: &mut BTreeSet<String>) {
    let mut stack = vec![t.clone()];
    while let Some(t) = stack.pop() {
        match t.kind() {
            TermKind::Const(n) => {
                acc.insert(n.split('@').next().unwrap_or("").to_string());
            }
            TermKind::Ind(b) => {
                acc.insert(b.base_name().to_string());
            }
            TermKind::Prim(p) => {
                acc.insert(p.name().to_string());
            }
            TermKind::Lam(_, a, b) | TermKind::Pi(_, a, b) | TermKind::App(a, b) => {
                stack.push(a.clone());
                stack.push(b.clone());
            }
            _ => {}
        }
    }
}

impl Printer {
    fn fresh(&self, hint: &str, body: &Term) -> Name {
        let base = if hint.is_empty() || hint == "_" || is_keyword(hint) { "x" } else { hint };
        let mut globals = BTreeSet::new();
        collect_globals(body, &mut globals);
        let taken = |s: &str| {
            self.names.iter().any(|n| &**n == s)
                || globals.contains(s)
                || Builtin::from_parts(s, &[]).is_some()
                || super::term::PrimOp::from_name(s).is_some()
        };
        if !taken(base) {
            return Name::from(base);
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "x" } else { stem };
        let mut k = 0;
        loop {
            let cand = format!("{}{}", stem, k);
            if !taken(&cand) {
                return Name::from(cand.as_str());
            }
            k += 1;
        }
    }

    // prec: 0 binder-level, 1 application, 2 atom
    fn term(&mut self, t: &Term, prec: u8) {
        if let Some(n) = nat_literal(t) {
            if n > 0 {
                self.out.push_str(&format!("({} : nat)", n));
                return;
            }
        }
        if let Some(n) = n_literal(t) {
            self.out.push_str(&format!("({} : N)", n));
            return;
        }
        match t.kind() {
            TermKind::Sort(l) => self.out.push_str(&format!("Type@{}", l.0)),
            TermKind::Var(i) => {
                let i = *i as usize;
                if i < self.names.len() {
                    let n = self.names[self.names.len() - 1 - i].clone();
                    self.out.push_str(&n);
                } else {
                    self.out.push_str(&format!("#{}", i - self.names.len()));
                }
            }
            TermKind::Const(n) => self.out.push_str(n),
            TermKind::Ind(b) => self.out.push_str(&b.surface()),
            TermKind::Int(v) => self.out.push_str(&format!("({} : int16)", v)),
            TermKind::Prim(p) => self.out.push_str(p.name()),
            TermKind::App(..) => {
                let (h, args) = t.unfold_apps();
                if prec > 1 {
                    self.out.push('(');
                }
                self.term(&h, 2);
                for a in &args {
                    self.out.push(' ');
                    self.term(a, 2);
                }
                if prec > 1 {
                    self.out.push(')');
                }
            }
            TermKind::Lam(..) => {
                if prec > 0 {
                    self.out.push('(');
                }
                self.out.push_str("fun");
                let mut cur = t.clone();
                let mut pushed = 0;
                while let TermKind::Lam(x, a, b) = cur.kind() {
                    let name = self.fresh(x, b);
                    self.out.push_str(" (");
                    self.out.push_str(&name);
                    self.out.push_str(" : ");
                    self.term(a, 0);
                    self.out.push(')');
                    self.names.push(name);
                    pushed += 1;
                    let next = b.clone();
                    cur = next;
                }
                self.out.push_str(" => ");
                self.term(&cur, 0);
                for _ in 0..pushed {
                    self.names.pop();
                }
                if prec > 0 {
                    self.out.push(')');
                }
            }
            TermKind::Pi(x, a, b) => {
                if prec > 0 {
                    self.out.push('(');
                }
                if !b.has_var(0) {
                    self.term(a, 1);
                    self.out.push_str(" -> ");
                    self.names.push(Name::from(" "));
                    self.term(b, 0);
                    self.names.pop();
                } else {
                    let name = self.fresh(x, b);
                    self.out.push_str("forall (");
                    self.out.push_str(&name);
                    self.out.push_str(" : ");
                    self.term(a, 0);
                    self.out.push_str("), ");
                    self.names.push(name);
                    self.term(b, 0);
                    self.names.pop();
                }
                if prec > 0 {
                    self.out.push(')');
                }
            }
        }
    }
}
