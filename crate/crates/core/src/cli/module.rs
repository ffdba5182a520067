//! Declaration files: grammar, parser and printer.

use std::fmt;

use crate::kernel::syntax::{Parser, Raw, SyntaxError, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    BlackBox,
    WhiteBox,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Def { name: String, ty: Raw, body: Raw, opaque: bool },
    Axiom { name: String, ty: Raw },
    /// Prelude lemma accepted on its type alone.
    Trusted { name: String, ty: Raw },
    RelateType { a: String, b: String, equiv: Raw, rel: Raw, coh: Raw },
    RelateTerm { c: String, c2: String, proof: Raw },
    Transport { name: String, source: String, mode: Mode },
    Goal { name: String, ty: Raw },
}

impl Decl {
    /// Name the declaration introduces, if any.
    pub fn name(&self) -> Option<&str> {
        match self {
            Decl::Def { name, .. }
            | Decl::Axiom { name, .. }
            | Decl::Trusted { name, .. }
            | Decl::Transport { name, .. }
            | Decl::Goal { name, .. } => Some(name),
            _ => None,
        }
    }
}

fn pis(binders: &[(String, Raw)], body: Raw) -> Raw {
    binders.iter().rev().fold(body, |b, (x, t)| Raw::Pi(x.clone(), Box::new(t.clone()), Box::new(b)))
}

fn lams(binders: &[(String, Raw)], body: Raw) -> Raw {
    binders.iter().rev().fold(body, |b, (x, t)| Raw::Lam(x.clone(), Box::new(t.clone()), Box::new(b)))
}

/// `name (x : A) .. : T`, with the binders folded into the type.
fn signature(p: &mut Parser) -> Result<(String, Vec<(String, Raw)>, Raw), SyntaxError> {
    let name = p.global_name()?;
    let binders = if *p.peek() == Tok::LParen { p.binders()? } else { Vec::new() };
    p.expect(Tok::Colon)?;
    let ty = p.term()?;
    Ok((name, binders.clone(), pis(&binders, ty)))
}

fn decl(p: &mut Parser) -> Result<Decl, SyntaxError> {
    let opaque = p.is_kw("opaque");
    if opaque {
        p.bump();
        if !p.is_kw("def") {
            return p.err("expected `def` after `opaque`");
        }
    }
    let kw = match p.peek().clone() {
        Tok::Ident(s) => s,
        t => return p.err(format!("expected a declaration, found {:?}", t)),
    };
    p.bump();
    match kw.as_str() {
        "def" => {
            let (name, binders, ty) = signature(p)?;
            p.expect(Tok::ColonEq)?;
            let body = lams(&binders, p.term()?);
            Ok(Decl::Def { name, ty, body, opaque })
        }
        "axiom" | "trusted" => {
            let (name, _, ty) = signature(p)?;
            Ok(if kw == "axiom" { Decl::Axiom { name, ty } } else { Decl::Trusted { name, ty } })
        }
        "relate" => {
            if p.is_kw("type") {
                p.bump();
                let a = p.global_name()?;
                let b = p.global_name()?;
                p.expect_kw("via")?;
                let equiv = p.term()?;
                p.expect_kw("rel")?;
                let rel = p.term()?;
                p.expect_kw("coh")?;
                let coh = p.term()?;
                Ok(Decl::RelateType { a, b, equiv, rel, coh })
            } else {
                p.expect_kw("term")?;
                let c = p.global_name()?;
                let c2 = p.global_name()?;
                p.expect_kw("by")?;
                let proof = p.term()?;
                Ok(Decl::RelateTerm { c, c2, proof })
            }
        }
        "transport" => {
            let name = p.global_name()?;
            p.expect_kw("from")?;
            let source = p.global_name()?;
            let mode = if p.is_kw("whitebox") {
                p.bump();
                Mode::WhiteBox
            } else {
                if p.is_kw("blackbox") {
                    p.bump();
                }
                Mode::BlackBox
            };
            Ok(Decl::Transport { name, source, mode })
        }
        "goal" => {
            let (name, _, ty) = signature(p)?;
            p.expect_kw("by")?;
            p.expect_kw("compute")?;
            Ok(Decl::Goal { name, ty })
        }
        _ => p.err(format!("unknown declaration `{}`", kw)),
    }
}

pub fn parse_module(text: &str) -> Result<Vec<Decl>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        out.push(decl(&mut p)?);
    }
    Ok(out)
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Def { name, ty, body, opaque } => {
                if *opaque {
                    f.write_str("opaque ")?;
                }
                write!(f, "def {} : {} :=\n  {}", name, ty, body)
            }
            Decl::Axiom { name, ty } => write!(f, "axiom {} : {}", name, ty),
            Decl::Trusted { name, ty } => write!(f, "trusted {} : {}", name, ty),
            Decl::RelateType { a, b, equiv, rel, coh } => {
                write!(f, "relate type {} {} via {} rel {} coh {}", a, b, equiv, rel, coh)
            }
            Decl::RelateTerm { c, c2, proof } => write!(f, "relate term {} {} by {}", c, c2, proof),
            Decl::Transport { name, source, mode } => {
                let m = match mode {
                    Mode::BlackBox => "blackbox",
                    Mode::WhiteBox => "whitebox",
                };
                write!(f, "transport {} from {} {}", name, source, m)
            }
            Decl::Goal { name, ty } => write!(f, "goal {} : {} by compute", name, ty),
        }
    }
}

pub fn print_module(decls: &[Decl]) -> String {
    let mut s = String::new();
    for d in decls {
        s.push_str(&d.to_string());
        s.push_str("\n\n");
    }
    s
}
