//! Surface syntax for terms: lexer, parser to a named AST, and elaboration
//! to de Bruijn terms.

use std::rc::Rc;

use thiserror::Error;

use super::term::{level_suffixed, Builtin, Name, PrimOp, Term};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    ColonEq,
    Arrow,
    FatArrow,
    At,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub const KEYWORDS: &[&str] = &[
    "fun", "forall", "Type", "def", "axiom", "trusted", "opaque", "relate", "type", "term", "via",
    "rel", "coh", "by", "transport", "from", "whitebox", "blackbox", "goal", "compute",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(chars[i] as u64 - '0' as u64))
                    .ok_or_else(|| SyntaxError { line, col, msg: "numeric literal too large".into() })?;
                adv(1, &mut i, &mut col);
            }
            Tok::Num(v)
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                s.push(chars[i]);
                adv(1, &mut i, &mut col);
            }
            Tok::Ident(s)
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let (t, n) = match two.as_str() {
                ":=" => (Tok::ColonEq, 2),
                "->" => (Tok::Arrow, 2),
                "=>" => (Tok::FatArrow, 2),
                _ => match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    ',' => (Tok::Comma, 1),
                    ':' => (Tok::Colon, 1),
                    '@' => (Tok::At, 1),
                    _ => {
                        return Err(SyntaxError { line, col, msg: format!("unexpected character `{}`", c) })
                    }
                },
            };
            adv(n, &mut i, &mut col);
            t
        };
        out.push(Token { tok, line: start.0, col: start.1 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Named abstract syntax produced by the parser. Equality ignores source
/// positions.
#[derive(Clone, Debug)]
pub enum Raw {
    Ident { name: String, levels: Option<Vec<u32>>, line: usize, col: usize },
    Sort(u32),
    Lam(String, Box<Raw>, Box<Raw>),
    Pi(String, Box<Raw>, Box<Raw>),
    Arrow(Box<Raw>, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Num { value: u64, ty: Box<Raw>, line: usize, col: usize },
}

impl PartialEq for Raw {
    fn eq(&self, other: &Raw) -> bool {
        use Raw::*;
        match (self, other) {
            (Ident { name: a, levels: la, .. }, Ident { name: b, levels: lb, .. }) => a == b && la == lb,
            (Sort(a), Sort(b)) => a == b,
            (Lam(x, a, b), Lam(y, c, d)) | (Pi(x, a, b), Pi(y, c, d)) => x == y && a == c && b == d,
            (Arrow(a, b), Arrow(c, d)) | (App(a, b), App(c, d)) => a == c && b == d,
            (Num { value: v, ty: a, .. }, Num { value: w, ty: b, .. }) => v == w && a == b,
            _ => false,
        }
    }
}

impl Raw {
    pub fn ident(name: &str) -> Raw {
        Raw::Ident { name: name.to_string(), levels: None, line: 0, col: 0 }
    }
}

fn fmt_levels(lv: &[u32]) -> String {
    if lv.len() == 1 {
        format!("@{}", lv[0])
    } else {
        let parts: Vec<String> = lv.iter().map(|l| l.to_string()).collect();
        format!("@{{{}}}", parts.join(","))
    }
}

impl std::fmt::Display for Raw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.write(f, 0)
    }
}

impl Raw {
    /// `prec`: 0 anywhere, 1 left of an arrow, 2 function position, 3 argument.
    fn write(&self, f: &mut std::fmt::Formatter<'_>, prec: u8) -> std::fmt::Result {
        match self {
            Raw::Ident { name, levels, .. } => {
                f.write_str(name)?;
                if let Some(lv) = levels {
                    f.write_str(&fmt_levels(lv))?;
                }
                Ok(())
            }
            Raw::Sort(l) => write!(f, "Type@{}", l),
            Raw::Num { value, ty, .. } => write!(f, "({} : {})", value, ty),
            Raw::App(a, b) => {
                if prec >= 3 {
                    f.write_str("(")?;
                }
                a.write(f, 2)?;
                f.write_str(" ")?;
                b.write(f, 3)?;
                if prec >= 3 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Raw::Lam(..) | Raw::Pi(..) | Raw::Arrow(..) => {
                if prec >= 1 {
                    f.write_str("(")?;
                }
                match self {
                    Raw::Lam(x, a, b) => write!(f, "fun ({} : {}) => {}", x, a, b)?,
                    Raw::Pi(x, a, b) => write!(f, "forall ({} : {}), {}", x, a, b)?,
                    Raw::Arrow(a, b) => {
                        a.write(f, 1)?;
                        f.write_str(" -> ")?;
                        b.write(f, 0)?;
                    }
                    _ => unreachable!(),
                }
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        let (line, col) = self.here();
        Err(SyntaxError { line, col, msg: msg.into() })
    }

    pub fn expect(&mut self, t: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {:?}, found {:?}", t, self.peek()))
        }
    }

    pub fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{}`, found {:?}", kw, self.peek()))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {:?}", t)),
        }
    }

    /// Identifier with an optional `@i` / `@{i,j}` suffix folded into the
    /// canonical constant spelling.
    pub fn global_name(&mut self) -> Result<String, SyntaxError> {
        let base = self.ident()?;
        match self.levels()? {
            Some(lv) => Ok(level_suffixed(&base, &lv)),
            None => Ok(base),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn levels(&mut self) -> Result<Option<Vec<u32>>, SyntaxError> {
        if *self.peek() != Tok::At {
            return Ok(None);
        }
        self.bump();
        match self.bump() {
            Tok::Num(n) => Ok(Some(vec![n as u32])),
            Tok::LBrace => {
                let mut v = Vec::new();
                loop {
                    match self.bump() {
                        Tok::Num(n) => v.push(n as u32),
                        _ => return self.err("expected level"),
                    }
                    match self.bump() {
                        Tok::Comma => continue,
                        Tok::RBrace => break,
                        _ => return self.err("expected `,` or `}` in level list"),
                    }
                }
                Ok(Some(v))
            }
            _ => self.err("expected level after `@`"),
        }
    }

    pub fn term(&mut self) -> Result<Raw, SyntaxError> {
        if self.is_kw("fun") {
            self.bump();
            let binders = self.binders()?;
            self.expect(Tok::FatArrow)?;
            let body = self.term()?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |b, (x, ty)| Raw::Lam(x, Box::new(ty), Box::new(b))));
        }
        if self.is_kw("forall") {
            self.bump();
            let binders = self.binders()?;
            self.expect(Tok::Comma)?;
            let body = self.term()?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |b, (x, ty)| Raw::Pi(x, Box::new(ty), Box::new(b))));
        }
        let lhs = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.term()?;
            return Ok(Raw::Arrow(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    pub fn binders(&mut self) -> Result<Vec<(String, Raw)>, SyntaxError> {
        let mut out = Vec::new();
        if *self.peek() == Tok::LParen {
            while *self.peek() == Tok::LParen {
                self.bump();
                let mut names = vec![self.ident()?];
                while let Tok::Ident(s) = self.peek() {
                    if is_keyword(s) {
                        break;
                    }
                    names.push(self.ident()?);
                }
                self.expect(Tok::Colon)?;
                let ty = self.term()?;
                self.expect(Tok::RParen)?;
                for n in names {
                    out.push((n, ty.clone()));
                }
            }
        } else {
            let mut names = vec![self.ident()?];
            while *self.peek() != Tok::Colon {
                names.push(self.ident()?);
            }
            self.expect(Tok::Colon)?;
            let ty = self.term()?;
            for n in names {
                out.push((n, ty.clone()));
            }
        }
        Ok(out)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || s == "Type",
            Tok::Num(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Raw, SyntaxError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Raw::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Raw, SyntaxError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if s == "Type" => {
                self.bump();
                let lv = self.levels()?.unwrap_or_else(|| vec![0]);
                if lv.len() != 1 {
                    return self.err("`Type` takes one level");
                }
                Ok(Raw::Sort(lv[0]))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                let levels = self.levels()?;
                Ok(Raw::Ident { name, levels, line, col })
            }
            Tok::Num(_) => self.err("numeric literal needs a type annotation, e.g. `(3 : nat)`"),
            Tok::LParen => {
                self.bump();
                if let (Tok::Num(v), Tok::Colon) = (self.peek().clone(), self.peek_at(1).clone()) {
                    self.bump();
                    self.bump();
                    let ty = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Raw::Num { value: v, ty: Box::new(ty), line, col });
                }
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            t => self.err(format!("unexpected token {:?}", t)),
        }
    }
}

/// Global name lookup used during elaboration.
pub trait Resolve {
    fn global(&self, name: &str) -> Option<Term>;
}

pub struct NoGlobals;

impl Resolve for NoGlobals {
    fn global(&self, _: &str) -> Option<Term> {
        None
    }
}

pub fn parse_term(src: &str) -> Result<Raw, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    if !p.at_eof() {
        return p.err(format!("trailing input {:?}", p.peek()));
    }
    Ok(t)
}

/// Parses and elaborates a closed term.
pub fn read_term(src: &str, res: &dyn Resolve) -> Result<Term, SyntaxError> {
    let raw = parse_term(src)?;
    elaborate(&raw, &mut Vec::new(), res)
}

fn resolve_ident(
    name: &str,
    levels: &Option<Vec<u32>>,
    scope: &[Name],
    res: &dyn Resolve,
) -> Option<Term> {
    if levels.is_none() {
        if let Some(pos) = scope.iter().rev().position(|n| &**n == name) {
            return Some(Term::var(pos as u32));
        }
    }
    let lv = levels.clone().unwrap_or_default();
    if let Some(b) = Builtin::from_parts(name, &lv) {
        if levels.is_none() || lv.len() == b.levels().len() {
            return Some(Term::ind(b));
        }
    }
    if levels.is_none() {
        if let Some(p) = PrimOp::from_name(name) {
            return Some(Term::prim(p));
        }
    }
    match levels {
        Some(lv) => res.global(&level_suffixed(name, lv)),
        None => res
            .global(name)
            .or_else(|| res.global(&level_suffixed(name, &[0])))
            .or_else(|| res.global(&level_suffixed(name, &[0, 0])))
            .or_else(|| res.global(&level_suffixed(name, &[0, 0, 0]))),
    }
}

pub fn elaborate(raw: &Raw, scope: &mut Vec<Name>, res: &dyn Resolve) -> Result<Term, SyntaxError> {
    match raw {
        Raw::Sort(l) => Ok(Term::sort(*l)),
        Raw::Ident { name, levels, line, col } => resolve_ident(name, levels, scope, res).ok_or_else(|| SyntaxError {
            line: *line,
            col: *col,
            msg: format!("unresolved name `{}`", name),
        }),
        Raw::App(f, a) => Ok(Term::app(elaborate(f, scope, res)?, elaborate(a, scope, res)?)),
        Raw::Lam(x, a, b) | Raw::Pi(x, a, b) => {
            let ta = elaborate(a, scope, res)?;
            scope.push(Rc::from(x.as_str()));
            let tb = elaborate(b, scope, res);
            scope.pop();
            let tb = tb?;
            Ok(match raw {
                Raw::Lam(..) => Term::lam(x, ta, tb),
                _ => Term::pi(x, ta, tb),
            })
        }
        Raw::Arrow(a, b) => {
            let ta = elaborate(a, scope, res)?;
            // the codomain cannot see a binder: push an unreachable name
            scope.push(Rc::from(" "));
            let tb = elaborate(b, scope, res);
            scope.pop();
            Ok(Term::pi("_", ta, tb?))
        }
        Raw::Num { value, ty, line, col } => {
            let t = elaborate(ty, scope, res)?;
            let fail = |msg: String| SyntaxError { line: *line, col: *col, msg };
            match t.as_ind() {
                Some(Builtin::Nat) => {
                    if *value > crate::stdlib::literals::NAT_LITERAL_BOUND {
                        return Err(fail(format!("nat literal {} exceeds the unary bound", value)));
                    }
                    Ok(crate::stdlib::literals::mk_nat(*value))
                }
                Some(Builtin::BinN) => Ok(crate::stdlib::literals::mk_n(*value)),
                Some(Builtin::Int16) => {
                    if *value > u16::MAX as u64 {
                        return Err(fail(format!("int16 literal {} out of range", value)));
                    }
                    Ok(Term::int(*value as u16))
                }
                _ => Err(fail(format!("literals are only available at nat, N and int16, not {}", t))),
            }
        }
    }
}
