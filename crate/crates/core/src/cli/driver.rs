//! Runs declaration files through a prelude session and turns every item
//! into a report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use super::module::{self, parse_module, print_module, Decl};
use super::report::{Report, Status};
use crate::eval::effectiveness;
use crate::kernel::pretty::print_short;
use crate::kernel::syntax::SyntaxError;
use crate::kernel::{GlobalContext, KernelError, Term};
use crate::registry::{Outcome, RegistryError, Route, Session, Verdict};
use crate::stdlib::{self, literals, StdlibError};
use crate::translate::{abstraction_check, param_translate, prime_translate, uparam_translate};

const SHOW: usize = 400;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("{0}:{1}")]
    Parse(String, #[source] SyntaxError),
    #[error(transparent)]
    Prelude(#[from] StdlibError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Abstraction check of every definition.
    Check,
    /// Print the prime and relational translations of every definition.
    Translate,
    /// Process relations and transports.
    Transport,
    /// Replay the embedded relation/transport/goal script.
    Replay,
    /// Decide goals both directly and through the replaced goal.
    Bench,
}

pub fn read_module(path: &Path) -> Result<Vec<Decl>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    parse_module(&text).map_err(|e| CliError::Parse(path.display().to_string(), e))
}

/// The prelude in surface syntax, one declaration per paragraph.
pub fn export_prelude() -> Result<String, CliError> {
    Ok(print_module(&stdlib::prelude_decls()?))
}

fn label(d: &Decl) -> String {
    match d {
        Decl::RelateType { a, b, .. } => format!("{} ~ {}", a, b),
        Decl::RelateTerm { c, c2, .. } => format!("{} ~ {}", c, c2),
        _ => d.name().unwrap_or("").to_string(),
    }
}

fn mode(d: &Decl) -> &'static str {
    match d {
        Decl::Def { .. } => "def",
        Decl::Axiom { .. } => "axiom",
        Decl::Trusted { .. } => "trusted",
        Decl::RelateType { .. } | Decl::RelateTerm { .. } => "relate",
        Decl::Transport { mode: module::Mode::BlackBox, .. } => "blackbox",
        Decl::Transport { mode: module::Mode::WhiteBox, .. } => "whitebox",
        Decl::Goal { .. } => "goal",
    }
}

fn is_budget(e: &RegistryError) -> bool {
    match e {
        RegistryError::Kernel(k) | RegistryError::IllTyped { cause: k, .. } | RegistryError::MissingPrefix(_, k) => {
            k.is_budget()
        }
        _ => false,
    }
}

fn base_name(n: &str) -> String {
    n.split('@').next().unwrap_or(n).to_string()
}

fn short(t: &Term) -> String {
    print_short(t, SHOW)
}

/// Decimal reading of a literal, if it is one.
fn decode(t: &Term) -> Option<String> {
    literals::read_n(t)
        .map(|v| format!("{} : N", v))
        .or_else(|| literals::read_nat(t).map(|v| format!("{} : nat", v)))
        .or_else(|| literals::read_bool(t).map(|v| v.to_string()))
}

fn route_report(name: &str, mode: &str, goal: &Term, route: &Route) -> Report {
    let status = match route.verdict {
        Verdict::Holds => Status::Ok,
        Verdict::Refuted => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    let mut r = Report::new(name, mode, status).note(format!("goal: {}", short(goal)));
    r.steps = route.steps;
    let values: Vec<String> = route.args.iter().filter_map(decode).collect();
    if !values.is_empty() {
        r = r.note(format!("values: {}", values.join(", ")));
    }
    if route.verdict == Verdict::Inconclusive {
        r = r.note("step budget exhausted");
    }
    r
}

fn outcome_report(s: &Session, d: &Decl, res: Result<Outcome, RegistryError>) -> Report {
    let (name, mode) = (label(d), mode(d));
    match res {
        Err(e) => {
            let status = if is_budget(&e) { Status::Inconclusive } else { Status::Fail };
            Report::new(name, mode, status).note(e.to_string())
        }
        Ok(Outcome::Declared(_)) => Report::new(name, mode, Status::Ok),
        Ok(Outcome::Related(w)) => Report::new(name, mode, Status::Ok).note(format!("witness {}", w)),
        Ok(Outcome::Transported(t)) => {
            let mut r = Report::new(name, mode, Status::Ok)
                .note(format!("{} : {}", t.name, short(&t.ty)))
                .note(format!("{} := {}", t.name, short(&t.term)))
                .note(format!("related by {}", t.relatedness));
            match effectiveness(&s.env, &Term::cnst_n(t.name.clone()), s.budget) {
                Ok(a) => {
                    r.steps = a.steps;
                    r.axioms = a.stuck_axioms.iter().map(|n| base_name(n)).collect();
                    if !a.effective {
                        r = r.note("not effective");
                    }
                }
                Err(e) => r = r.note(format!("effectiveness unknown: {}", e)),
            }
            r
        }
        Ok(Outcome::Goal(g)) => {
            let mut r = route_report(&name, "replace", &g.replaced, &g.route);
            if g.proof.is_some() {
                r = r.note(format!("proved {}", short(&g.goal)));
            }
            r
        }
    }
}

fn check_report(s: &Session, delta: &GlobalContext, name: &str) -> Report {
    let e = match s.env.get(name) {
        Some(e) => e.clone(),
        None => return Report::new(name, "check", Status::Fail).note("not declared"),
    };
    let body = match &e.body {
        Some(b) => b.clone(),
        None => return Report::new(name, "check", Status::Fail).note("no body"),
    };
    let a = abstraction_check(&s.env, delta, name, &body, &e.ty);
    let status = match a.first_error() {
        None => Status::Ok,
        Some(k) if k.is_budget() => Status::Inconclusive,
        Some(_) => Status::Fail,
    };
    let mut r = Report::new(name, "check", status);
    r.steps = a.steps;
    if let Some(p) = &a.derived_prime {
        r = r.note(format!("prime: {}", short(p)));
    }
    if let Some(err) = a.first_error() {
        r = r.note(err.to_string());
    }
    r
}

fn translate_report(s: &Session, name: &str) -> Report {
    let e = match s.env.get(name).and_then(|e| e.body.clone()) {
        Some(b) => b,
        None => return Report::new(name, "translate", Status::Fail).note("no body"),
    };
    let show = |r: Result<Term, KernelError>| match r {
        Ok(t) => (true, short(&t)),
        Err(e) => (false, e.to_string()),
    };
    let rows = [
        ("prime", show(prime_translate(&s.env, &s.delta, &e))),
        ("param", show(param_translate(&s.env, &s.delta, &e))),
        ("uparam", show(uparam_translate(&s.env, &s.delta, &e))),
    ];
    let ok = rows.iter().all(|(_, (ok, _))| *ok);
    let mut r = Report::new(name, "translate", if ok { Status::Ok } else { Status::Fail });
    for (k, (_, text)) in rows {
        r = r.note(format!("{}: {}", k, text));
    }
    r
}

/// Runs `cmd` over the declarations of `files` (the embedded script for
/// `replay`, and for `bench` without files).
pub fn run(cmd: Command, files: &[PathBuf], budget: u64) -> Result<Vec<Report>, CliError> {
    let mut s = stdlib::load_session()?;
    s.budget = budget;
    let mut decls = Vec::new();
    for f in files {
        decls.extend(read_module(f)?);
    }
    if cmd == Command::Replay || (cmd == Command::Bench && files.is_empty()) {
        decls.splice(0..0, stdlib::replay_decls()?);
    }
    if cmd == Command::Check && files.is_empty() {
        return check_corpus(&s);
    }
    Ok(run_in(&mut s, cmd, &decls))
}

fn check_corpus(s: &Session) -> Result<Vec<Report>, CliError> {
    // the corpus definitions, at the empty context
    let empty = GlobalContext::new();
    let names: Vec<String> = stdlib::corpus_decls()?
        .iter()
        .filter(|d| matches!(d, Decl::Def { .. }))
        .filter_map(|d| d.name().map(str::to_string))
        .collect();
    Ok(names.iter().map(|n| timed(|| check_report(s, &empty, n))).collect())
}

/// Processes `decls` in order in an existing session.
pub fn run_in(s: &mut Session, cmd: Command, decls: &[Decl]) -> Vec<Report> {
    let mut out = Vec::new();
    for d in decls {
        if let (Command::Bench, Decl::Goal { name, ty }) = (cmd, d) {
            let p = match s.elab(ty) {
                Ok(p) => p,
                Err(e) => {
                    out.push(Report::new(name.as_str(), "direct", Status::Fail).note(e.to_string()));
                    continue;
                }
            };
            out.push(timed(|| route_report(name, "direct", &p, &s.compute_direct(&p))));
        }
        let start = Instant::now();
        let res = s.process(d);
        let failed = res.is_err();
        let mut r = outcome_report(s, d, res);
        r.elapsed_ms = ms(start);
        let quiet = matches!(d, Decl::Def { .. } | Decl::Axiom { .. } | Decl::Trusted { .. })
            || (cmd == Command::Bench && !matches!(d, Decl::Goal { .. }));
        match (cmd, d) {
            (Command::Check, Decl::Def { name, .. }) if !failed => {
                let delta = s.delta.clone();
                out.push(timed(|| check_report(s, &delta, name)));
            }
            (Command::Translate, Decl::Def { name, .. }) if !failed => out.push(timed(|| translate_report(s, name))),
            _ if failed || !quiet => out.push(r),
            _ => {}
        }
    }
    out
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn timed(f: impl FnOnce() -> Report) -> Report {
    let start = Instant::now();
    let mut r = f();
    r.elapsed_ms = ms(start);
    r
}
