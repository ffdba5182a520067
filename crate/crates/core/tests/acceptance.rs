//! One pass/fail line per acceptance criterion. Exits non-zero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uptrans::cli::{parse_module, Decl};
use uptrans::eval::{axioms_in, effectiveness, normalize, DEFAULT_BUDGET};
use uptrans::kernel::syntax::parse_term;
use uptrans::kernel::{check, conv, infer, GlobalContext, LocalCtx, Name, Term, TermKind};
use uptrans::registry::{Outcome, Session, Verdict};
use uptrans::stdlib::{self, literals};
use uptrans::translate::{abstraction_check, param_translate, prime_translate, uparam_rel};

type Checked = Result<String, String>;

fn session() -> Session {
    stdlib::load_session().expect("prelude loads")
}

fn run(s: &mut Session, decls: &[Decl]) -> Result<Vec<Outcome>, String> {
    decls
        .iter()
        .map(|d| s.process(d).map_err(|e| format!("{}: {}", d.name().unwrap_or("?"), e)))
        .collect()
}

fn replay_without_goals() -> Result<Session, String> {
    let mut s = session();
    let decls: Vec<Decl> = stdlib::replay_decls()
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|d| !matches!(d, Decl::Goal { .. }))
        .collect();
    run(&mut s, &decls)?;
    Ok(s)
}

fn term(s: &Session, src: &str) -> Result<Term, String> {
    parse_term(src).and_then(|r| s.elab(&r)).map_err(|e| format!("{}: {}", src, e))
}

fn nf(s: &Session, t: &Term) -> Result<Term, String> {
    let r = normalize(&s.env, t, s.budget);
    if r.budget_hit {
        Err(format!("budget exhausted on {:?}", t))
    } else {
        Ok(r.normal_form)
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn kinds(t: &Term, seen: &mut HashSet<&'static str>) {
    match t.kind() {
        TermKind::Sort(_) => {
            seen.insert("sort");
        }
        TermKind::Var(_) => {
            seen.insert("var");
        }
        TermKind::Const(_) | TermKind::Ind(_) | TermKind::Prim(_) | TermKind::Int(_) => {
            seen.insert("constant");
        }
        TermKind::Lam(_, a, b) => {
            seen.insert("lambda");
            kinds(a, seen);
            kinds(b, seen);
        }
        TermKind::Pi(_, a, b) => {
            seen.insert("pi");
            kinds(a, seen);
            kinds(b, seen);
        }
        TermKind::App(f, a) => {
            seen.insert("app");
            kinds(f, seen);
            kinds(a, seen);
        }
    }
}

fn c1_abstraction() -> Checked {
    let start = Instant::now();
    let mut s = session();
    let corpus = stdlib::corpus_decls().map_err(|e| e.to_string())?;
    let defs: Vec<String> = corpus
        .iter()
        .filter(|d| matches!(d, Decl::Def { .. }))
        .filter_map(|d| d.name().map(str::to_string))
        .collect();

    // (label, body, type) at the empty context, then under the replay context
    let mut items = Vec::new();
    for n in &defs {
        let e = s.env.get(n).ok_or(format!("{} missing", n))?.clone();
        let sort = infer(&s.env, &LocalCtx::new(), &e.ty).map_err(|e| e.to_string())?;
        items.push((n.clone(), e.body.clone().unwrap(), e.ty.clone()));
        items.push((format!("{} statement", n), e.ty.clone(), sort));
    }
    let empty = GlobalContext::new();
    let mut passed = HashSet::new();
    let mut seen = HashSet::new();
    for (label, body, ty) in &items {
        if abstraction_check(&s.env, &empty, label, body, ty).ok() {
            passed.insert(label.clone());
            kinds(body, &mut seen);
        }
    }
    s = replay_without_goals()?;
    let mut under = 0;
    for (label, body, ty) in &items {
        if abstraction_check(&s.env, &s.delta, label, body, ty).ok() {
            under += 1;
        }
    }
    let required = ["square", "plus_comm statement", "pow_prop statement", "diff statement", "Lib"];
    let missing: Vec<&str> = required.iter().copied().filter(|r| !passed.contains(*r)).collect();
    ensure(missing.is_empty(), || format!("required entries failed: {:?}", missing))?;
    ensure(passed.len() >= 30, || format!("only {} entries pass", passed.len()))?;
    let cases = ["sort", "pi", "lambda", "app", "var", "constant"];
    ensure(cases.iter().all(|c| seen.contains(c)), || format!("syntax cases covered: {:?}", seen))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1} s", secs))?;
    Ok(format!(
        "{} of {} entries pass at the empty context, {} under nat~N; all syntax cases; {:.1} s",
        passed.len(),
        items.len(),
        under,
        secs
    ))
}

fn c2_white_box() -> Checked {
    let s = replay_without_goals()?;
    let body = s.env.get("square").and_then(|e| e.body.clone()).ok_or("square has no body")?;
    let prime = prime_translate(&s.env, &s.delta, &body).map_err(|e| e.to_string())?;
    let expected = term(&s, "fun (x : N) => mult_N x x")?;
    ensure(prime == expected, || format!("prime is {:?}", prime))?;
    let wb = s.env.get("square_N_wbox").and_then(|e| e.body.clone()).ok_or("square_N_wbox missing")?;
    ensure(wb == expected, || format!("square_N_wbox is {:?}", wb))?;
    let n = nf(&s, &Term::cnst("square_N_wbox"))?;
    let axioms = axioms_in(&s.env, &n);
    ensure(axioms.is_empty(), || format!("normal form mentions {:?}", axioms))?;
    let eff = effectiveness(&s.env, &Term::cnst("square_N_wbox"), s.budget).map_err(|e| e.to_string())?;
    ensure(eff.effective, || "not effective".into())?;
    Ok("square_N_wbox = fun (x : N) => mult_N x x, axiom-free".into())
}

fn c3_black_box() -> Checked {
    let s = replay_without_goals()?;
    let cases = [
        ("plus_N_comm", "forall (n m : N), eq@0 N (plus_N n m) (plus_N m n)"),
        (
            "pow_N_prop",
            "forall (n : N), eq@0 N (pow_N (3 : N) (plus_N n (1 : N))) (mult_N (3 : N) (pow_N (3 : N) n))",
        ),
    ];
    for (name, ty) in cases {
        let expected = term(&s, ty)?;
        let actual = s.env.get(name).ok_or(format!("{} missing", name))?.ty.clone();
        check(&s.env, &LocalCtx::new(), &Term::cnst(name), &expected).map_err(|e| format!("{}: {}", name, e))?;
        ensure(conv(&s.env, &actual, &expected).map_err(|e| e.to_string())?, || format!("{} type differs", name))?;
    }
    Ok("plus_N_comm and pow_N_prop typecheck at their binary statements".into())
}

fn c4_agreement() -> Checked {
    let mut s = replay_without_goals()?;
    let extra = parse_module("transport plus_N_bb from plus blackbox\ntransport mult_N_bb from mult blackbox\n")
        .map_err(|e| e.to_string())?;
    run(&mut s, &extra)?;
    let mut count = 0;
    for n in 0..64u64 {
        for m in 0..64u64 {
            for (unary, binary, host) in [("plus", "plus_N_bb", n + m), ("mult", "mult_N_bb", n * m)] {
                let u = nf(&s, &Term::apps(Term::cnst(unary), [literals::mk_nat(n), literals::mk_nat(m)]))?;
                let b = nf(&s, &Term::apps(Term::cnst(binary), [literals::mk_n(n), literals::mk_n(m)]))?;
                let (u, b) = (literals::read_nat(&u), literals::read_n(&b));
                ensure(u == Some(host) && b == Some(host), || {
                    format!("{} {} {}: unary {:?}, transported {:?}, host {}", unary, n, m, u, b, host)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{} of {} plus/mult pairs agree", count, count))
}

fn poly(n: u64) -> u64 {
    12 * n + 51 * n.pow(4) - n.pow(5)
}

fn poly_list(coefs: &[u64], n: u64) -> u64 {
    coefs.iter().enumerate().map(|(d, c)| c * n.pow(d as u32)).sum()
}

fn sequence(acc: u64, n: u64) -> u64 {
    match n {
        0 => acc,
        1 => 2 * acc,
        2 => 3 * acc,
        _ => sequence(acc, n - 1).pow(acc as u32),
    }
}

fn c5_goals() -> Checked {
    let mut s = replay_without_goals()?;
    s.budget = DEFAULT_BUDGET;
    let expected = [
        ("poly_prop", poly(50)),
        ("poly'_prop", poly_list(&[0, 12, 0, 0, 51, 1], 50)),
        ("sequence_prop", sequence(2, 5)),
    ];
    let goals: Vec<Decl> = stdlib::replay_decls()
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|d| matches!(d, Decl::Goal { .. }))
        .collect();
    let mut lines = Vec::new();
    for (name, value) in expected {
        let d = goals.iter().find(|d| d.name() == Some(name)).ok_or(format!("{} missing", name))?;
        let ty = match d {
            Decl::Goal { ty, .. } => s.elab(ty).map_err(|e| e.to_string())?,
            _ => unreachable!(),
        };
        let direct = s.compute_direct(&ty);
        ensure(direct.verdict == Verdict::Inconclusive, || format!("{} direct route: {:?}", name, direct.verdict))?;
        let g = match s.process(d).map_err(|e| e.to_string())? {
            Outcome::Goal(g) => g,
            _ => return Err(format!("{} is not a goal", name)),
        };
        ensure(g.route.verdict == Verdict::Holds && g.proof.is_some(), || format!("{} replaced route fails", name))?;
        ensure(g.route.steps < 1_000_000, || format!("{} took {} steps", name, g.route.steps))?;
        let decoded: Vec<u64> = g.route.args.iter().filter_map(literals::read_n).collect();
        ensure(decoded == [value, 1000], || format!("{} decoded {:?}, want {}", name, decoded, value))?;
        lines.push(format!("{}={} in {} steps", name, value, g.route.steps));
    }
    Ok(format!("direct routes exceed 10^7 steps; {}", lines.join(", ")))
}

fn c6_equivalence() -> Checked {
    let s = session();
    for k in 0..1024u64 {
        let sect = nf(&s, &Term::app(Term::cnst("of_N"), Term::app(Term::cnst("to_N"), literals::mk_nat(k))))?;
        ensure(literals::read_nat(&sect) == Some(k), || format!("section fails at {}", k))?;
        let retr = nf(&s, &Term::app(Term::cnst("to_N"), Term::app(Term::cnst("of_N"), literals::mk_n(k))))?;
        ensure(literals::read_n(&retr) == Some(k), || format!("retraction fails at {}", k))?;
    }
    Ok("section and retraction hold for all 1024 values".into())
}

fn c7_effectiveness() -> Checked {
    let s = replay_without_goals()?;
    let mut effective = 0;
    for d in stdlib::replay_decls().map_err(|e| e.to_string())? {
        if let Decl::Transport { name, .. } = &d {
            let r = effectiveness(&s.env, &Term::cnst(name), s.budget).map_err(|e| e.to_string())?;
            let stuck: Vec<&str> = r.stuck_axioms.iter().map(|a| a.split('@').next().unwrap()).collect();
            if name == "g_N" {
                ensure(!r.effective && stuck == ["funext"], || format!("g_N reports {:?}", stuck))?;
            } else {
                ensure(r.effective, || format!("{} stuck on {:?}", name, stuck))?;
                effective += 1;
            }
        }
    }
    Ok(format!("g_N stuck on funext; {} first-order transports effective", effective))
}

fn proof_sample(ty: &str, x: &str, k: u32) -> String {
    let refl = format!("(eq_refl@0 {ty} {x})");
    let id = format!("(fun (y : {ty}) => y)");
    let fx = format!(
        "(funext@{{0,0}} {ty} (fun (_ : {ty}) => {ty}) {id} {id} (fun (y : {ty}) => eq_refl@0 {ty} y))"
    );
    let via_funext = format!("(ap@{{0,0}} ({ty} -> {ty}) {ty} (fun (f : {ty} -> {ty}) => f {x}) {id} {id} {fx})");
    match k {
        0 => refl,
        1 => format!("(ap@{{0,0}} {ty} {ty} {id} {x} {x} {refl})"),
        2 => format!("(sym@0 {ty} {x} {x} {refl})"),
        3 => format!("(concat@0 {ty} {x} {x} {x} {refl} {refl})"),
        4 => via_funext,
        _ => format!("(concat@0 {ty} {x} {x} {x} (sym@0 {ty} {x} {x} {via_funext}) {refl})"),
    }
}

fn c8_canonical() -> Checked {
    let s = session();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut with_funext = 0;
    let mut total = 0;
    for (ty, inst) in [("nat", "can_nat"), ("bool", "can_bool"), ("N", "can_N")] {
        for _ in 0..100 {
            let x = match ty {
                "nat" => format!("({} : nat)", rng.gen_range(0..40u64)),
                "bool" => if rng.gen() { "true" } else { "false" }.to_string(),
                _ => format!("({} : N)", rng.gen_range(0..1_000_000u64)),
            };
            let p = term(&s, &proof_sample(ty, &x, rng.gen_range(0..6)))?;
            let funext = axioms_in(&s.env, &p).iter().any(|a| a.starts_with("funext"));
            with_funext += funext as usize;
            let xt = term(&s, &x)?;
            let lhs = Term::apps(term(&s, &format!("can_eq {} {}", ty, inst))?, [xt.clone(), xt.clone(), p]);
            let got = nf(&s, &lhs)?;
            let want = nf(&s, &term(&s, &format!("eq_refl@0 {} {}", ty, x))?)?;
            ensure(got == want, || format!("can_eq on {} {} gave {:?}", ty, x, got))?;
            total += 1;
        }
    }
    ensure(with_funext > 0, || "no sampled proof mentions funext".into())?;
    Ok(format!("{} pairs reduce to eq_refl, {} of them through funext proofs", total, with_funext))
}

fn c9_native_int() -> Checked {
    let s = replay_without_goals()?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10_000 {
        let x: u16 = rng.gen();
        // half the shifts in range, half anywhere
        let p: u16 = if i % 2 == 0 { rng.gen_range(0..16) } else { rng.gen() };
        let host = if p >= 16 { 0 } else { ((x as u64) << p) % (1 << 16) };
        let t = term(&s, &format!("int16_to_N (lsl ({} : int16) ({} : int16))", x, p))?;
        let got = literals::read_n(&nf(&s, &t)?);
        ensure(got == Some(host), || format!("lsl {} {} = {:?}, host {}", x, p, got, host))?;
    }
    let expected = term(
        &s,
        "forall (x y n : int16), eq@0 int16 (lsl (add16 x y) n) (add16 (lsl x n) (lsl y n))",
    )?;
    check(&s.env, &LocalCtx::new(), &Term::cnst("lsl_add_distr"), &expected).map_err(|e| e.to_string())?;
    Ok("lsl_spec holds on 10^4 pairs; lsl_add_distr typechecks at int16".into())
}

// Plain parametricity, written directly over named syntax.
#[derive(Clone, Debug)]
enum Named {
    Sort(u32),
    Var(String),
    Lam(String, Box<Named>, Box<Named>),
    Pi(String, Box<Named>, Box<Named>),
    App(Box<Named>, Box<Named>),
}

fn prime(t: &Named) -> Named {
    match t {
        Named::Sort(l) => Named::Sort(*l),
        Named::Var(x) => Named::Var(format!("{}'", x)),
        Named::Lam(x, a, b) => Named::Lam(format!("{}'", x), Box::new(prime(a)), Box::new(prime(b))),
        Named::Pi(x, a, b) => Named::Pi(format!("{}'", x), Box::new(prime(a)), Box::new(prime(b))),
        Named::App(f, a) => Named::App(Box::new(prime(f)), Box::new(prime(a))),
    }
}

fn app(f: Named, args: Vec<Named>) -> Named {
    args.into_iter().fold(f, |f, a| Named::App(Box::new(f), Box::new(a)))
}

fn var(x: &str) -> Named {
    Named::Var(x.to_string())
}

fn named_rel(t: &Named) -> Named {
    match t {
        Named::Sort(l) => Named::Lam(
            "A".into(),
            Box::new(Named::Sort(*l)),
            Box::new(Named::Lam(
                "A'".into(),
                Box::new(Named::Sort(*l)),
                Box::new(Named::Pi(
                    "_a".into(),
                    Box::new(var("A")),
                    Box::new(Named::Pi("_b".into(), Box::new(var("A'")), Box::new(Named::Sort(*l)))),
                )),
            )),
        ),
        Named::Var(x) => var(&format!("{}_R", x)),
        Named::Lam(x, a, b) => Named::Lam(
            x.clone(),
            a.clone(),
            Box::new(Named::Lam(
                format!("{}'", x),
                Box::new(prime(a)),
                Box::new(Named::Lam(
                    format!("{}_R", x),
                    Box::new(app(named_rel(a), vec![var(x), var(&format!("{}'", x))])),
                    Box::new(named_rel(b)),
                )),
            )),
        ),
        Named::App(f, a) => app(named_rel(f), vec![(**a).clone(), prime(a), named_rel(a)]),
        Named::Pi(x, a, b) => {
            let (f, f2) = ("#f".to_string(), "#f'".to_string());
            let x2 = format!("{}'", x);
            Named::Lam(
                f.clone(),
                Box::new(t.clone()),
                Box::new(Named::Lam(
                    f2.clone(),
                    Box::new(prime(t)),
                    Box::new(Named::Pi(
                        x.clone(),
                        a.clone(),
                        Box::new(Named::Pi(
                            x2.clone(),
                            Box::new(prime(a)),
                            Box::new(Named::Pi(
                                format!("{}_R", x),
                                Box::new(app(named_rel(a), vec![var(x), var(&x2)])),
                                Box::new(app(
                                    named_rel(b),
                                    vec![app(var(&f), vec![var(x)]), app(var(&f2), vec![var(&x2)])],
                                )),
                            )),
                        )),
                    )),
                )),
            )
        }
    }
}

fn debruijn(t: &Named, scope: &mut Vec<String>) -> Term {
    match t {
        Named::Sort(l) => Term::sort(*l),
        Named::Var(x) => {
            let k = scope.iter().rev().position(|y| y == x).expect("closed term");
            Term::var(k as u32)
        }
        Named::Lam(x, a, b) | Named::Pi(x, a, b) => {
            let a = debruijn(a, scope);
            scope.push(x.clone());
            let b = debruijn(b, scope);
            scope.pop();
            if matches!(t, Named::Lam(..)) {
                Term::lam_n(Name::from(x.as_str()), a, b)
            } else {
                Term::pi_n(Name::from(x.as_str()), a, b)
            }
        }
        Named::App(f, a) => Term::app(debruijn(f, scope), debruijn(a, scope)),
    }
}

fn gen_named(rng: &mut ChaCha8Rng, scope: &mut Vec<String>, depth: u32, fresh: &mut u32) -> Named {
    let leaf = depth == 0 || rng.gen_range(0..4) == 0;
    if leaf {
        if !scope.is_empty() && rng.gen_range(0..3) > 0 {
            return var(&scope[rng.gen_range(0..scope.len())]);
        }
        return Named::Sort(rng.gen_range(0..2));
    }
    match rng.gen_range(0..3) {
        0 => Named::App(
            Box::new(gen_named(rng, scope, depth - 1, fresh)),
            Box::new(gen_named(rng, scope, depth - 1, fresh)),
        ),
        k => {
            let a = gen_named(rng, scope, depth - 1, fresh);
            *fresh += 1;
            let x = format!("x{}", fresh);
            scope.push(x.clone());
            let b = gen_named(rng, scope, depth - 1, fresh);
            scope.pop();
            if k == 1 {
                Named::Lam(x, Box::new(a), Box::new(b))
            } else {
                Named::Pi(x, Box::new(a), Box::new(b))
            }
        }
    }
}

// Closed types built from Type@0, type variables and Π.
fn gen_type(rng: &mut ChaCha8Rng, tvars: u32, depth: u32) -> Term {
    if depth == 0 || rng.gen_range(0..3) == 0 {
        return if tvars > 0 && rng.gen_range(0..4) > 0 {
            Term::var(rng.gen_range(0..tvars))
        } else if tvars == 0 {
            Term::sort(0)
        } else {
            Term::var(0)
        };
    }
    if tvars < 3 && rng.gen_range(0..2) == 0 {
        Term::pi("X", Term::sort(0), gen_type(rng, tvars + 1, depth - 1))
    } else if tvars > 0 {
        let a = gen_type(rng, tvars, depth - 1);
        let b = gen_type(rng, tvars, depth - 1);
        Term::arrow(a, b)
    } else {
        Term::arrow(Term::sort(0), Term::sort(0))
    }
}

fn c10_degeneration() -> Checked {
    let s = session();
    let empty = GlobalContext::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut fresh = 0;
    for i in 0..1000 {
        let t = gen_named(&mut rng, &mut Vec::new(), 5, &mut fresh);
        let want = debruijn(&named_rel(&t), &mut Vec::new());
        let src = debruijn(&t, &mut Vec::new());
        let got = param_translate(&s.env, &empty, &src).map_err(|e| format!("term {}: {}", i, e))?;
        ensure(got == want, || format!("term {} differs: {:?}", i, t))?;
    }
    let mut types = 0;
    for _ in 0..200 {
        let a = gen_type(&mut rng, 0, 4);
        let r = uparam_rel(&s.env, &empty, &a).map_err(|e| format!("{:?}: {}", a, e))?;
        let mut ctx = LocalCtx::new();
        ctx.push(Name::from("x"), a.clone());
        let diag = Term::apps(r.lift(1, 0), [Term::var(0), Term::var(0)]);
        let ty = infer(&s.env, &ctx, &diag).map_err(|e| format!("{:?}: {}", a, e))?;
        ensure(matches!(ty.kind(), TermKind::Sort(_)), || format!("{:?} relates at {:?}", a, ty))?;
        types += 1;
    }
    Ok(format!("1000 terms match the direct translation; {} types well-typed on the diagonal", types))
}

fn main() {
    let criteria: [(&str, fn() -> Checked); 10] = [
        ("abstraction theorem suite", c1_abstraction),
        ("white-box transport of square", c2_white_box),
        ("black-box transport of plus_comm and pow_prop", c3_black_box),
        ("computation agreement", c4_agreement),
        ("goal replacement", c5_goals),
        ("nat~N section and retraction", c6_equivalence),
        ("effectiveness boundary", c7_effectiveness),
        ("canonical equality", c8_canonical),
        ("native 16-bit integers", c9_native_int),
        ("degeneration at the empty context", c10_degeneration),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {} ({:.1} s): {}", i + 1, name, secs, detail),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL {} ({:.1} s): {}", i + 1, name, secs, e)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
