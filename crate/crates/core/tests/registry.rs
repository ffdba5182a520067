use uptrans::cli::{parse_module, Decl};
use uptrans::eval::normalize;
use uptrans::kernel::syntax::parse_term;
use uptrans::registry::{Outcome, RegistryError, Session};
use uptrans::stdlib::{self, literals};

const NAT_N: &str = "relate type nat N via equiv_nat_N rel R_nat_N coh coh_nat_N
relate term O N0 by RO
relate term S succ_N by RS
relate term plus plus_N by univrel_plus
relate term mult mult_N by univrel_mult
";

fn with(src: &str) -> Session {
    let mut s = stdlib::load_session().unwrap();
    for d in parse_module(src).unwrap() {
        s.process(&d).unwrap_or_else(|e| panic!("{:?}: {}", d, e));
    }
    s
}

fn one(s: &mut Session, src: &str) -> Result<Outcome, RegistryError> {
    let d = parse_module(src).unwrap();
    assert_eq!(d.len(), 1);
    s.process(&d[0])
}

fn eval_n(s: &Session, src: &str) -> Option<u64> {
    let t = s.elab(&parse_term(src).unwrap()).unwrap();
    let r = normalize(&s.env, &t, s.budget);
    assert!(!r.budget_hit);
    literals::read_n(&r.normal_form)
}

#[test]
fn type_relation_is_registered_both_ways() {
    let s = with(NAT_N);
    let nat = s.delta.lookup("nat").expect("nat related");
    assert_eq!(nat.right.as_ref(), "N");
    let n = s.delta.lookup("N").expect("N related back");
    assert_eq!(n.right.as_ref(), "nat");
    assert!(s.delta.lookup("plus").is_some());
}

#[test]
fn relating_twice_is_rejected() {
    let mut s = with(NAT_N);
    let e = one(&mut s, "relate type nat N via equiv_nat_N rel R_nat_N coh coh_nat_N").unwrap_err();
    assert!(matches!(e, RegistryError::DuplicateRelation(..)), "{}", e);
    let e = one(&mut s, "relate term O N0 by RO").unwrap_err();
    assert!(matches!(e, RegistryError::DuplicateRelation(..)), "{}", e);
}

#[test]
fn wrong_relatedness_proof_is_ill_typed() {
    let mut s = with(
        "relate type nat N via equiv_nat_N rel R_nat_N coh coh_nat_N
relate term O N0 by RO
relate term S succ_N by RS
",
    );
    match one(&mut s, "relate term plus mult_N by univrel_plus").unwrap_err() {
        RegistryError::IllTyped { component, .. } => assert_eq!(component, "proof"),
        e => panic!("{}", e),
    }
    assert!(s.delta.lookup("plus").is_none());
}

#[test]
fn white_box_of_trusted_constant_is_opaque() {
    let mut s = with(NAT_N);
    let e = one(&mut s, "transport x from of_N_succ whitebox").unwrap_err();
    assert!(matches!(e, RegistryError::Opaque(_)), "{}", e);
}

#[test]
fn unknown_source() {
    let mut s = with(NAT_N);
    assert!(matches!(one(&mut s, "transport x from nowhere blackbox"), Err(RegistryError::UnknownName(_))));
}

#[test]
fn unrelated_constant_blocks_transport() {
    let mut s = with(NAT_N);
    one(&mut s, "axiom u : nat -> nat").unwrap();
    one(&mut s, "def h (n : nat) : nat := u n").unwrap();
    let e = one(&mut s, "transport h_N from h whitebox").unwrap_err();
    assert!(e.to_string().contains('u'), "{}", e);
}

#[test]
fn white_box_transport_computes() {
    let mut s = with(NAT_N);
    match one(&mut s, "transport add3_N from add3 whitebox").unwrap() {
        Outcome::Transported(t) => assert_eq!(t.name.as_ref(), "add3_N"),
        o => panic!("{:?}", o),
    }
    assert_eq!(eval_n(&s, "add3_N (4 : N)"), Some(7));
    assert_eq!(eval_n(&s, "add3_N (1000 : N)"), Some(1003));
}

#[test]
fn black_box_transport_computes() {
    let mut s = with(NAT_N);
    one(&mut s, "transport cube_bb from cube blackbox").unwrap();
    assert_eq!(eval_n(&s, "cube_bb (5 : N)"), Some(125));
}

#[test]
fn second_transport_of_a_related_source_keeps_first_relation() {
    let mut s = with(NAT_N);
    one(&mut s, "transport sq1 from square whitebox").unwrap();
    let before = s.delta.lookup("square").unwrap().right.clone();
    one(&mut s, "transport sq2 from square blackbox").unwrap();
    assert_eq!(s.delta.lookup("square").unwrap().right, before);
    assert!(s.env.contains("sq2"));
}

// The white-box route needs eq_rect's relation to compute on a variable
// equality proof, which the first-order relation of nat does not do.
#[test]
fn white_box_diff_is_rejected() {
    let mut s = with(NAT_N);
    assert!(one(&mut s, "transport diff_wb from diff whitebox").is_err());
    assert!(one(&mut s, "transport diff_bb from diff blackbox").is_ok());
}

#[test]
fn goal_by_compute_is_proved() {
    let mut s = with(NAT_N);
    one(&mut s, "relate term leb leb_N by univrel_leb").unwrap();
    let goal = "goal small : eq@0 bool (leb (square (7 : nat)) (50 : nat)) true by compute";
    // square's own relation is only valid where nothing it uses is related
    let e = one(&mut s, goal).unwrap_err();
    assert!(e.to_string().contains("square"), "{}", e);
    one(&mut s, "transport square_N from square whitebox").unwrap();
    match one(&mut s, goal).unwrap() {
        Outcome::Goal(g) => assert!(g.proof.is_some(), "{:?}", g.route.verdict),
        o => panic!("{:?}", o),
    }
    assert!(s.env.contains("small"));
}

#[test]
fn every_replay_declaration_succeeds() {
    let mut s = stdlib::load_session().unwrap();
    for d in stdlib::replay_decls().unwrap() {
        if !matches!(d, Decl::Goal { .. }) {
            s.process(&d).unwrap_or_else(|e| panic!("{:?}: {}", d, e));
        }
    }
}
