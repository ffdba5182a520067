use uptrans::eval::{normalize, DEFAULT_BUDGET};
use uptrans::kernel::syntax::read_term;
use uptrans::stdlib::literals::{read_bool, read_n, read_nat};
use uptrans::stdlib::load_prelude;
use uptrans::GlobalEnv;

fn eval(env: &GlobalEnv, src: &str) -> (uptrans::Term, u64) {
    let t = read_term(src, env).unwrap_or_else(|e| panic!("{}: {}", src, e));
    let r = normalize(env, &t, DEFAULT_BUDGET);
    assert!(!r.budget_hit, "{}", src);
    (r.normal_form, r.steps)
}

fn n(env: &GlobalEnv, src: &str) -> u64 {
    read_n(&eval(env, src).0).unwrap_or_else(|| panic!("{} is not an N literal", src))
}

#[test]
fn binary_ops_agree_with_host() {
    let env = load_prelude().unwrap();
    for a in 0..24u64 {
        for b in 0..24u64 {
            assert_eq!(n(&env, &format!("plus_N ({a} : N) ({b} : N)")), a + b);
            assert_eq!(n(&env, &format!("mult_N ({a} : N) ({b} : N)")), a * b);
            assert_eq!(n(&env, &format!("minus_N ({a} : N) ({b} : N)")), a.saturating_sub(b));
            let le = read_bool(&eval(&env, &format!("leb_N ({a} : N) ({b} : N)")).0).unwrap();
            assert_eq!(le, a <= b, "{a} <= {b}");
        }
    }
    for a in 0..6u64 {
        for b in 0..6u64 {
            assert_eq!(n(&env, &format!("pow_N ({a} : N) ({b} : N)")), a.pow(b as u32));
        }
    }
}

#[test]
fn unary_ops_agree_with_host() {
    let env = load_prelude().unwrap();
    for a in 0..12u64 {
        for b in 0..12u64 {
            let nat = |s: String| read_nat(&eval(&env, &s).0).unwrap();
            assert_eq!(nat(format!("plus ({a} : nat) ({b} : nat)")), a + b);
            assert_eq!(nat(format!("mult ({a} : nat) ({b} : nat)")), a * b);
            assert_eq!(nat(format!("minus ({a} : nat) ({b} : nat)")), a.saturating_sub(b));
            assert_eq!(read_bool(&eval(&env, &format!("leb ({a} : nat) ({b} : nat)")).0).unwrap(), a <= b);
        }
    }
}

#[test]
fn conversions_round_trip() {
    let env = load_prelude().unwrap();
    for a in [0u64, 1, 2, 5, 6, 100, 1023] {
        assert_eq!(n(&env, &format!("to_N ({a} : nat)")), a);
        assert_eq!(read_nat(&eval(&env, &format!("of_N ({a} : N)")).0).unwrap(), a);
    }
    let (_, steps) = eval(&env, "mult_N (minus_N (plus_N (mult_N (12 : N) (50 : N)) (mult_N (51 : N) (pow_N (50 : N) (4 : N)))) (pow_N (50 : N) (5 : N))) (1 : N)");
    eprintln!("poly-like steps: {steps}");
}
