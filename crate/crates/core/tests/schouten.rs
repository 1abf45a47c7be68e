use alkit::symkernel::functional_canonical_form;
use alkit::trihamiltonian::*;
use alkit::Expr;

fn canon(s: &str) -> Expr {
    functional_canonical_form(&Expr::parse(s).unwrap()).unwrap()
}

#[test]
fn second_bivector_matches_expansion() {
    let want = canon(
        "1/2*(-2*P*Q*th1*th2 + P[-1]*Q*th1[-1]*th2 + P*Q[1]*th1*th2[1] \
         - Q*Q[-1]*th2*th2[-1] + Q*Q[1]*th2*th2[1])",
    );
    assert_eq!(bivector(&p2()).unwrap(), want);
}

#[test]
fn third_bivector_matches_expansion() {
    let want = canon(
        "-P[-1]*P*Q*th1[-1]*th1 \
         + (P*Q*Q*th1*th2 + P*Q[-1]*Q*th1*th2[-1] - P*Q[1]*Q[1]*th1*th2[1] - P*Q[1]*Q[2]*th1*th2[2]) \
         + (P*P*Q[1]*th1*th2[1] - P*P*Q*th1*th2) + 2*P*Q*Q[1]*th2*th2[1] \
         - (Q*Q[1]*(Q + Q[1])*th2*th2[1] + Q*Q[1]*Q[2]*th2*th2[2])",
    );
    assert_eq!(bivector(&p3()).unwrap(), want);
}

#[test]
fn all_six_brackets_vanish() {
    for r in verify_tri_hamiltonian().unwrap() {
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn pencil_is_hamiltonian() {
    for ((l, m), r) in pencil_residuals(&[-1, 1, 2]).unwrap() {
        assert!(r.is_zero(), "lambda={l} mu={m}: {r}");
    }
}

#[test]
fn bracket_of_degree_two_functionals_is_symmetric() {
    let [i, j, k] = bivectors().unwrap();
    let extra = canon("P*Q[1]*th1*th2[2] + Q^2*th2*th2[1] - P[1]*th1*th1[3]");
    let fs = [i, j, k, extra];
    for a in &fs {
        for b in &fs {
            assert_eq!(schouten_bracket(a, b).unwrap(), schouten_bracket(b, a).unwrap());
        }
    }
}

#[test]
fn non_hamiltonian_bivector_is_detected() {
    let f = canon("P*Q[1]*th1*th2[2] + Q^2*th2*th2[1]");
    assert!(!schouten_bracket(&f, &f).unwrap().is_zero());
}

#[test]
fn constant_form_entries() {
    let c = constant_form().unwrap();
    assert!(c.entry(0, 0).is_zero());
    assert_eq!(c, expected_constant_form());
}
