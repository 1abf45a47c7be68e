use alkit::central_invariants::*;
use alkit::symkernel::{Expr, Rational};
use alkit::trihamiltonian::{p1, p2, p3};

fn ex(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn expansions_match_reference_blocks() {
    for (id, op) in [(1u8, p1()), (2, p2())] {
        let eo = eps_expand(&op, 2).unwrap();
        let want = reference_blocks(id).unwrap();
        for (s, w) in want.iter().enumerate() {
            assert_eq!(eo.block(s as u32).unwrap(), w, "operator {id}, eps^{s}");
        }
    }
}

#[test]
fn expansions_are_graded_through_third_order() {
    for op in [p1(), p2(), p3()] {
        assert!(grading_audit(&eps_expand(&op, 3).unwrap()).is_empty());
    }
}

#[test]
fn leading_metrics() {
    let e = Expansions::new().unwrap();
    let g1 = e.get(1).coeff(0, 1).unwrap();
    let g2 = e.get(2).coeff(0, 1).unwrap();
    assert_eq!(g1, [[ex("-2*u2"), ex("-u2")], [ex("-u2"), ex("0")]]);
    assert_eq!(g2, [[ex("0"), ex("u1*u2")], [ex("u1*u2"), ex("2*u2^2")]]);
}

#[test]
fn canonical_coordinates_are_negated_closed_form() {
    let ci = CentralInvariants::new().unwrap();
    for (u1, u2) in sample_points(50, 42) {
        let lam = ci.canonical_coordinates(1, 2, &u1, &u2).unwrap();
        let cf = closed_form_coordinates(u1, u2).unwrap();
        for i in 0..2 {
            assert!(close(lam[i], -cf[i], 1e-10), "{lam:?} vs {cf:?}");
        }
        assert!(close(lam[0] * lam[1], u1 * u1, 1e-10));
        assert!(close(cf[0] * cf[1], u1 * u1, 1e-10));
    }
}

#[test]
fn constant_rows() {
    let ci = CentralInvariants::new().unwrap();
    let pts = sample_points(100, 42);
    for (a, b) in [(1, 2), (3, 2)] {
        let rows = check_row(&ci, a, b, &pts).unwrap();
        assert_eq!(rows.len(), 100);
        for r in rows {
            assert!(r.max_error() < 1e-9, "{r:?}");
        }
    }
}

#[test]
fn reciprocal_rows_in_own_coordinates() {
    let ci = CentralInvariants::new().unwrap();
    let pts = sample_points(100, 7);
    for (a, b) in [(2, 1), (2, 3)] {
        for r in check_row(&ci, a, b, &pts).unwrap() {
            assert!(r.max_error() < 1e-9, "{r:?}");
        }
    }
}

#[test]
fn square_root_rows_observed() {
    let ci = CentralInvariants::new().unwrap();
    for (u1, u2) in sample_points(100, 3) {
        let nu = ci.canonical_coordinates(1, 2, &u1, &u2).unwrap();
        let r13 = ci.at(1, 3, &u1, &u2).unwrap();
        let r31 = ci.at(3, 1, &u1, &u2).unwrap();
        for i in 0..2 {
            assert!(close(r13.lambda[i], -nu[i] * nu[i], 1e-9));
            assert!(close(r31.lambda[i], -1.0 / (nu[i] * nu[i]), 1e-9));
            assert!(close(r13.c[i], -1.0 / (48.0 * nu[i]), 1e-9));
            assert!(close(r31.c[i], -nu[i] / 48.0, 1e-9));
        }
    }
}

#[test]
fn square_root_rows_have_no_real_admissible_point() {
    let ci = CentralInvariants::new().unwrap();
    let pts = sample_points(100, 42);
    assert!(check_row(&ci, 1, 3, &pts).unwrap().is_empty());
    assert!(check_row(&ci, 3, 1, &pts).unwrap().is_empty());
}

#[test]
fn exact_values_at_integer_points() {
    let ci = CentralInvariants::new().unwrap();
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    for (p, nu) in [((-5, 4), [1, 25]), ((3, -1), [-9, -1])] {
        let (u1, u2) = rational_point(p.0, p.1);
        let r = ci.at(1, 2, &u1, &u2).unwrap();
        assert_eq!(r.lambda, nu.map(|n| q(n, 1)));
        assert_eq!(r.c, [q(1, 24), q(1, 24)]);
        let r = ci.at(3, 2, &u1, &u2).unwrap();
        assert_eq!(r.c, [q(-1, 24), q(-1, 24)]);
        let r = ci.at(2, 1, &u1, &u2).unwrap();
        assert_eq!(r.c, nu.map(|n| q(-n, 24)));
        let r = ci.at(2, 3, &u1, &u2).unwrap();
        assert_eq!(r.c, nu.map(|n| q(-1, 24 * n)));
    }
}
