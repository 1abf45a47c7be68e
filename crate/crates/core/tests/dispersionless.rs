use alkit::al_hierarchy::{default_depth, Dir, Lax};
use alkit::dispersionless::*;
use alkit::Expr;

fn ex(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

#[test]
fn frobenius_structure() {
    for c in frobenius_checks().unwrap() {
        assert!(c.passed(), "{c}");
    }
    let g = frobenius_data().unwrap().intersection_form;
    assert_eq!(g[0][0], ex("2*v1*w"));
    assert_eq!(g[1][1], ex("2"));
}

#[test]
fn recursions_up_to_four() {
    for c in recursion_checks(4).unwrap() {
        assert!(c.passed(), "{c}");
    }
}

#[test]
fn s0_from_h0() {
    let f = negative_flow(0).unwrap().rhs();
    let h = negative_density(0).unwrap();
    let g = gradient(&h);
    let d = |e: &Expr| alkit::symkernel::total_x_derivative(e).unwrap();
    assert_eq!(f[0], d(&g[1]));
    assert_eq!(f[1], d(&g[0]));
}

#[test]
fn reference_t10() {
    let f = t1_flow0().unwrap().rhs();
    assert_eq!(f[0], ex("v1{1} + w*v2{1}"));
    assert_eq!(f[1], ex("v1{1}/v1 + v2{1}"));
}

#[test]
fn limits_of_lattice_flows() {
    let lax = Lax::new(default_depth(3), 3).unwrap();
    for k in 0..=2 {
        for dir in [Dir::T, Dir::S] {
            let c = dispersionless_limit_match(&lax, dir, k).unwrap();
            assert!(c.passed(), "{c}");
        }
    }
}

#[test]
fn leading_operators() {
    for c in operator_match().unwrap() {
        assert!(c.passed(), "{c}");
    }
    assert!(change_of_variables_check().unwrap().passed());
}
