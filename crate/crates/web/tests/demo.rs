use alkit::Expr;
use alkit_web::{central_text, flow_text, hat_text};

#[test]
fn first_flow() {
    let t = flow_text("t0").unwrap();
    assert!(t.starts_with("P_t0 = "));
    assert!(t.contains("\nQ_t0 = "));
    assert!(flow_text("x9").is_err());
}

#[test]
fn hat_is_an_involution() {
    let once = hat_text("P*Q[1] + Q/P[-1]").unwrap();
    let twice = hat_text(&once).unwrap();
    assert_eq!(Expr::parse(&twice).unwrap(), Expr::parse("P*Q[1] + Q/P[-1]").unwrap());
    assert!(hat_text("P +").is_err());
}

#[test]
fn constant_invariants() {
    let t = central_text(1, 2, -5.0, 4.0).unwrap();
    let c = t.lines().nth(1).unwrap();
    assert_eq!(c, format!("c = ({:.12}, {:.12})", 1.0 / 24.0, 1.0 / 24.0));
}
