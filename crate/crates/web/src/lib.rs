use alkit::al_hierarchy::{default_depth, Lax};
use alkit::central_invariants::CentralInvariants;
use alkit::lattice_sim::lattice_flow;
use alkit::{duality, Expr};
use wasm_bindgen::prelude::*;

/// Right-hand side of `t0`, `t1`, `t2`, `s0`, `s1`, `s2` or `t0+s0`.
pub fn flow_text(name: &str) -> Result<String, String> {
    let lax = Lax::new(default_depth(3), 3).map_err(|e| e.to_string())?;
    let f = lattice_flow(&lax, name).map_err(|e| e.to_string())?;
    Ok(f.to_string())
}

/// Image of a lattice expression under `P -> 1/P[-n]`,
/// `Q -> Q[1-n] / (P[-n] P[1-n])`.
pub fn hat_text(expr: &str) -> Result<String, String> {
    let e = Expr::parse(expr).map_err(|e| e.to_string())?;
    duality::hat(&e).map(|h| h.to_string()).map_err(|e| e.to_string())
}

/// Canonical coordinates and central invariants of the pair `(P_a, P_b)` at
/// `(u1, u2)`.
pub fn central_text(a: u8, b: u8, u1: f64, u2: f64) -> Result<String, String> {
    let ci = CentralInvariants::new().map_err(|e| e.to_string())?;
    let r = ci.at(a, b, &u1, &u2).map_err(|e| e.to_string())?;
    Ok(format!(
        "lambda = ({:.12}, {:.12})\nc = ({:.12}, {:.12})",
        r.lambda[0], r.lambda[1], r.c[0], r.c[1]
    ))
}

#[wasm_bindgen]
pub fn flow(name: &str) -> Result<String, JsValue> {
    flow_text(name).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hat(expr: &str) -> Result<String, JsValue> {
    hat_text(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn central(a: u8, b: u8, u1: f64, u2: f64) -> Result<String, JsValue> {
    central_text(a, b, u1, u2).map_err(|e| JsValue::from_str(&e))
}
