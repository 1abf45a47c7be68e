//! Hydrodynamic flows of the Frobenius manifold and their recursions.

use num_traits::One;

use super::frobenius::{d, v1, w, M2};
use super::integrate::integrate_total_x_derivative;
use crate::al_hierarchy::factorial;
use crate::central_invariants::{DiffMatrix, DiffOp};
use crate::check::SymbolicCheck;
use crate::error::{Error, Result};
use crate::symkernel::{total_x_derivative, Expr, Field, Rational, Var};

fn vx(alpha: usize) -> Expr {
    let f = if alpha == 0 { Field::V1 } else { Field::V2 };
    Expr::var(Var::jet(f, 1))
}

fn binomial(n: u32, k: u32) -> Rational {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `theta_{2,k} = 1/(k+1)! sum_s C(k+1,s) C(k+s,s) w^s (v1 - w)^{k+1-s}`.
pub fn theta(k: u32) -> Result<Expr> {
    let base = v1() - w();
    let mut out = Expr::zero();
    for s in 0..=k + 1 {
        let c = binomial(k + 1, s) * binomial(k + s, s);
        out = out + (w().pow(s as i32)? * base.pow((k + 1 - s) as i32)?).scale(&c);
    }
    Ok(out.scale(&(Rational::one() / factorial(k + 1))))
}

/// `h_0 = v2 - log(v1 - w)`, `h_k = theta_{2,k-1} / (k (k+1) (v1 - w)^{2k})`.
pub fn negative_density(k: u32) -> Result<Expr> {
    let base = v1() - w();
    if k == 0 {
        return Ok(super::frobenius::v2() - Expr::log(&base)?);
    }
    let c = Rational::new(1.into(), ((k * (k + 1)) as i64).into());
    Ok(theta(k - 1)?.try_div(&base.pow(2 * k as i32)?)?.scale(&c))
}

/// `v_t = A(v) v_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HydroFlow {
    pub a: M2,
}

impl HydroFlow {
    /// `A^a_c = eta^{ab} d^2 h / dv^b dv^c`.
    pub fn from_density(h: &Expr) -> HydroFlow {
        HydroFlow {
            a: std::array::from_fn(|a| std::array::from_fn(|c| d(&d(h, 1 - a), c))),
        }
    }

    /// Reads off `A` from a right-hand side linear in `v_x`.
    pub fn from_rhs(rhs: &[Expr; 2]) -> Result<HydroFlow> {
        let x = [Var::jet(Field::V1, 1), Var::jet(Field::V2, 1)];
        let a: M2 = std::array::from_fn(|i| std::array::from_fn(|j| rhs[i].partial(x[j])));
        let flow = HydroFlow { a };
        let back = flow.rhs();
        if back[0] != rhs[0] || back[1] != rhs[1] {
            return Err(Error::Unsupported("right-hand side is not quasilinear".into()));
        }
        Ok(flow)
    }

    pub fn rhs(&self) -> [Expr; 2] {
        std::array::from_fn(|i| &self.a[i][0] * &vx(0) + &self.a[i][1] * &vx(1))
    }
}

pub fn principal_flow2(k: u32) -> Result<HydroFlow> {
    Ok(HydroFlow::from_density(&theta(k + 1)?))
}

pub fn negative_flow(k: u32) -> Result<HydroFlow> {
    Ok(HydroFlow::from_density(&negative_density(k)?))
}

/// `v1_t = v1_x + w v2_x`, `v2_t = v1_x / v1 + v2_x`.
pub fn t1_flow0() -> Result<HydroFlow> {
    Ok(HydroFlow::from_rhs(&[
        vx(0) + w() * vx(1),
        vx(0).try_div(&v1())? + vx(1),
    ])?)
}

/// `R~ X` with the `d_x^{-1}` tail resolved by exact integration of `X^2`.
pub fn apply_recursion(x: &[Expr; 2]) -> Result<[Expr; 2]> {
    let tail = integrate_total_x_derivative(&x[1])?;
    let (a, ww) = (v1(), w());
    let s = &a + &ww;
    let top = &s * &x[0] + Expr::int(2) * &a * &ww * &x[1] + total_x_derivative(&(&a * &ww))? * &tail;
    let bottom = Expr::int(2) * &x[0] + &s * &x[1] + total_x_derivative(&s)? * &tail;
    Ok([top, bottom])
}

/// `t^{1,k}` for `k <= kmax`: `X_k = (1/k) R~ X_{k-1} - (2/k) Y_{k-1}` with
/// `Y` the `t^{2,k-1}` flow.
pub fn t1_flows(kmax: u32) -> Result<Vec<HydroFlow>> {
    let mut out = vec![t1_flow0()?];
    for k in 1..=kmax {
        let prev = out[k as usize - 1].rhs();
        let r = apply_recursion(&prev)?;
        let y = principal_flow2(k - 1)?.rhs();
        let inv_k = Rational::new(1.into(), (k as i64).into());
        let rhs: [Expr; 2] = std::array::from_fn(|i| (&r[i] - &(Expr::int(2) * &y[i])).scale(&inv_k));
        out.push(HydroFlow::from_rhs(&rhs)?);
    }
    Ok(out)
}

/// `P~1 = [[0, d], [d, 0]]`.
pub fn tilde_p1() -> DiffMatrix {
    [[DiffOp::zero(), DiffOp::d(1)], [DiffOp::d(1), DiffOp::zero()]]
}

/// `P~2 = [[2 v1 w d + (v1 w)', (v1 + w) d], [(v1 + w) d + (v1 + w)', 2 d]]`.
pub fn tilde_p2() -> Result<DiffMatrix> {
    let (a, ww) = (v1(), w());
    let g11 = Expr::int(2) * &a * &ww;
    let s = &a + &ww;
    Ok([
        [
            DiffOp::term(g11, 1).add(&DiffOp::mul_by(total_x_derivative(&(&a * &ww))?)),
            DiffOp::term(s.clone(), 1),
        ],
        [
            DiffOp::term(s.clone(), 1).add(&DiffOp::mul_by(total_x_derivative(&s)?)),
            DiffOp::term(Expr::int(2), 1),
        ],
    ])
}

pub fn gradient(h: &Expr) -> [Expr; 2] {
    [d(h, 0), d(h, 1)]
}

pub fn apply_matrix(m: &DiffMatrix, x: &[Expr; 2]) -> Result<[Expr; 2]> {
    Ok([
        m[0][0].apply(&x[0])? + m[0][1].apply(&x[1])?,
        m[1][0].apply(&x[0])? + m[1][1].apply(&x[1])?,
    ])
}

/// First-order operator `P^{ab} = g^{ab} d_x + b^{ab}_c v^c_x`.
#[derive(Clone, Debug)]
pub struct HydroOperator {
    pub g: M2,
    pub b: [[[Expr; 2]; 2]; 2],
}

impl HydroOperator {
    /// `P grad h` as the coefficient matrix of `v_x`:
    /// `A^a_c = g^{ab} d_c d_b h + b^{ab}_c d_b h`.
    pub fn apply_gradient(&self, h: &Expr) -> HydroFlow {
        let grad = gradient(h);
        let hess: M2 = std::array::from_fn(|b| std::array::from_fn(|c| d(&grad[b], c)));
        HydroFlow {
            a: std::array::from_fn(|a| {
                std::array::from_fn(|c| {
                    (0..2)
                        .map(|b| &self.g[a][b] * &hess[b][c] + &self.b[a][b][c] * &grad[b])
                        .sum()
                })
            }),
        }
    }
}

/// `P~1` in first-order form.
pub fn tilde_p1_hydro() -> HydroOperator {
    HydroOperator {
        g: super::frobenius::eta(),
        b: std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()))),
    }
}

/// `P~2` in first-order form.
pub fn tilde_p2_hydro() -> HydroOperator {
    let (a, ww) = (v1(), w());
    let prod = &a * &ww;
    let s = &a + &ww;
    let z = Expr::zero;
    HydroOperator {
        g: [[Expr::int(2) * &prod, s.clone()], [s.clone(), Expr::int(2)]],
        b: [
            [[d(&prod, 0), d(&prod, 1)], [z(), z()]],
            [[d(&s, 0), d(&s, 1)], [z(), z()]],
        ],
    }
}

fn matrix_residual(x: &HydroFlow, y: &HydroFlow, c: &Rational) -> Vec<Expr> {
    x.a.iter()
        .flatten()
        .zip(y.a.iter().flatten())
        .map(|(p, q)| p - &q.scale(c))
        .collect()
}

/// Hydrodynamic flows with the same right-hand side commute iff
/// `X(Y) - Y(X) = 0`; returns that bracket.
pub fn commutator(x: &HydroFlow, y: &HydroFlow) -> Result<[Expr; 2]> {
    let (xr, yr) = (x.rhs(), y.rhs());
    let fx = [(Field::V1, &xr[0]), (Field::V2, &xr[1])];
    let fy = [(Field::V1, &yr[0]), (Field::V2, &yr[1])];
    let pr = |e: &Expr, f: &[(Field, &Expr)]| -> Result<Expr> { prolong_with_w(e, f) };
    Ok([
        pr(&yr[0], &fx)? - pr(&xr[0], &fy)?,
        pr(&yr[1], &fx)? - pr(&xr[1], &fy)?,
    ])
}

/// Evolutionary derivative on the jet ring where `w` follows `v2`.
fn prolong_with_w(e: &Expr, x: &[(Field, &Expr)]) -> Result<Expr> {
    let mut out = crate::symkernel::prolong(e, x)?;
    let wv = Var::jet(Field::W, 0);
    let dw = e.partial(wv);
    if !dw.is_zero() {
        let x2 = x.iter().find(|(f, _)| *f == Field::V2).map(|(_, e)| (*e).clone()).unwrap_or_default();
        out = out + dw * Expr::var(wv) * x2;
    }
    Ok(out)
}

/// Reference forms of `theta_{2,0}, theta_{2,1}, theta_{2,2}`.
pub fn reference_theta(k: u32) -> Option<&'static str> {
    match k {
        0 => Some("v1"),
        1 => Some("v1*w + 1/2*v1^2"),
        2 => Some("1/2*v1*w^2 + v1^2*w + 1/6*v1^3"),
        _ => None,
    }
}

/// `theta(k)` against its reference form for `k = 0, 1, 2`.
pub fn theta_checks() -> Result<Vec<SymbolicCheck>> {
    (0..3)
        .map(|k| {
            let want = Expr::parse(reference_theta(k).expect("k <= 2"))?;
            Ok(SymbolicCheck::new(format!("theta2,{k}"), vec![theta(k)? - want]))
        })
        .collect()
}

/// Positive, kernel, negative and `t^{1,k}` recursions for `k <= kmax`.
pub fn recursion_checks(kmax: u32) -> Result<Vec<SymbolicCheck>> {
    let p1 = tilde_p1_hydro();
    let p2 = tilde_p2_hydro();
    let mut out = Vec::new();
    let rat = |n: i64, d: i64| Rational::new(n.into(), d.into());
    for k in 1..=kmax {
        let lhs = p1.apply_gradient(&theta(k + 1)?);
        let rhs = p2.apply_gradient(&theta(k)?);
        out.push(SymbolicCheck::new(
            format!("positive k={k}"),
            matrix_residual(&lhs, &rhs, &rat(1, k as i64 + 1)),
        ));
        let prev = principal_flow2(k - 1)?.rhs();
        let viaint = apply_recursion(&prev)?;
        let want = principal_flow2(k)?.rhs();
        let c = rat(1, k as i64 + 1);
        out.push(SymbolicCheck::new(
            format!("positive k={k} through R~"),
            vec![&want[0] - &viaint[0].scale(&c), &want[1] - &viaint[1].scale(&c)],
        ));
    }
    let kernel = p2.apply_gradient(&negative_density(0)?);
    out.push(SymbolicCheck::new("kernel s0", kernel.a.iter().flatten().cloned().collect()));
    for k in 1..=kmax {
        let lhs = p1.apply_gradient(&negative_density(k - 1)?);
        let rhs = p2.apply_gradient(&negative_density(k)?);
        out.push(SymbolicCheck::new(
            format!("negative k={k}"),
            matrix_residual(&lhs, &rhs, &rat(k as i64 + 1, 1)),
        ));
    }
    let t1 = t1_flows(kmax)?;
    let y0 = principal_flow2(0)?;
    for (k, f) in t1.iter().enumerate() {
        out.push(SymbolicCheck::new(
            format!("t1,{k} commutes with t2,0"),
            commutator(f, &y0)?.to_vec(),
        ));
        let r = f.rhs();
        let a = integrate_total_x_derivative(&r[1])?;
        let b = integrate_total_x_derivative(&r[0])?;
        out.push(SymbolicCheck::new(format!("t1,{k} has a density"), vec![d(&a, 1) - d(&b, 0)]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn reference_thetas() {
        assert_eq!(theta(0).unwrap(), ex("v1"));
        assert_eq!(theta(1).unwrap(), ex("v1*w + 1/2*v1^2"));
        assert_eq!(theta(2).unwrap(), ex("1/2*v1*w^2 + v1^2*w + 1/6*v1^3"));
        assert!(theta_checks().unwrap().iter().all(SymbolicCheck::passed));
    }

    #[test]
    fn t20_from_hessian() {
        let f = principal_flow2(0).unwrap().rhs();
        assert_eq!(f[0], ex("w*v1{1} + v1*w*v2{1}"));
        assert_eq!(f[1], ex("v1{1} + w*v2{1}"));
    }

    #[test]
    fn t1_first_flow_is_well_defined() {
        assert_eq!(t1_flows(1).unwrap().len(), 2);
    }
}
