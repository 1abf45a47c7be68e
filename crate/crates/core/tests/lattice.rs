use alkit::al_hierarchy::{default_depth, Lax};
use alkit::lattice_sim::*;
use alkit::symkernel::{Field, Slot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lax() -> Lax {
    Lax::new(default_depth(2), 2).unwrap()
}

fn flow(lax: &Lax, name: &str) -> CompiledFlow {
    CompiledFlow::new(&lattice_flow(lax, name).unwrap()).unwrap().named(name)
}

#[test]
fn constant_states_are_fixed() {
    let lax = lax();
    let s = LatticeState::constant(8, 1.0, 0.3).unwrap();
    for name in ["t0", "s0", "t1", "s1"] {
        let (dp, dq) = flow(&lax, name).rhs(&s).unwrap();
        assert!(dp.iter().chain(&dq).all(|x| x.abs() < 1e-14), "{name}");
    }
}

#[test]
fn evaluator_matches_symbolic_evaluation() {
    let lax = lax();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for name in ["t0", "t1", "s0", "s1"] {
        let f = lattice_flow(&lax, name).unwrap();
        let c = CompiledFlow::new(&f).unwrap();
        for _ in 0..25 {
            let n = 6;
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let s = LatticeState::new(p, q).unwrap();
            let (dp, dq) = c.rhs(&s).unwrap();
            for site in 0..n {
                let val = |v: alkit::Var| -> Option<f64> {
                    let Slot::Shift(j) = v.slot else { return None };
                    let i = (site as i64 + j as i64).rem_euclid(n as i64) as usize;
                    match v.field {
                        Field::P => Some(s.p[i]),
                        Field::Q => Some(s.q[i]),
                        _ => None,
                    }
                };
                let ep = f.p.eval(&val).unwrap();
                let eq = f.q.eval(&val).unwrap();
                assert!((ep - dp[site]).abs() <= 1e-12 * (1.0 + ep.abs()));
                assert!((eq - dq[site]).abs() <= 1e-12 * (1.0 + eq.abs()));
            }
        }
    }
}

#[test]
fn conservation_under_t0_and_s0() {
    let lax = lax();
    let dens: Vec<(String, CompiledExpr)> = ["H-1", "H0", "G0"]
        .iter()
        .map(|n| {
            let f = Functional::parse(n).unwrap();
            (n.to_string(), CompiledExpr::new(&f.density(&lax).unwrap()).unwrap())
        })
        .collect();
    let x = LatticeState::random_smooth(32, 42).unwrap();
    for name in ["t0", "s0"] {
        let traj = rk4_integrate(&x, &flow(&lax, name), 1e-3, 10_000, 500).unwrap();
        for (f, drift) in conservation_report(&traj, &dens).unwrap().drifts {
            assert!(drift < 1e-8, "{f} under {name}: {drift:e}");
        }
    }
}

#[test]
fn richardson_order_four() {
    let lax = lax();
    let f = flow(&lax, "t0");
    let x = LatticeState::random_smooth(16, 1).unwrap();
    let t = 1.0;
    let reference = rk4_integrate(&x, &f, t / 1024.0, 1024, 1024).unwrap();
    let err = |n: usize| rk4_integrate(&x, &f, t / n as f64, n, n).unwrap().last().max_distance(reference.last());
    let ratio = err(16) / err(32);
    assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
}

#[test]
fn zero_step_and_reversal() {
    let lax = lax();
    let f = flow(&lax, "s0");
    let x = LatticeState::random_smooth(16, 2).unwrap();
    assert_eq!(rk4_integrate(&x, &f, 0.0, 10, 1).unwrap().last(), &x);
    let fwd = rk4_integrate(&x, &f, 1e-3, 200, 200).unwrap();
    let back = rk4_integrate(fwd.last(), &f, -1e-3, 200, 200).unwrap();
    assert!(back.last().max_distance(&x) < 1e-10);
}

#[test]
fn commutativity() {
    let lax = lax();
    let x = LatticeState::random_smooth(16, 3).unwrap();
    let hs = [0.2, 0.1, 0.05, 0.025];
    let t0 = flow(&lax, "t0");
    for other in ["s0", "t1", "s1"] {
        let d = commutativity_defects(&t0, &flow(&lax, other), &x, &hs).unwrap();
        for o in observed_orders(&d) {
            assert!(o >= 3.0, "t0/{other}: {d:?}");
        }
    }
    let d = commutativity_defects(&t0, &t0, &x, &hs).unwrap();
    assert!(d.iter().all(|(_, e)| *e == 0.0));
}

#[test]
fn non_commuting_pair_has_order_two() {
    let lax = lax();
    let x = LatticeState::random_smooth(16, 3).unwrap();
    let t0 = flow(&lax, "t0");
    let shift = CompiledFlow::new(&alkit::al_hierarchy::FlowPair {
        dir: alkit::al_hierarchy::Dir::T,
        k: 0,
        p: alkit::Expr::parse("Q").unwrap(),
        q: alkit::Expr::parse("P*P[1]").unwrap(),
    })
    .unwrap();
    let d = commutativity_defects(&t0, &shift, &x, &[0.02, 0.01, 0.005]).unwrap();
    for o in observed_orders(&d) {
        assert!((o - 2.0).abs() < 0.2, "{d:?}");
    }
}

#[test]
fn backlund_numeric() {
    let lax = lax();
    let f = flow(&lax, "t0+s0");
    let x = LatticeState::random_smooth(32, 42).unwrap();
    let r = numeric_backlund_check(&f, &x, 1e-3, 2000).unwrap();
    assert!(r < 1e-6, "{r:e}");
    let c = LatticeState::constant(8, 1.5, 0.4).unwrap();
    assert!(numeric_backlund_check(&f, &c, 1e-3, 100).unwrap() < 1e-12);
}

#[test]
fn drift_shrinks_at_fourth_order() {
    let lax = Lax::new(default_depth(3), 3).unwrap();
    let dens: Vec<(String, CompiledExpr)> = ["H0", "H1", "G0", "G1"]
        .iter()
        .map(|n| {
            let f = Functional::parse(n).unwrap();
            (n.to_string(), CompiledExpr::new(&f.density(&lax).unwrap()).unwrap())
        })
        .collect();
    let x = LatticeState::random_smooth(16, 7).unwrap();
    let t = 2.0;
    for name in ["t0", "t1", "s0", "s1"] {
        let f = flow(&lax, name);
        let drift = |n: usize| {
            let traj = rk4_integrate(&x, &f, t / n as f64, n, n).unwrap();
            conservation_report(&traj, &dens).unwrap().drifts
        };
        let (coarse, fine) = (drift(20), drift(40));
        for ((name_f, a), (_, b)) in coarse.iter().zip(&fine) {
            let order = (a / b).log2();
            assert!(order > 3.5, "{name_f} under {name}: drift {a:e} -> {b:e}, order {order}");
        }
    }
}
