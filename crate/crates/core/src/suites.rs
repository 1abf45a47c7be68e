//! Verification suites behind the command-line tool.

use crate::al_hierarchy::{
    coefficient_recursions, default_depth, depth_override, proof_identity, reference_flow, reference_residual,
    representation_residual, Dir, Lax, ProofIdentity, Structure,
};
use crate::central_invariants::{check_row, sample_points, CentralInvariants, PAIRS};
use crate::dispersionless::{
    change_of_variables_check, dispersionless_limit_match, frobenius_checks, operator_match,
    recursion_checks, theta_checks,
};
use crate::duality::{backlund_residual, conjugate_operators, verify_flow_interchange};
use crate::error::{Error, Result};
use crate::lambda_ops::Projection;
use crate::lattice_sim::{
    conservation_report, lattice_flow, numeric_backlund_check, rk4_integrate, CompiledExpr,
    CompiledFlow, Functional, LatticeState,
};
use crate::report::{Status, SuiteReport};
use crate::trihamiltonian::{constant_form_residual, verify_tri_hamiltonian};

const DIRS: [Dir; 2] = [Dir::T, Dir::S];

/// Highest `l` in the coefficient recursions.
pub const RECURSION_LMAX: u32 = 5;

fn lax(depth: u32, kmax: u32) -> Result<Lax> {
    Lax::new(depth, kmax)
}

/// Lax/recursion agreement for `k <= kmax`, the reference forms of the first
/// flows, and the coefficient recursions.
pub fn flows(kmax: u32, projection: Projection) -> SuiteReport {
    let mut r = SuiteReport::new("flows");
    let depth = depth_override().unwrap_or((kmax + 3).max(RECURSION_LMAX + 1));
    let lx = match lax(depth, kmax + 1) {
        Ok(l) => l,
        Err(e) => {
            r.run("build Lax powers", || Err(e));
            return r;
        }
    };
    for k in 0..=kmax {
        for dir in DIRS {
            r.run_symbolic(format!("lax {dir}{k}"), || {
                let a = lx.lax_flow(dir, k, projection)?;
                let b = lx.flow(dir, k)?;
                Ok(vec![&a.p - &b.p, &a.q - &b.q])
            });
        }
    }
    for dir in DIRS {
        for k in (0..=kmax).filter(|&k| reference_flow(dir, k).is_some()) {
            r.run_symbolic(format!("reference {dir}{k}"), || Ok(reference_residual(&lx, dir, k)?.to_vec()));
        }
    }
    r.run(format!("coefficient recursions k<={kmax} l<={RECURSION_LMAX}"), || {
        coefficient_recursions(&lx, kmax, RECURSION_LMAX).map(|_| (true, None))
    });
    r
}

fn structure_name(s: Structure) -> &'static str {
    match s {
        Structure::P1 => "P1",
        Structure::P2 => "P2",
        Structure::P3 => "P3",
    }
}

/// Hamiltonian representations with the three operators and the residue
/// identities, `k <= kmax`.
pub fn hamiltonian(kmax: u32) -> SuiteReport {
    let mut r = SuiteReport::new("hamiltonian");
    let need = kmax + 3;
    let lx = match lax(default_depth(kmax + 2), need) {
        Ok(l) => l,
        Err(e) => {
            r.run("build Lax powers", || Err(e));
            return r;
        }
    };
    for s in Structure::ALL {
        for dir in DIRS {
            for k in 0..=kmax {
                r.run_symbolic(format!("{} {dir}{k}", structure_name(s)), || {
                    Ok(representation_residual(&lx, s, dir, k)?.to_vec())
                });
            }
        }
    }
    for id in ProofIdentity::ALL {
        for k in 0..=kmax {
            r.run_symbolic(format!("{} k={k}", id.name()), || Ok(vec![proof_identity(&lx, id, k)?]));
        }
    }
    r
}

/// The six Schouten brackets and the constant form of the first operator.
pub fn schouten() -> SuiteReport {
    let mut r = SuiteReport::new("schouten");
    r.run_batch("brackets", || {
        Ok(verify_tri_hamiltonian()?
            .into_iter()
            .map(|b| crate::check::SymbolicCheck::new(b.label, vec![b.residual]))
            .collect())
    });
    r.run("constant form", || {
        let d = constant_form_residual()?;
        Ok((d.is_zero(), (!d.is_zero()).then(|| d.to_string())))
    });
    r
}

#[derive(Clone, Debug)]
pub struct CentralOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// `None` for all six rows.
    pub pair: Option<(u8, u8)>,
}

impl Default for CentralOptions {
    fn default() -> Self {
        CentralOptions {
            samples: 100,
            tol: 1e-9,
            seed: 42,
            pair: None,
        }
    }
}

/// Central invariants of the operator pairs at seeded random points.
pub fn central(opts: &CentralOptions) -> SuiteReport {
    let mut r = SuiteReport::new("central");
    let ci = match CentralInvariants::new() {
        Ok(c) => c,
        Err(e) => {
            r.run("expansions", || Err(e));
            return r;
        }
    };
    let points = sample_points(opts.samples, opts.seed);
    let pairs: Vec<(u8, u8)> = match opts.pair {
        Some(p) => vec![p],
        None => PAIRS.to_vec(),
    };
    for (a, b) in pairs {
        r.run(format!("c(P{a},P{b})"), || {
            if !PAIRS.contains(&(a, b)) {
                return Err(Error::Unsupported(format!("pair ({a},{b})")));
            }
            let rows = check_row(&ci, a, b, &points)?;
            if rows.is_empty() {
                return Ok((false, Some(format!("no admissible point among {}", points.len()))));
            }
            let worst = rows.iter().map(|c| c.max_error()).fold(0.0, f64::max);
            Ok((worst < opts.tol, Some(format!("max error {worst:.3e} over {} points", rows.len()))))
        });
    }
    r
}

/// Flow interchange for `k <= kmax`, the conjugation identities and the
/// Backlund substitution.
pub fn duality(kmax: u32) -> SuiteReport {
    let mut r = SuiteReport::new("duality");
    let lx = match lax(default_depth(kmax + 1), kmax + 1) {
        Ok(l) => l,
        Err(e) => {
            r.run("build Lax powers", || Err(e));
            return r;
        }
    };
    for k in 0..=kmax {
        r.run_batch(format!("interchange k={k}"), || verify_flow_interchange(&lx, k));
    }
    r.run_batch("conjugations", conjugate_operators);
    r.run_batch("backlund", || Ok(vec![backlund_residual(&lx)?]));
    r
}

/// Frobenius structure, hydrodynamic recursions for `k <= kmax`, the
/// leading order of the lattice flows for `k <= limit_kmax` and of the
/// operators.
pub fn dispersionless(kmax: u32, limit_kmax: u32) -> SuiteReport {
    let mut r = SuiteReport::new("dispersionless");
    r.run_batch("frobenius", frobenius_checks);
    r.run_batch("theta", theta_checks);
    r.run_batch("recursions", || recursion_checks(kmax));
    r.run_batch("change of variables", || Ok(vec![change_of_variables_check()?]));
    match lax(default_depth(limit_kmax + 1), limit_kmax + 1) {
        Ok(lx) => {
            for k in 0..=limit_kmax {
                for dir in DIRS {
                    r.run_batch(format!("limit {dir}{k}"), || Ok(vec![dispersionless_limit_match(&lx, dir, k)?]));
                }
            }
        }
        Err(e) => r.run("build Lax powers", || Err(e)),
    }
    r.run_batch("leading operators", operator_match);
    r
}

#[derive(Clone, Debug)]
pub struct SimulateOptions {
    pub flow: String,
    pub sites: usize,
    pub dt: f64,
    pub steps: usize,
    pub conserve: Vec<String>,
    /// Initial data; seeded smooth data when absent.
    pub initial: Option<LatticeState>,
    pub seed: u64,
    /// Bound on the relative drift.
    pub tol: f64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            flow: "t0".into(),
            sites: 32,
            dt: 1e-3,
            steps: 10_000,
            conserve: vec!["H-1".into(), "H0".into(), "G0".into()],
            initial: None,
            seed: 42,
            tol: 1e-8,
        }
    }
}

fn flow_level(name: &str) -> u32 {
    name.get(1..).and_then(|s| s.parse().ok()).unwrap_or(0) + 1
}

/// Integrates one flow and reports the drift of each monitored functional.
pub fn simulate(opts: &SimulateOptions) -> SuiteReport {
    let mut r = SuiteReport::new("simulate");
    let setup = || -> Result<_> {
        let fs = opts.conserve.iter().map(|s| Functional::parse(s)).collect::<Result<Vec<_>>>()?;
        let need = fs
            .iter()
            .map(|f| match *f {
                Functional::H(k) => (k + 2) as u32,
                Functional::G(k) => k,
            })
            .chain([flow_level(&opts.flow)])
            .max()
            .unwrap_or(1);
        let lx = lax(default_depth(need), need)?;
        let flow = CompiledFlow::new(&lattice_flow(&lx, &opts.flow)?)?.named(opts.flow.clone());
        let dens = fs
            .iter()
            .map(|f| Ok((f.label(), CompiledExpr::new(&f.density(&lx)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let x = match &opts.initial {
            Some(s) => s.clone(),
            None => LatticeState::random_smooth(opts.sites, opts.seed)?,
        };
        let every = (opts.steps / 20).max(1);
        let traj = rk4_integrate(&x, &flow, opts.dt, opts.steps, every)?;
        conservation_report(&traj, &dens)
    };
    let t = std::time::Instant::now();
    match setup() {
        Ok(rep) => {
            let ms = (t.elapsed().as_secs_f64() * 1e3 / rep.drifts.len().max(1) as f64 * 1e3).round() / 1e3;
            for (name, drift) in rep.drifts {
                r.push(
                    format!("drift {name} under {}", opts.flow),
                    if drift < opts.tol { Status::Pass } else { Status::Fail },
                    Some(format!("{drift:.3e}")),
                    ms,
                );
            }
        }
        Err(e) => r.run(format!("integrate {}", opts.flow), || Err(e)),
    }
    r
}

#[derive(Clone, Debug)]
pub struct BacklundOptions {
    pub initial: Option<LatticeState>,
    pub sites: usize,
    pub seed: u64,
    pub dt: f64,
    pub steps: usize,
    pub tol: f64,
}

impl Default for BacklundOptions {
    fn default() -> Self {
        BacklundOptions {
            initial: None,
            sites: 32,
            seed: 42,
            dt: 1e-3,
            steps: 1000,
            tol: 1e-6,
        }
    }
}

/// Symbolic and numeric checks of the Backlund transformation of the
/// combined flow `t0 + s0`.
pub fn backlund(opts: &BacklundOptions) -> SuiteReport {
    let mut r = SuiteReport::new("backlund");
    let lx = match lax(default_depth(1), 1) {
        Ok(l) => l,
        Err(e) => {
            r.run("build Lax powers", || Err(e));
            return r;
        }
    };
    r.run_batch("symbolic", || Ok(vec![backlund_residual(&lx)?]));
    r.run("numeric", || {
        let combined = CompiledFlow::new(&lattice_flow(&lx, "t0+s0")?)?;
        let x = match &opts.initial {
            Some(s) => s.clone(),
            None => LatticeState::random_smooth(opts.sites, opts.seed)?,
        };
        let d = numeric_backlund_check(&combined, &x, opts.dt, opts.steps)?;
        Ok((d < opts.tol, Some(format!("{d:.3e}"))))
    });
    r
}
