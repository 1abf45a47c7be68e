//! Periodic lattice integrator for the flows of the hierarchy, with
//! conservation, commutativity and Backlund diagnostics.

mod compiled;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::al_hierarchy::{Dir, FlowPair, Lax};
use crate::error::{Error, Result};
use crate::symkernel::Expr;

pub use compiled::{CompiledExpr, CompiledFlow};

/// Values of `P` and `Q` on a periodic lattice of `N` sites.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Deserialize)]
struct StateFile {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "P")]
    p: Vec<f64>,
    #[serde(rename = "Q")]
    q: Vec<f64>,
}

/// Smallest admissible `|P|`.
pub const MIN_ABS_P: f64 = 1e-8;

impl LatticeState {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<LatticeState> {
        let s = LatticeState { p, q };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.len() != self.q.len() {
            return Err(Error::InvalidState(format!(
                "P has {} sites, Q has {}",
                self.p.len(),
                self.q.len()
            )));
        }
        if self.p.len() < 4 {
            return Err(Error::InvalidState("need at least 4 sites".into()));
        }
        if let Some(i) = self.p.iter().position(|x| !(x.abs() >= MIN_ABS_P)) {
            return Err(Error::InvalidState(format!("P[{i}] = {} is too close to 0", self.p[i])));
        }
        if self.q.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("Q has non-finite entries".into()));
        }
        Ok(())
    }

    /// Parses `{"N": int, "P": [..], "Q": [..]}`.
    pub fn from_json(s: &str) -> Result<LatticeState> {
        let f: StateFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidState(format!("bad initial data: {e}")))?;
        if f.p.len() != f.n || f.q.len() != f.n {
            return Err(Error::InvalidState(format!(
                "N = {} but P has {} and Q has {} entries",
                f.n,
                f.p.len(),
                f.q.len()
            )));
        }
        LatticeState::new(f.p, f.q)
    }

    pub fn constant(n: usize, p: f64, q: f64) -> Result<LatticeState> {
        LatticeState::new(vec![p; n], vec![q; n])
    }

    /// A few low Fourier modes with seeded amplitudes and phases around
    /// `P = 1`, `Q = -1/2`. Constant states with `P Q > 0` are linearly
    /// unstable under `t0`, so the background has `P Q < 0`.
    pub fn random_smooth(n: usize, seed: u64) -> Result<LatticeState> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut field = |base: f64, amp: f64| -> Vec<f64> {
            let modes: Vec<(f64, f64)> = (1..=3)
                .map(|_| (rng.gen_range(-amp..amp), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect();
            (0..n)
                .map(|i| {
                    let x = std::f64::consts::TAU * i as f64 / n as f64;
                    base + modes
                        .iter()
                        .enumerate()
                        .map(|(m, (a, ph))| a * ((m + 1) as f64 * x + ph).sin())
                        .sum::<f64>()
                })
                .collect()
        };
        let p = field(1.0, 0.1);
        let q = field(-0.5, 0.08);
        LatticeState::new(p, q)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    fn axpy(&self, a: f64, d: &(Vec<f64>, Vec<f64>)) -> LatticeState {
        LatticeState {
            p: self.p.iter().zip(&d.0).map(|(x, y)| x + a * y).collect(),
            q: self.q.iter().zip(&d.1).map(|(x, y)| x + a * y).collect(),
        }
    }

    pub fn max_distance(&self, o: &LatticeState) -> f64 {
        self.p
            .iter()
            .zip(&o.p)
            .chain(self.q.iter().zip(&o.q))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// One classical RK4 step.
pub fn rk4_step(s: &LatticeState, f: &CompiledFlow, dt: f64) -> Result<LatticeState> {
    let k1 = f.rhs(s)?;
    let k2 = f.rhs(&s.axpy(dt / 2.0, &k1))?;
    let k3 = f.rhs(&s.axpy(dt / 2.0, &k2))?;
    let k4 = f.rhs(&s.axpy(dt, &k3))?;
    let comb = |i: usize, a: &[f64], b: &[f64], c: &[f64], d: &[f64]| (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]) / 6.0;
    let n = s.len();
    let dp: Vec<f64> = (0..n).map(|i| comb(i, &k1.0, &k2.0, &k3.0, &k4.0)).collect();
    let dq: Vec<f64> = (0..n).map(|i| comb(i, &k1.1, &k2.1, &k3.1, &k4.1)).collect();
    Ok(s.axpy(dt, &(dp, dq)))
}

/// States at steps `0, every, 2 every, ...` and the final step.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub steps: usize,
    pub samples: Vec<(usize, LatticeState)>,
}

impl Trajectory {
    pub fn last(&self) -> &LatticeState {
        &self.samples.last().expect("trajectory has its initial state").1
    }
}

pub fn rk4_integrate(
    s: &LatticeState,
    f: &CompiledFlow,
    dt: f64,
    steps: usize,
    every: usize,
) -> Result<Trajectory> {
    let every = every.max(1);
    let mut cur = s.clone();
    let mut samples = vec![(0, cur.clone())];
    for step in 1..=steps {
        cur = rk4_step(&cur, f, dt)?;
        if cur.p.iter().chain(&cur.q).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { step });
        }
        if step % every == 0 || step == steps {
            samples.push((step, cur.clone()));
        }
    }
    Ok(Trajectory { dt, steps, samples })
}

/// Conserved densities available to the monitor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    /// `H_k`, `k >= -1`.
    H(i32),
    /// `G_k`, `k >= 0`.
    G(u32),
}

impl Functional {
    pub fn parse(s: &str) -> Result<Functional> {
        let bad = || Error::Unsupported(format!("unknown functional {s}"));
        let (head, idx) = s.split_at(1.min(s.len()));
        match head {
            "H" => idx.parse::<i32>().ok().filter(|k| *k >= -1).map(Functional::H).ok_or_else(bad),
            "G" => idx.parse::<u32>().ok().map(Functional::G).ok_or_else(bad),
            _ => Err(bad()),
        }
    }

    pub fn density(self, lax: &Lax) -> Result<Expr> {
        match self {
            Functional::H(k) => lax.h(k),
            Functional::G(k) => lax.g(k),
        }
    }

    pub fn label(self) -> String {
        match self {
            Functional::H(k) => format!("H{k}"),
            Functional::G(k) => format!("G{k}"),
        }
    }
}

/// Relative drift `max_t |H(t) - H(0)| / |H(0)|` of each functional.
#[derive(Clone, Debug)]
pub struct ConservationReport {
    pub drifts: Vec<(String, f64)>,
}

pub fn conservation_report(
    traj: &Trajectory,
    functionals: &[(String, CompiledExpr)],
) -> Result<ConservationReport> {
    let mut drifts = Vec::new();
    for (name, dens) in functionals {
        let h0 = dens.total(&traj.samples[0].1)?;
        let mut worst: f64 = 0.0;
        for (_, s) in &traj.samples {
            worst = worst.max((dens.total(s)? - h0).abs());
        }
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        drifts.push((name.clone(), worst / scale));
    }
    Ok(ConservationReport { drifts })
}

/// Builds flows `t0, t1, s0, s1` and the combined flow `t0 + s0`.
pub fn lattice_flow(lax: &Lax, name: &str) -> Result<FlowPair> {
    let parse = |s: &str| -> Option<(Dir, u32)> {
        let dir = match s.chars().next()? {
            't' => Dir::T,
            's' => Dir::S,
            _ => return None,
        };
        Some((dir, s[1..].parse().ok()?))
    };
    if name == "t0+s0" {
        return crate::duality::combined_flow(lax);
    }
    let (dir, k) = parse(name).ok_or_else(|| Error::Unsupported(format!("unknown flow {name}")))?;
    lax.flow(dir, k)
}

/// `|Phi_A^h Phi_B^h x - Phi_B^h Phi_A^h x|` for each step size.
pub fn commutativity_defects(
    a: &CompiledFlow,
    b: &CompiledFlow,
    x: &LatticeState,
    hs: &[f64],
) -> Result<Vec<(f64, f64)>> {
    hs.iter()
        .map(|&h| {
            let ab = rk4_step(&rk4_step(x, b, h)?, a, h)?;
            let ba = rk4_step(&rk4_step(x, a, h)?, b, h)?;
            Ok((h, ab.max_distance(&ba)))
        })
        .collect()
}

/// Observed orders `log2(d(h) / d(h/2))` between consecutive halvings.
pub fn observed_orders(defects: &[(f64, f64)]) -> Vec<f64> {
    defects
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect()
}

/// Backlund image of a state: `P(n) -> 1/P(-n)`,
/// `Q(n) -> Q(1-n) / (P(-n) P(1-n))`.
pub fn backlund(s: &LatticeState) -> Result<LatticeState> {
    let (p, q) = crate::duality::backlund_state(&s.p, &s.q);
    LatticeState::new(p, q)
}

/// Integrates the combined flow from `x` and from its Backlund image and
/// returns `max_t |B(x(t)) - y(t)|`.
pub fn numeric_backlund_check(
    combined: &CompiledFlow,
    x: &LatticeState,
    dt: f64,
    steps: usize,
) -> Result<f64> {
    let every = (steps / 20).max(1);
    let tx = rk4_integrate(x, combined, dt, steps, every)?;
    let ty = rk4_integrate(&backlund(x)?, combined, dt, steps, every)?;
    let mut worst: f64 = 0.0;
    for ((_, a), (_, b)) in tx.samples.iter().zip(&ty.samples) {
        worst = worst.max(backlund(a)?.max_distance(b));
    }
    Ok(worst)
}
