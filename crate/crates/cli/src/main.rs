use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alkit::lambda_ops::Projection;
use alkit::lattice_sim::LatticeState;
use alkit::report::SuiteReport;
use alkit::suites::{self, BacklundOptions, CentralOptions, SimulateOptions};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "alkit", version, about = "Verification suites and lattice simulations for the Ablowitz-Ladik hierarchy")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    report: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlowName {
    T0,
    T1,
    S0,
    S1,
}

impl FlowName {
    fn as_str(self) -> &'static str {
        match self {
            FlowName::T0 => "t0",
            FlowName::T1 => "t1",
            FlowName::S0 => "s0",
            FlowName::S1 => "s1",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lax equations against coefficient formulas, reference flows, coefficient recursions.
    Flows {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        /// Debug: use the flipped projection convention (expected to fail).
        #[arg(long)]
        flip_projection: bool,
    },
    /// Hamiltonian representations and residue identities.
    Hamiltonian {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
    },
    /// Schouten brackets of the three bivectors and the constant-form check.
    Schouten,
    /// Central invariants at seeded random points.
    Central {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `all` or a pair `i,j`.
        #[arg(long, default_value = "all", value_parser = parse_pairs)]
        pairs: Pairs,
    },
    /// Flow interchange, conjugation identities and the Backlund substitution.
    Duality {
        #[arg(long, default_value_t = 1)]
        kmax: u32,
    },
    /// Frobenius structure, hydrodynamic recursions and leading-order limits.
    Dispersionless {
        /// Highest level of the hydrodynamic recursions.
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Highest level of the lattice flows compared at leading order.
        #[arg(long, default_value_t = 2)]
        limit_kmax: u32,
    },
    /// Integrate one flow with RK4 and monitor conserved quantities.
    Simulate {
        #[arg(long, value_enum, default_value_t = FlowName::T0)]
        flow: FlowName,
        #[arg(long, default_value_t = 32)]
        sites: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Comma-separated functionals, e.g. `H-1,H0,G0`.
        #[arg(long, default_value = "H-1,H0,G0", value_delimiter = ',', allow_hyphen_values = true)]
        conserve: Vec<String>,
        /// JSON initial data `{"N", "P", "Q"}`; seeded smooth data otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Bound on the relative drift.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Numeric Backlund check on the combined flow t0 + s0.
    Backlund {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        sites: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug)]
enum Pairs {
    All,
    One(u8, u8),
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    if s == "all" {
        return Ok(Pairs::All);
    }
    let (a, b) = s.split_once(',').ok_or("expected `all` or `i,j`")?;
    let idx = |x: &str| -> Result<u8, String> {
        match x.trim().parse::<u8>() {
            Ok(n @ 1..=3) => Ok(n),
            _ => Err(format!("operator index `{x}` is not 1, 2 or 3")),
        }
    };
    let (a, b) = (idx(a)?, idx(b)?);
    if a == b {
        return Err("a pair needs two distinct operators".into());
    }
    Ok(Pairs::One(a, b))
}

fn load_state(path: &Path) -> Result<LatticeState, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    LatticeState::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: Command) -> Result<SuiteReport, String> {
    Ok(match cmd {
        Command::Flows { kmax, flip_projection } => {
            let conv = if flip_projection { Projection::Flipped } else { Projection::Standard };
            suites::flows(kmax, conv)
        }
        Command::Hamiltonian { kmax } => suites::hamiltonian(kmax),
        Command::Schouten => suites::schouten(),
        Command::Central { samples, tol, seed, pairs } => suites::central(&CentralOptions {
            samples,
            tol,
            seed,
            pair: match pairs {
                Pairs::All => None,
                Pairs::One(a, b) => Some((a, b)),
            },
        }),
        Command::Duality { kmax } => suites::duality(kmax),
        Command::Dispersionless { kmax, limit_kmax } => suites::dispersionless(kmax, limit_kmax),
        Command::Simulate { flow, sites, dt, steps, conserve, input, seed, tol } => {
            let initial = input.as_deref().map(load_state).transpose()?;
            suites::simulate(&SimulateOptions {
                flow: flow.as_str().into(),
                sites,
                dt,
                steps,
                conserve,
                initial,
                seed,
                tol,
            })
        }
        Command::Backlund { input, sites, seed, dt, steps, tol } => {
            let initial = input.as_deref().map(load_state).transpose()?;
            suites::backlund(&BacklundOptions { initial, sites, seed, dt, steps, tol })
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(cli.command) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match cli.report {
        Format::Text => println!("{report}"),
        Format::Json => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
