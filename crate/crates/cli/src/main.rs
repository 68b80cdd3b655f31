//! `ongate`: experiments for cubic-phase gate teleportation with ON resources.

mod commands;
mod output;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use ongate::fock::DEFAULT_CUTOFF;
use ongate::grid::{DEFAULT_N_POINTS, DEFAULT_X_MAX};
use ongate::metrics::SweepKind;
use ongate::states::AxisRange;
use ongate::{Error, Grid, TestState};

use commands::{Context, Mode, DEFAULT_GAMMA};
use range::StateRange;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ongate", version, about = "Measurement-induced cubic phase gate experiments")]
struct Cli {
    /// Half-width of the position grid.
    #[arg(long, global = true, default_value_t = DEFAULT_X_MAX)]
    xmax: f64,
    /// Number of position grid points.
    #[arg(long, global = true, default_value_t = DEFAULT_N_POINTS)]
    npoints: usize,
    /// Fock-space truncation.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,
    /// Seed for every stochastic choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for output files; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reproduce all figure data (into --out, or ./figures).
    #[arg(long)]
    defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Gamma,
    Squeezing,
    Fock,
}

impl From<SweepArg> for SweepKind {
    fn from(s: SweepArg) -> Self {
        match s {
            SweepArg::Gamma => SweepKind::Gamma,
            SweepArg::Squeezing => SweepKind::Squeezing,
            SweepArg::Fock => SweepKind::Fock,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Deterministic,
    Postselected,
}

fn parse_axis(s: &str) -> Result<AxisRange, String> {
    let bad = || format!("cannot parse '{s}'; expected <min>:<max>:<points>");
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, n] = parts[..] else { return Err(bad()) };
    let min = min.parse().map_err(|_| bad())?;
    let max = max.parse().map_err(|_| bad())?;
    let n = n.parse().map_err(|_| bad())?;
    AxisRange::new(min, max, n).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Homodyne outcome density p(q), one CSV per input state.
    HomodyneDist {
        #[arg(long, default_value = "fock:0..5")]
        input: StateRange,
        #[arg(long, default_value_t = DEFAULT_GAMMA)]
        gamma: f64,
    },
    /// Average gate fidelity over one of the figure sweeps.
    Fidelity {
        #[arg(long, value_enum)]
        sweep: SweepArg,
    },
    /// Simulate the optical preparation of the 03 resource.
    Prep03 {
        #[arg(long, default_value_t = DEFAULT_GAMMA, allow_negative_numbers = true)]
        a0: f64,
        #[arg(long, default_value_t = 0.5)]
        y: f64,
    },
    /// One seeded run of the teleportation circuit.
    Circuit {
        #[arg(long, value_enum, default_value = "deterministic")]
        mode: ModeArg,
        #[arg(long, default_value = "fock:0")]
        input: TestState,
        #[arg(long, default_value_t = DEFAULT_GAMMA, allow_negative_numbers = true)]
        a0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q0: f64,
        #[arg(long, default_value_t = 1e-2)]
        epsilon: f64,
    },
    /// Wigner function of the ideal cubic phase state on a lattice.
    Wigner {
        #[arg(long, default_value_t = DEFAULT_GAMMA, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value = "-4:4:81", value_parser = parse_axis, allow_hyphen_values = true)]
        xrange: AxisRange,
        #[arg(long, default_value = "-4:4:81", value_parser = parse_axis, allow_hyphen_values = true)]
        prange: AxisRange,
    },
    /// Raw versus exponentiated quartic filter.
    Quartic {
        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        a0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value = "fock:0")]
        input: TestState,
    },
    /// Product expansion of the cubic gate against its Taylor form.
    Accuracy {
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[arg(long, default_value = "fock:0")]
        input: TestState,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundaryMass { .. }
        | Error::Cutoff { .. }
        | Error::ZeroAcceptance
        | Error::NotSymplectic(_)
        | Error::ZeroNorm
        | Error::NotNormalized
        | Error::EmptyDensity => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let grid = match Grid::symmetric(cli.xmax, cli.npoints) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let ctx = Context { grid, cutoff: cli.cutoff, seed: cli.seed };
    let mut out = cli.out.clone();
    let result = match cli.command {
        None if cli.defaults => {
            out.get_or_insert_with(|| PathBuf::from("figures"));
            commands::defaults(&ctx)
        }
        None => {
            Cli::command().print_help().ok();
            return ExitCode::from(EXIT_USAGE);
        }
        Some(Command::HomodyneDist { input, gamma }) => commands::homodyne_dist(&ctx, &input, gamma),
        Some(Command::Fidelity { sweep }) => commands::fidelity(&ctx, sweep.into()),
        Some(Command::Prep03 { a0, y }) => commands::prep03(&ctx, a0, y),
        Some(Command::Circuit { mode, input, a0, q0, epsilon }) => {
            let mode = match mode {
                ModeArg::Deterministic => Mode::Deterministic,
                ModeArg::Postselected => Mode::Postselected,
            };
            commands::circuit(&ctx, mode, input, a0, q0, epsilon)
        }
        Some(Command::Wigner { gamma, xrange, prange }) => commands::wigner(&ctx, gamma, xrange, prange),
        Some(Command::Quartic { a0, q, input }) => commands::quartic(&ctx, a0, q, input),
        Some(Command::Accuracy { gamma, steps, input }) => commands::accuracy(&ctx, gamma, steps, input),
    };
    match result {
        Ok(artifacts) => match output::emit(&artifacts, out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
