//! `hkcpn`: evaluate, transition, scan and verify the hyperkähler metric on
//! twisted cotangent bundles of `CPⁿ`.
//!
//! Exit codes: 0 success, 1 a check failed or the point is outside the
//! requested chart overlap, 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hkcpn::C64;

#[derive(Debug, Parser)]
#[command(name = "hkcpn", version, about = "Hyperkähler metric on twisted cotangent bundles of CP^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the seeded verification suite and write a report.
    Verify(VerifyArgs),
    /// Evaluate the metric and moment map at one point.
    Eval(EvalArgs),
    /// Re-express a point in another chart.
    Transition(TransitionArgs),
    /// Tabulate the profile, its ODE residual and det A over a tau grid.
    Scan(ScanArgs),
    /// Report max |residual - 1| of the profile ODE over a tau grid.
    OdeCheck(ScanArgs),
}

#[derive(Debug, Clone, Copy, Args)]
struct TwistArgs {
    /// Real part of s.
    #[arg(long = "s-re", default_value_t = 1.0, allow_negative_numbers = true)]
    s_re: f64,
    /// Imaginary part of s.
    #[arg(long = "s-im", default_value_t = 0.0, allow_negative_numbers = true)]
    s_im: f64,
}

impl TwistArgs {
    fn s(&self) -> C64 {
        C64::new(self.s_re, self.s_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Dimension n; repeat for several.
    #[arg(long = "n", default_values_t = [1usize, 2])]
    n: Vec<usize>,
    #[command(flatten)]
    twist: TwistArgs,
    /// Profile parameter a >= 0; repeat for several.
    #[arg(long = "a", default_values_t = [0.0f64, 1.0])]
    a: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Multiply the profile by 1 + delta (negative control).
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<f64>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[command(flatten)]
    twist: TwistArgs,
    /// Chart index in 0..=n.
    #[arg(long, default_value_t = 0)]
    alpha: usize,
    /// Comma-separated complex coordinates, e.g. `1,0.5-2j`; zeros when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
    z: Vec<C64>,
    /// Comma-separated fibre coordinates; zeros when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
    xi: Vec<C64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Profile parameter a >= 0.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Replace xi by the point of the Lagrangian locus over z.
    #[arg(long, conflicts_with = "xi")]
    lagrangian: bool,
}

#[derive(Debug, Args)]
struct TransitionArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Target chart index.
    #[arg(long = "to-chart")]
    to_chart: usize,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Minimum of tau; defaults to |s|^2.
    #[arg(long)]
    tau0: Option<f64>,
    #[command(flatten)]
    twist: TwistArgs,
    #[arg(long = "tau-min")]
    tau_min: f64,
    #[arg(long = "tau-max")]
    tau_max: f64,
    /// Number of equally spaced grid points, endpoints included.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Multiply the profile by 1 + delta.
    #[arg(long, allow_negative_numbers = true)]
    perturb: Option<f64>,
    /// CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<C64, String> {
    let t = text.trim();
    let doubled_sign = ["++", "+-", "-+", "--"].iter().any(|d| t.contains(d));
    if t.is_empty() || t.ends_with('i') || doubled_sign {
        return Err(format!("malformed complex literal {text:?}; expected re or re+imj"));
    }
    C64::from_str(t)
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .ok_or_else(|| format!("malformed complex literal {text:?}; expected re or re+imj"))
}

/// Outcome of a subcommand, mapped onto the exit-code contract.
#[derive(Debug)]
enum Failure {
    /// A check failed or the point left the chart overlap.
    Check(String),
    /// Bad flags or input.
    Usage(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Verify(args) => commands::verify(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Transition(args) => commands::transition(&args),
        Command::Scan(args) => commands::scan(&args),
        Command::OdeCheck(args) => commands::ode_check(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("hkcpn: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hkcpn: {msg}");
            ExitCode::from(2)
        }
    }
}
