mod commands;
mod suites;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spherewave::Error;

pub const SCHEMA: &str = "spherewave/1";

#[derive(Parser, Debug)]
#[command(
    name = "spherewave",
    version,
    about = "Green's function of the Laplace-Beltrami equation on the sphere: closed form vs plane-wave contour representation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the Green's function in closed form and by the sliding contours.
    EvalGreen(GreenArgs),
    /// Evaluate the Legendre function P_lambda(q).
    EvalLegendre(LegendreArgs),
    /// Tabulate closed form vs representation over a (theta, phi) grid.
    Sweep(SweepArgs),
    /// Run the verification suites and report pass/fail per suite.
    Verify(VerifyArgs),
    /// Compare the planar plane-wave representation with the Hankel function.
    PlanarCheck(PlanarArgs),
    /// Dump a sliding contour gamma^(m) as JSON samples.
    BuildContour(ContourArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DegreeArgs {
    /// Degree lambda as real and imaginary parts.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true,
          default_values_t = [0.3, 0.2])]
    pub lambda: Vec<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GreenArgs {
    #[command(flatten)]
    pub degree: DegreeArgs,
    /// Polar angle of the observation point (radians).
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true)]
    pub theta: f64,
    /// Azimuth of the observation point (radians).
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "0")]
    pub phi: f64,
    /// Polar angle of the source (radians).
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "0")]
    pub theta0: f64,
    /// Azimuth of the source (radians).
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "0")]
    pub phi0: f64,
    /// Offset of the sliding planes; the excluded cap has radius 2 delta.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Relative tolerance of the contour quadrature.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Force the contour gamma^(m) instead of selecting it automatically.
    #[arg(long)]
    pub domain: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreMethod {
    Auto,
    Series,
    Integral,
    Infinity,
}

#[derive(Args, Debug, Clone)]
pub struct LegendreArgs {
    #[command(flatten)]
    pub degree: DegreeArgs,
    /// Real part of the argument.
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// Imaginary part of the argument.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub q_im: f64,
    #[arg(long, value_enum, default_value_t = LegendreMethod::Auto)]
    pub method: LegendreMethod,
    /// Relative tolerance for the series and quadrature methods.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub degree: DegreeArgs,
    #[arg(long, default_value_t = 40)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 40)]
    pub n_phi: usize,
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "0")]
    pub theta_min: f64,
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "3.141592653589793")]
    pub theta_max: f64,
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "0")]
    pub phi_min: f64,
    #[arg(long, value_parser = parse_radians, allow_negative_numbers = true, default_value = "6.283185307179586")]
    pub phi_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Run a single suite.
    #[arg(long, value_enum, default_value_t = suites::Suite::All)]
    pub suite: suites::Suite,
    /// Override every suite tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed of the random probe points.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Include wall-clock timings (makes the report nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct PlanarArgs {
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y2: f64,
    /// Use only the contour of this domain (1..=4).
    #[arg(long)]
    pub domain: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct ContourArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Samples per segment in the dump.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

/// Angles are plain radians; anything carrying a degree unit is refused.
fn parse_radians(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let t = lower.strip_suffix("rad").unwrap_or(&lower);
    if t.contains('°') || t.ends_with("deg") || t.ends_with('d') {
        return Err(format!("angles are taken in radians only, got {s:?}"));
    }
    t.parse::<f64>()
        .map_err(|e| format!("not a number: {s:?} ({e})"))
        .and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("angle must be finite, got {s:?}"))
            }
        })
}

/// Failure of a subcommand, split by exit code.
pub enum Failure {
    /// Invalid input detected before any computation.
    Usage(Error),
    /// The computation itself failed or a suite did not pass.
    Run(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(error_record(&e))
    }
}

pub fn error_record(e: &Error) -> Value {
    json!({
        "schema": SCHEMA,
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values serialize")));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::EvalGreen(a) => commands::eval_green(a).map(Output::Json),
        Command::EvalLegendre(a) => commands::eval_legendre(a).map(Output::Json),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => suites::verify(a).map(Output::Json),
        Command::PlanarCheck(a) => commands::planar_check(a).map(Output::Json),
        Command::BuildContour(a) => commands::build_contour(a).map(Output::Json),
    };
    match outcome {
        Ok(Output::Json(v)) => {
            print_json(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(Failure::Run(v)) => {
            print_json(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            print_json(&error_record(&e));
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub enum Output {
    Json(Value),
    Text(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radians_only() {
        assert_eq!(parse_radians("1.5").unwrap(), 1.5);
        assert_eq!(parse_radians("-0.25").unwrap(), -0.25);
        assert_eq!(parse_radians("2rad").unwrap(), 2.0);
        assert!(parse_radians("45deg").is_err());
        assert!(parse_radians("45°").is_err());
        assert!(parse_radians("90d").is_err());
        assert!(parse_radians("inf").is_err());
        assert!(parse_radians("x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
