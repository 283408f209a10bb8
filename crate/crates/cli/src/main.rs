use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xyquench::limits::ScanConfig;
use xyquench::model::{ModelParams, QuenchKind, QuenchSpec};
use xyquench::QuadratureConfig;
use xyquench_cli::axis::{parse_amplitude, parse_beta, parse_number, Axis};
use xyquench_cli::record::{write_csv, Row};
use xyquench_cli::sweep::{failed_rows, SweepGrid};
use xyquench_cli::verify::{run_all, VerifyOptions, DEFAULT_SEED};
use xyquench_cli::{limits_cmd, CliError};

/// Entropy production and its coherence/population split for sudden quenches of the XY chain.
#[derive(Parser)]
#[command(name = "xyquench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single quench and print one CSV record.
    Point(PointArgs),
    /// Evaluate a grid of quenches and write CSV.
    Sweep(SweepArgs),
    /// Run the oracle and identity suites, one JSON line per check.
    Verify(VerifyArgs),
    /// Analytic limits, the susceptibility and non-analyticity scans.
    Limits {
        #[command(subcommand)]
        which: LimitsCommand,
    },
}

#[derive(Args)]
struct Tolerance {
    /// Relative tolerance of the momentum quadrature.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    rel_tol: f64,
}

impl Tolerance {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig::default().with_rel_tol(self.rel_tol)
    }
}

#[derive(Args)]
struct Endpoints {
    #[arg(long, value_parser = parse_number)]
    g0: f64,
    #[arg(long, value_parser = parse_number)]
    gamma0: f64,
    /// Post-quench field; defaults to `g0`.
    #[arg(long, value_parser = parse_number)]
    gtau: Option<f64>,
    /// Post-quench anisotropy; defaults to `gamma0`.
    #[arg(long, value_parser = parse_number)]
    gammatau: Option<f64>,
}

impl Endpoints {
    fn params(&self) -> xyquench::Result<(ModelParams, ModelParams)> {
        Ok((
            ModelParams::new(self.g0, self.gamma0)?,
            ModelParams::new(
                self.gtau.unwrap_or(self.g0),
                self.gammatau.unwrap_or(self.gamma0),
            )?,
        ))
    }
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    endpoints: Endpoints,
    /// Inverse temperature, or `inf`.
    #[arg(long, value_parser = parse_beta)]
    beta: f64,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Field,
    Anisotropy,
}

impl From<Kind> for QuenchKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Field => QuenchKind::Field,
            Kind::Anisotropy => QuenchKind::Anisotropy,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Axis: VALUE, V1,V2,..., START:STOP:COUNT or START:STOP:COUNT:log.
    #[arg(long)]
    g0: Axis,
    #[arg(long)]
    gamma0: Axis,
    /// Inverse temperatures; `inf` allowed in lists.
    #[arg(long)]
    beta: Axis,
    #[arg(long, value_enum, default_value_t = Kind::Field)]
    kind: Kind,
    /// Signed quench amplitude.
    #[arg(long, value_parser = parse_amplitude, allow_negative_numbers = true)]
    delta: f64,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Replace every check tolerance.
    #[arg(long, value_parser = positive)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum LimitsCommand {
    /// Exact beta^2 coefficients of C, D and S_irr for a finite quench.
    HighT {
        #[command(flatten)]
        endpoints: Endpoints,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Leading order in beta and in the quench amplitude.
    Infinitesimal {
        #[arg(long, value_enum, default_value_t = Kind::Field)]
        kind: Kind,
        #[arg(long, value_parser = parse_number)]
        g0: f64,
        #[arg(long, value_parser = parse_number)]
        gamma0: f64,
        #[arg(long, value_parser = parse_amplitude, allow_negative_numbers = true)]
        delta: f64,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Zero-temperature coherence and S_irr / beta.
    ZeroT {
        #[command(flatten)]
        endpoints: Endpoints,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Ground-state susceptibility by Richardson-extrapolated second differences.
    Susceptibility {
        #[arg(long, value_parser = parse_number)]
        g0: f64,
        #[arg(long, value_parser = parse_number)]
        gamma0: f64,
        #[arg(long, default_value_t = 1e-4, value_parser = positive)]
        step: f64,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Scan C (or C / beta^2) of a field quench around a point for kinks and cusps.
    Scan {
        #[arg(long, value_parser = parse_number)]
        gamma0: f64,
        #[arg(long, value_parser = parse_amplitude, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, value_parser = parse_beta)]
        beta: f64,
        #[arg(long, default_value_t = 1.0, value_parser = parse_number)]
        center: f64,
        #[arg(long, default_value_t = 0.1, value_parser = positive)]
        window: f64,
        #[arg(long, default_value_t = 1e-3, value_parser = positive)]
        step: f64,
        #[command(flatten)]
        tol: Tolerance,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_number(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

fn point(args: &PointArgs) -> Result<(), CliError> {
    let (pre, post) = args
        .endpoints
        .params()
        .and_then(|(pre, post)| QuenchSpec::new(pre, post, args.beta).map(|_| (pre, post)))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let row = Row::new(pre.g(), pre.gamma(), post.g(), post.gamma(), args.beta)
        .compute(&args.tol.config());
    let failed = failed_rows(std::slice::from_ref(&row));
    write_csv(io::stdout().lock(), &[row])?;
    if failed > 0 {
        return Err(CliError::RowsFailed { failed, total: 1 });
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let grid = SweepGrid {
        g0: args.g0,
        gamma0: args.gamma0,
        beta: args.beta,
        kind: args.kind.into(),
        delta: args.delta,
        quadrature: args.tol.config(),
    };
    let rows = grid.run(args.threads)?;
    match &args.output {
        Some(path) => write_csv(BufWriter::new(File::create(path)?), &rows)?,
        None => write_csv(io::stdout().lock(), &rows)?,
    }
    match failed_rows(&rows) {
        0 => Ok(()),
        failed => Err(CliError::RowsFailed {
            failed,
            total: rows.len(),
        }),
    }
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let opts = VerifyOptions {
        seed: args.seed,
        tolerance: args.tolerance,
        ..Default::default()
    };
    let reports = run_all(&opts);
    let mut out = io::stdout().lock();
    for r in &reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    match reports.iter().filter(|r| !r.passed()).count() {
        0 => Ok(()),
        failed => Err(CliError::ChecksFailed {
            failed,
            total: reports.len(),
        }),
    }
}

fn limits(which: LimitsCommand) -> Result<(), CliError> {
    let value = match which {
        LimitsCommand::HighT { endpoints, tol } => {
            let (pre, post) = endpoints.params()?;
            limits_cmd::high_t(&pre, &post, &tol.config())?
        }
        LimitsCommand::Infinitesimal {
            kind,
            g0,
            gamma0,
            delta,
            tol,
        } => limits_cmd::infinitesimal(kind.into(), g0, gamma0, delta, &tol.config())?,
        LimitsCommand::ZeroT { endpoints, tol } => {
            let (pre, post) = endpoints.params()?;
            limits_cmd::zero_t(&pre, &post, &tol.config())?
        }
        LimitsCommand::Susceptibility {
            g0,
            gamma0,
            step,
            tol,
        } => limits_cmd::chi(g0, gamma0, step, &tol.config())?,
        LimitsCommand::Scan {
            gamma0,
            delta,
            beta,
            center,
            window,
            step,
            tol,
        } => {
            let mut cfg = ScanConfig::new(gamma0, delta, beta).with_grid(window, step);
            cfg.center = center;
            cfg.quadrature = tol.config();
            limits_cmd::scan(&cfg)?
        }
    };
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Point(args) => point(&args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(&args),
        Command::Limits { which } => limits(which),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xyquench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
