//! Command-line front end for structured Toeplitz determinant sweeps.
//!
//! Subcommands: `det`, `identities`, `converge`, `bench`. Exit codes:
//! 0 all checks passed, 1 a tolerance check failed, 2 configuration or
//! input error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use framed_toeplitz::error::Error;
use framed_toeplitz::harness::{
    convergence_csv, fmt17, run_bench, run_convergence, run_identity_suite, ReportFormat,
    SweepConfig,
};
use framed_toeplitz::linalg::det_log;
use framed_toeplitz::structmat::{build_matrix, StructuredDetSpec};

#[derive(Parser)]
#[command(name = "ftz", about = "Structured Toeplitz determinant toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Path to a JSON sweep configuration.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Output path (overrides the config; stdout when absent).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Report format (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Tolerance (overrides the config).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized checks (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured structured determinant over the n-grid.
    Det,
    /// Run the identity suite (condensation reductions, matrix-function
    /// constructions, kernel representations, recurrences, factorization).
    Identities,
    /// Sweep the determinant against its predicted limit constant.
    Converge,
    /// Time the direct, reduction, and asymptotic evaluation routes.
    Bench,
}

fn load_config(cli: &Cli) -> Result<SweepConfig, Error> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    let mut config: SweepConfig = serde_json::from_str(&text)?;
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    if let Some(fmt) = cli.format {
        config.format = match fmt {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
    }
    if let Some(tol) = cli.tol {
        config.tol = tol;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn emit(config: &SweepConfig, text: &str) -> Result<(), Error> {
    match &config.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let config = load_config(cli)?;
    match cli.command {
        Command::Det => {
            let phi = config.symbol.build()?;
            let mut csv = String::from("n,value_re,value_im,pred_re,pred_im,rel_err\n");
            let mut rows = vec![];
            for &n in &config.grid() {
                let value = match config.kind.as_str() {
                    "pure" => det_log(&build_matrix(&StructuredDetSpec::pure(phi.clone(), n))?)?,
                    "bordered" | "two-bordered" => {
                        let mut borders = vec![];
                        for b in &config.borders {
                            borders.push(b.build()?);
                        }
                        if borders.is_empty() {
                            return Err(Error::Config(format!(
                                "kind {:?} needs border symbols in \"borders\"",
                                config.kind
                            )));
                        }
                        det_log(&build_matrix(&StructuredDetSpec::multi_bordered(
                            phi.clone(),
                            borders,
                            n,
                        ))?)?
                    }
                    other => {
                        return Err(Error::Config(format!(
                            "det subcommand supports kinds pure/bordered/two-bordered, got {other:?}"
                        )))
                    }
                };
                let v = value.to_complex();
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    n,
                    fmt17(v.re),
                    fmt17(v.im),
                    fmt17(v.re),
                    fmt17(v.im),
                    fmt17(0.0)
                ));
                rows.push(serde_json::json!({"n": n, "value": [v.re, v.im]}));
            }
            let text = match config.format {
                ReportFormat::Csv => csv,
                ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
            };
            emit(&config, &text)?;
            Ok(0)
        }
        Command::Identities => {
            let summary = run_identity_suite(&config)?;
            let text = match config.format {
                ReportFormat::Csv => summary.render(),
                ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(&summary)?),
            };
            emit(&config, &text)?;
            Ok(summary.exit_code())
        }
        Command::Converge => {
            let report = run_convergence(&config)?;
            let text = match config.format {
                ReportFormat::Csv => convergence_csv(&report),
                ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
            };
            emit(&config, &text)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Bench => {
            let rows = run_bench(&config)?;
            let text = match config.format {
                ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
                ReportFormat::Csv => {
                    let mut s = String::from("n,direct_det_s,reduction_route_s,asymptotic_s\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            r.n,
                            fmt17(r.direct_det_s),
                            fmt17(r.reduction_route_s),
                            fmt17(r.asymptotic_s)
                        ));
                    }
                    s
                }
            };
            emit(&config, &text)?;
            Ok(0)
        }
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::Json(_)
            | Error::Io(_)
            | Error::Parameter(_)
            | Error::PoleOnCircle(_)
            | Error::Spec(_)
            | Error::UnsupportedSpec(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
