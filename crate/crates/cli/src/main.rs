use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qqm_cli::suite::{bundled_scenarios, bundled_source, report_table, scenarios_in, verify};
use qqm_cli::{run_scenario, CliError, Scenario, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(
    name = "qqm",
    version,
    about = "Quaternionic wave-equation runner and identity verifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario file and write its observables and reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        tol_scale: f64,
    },
    /// Run every scenario plus the convergence fits and print a pass/fail table.
    Verify {
        /// Directory of scenario files; the bundled set is used when omitted.
        #[arg(long)]
        scenarios: Option<PathBuf>,
        /// Write every scenario's outputs here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0, value_parser = parse_scale)]
        tol_scale: f64,
    },
    /// Print a bundled scenario.
    DumpScenario { name: String },
}

fn parse_scale(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance scale must be positive and finite, got {v}"))
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run { config, out, tol_scale } => {
            let scenario = Scenario::from_path(&config)?;
            let outcome = run_scenario(&scenario, tol_scale)?;
            for path in outcome.write(&out)? {
                log::info!("wrote {}", path.display());
            }
            print!("{}", report_table(&outcome.name, &outcome.reports));
            Ok(if outcome.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Verify {
            scenarios,
            out,
            tol_scale,
        } => {
            let scenarios = match scenarios {
                Some(dir) => scenarios_in(&dir)?,
                None => bundled_scenarios()?,
            };
            let outcome = verify(&scenarios, tol_scale)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                outcome.write(dir)?;
            }
            print!("{}", outcome.table());
            let failures = outcome.failures();
            let checks: usize = outcome.runs.iter().map(|r| r.reports.len()).sum::<usize>() + outcome.fits.len();
            println!(
                "verify: {} scenarios, {} checks, {} failed",
                outcome.runs.len(),
                checks,
                failures.len()
            );
            for f in &failures {
                println!("failed {f}");
            }
            Ok(if failures.is_empty() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::DumpScenario { name } => {
            print!("{}", bundled_source(&name)?);
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_ERROR as u8
            } else {
                EXIT_PASS as u8
            });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
