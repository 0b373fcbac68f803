use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use uavplace_core::harness::{
    reproduce, solve_to_dir, sweep, Overrides, ReproduceOptions, Scenario, SweepAxis, REPRODUCTION_SEED,
};
use uavplace_core::{CostUnit, Error, SolverKind, ThetaConvention};

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "uavplace", version, about = "Place a UAV base station serving the users of a high-rise building")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write result.json and trace.csv.
    Solve {
        #[arg(long, value_name = "PATH")]
        scenario: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_name = "pso|gd|grid")]
        solver: Option<SolverKind>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Vary building height or width and tabulate every (value, solver) run.
    Sweep {
        #[arg(long, value_name = "PATH")]
        scenario: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long, value_name = "height|width")]
        axis: SweepAxis,
        /// Comma-separated axis values in meters.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "pso,gd", value_name = "LIST")]
        solvers: Vec<SolverKind>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Re-run the reference table and print a per-row verdict.
    Reproduce {
        /// Also write report.txt and report.json here.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Print the scenario's user positions as JSON.
    GenUsers {
        #[arg(long, value_name = "PATH")]
        scenario: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct CommonFlags {
    /// Seed for uniform user draws and the swarm. Falls back to UAVPLACE_SEED.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, value_name = "elevation|incidence")]
    theta_convention: Option<ThetaConvention>,
    #[arg(long, value_name = "db|linear")]
    cost_unit: Option<CostUnit>,
}

impl CommonFlags {
    fn overrides(&self, solver: Option<SolverKind>) -> Result<Overrides> {
        let o = Overrides {
            solver,
            seed: self.seed,
            theta_convention: self.theta_convention,
            cost_unit: self.cost_unit,
        };
        Ok(o.with_env_seed()?)
    }
}

fn load(path: &Path, overrides: &Overrides) -> Result<Scenario> {
    let mut scenario = Scenario::load(path).with_context(|| format!("loading {}", path.display()))?;
    overrides.apply(&mut scenario);
    scenario.validate()?;
    Ok(scenario)
}

fn run_solve(scenario: &Path, out: &Path, solver: Option<SolverKind>, common: &CommonFlags) -> Result<u8> {
    let scenario = load(scenario, &common.overrides(solver)?)?;
    let record = match solve_to_dir(&scenario, out) {
        Ok(r) => r,
        Err(e @ (Error::InitializationFailed | Error::NoFeasiblePoint | Error::NonFiniteStart)) => {
            eprintln!("infeasible: {e}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };
    let p = record.result.best_location;
    println!("solver:     {}", record.solver);
    println!("placement:  ({:.4}, {:.4}, {:.4})", p.x, p.y, p.z);
    println!("total loss: {:.4} dB", record.report.total_loss_db);
    if let Some(w) = record.report.total_power_w {
        println!("power:      {w:.6e} W");
    }
    println!("feasible:   {}", record.feasible());
    println!("written to: {}", out.display());
    Ok(if record.feasible() { 0 } else { EXIT_INFEASIBLE })
}

fn run_sweep(
    scenario: &Path,
    out: &Path,
    axis: SweepAxis,
    values: &[f64],
    solvers: &[SolverKind],
    common: &CommonFlags,
) -> Result<u8> {
    let base = load(scenario, &common.overrides(None)?)?;
    let rows = sweep(&base, axis, values, solvers, out)?;
    for r in &rows {
        println!(
            "{:<4} {}={:<6} ({:.4}, {:.4}, {:.4})  {:.4} dB",
            r.solver.name(),
            axis.name(),
            match axis {
                SweepAxis::Height => r.z_b,
                SweepAxis::Width => r.x_b,
            },
            r.best_x,
            r.best_y,
            r.best_z,
            r.total_loss_db
        );
    }
    println!("{} runs, summary in {}", rows.len(), out.join("summary.csv").display());
    Ok(0)
}

fn run_reproduce(out: Option<&Path>, common: &CommonFlags) -> Result<u8> {
    let o = common.overrides(None)?;
    let options = ReproduceOptions {
        theta_convention: o.theta_convention.unwrap_or_default(),
        cost_unit: o.cost_unit.unwrap_or_default(),
        seed: o.seed.unwrap_or(REPRODUCTION_SEED),
    };
    let report = reproduce(&options, |row| {
        eprintln!(
            "done: {} z_b={} x_b={}",
            row.reference.solver, row.reference.z_b, row.reference.x_b
        )
    })?;
    let text = report.render();
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.txt"), &text)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    }
    Ok(if report.passed() { 0 } else { EXIT_ERROR })
}

fn run_gen_users(scenario: &Path, out: Option<&Path>, seed: Option<u64>) -> Result<u8> {
    let overrides = Overrides {
        seed,
        ..Default::default()
    }
    .with_env_seed()?;
    let users = load(scenario, &overrides)?.user_set()?;
    let json = serde_json::to_string_pretty(&users)?;
    match out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{json}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    // clap would exit usage errors with 2, which means "infeasible" here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Solve {
            scenario,
            out,
            solver,
            common,
        } => run_solve(scenario, out, *solver, common),
        Command::Sweep {
            scenario,
            out,
            axis,
            values,
            solvers,
            common,
        } => run_sweep(scenario, out, *axis, values, solvers, common),
        Command::Reproduce { out, common } => run_reproduce(out.as_deref(), common),
        Command::GenUsers { scenario, out, seed } => run_gen_users(scenario, out.as_deref(), *seed),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
