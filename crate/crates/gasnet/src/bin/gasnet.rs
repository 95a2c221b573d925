use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gasnet::output::{read_records, SNAPSHOTS_JSON};
use gasnet::scenario::Mode;
use gasnet::{diagnose, parse_scenario_file, run_scenario, write_outputs, Error, Format, Scenario};
use rayon::prelude::*;

/// Junction and compressor solvers for gas pipeline networks.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the generalized Riemann problem at the node and sample the
    /// self-similar solution.
    Riemann(RunArgs),
    /// Evolve the scenario by wave front tracking.
    Simulate(RunArgs),
    /// Validate scenarios without running them.
    Check {
        #[arg(long = "scenario", required = true)]
        scenarios: Vec<PathBuf>,
        /// Print the normalized scenario document.
        #[arg(long)]
        normalize: bool,
    },
    /// Recompute the coupling residuals of stored JSON snapshots.
    Diagnose {
        #[arg(long)]
        scenario: PathBuf,
        /// Directory holding snapshots.json.
        #[arg(long)]
        out: PathBuf,
        /// Largest acceptable recomputed residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file; repeat to run several.
    #[arg(long = "scenario", required = true)]
    scenarios: Vec<PathBuf>,
    /// Output directory; one subdirectory per scenario when several are given.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Newton tolerance of the coupling solves.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for independent scenarios.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn load(path: &Path) -> Result<Scenario, Error> {
    parse_scenario_file(path)
}

fn run_one(path: &Path, mode: Mode, args: &RunArgs, out: &Path) -> Result<(), Error> {
    let mut s = load(path)?;
    s.run.mode = mode;
    if let Some(e) = args.epsilon {
        s.run.epsilon = e;
    }
    if let Some(h) = args.horizon {
        s.run.horizon = h;
    }
    if let Some(t) = args.tol {
        s.run.tol = t;
    }
    if let Some(seed) = args.seed {
        s.run.seed = seed;
    }
    // overrides and the forced mode must satisfy the schema too
    s.validate().map_err(Error::Validation)?;
    log::info!("running {}", path.display());
    let output = run_scenario(&s)?;
    let written = write_outputs(out, &output, args.format)?;
    let m = &output.summary;
    println!(
        "{}: {} snapshots, {} interactions, max residuals mass {:.1e} enthalpy {:.1e} entropy {:.1e}",
        path.display(),
        m.snapshots,
        m.interactions,
        m.max_mass_residual,
        m.max_enthalpy_residual,
        m.max_entropy_residual
    );
    for p in written {
        println!("  wrote {}", p.display());
    }
    Ok(())
}

fn report(path: &Path, e: &Error) -> u8 {
    eprintln!("error: {}: {e}", path.display());
    e.exit_code()
}

fn run_all(mode: Mode, args: RunArgs) -> u8 {
    let several = args.scenarios.len() > 1;
    let out_dir = |p: &Path| -> PathBuf {
        if several {
            args.out
                .join(p.file_stem().map_or_else(|| "scenario".into(), |s| s.to_owned()))
        } else {
            args.out.clone()
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} workers: {e}", args.jobs);
            return 4;
        }
    };
    let codes: Vec<u8> = pool.install(|| {
        args.scenarios
            .par_iter()
            .map(|p| match run_one(p, mode, &args, &out_dir(p)) {
                Ok(()) => 0,
                Err(e) => report(p, &e),
            })
            .collect()
    });
    codes.into_iter().find(|&c| c != 0).unwrap_or(0)
}

fn check(scenarios: &[PathBuf], normalize: bool) -> u8 {
    let mut code = 0;
    for p in scenarios {
        match load(p) {
            Ok(s) if normalize => print!("{}", s.normalized().to_toml()),
            Ok(_) => println!("{}: ok", p.display()),
            Err(e) => {
                let c = report(p, &e);
                if code == 0 {
                    code = c;
                }
            }
        }
    }
    code
}

fn diagnose_outputs(scenario: &Path, out: &Path, tol: f64) -> Result<bool, Error> {
    let s = load(scenario)?;
    let records = read_records(&out.join(SNAPSHOTS_JSON))?;
    let report = diagnose(&s, &records)?;
    for r in &report.records {
        println!(
            "t = {}: mass {:.2e} enthalpy {:.2e} entropy {:.2e} (stored deviation {:.1e}), grid TV {:.4e}",
            r.time,
            r.recomputed.mass_residual,
            r.recomputed.enthalpy_residual,
            r.recomputed.entropy_residual,
            r.deviation,
            r.grid_variation
        );
    }
    println!(
        "max residual {:.2e}, max deviation from stored diagnostics {:.2e}",
        report.max_residual, report.max_deviation
    );
    Ok(report.max_residual <= tol)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GASNET_LOG", "warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Riemann(args) => run_all(Mode::Riemann, args),
        Command::Simulate(args) => run_all(Mode::Simulate, args),
        Command::Check {
            scenarios,
            normalize,
        } => check(&scenarios, normalize),
        Command::Diagnose { scenario, out, tol } => match diagnose_outputs(&scenario, &out, tol) {
            Ok(true) => 0,
            Ok(false) => {
                eprintln!("error: recomputed residuals exceed {tol:e}");
                3
            }
            Err(e) => report(&scenario, &e),
        },
    };
    ExitCode::from(code)
}
