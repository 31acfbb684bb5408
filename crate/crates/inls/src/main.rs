//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or parameter error, 3 solver
//! failure (no shooting bracket, wrong regime, inconsistent constants),
//! 4 resolution lost during a simulation, 5 missing ledger entry,
//! 10 numerical blow-up detected.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use inls::config::{ConfigError, RunConfig};
use inls::dichotomy::{cross_check, evaluate, DichotomyError, Outcome};
use inls::evolution::{simulate, Termination};
use inls::ledger::{ConstantsLedger, GroundStateEntry, LedgerError};
use inls::params::{check_lwp_h1, check_lwp_hs, critical_power, find_source_pairs, gamma_c};
use inls::variational::{
    gn_constant, hardy_sobolev_constants, solve_ground_state, ShootingConfig, VariationalError,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_RESOLUTION: u8 = 4;
const EXIT_LEDGER: u8 = 5;
const EXIT_BLOWUP: u8 = 10;

#[derive(Parser)]
#[command(name = "inls", about = "Radial solver and classifier for the inhomogeneous NLS with an inverse-power potential", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, required = false)]
    config: Option<PathBuf>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = library default).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Also run classified data forward and compare.
    #[arg(long, global = true)]
    cross_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical exponents, regime, and hypothesis reports.
    Exponents,
    /// Strichartz pair selection at the configured regularity.
    Pairs,
    /// Solve the ground state and update the constants ledger.
    Groundstate,
    /// Hardy–Sobolev extremal constants; updates the ledger.
    Constants,
    /// Evolve the configured initial data.
    Simulate,
    /// Classify the configured initial data.
    Classify,
    /// Classify (optionally cross-check) over amplitude/sigma grids.
    Sweep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("--config is required")]
    MissingConfig,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Variational(#[from] VariationalError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Dichotomy(#[from] DichotomyError),
    #[error(transparent)]
    Evolution(#[from] inls::evolution::EvolutionError),
    #[error("io: {0}")]
    Io(String),
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::MissingConfig | CliError::Config(_) => EXIT_CONFIG,
        CliError::Variational(VariationalError::Field(_)) => EXIT_CONFIG,
        CliError::Variational(_) => EXIT_SOLVER,
        CliError::Ledger(LedgerError::MissingGroundState { .. })
        | CliError::Ledger(LedgerError::MissingExtremal { .. }) => EXIT_LEDGER,
        CliError::Ledger(_) => EXIT_CONFIG,
        CliError::Dichotomy(DichotomyError::Ledger(_)) => EXIT_LEDGER,
        CliError::Dichotomy(DichotomyError::Contradiction(_, _)) => EXIT_SOLVER,
        CliError::Dichotomy(_) => EXIT_CONFIG,
        CliError::Evolution(_) => EXIT_CONFIG,
        CliError::Io(_) => EXIT_CONFIG,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let path = cli.config.as_ref().ok_or(CliError::MissingConfig)?;
    let cfg = RunConfig::load(path)?;
    let out_dir = cli.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(e.to_string()))?;
    write_run_meta(&out_dir)?;

    match cli.command {
        Command::Exponents => cmd_exponents(&cfg, &out_dir),
        Command::Pairs => cmd_pairs(&cfg, &out_dir),
        Command::Groundstate => cmd_groundstate(&cfg, &out_dir),
        Command::Constants => cmd_constants(&cfg, &out_dir),
        Command::Simulate => cmd_simulate(&cfg, &out_dir),
        Command::Classify => cmd_classify(&cfg, &out_dir, cli.cross_check),
        Command::Sweep => cmd_sweep(&cfg, &out_dir, cli.workers, cli.cross_check),
    }
}

/// Wall-clock metadata lives in a sidecar so the primary outputs stay
/// byte-identical across reruns.
fn write_run_meta(out_dir: &Path) -> Result<(), CliError> {
    let meta = json!({
        "unix_time": std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_text(&out_dir.join("run_meta.json"), &format!("{meta:#}\n"))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(e.to_string()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    write_text(path, &format!("{text}\n"))
}

fn print_and_write<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{text}");
    write_text(path, &format!("{text}\n"))
}

fn cmd_exponents(cfg: &RunConfig, out_dir: &Path) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let s = cfg.exponents.s;
    let report = json!({
        "s_c": p.critical_sobolev_exponent(),
        "gamma_c": gamma_c(p.d, p.b, p.sigma).ok(),
        "sigma_c_h1": critical_power(p.d, 1.0, p.b).value(),
        "regime": p.regime(),
        "h1": check_lwp_h1(&p),
        "s": s,
        "hs": check_lwp_hs(&p, s),
    });
    print_and_write(&out_dir.join("exponents.json"), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_pairs(cfg: &RunConfig, out_dir: &Path) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let s = cfg.exponents.s;
    let report = match find_source_pairs(&p, s) {
        Ok(sel) => json!({ "s": s, "selection": sel }),
        Err(e) => json!({ "s": s, "infeasible": e.to_string() }),
    };
    print_and_write(&out_dir.join("pairs.json"), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_groundstate(cfg: &RunConfig, out_dir: &Path) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let gs = solve_ground_state(p.d, p.b, p.sigma, &ShootingConfig::default())?;
    let gn = match gn_constant(&gs) {
        Ok(v) => Some(v),
        Err(VariationalError::WrongRegime(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut ledger = ConstantsLedger::load(&cfg.ledger.path)?;
    ledger.upsert_ground_state(GroundStateEntry { state: gs.clone(), gn_constant: gn });
    ledger.save(&cfg.ledger.path)?;
    let report = json!({
        "d": gs.d, "b": gs.b, "sigma": gs.sigma,
        "amplitude": gs.amplitude,
        "mass": gs.mass, "kinetic": gs.kinetic, "nonlinear": gs.nonlinear,
        "energy": gs.energy(),
        "pohozaev": gs.pohozaev,
        "gn_constant": gn,
        "ledger": cfg.ledger.path,
    });
    print_and_write(&out_dir.join("groundstate.json"), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_constants(cfg: &RunConfig, out_dir: &Path) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let hs = hardy_sobolev_constants(p.d, p.b)?;
    let mut ledger = ConstantsLedger::load(&cfg.ledger.path)?;
    ledger.upsert_extremal(hs.clone());
    ledger.save(&cfg.ledger.path)?;
    print_and_write(&out_dir.join("constants.json"), &hs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let grid = cfg.grid()?;
    let ledger = ConstantsLedger::load(&cfg.ledger.path)?;
    let u0 = cfg.initial_field(&grid, &ledger)?;
    let sim = cfg.simulation()?;
    let trace = simulate(&u0, &p, &sim)?;
    write_text(&out_dir.join("trace.csv"), &trace.to_csv())?;
    let summary = json!({
        "termination": trace.termination,
        "blowup_time": trace.blowup_time,
        "mass_drift": trace.mass_drift(),
        "energy_drift": trace.energy_drift(),
        "boundary_mass_max": trace.boundary_mass_max,
        "samples": trace.samples.len(),
        "warnings": trace.warnings,
    });
    print_and_write(&out_dir.join("summary.json"), &summary)?;
    if cfg.output.snapshots {
        // final state is unavailable from the trace; re-run is wasteful, so
        // snapshots record the initial data (the reproducible input).
        u0.write_to_file(&out_dir.join("initial.field"))
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(match trace.termination {
        Termination::Completed => ExitCode::SUCCESS,
        Termination::BlowupDetected => ExitCode::from(EXIT_BLOWUP),
        Termination::ResolutionLost => ExitCode::from(EXIT_RESOLUTION),
    })
}

fn cmd_classify(cfg: &RunConfig, out_dir: &Path, do_cross: bool) -> Result<ExitCode, CliError> {
    let p = cfg.params()?;
    let grid = cfg.grid()?;
    let ledger = ConstantsLedger::load(&cfg.ledger.path)?;
    let u0 = cfg.initial_field(&grid, &ledger)?;
    if do_cross {
        let sim = cfg.simulation()?;
        let report = cross_check(&u0, &p, &sim, &ledger)?;
        print_and_write(&out_dir.join("verdict.json"), &report)?;
    } else {
        let verdict = evaluate(&u0, &p, &ledger)?;
        print_and_write(&out_dir.join("verdict.json"), &verdict)?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepRow {
    amplitude: f64,
    sigma: f64,
    outcome: Option<Outcome>,
    criterion: Option<String>,
    termination: Option<Termination>,
    consistent: Option<bool>,
    error: Option<String>,
}

fn cmd_sweep(
    cfg: &RunConfig,
    out_dir: &Path,
    workers: Option<usize>,
    do_cross: bool,
) -> Result<ExitCode, CliError> {
    use rayon::prelude::*;

    let base = cfg.params()?;
    let grid = cfg.grid()?;
    let ledger = ConstantsLedger::load(&cfg.ledger.path)?;
    let amplitudes = if cfg.sweep.amplitudes.is_empty() {
        vec![1.0]
    } else {
        cfg.sweep.amplitudes.clone()
    };
    let sigmas = if cfg.sweep.sigmas.is_empty() {
        vec![base.sigma]
    } else {
        cfg.sweep.sigmas.clone()
    };
    let do_cross = do_cross || cfg.sweep.cross_check;

    let points: Vec<(f64, f64)> = amplitudes
        .iter()
        .flat_map(|&a| sigmas.iter().map(move |&s| (a, s)))
        .collect();

    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        let n = workers.unwrap_or(cfg.sweep.workers);
        if n > 0 {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| CliError::Io(e.to_string()))?
    };

    let sim = cfg.simulation()?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|&(amplitude, sigma)| {
                let run = || -> Result<SweepRow, String> {
                    let p = inls::params::ProblemParams::new(
                        base.d, base.c, base.a, base.b, sigma, base.coupling,
                    )
                    .map_err(|e| e.to_string())?;
                    let u0 = inls::field::RadialField::gaussian(&grid, amplitude, 1.0);
                    if do_cross {
                        let r = cross_check(&u0, &p, &sim, &ledger).map_err(|e| e.to_string())?;
                        Ok(SweepRow {
                            amplitude,
                            sigma,
                            outcome: Some(r.verdict.outcome),
                            criterion: r.verdict.criterion,
                            termination: Some(r.termination),
                            consistent: Some(r.consistent),
                            error: None,
                        })
                    } else {
                        let v = evaluate(&u0, &p, &ledger).map_err(|e| e.to_string())?;
                        Ok(SweepRow {
                            amplitude,
                            sigma,
                            outcome: Some(v.outcome),
                            criterion: v.criterion,
                            termination: None,
                            consistent: None,
                            error: None,
                        })
                    }
                };
                run().unwrap_or_else(|msg| SweepRow {
                    amplitude,
                    sigma,
                    outcome: None,
                    criterion: None,
                    termination: None,
                    consistent: None,
                    error: Some(msg),
                })
            })
            .collect()
    });

    write_json(&out_dir.join("sweep.json"), &rows)?;
    let mut csv = String::from("amplitude,sigma,outcome,criterion,termination,consistent,error\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.amplitude,
            r.sigma,
            r.outcome.map(|o| format!("{o:?}")).unwrap_or_default(),
            r.criterion.clone().unwrap_or_default(),
            r.termination.map(|t| format!("{t:?}")).unwrap_or_default(),
            r.consistent.map(|c| c.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ));
    }
    write_text(&out_dir.join("sweep.csv"), &csv)?;
    println!("{} sweep points written to {}", rows.len(), out_dir.display());
    Ok(ExitCode::SUCCESS)
}
