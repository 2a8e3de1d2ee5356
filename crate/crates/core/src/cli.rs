//! Command-line entry point. Exit codes: 0 success or all scenarios
//! passed, 1 a scenario failed, 2 usage or config error, 3 runtime error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::energy::full_report;
use crate::error::{Error, Result};
use crate::experiments::{default_catalog, run_scenarios, SCENARIOS};
use crate::field::{Field, SpectralWorkspace};
use crate::io::{
    build_initial, format_row, parse_config, read_snapshot, write_series, write_snapshot, RunConfig, SeriesRow,
    CONFIG_HELP, CSV_HEADER,
};
use crate::nonlinearity::{analyze_potential, check_kato, coercivity_constants, NonlinearitySpec};
use crate::experiments::series_of;
use crate::solver::{run_from, SolverConfig};

#[derive(Debug, Parser)]
#[command(name = "nlsfarf", version, about = "NLS with non-vanishing far field: solver, diagnostics, scenarios")]
#[command(after_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the initial data described by a config file.
    Run { config: PathBuf },
    /// Continue a run from a snapshot up to the config's solver.t_end.
    Resume { snapshot: PathBuf, config: PathBuf },
    /// Print the energy report of a snapshot as one CSV row.
    Analyze {
        snapshot: PathBuf,
        /// Take the nonlinearity and C0 from this config (default: gp, M = H).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run one scenario by name, or `all`.
    Scenario {
        name: String,
        /// Directory for <name>.csv and <name>.verdict.
        #[arg(long, default_value = "scenario_out")]
        out: PathBuf,
    },
    /// Print structural reports for the built-in nonlinearities.
    Catalog,
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Run { config } => load_config(&config).and_then(|cfg| {
            let field = build_initial(&cfg)?;
            execute(&cfg, &field, 0.0)
        }),
        Command::Resume { snapshot, config } => load_config(&config).and_then(|cfg| {
            let (field, t0) = read_snapshot(&snapshot)?;
            if field.grid() != &cfg.grid {
                return Err(Error::Config { line: 0, msg: "snapshot grid differs from grid block".into() });
            }
            execute(&cfg, &field, t0)
        }),
        Command::Analyze { snapshot, config } => analyze(&snapshot, config.as_deref()),
        Command::Scenario { name, out } => scenario(&name, &out),
        Command::Catalog => catalog(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } => 2,
                _ => 3,
            }
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

fn execute(cfg: &RunConfig, field0: &Field, t0: f64) -> Result<i32> {
    let remaining = cfg.solver.t_end - t0;
    if remaining < cfg.solver.dt * (1.0 - 1e-9) {
        return Err(Error::Precondition(format!("snapshot time {t0} is already at or past t_end = {}", cfg.solver.t_end)));
    }
    let solver = SolverConfig { t_end: remaining, ..cfg.solver.clone() };
    let ws = SpectralWorkspace::new(&cfg.grid);
    let started = Instant::now();
    let traj = run_from(field0, t0, &cfg.nonlinearity, &solver, &ws)?;
    let dir = &cfg.output.directory;
    fs::create_dir_all(dir)?;

    let rows = series_of(&traj);
    let last = rows.len().saturating_sub(1);
    let kept: Vec<SeriesRow> =
        rows.into_iter().enumerate().filter(|(i, _)| i % cfg.output.csv_stride == 0 || *i == last).map(|(_, r)| r).collect();
    let mut csv = fs::File::create(dir.join("run.csv"))?;
    write_series(&mut csv, &kept)?;
    for (t, f) in &traj.snapshots {
        let step = (t / solver.dt).round() as u64;
        write_snapshot(f, *t, &dir.join(format!("snap_{step:010}.snap")))?;
    }
    write_snapshot(&traj.final_field, traj.final_time(), &dir.join("final.snap"))?;

    let first = traj.reports[0];
    let end = traj.reports[traj.reports.len() - 1];
    let mut verdict = String::new();
    let _ = writeln!(verdict, "status = {}", traj.status);
    let _ = writeln!(verdict, "nonlinearity = {}", cfg.nonlinearity);
    let _ = writeln!(verdict, "start_time = {t0:e}");
    let _ = writeln!(verdict, "final_time = {:e}", traj.final_time());
    let _ = writeln!(verdict, "E_initial = {:e}", first.e);
    let _ = writeln!(verdict, "E_final = {:e}", end.e);
    let _ = writeln!(verdict, "sup_E = {:e}", traj.reports.iter().map(|r| r.e).fold(0.0, f64::max));
    let _ = writeln!(verdict, "H_initial = {:e}", first.h);
    let _ = writeln!(verdict, "H_final = {:e}", end.h);
    let _ = writeln!(verdict, "wall_seconds = {:.3}", started.elapsed().as_secs_f64());
    fs::write(dir.join("run.verdict"), verdict)?;
    println!("status={} t={} E={:e} H={:e}", traj.status, traj.final_time(), end.e, end.h);
    Ok(0)
}

fn analyze(snapshot: &Path, config: Option<&Path>) -> Result<i32> {
    let (field, t) = read_snapshot(snapshot)?;
    let (spec, c0) = match config {
        Some(p) => {
            let cfg = load_config(p)?;
            (cfg.nonlinearity, cfg.solver.c0)
        }
        None => (NonlinearitySpec::gp(), None),
    };
    let ws = SpectralWorkspace::new(field.grid());
    let report = full_report(&field, &spec, c0, &ws)?;
    println!("{CSV_HEADER}");
    println!("{}", format_row(&SeriesRow { t, report, status: "snapshot".into() }));
    Ok(0)
}

fn scenario(name: &str, out: &Path) -> Result<i32> {
    let names: Vec<&str> = if name == "all" { SCENARIOS.to_vec() } else { vec![name] };
    if let Some(bad) = names.iter().find(|n| !SCENARIOS.contains(n)) {
        eprintln!("error: unknown scenario '{bad}' (known: {}, all)", SCENARIOS.join(", "));
        return Ok(2);
    }
    let results = run_scenarios(&names, Some(out))?;
    let mut code = 0;
    for (name, r) in names.iter().zip(results) {
        match r {
            Ok(r) => {
                println!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
                if !r.passed {
                    code = code.max(1);
                }
            }
            Err(e) => {
                println!("ERROR {name}: {e}");
                code = 3;
            }
        }
    }
    Ok(code)
}

fn catalog() -> Result<i32> {
    for spec in default_catalog() {
        println!("{spec}");
        let kato = check_kato(&spec, spec.alpha_growth(), 1e4, 2000)?;
        println!(
            "  kato: alpha={} sup|f|/(1+r^a)={:.4e} sup|r f'|/(1+r^a)={:.4e} tail slopes {:.3}/{:.3} passed={}",
            kato.alpha_used,
            kato.max_ratio_f,
            kato.max_ratio_rho_fprime,
            kato.tail_slope_f,
            kato.tail_slope_rho_fprime,
            kato.passed
        );
        match analyze_potential(&spec, 16.0) {
            Ok(s) => {
                println!(
                    "  f'(1)={} defocusing={} roots={:?} rho2={:?} F>0 above 1={} delta={:?} C1={} sup F-={:.4e}",
                    s.f_prime_one,
                    s.defocusing,
                    s.roots_of_f,
                    s.rho2,
                    s.f_positive_above_one,
                    s.convexity_window_delta,
                    s.c1,
                    s.sup_f_minus
                );
                match coercivity_constants(&spec, &s) {
                    Ok(c) => println!("  C0={:.6} C_E={:.6} eta={:.6}", c.c0, c.c_energy, c.eta),
                    Err(e) => println!("  C0: {e}"),
                }
            }
            Err(e) => println!("  structure: {e}"),
        }
    }
    Ok(0)
}
