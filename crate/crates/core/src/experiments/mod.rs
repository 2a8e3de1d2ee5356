//! Scenario suite: each scenario evolves or samples fields, checks fixed
//! thresholds, and writes a time series plus a key-value verdict.

mod blowup;
mod catalog;
mod coercivity;
mod conservation;
mod gronwall;
mod metric;
mod modulational;
mod picard;
mod small_data;
mod soliton;

pub use blowup::{exp_focusing_blowup, BlowupSetup};
pub use catalog::{default_catalog, exp_catalog};
pub use coercivity::exp_coercivity_f;
pub use conservation::exp_conservation;
pub use gronwall::{exp_gronwall_m, GronwallData};
pub use metric::exp_metric_equivalence;
pub use modulational::{exp_modulational, ModulationalSetup};
pub use picard::exp_picard_vs_strang;
pub use small_data::{exp_small_data, large_data_control};
pub use soliton::exp_soliton_stationarity;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::energy::EnergyReport;
use crate::error::{Error, Result};
use crate::field::Grid;
use crate::io::csv::{write_series, SeriesRow};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{RunStatus, Trajectory};

/// Outcome of one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub name: String,
    pub passed: bool,
    /// Named reals, in insertion order.
    pub metrics: Vec<(String, f64)>,
    /// Free-form remarks copied into the verdict file.
    pub notes: Vec<String>,
    /// Time series of the main run, if the scenario evolves a field.
    pub series: Vec<SeriesRow>,
    pub artifacts: Vec<PathBuf>,
}

impl ScenarioResult {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            metrics: Vec::new(),
            notes: Vec::new(),
            series: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: f64) {
        match self.metrics.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.metrics.push((key.to_string(), value)),
        }
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.set(key, if value { 1.0 } else { 0.0 });
    }

    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Copy the metrics of a sub-result under `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: &ScenarioResult) {
        for (k, v) in &other.metrics {
            self.set(&format!("{prefix}.{k}"), *v);
        }
        self.flag(&format!("{prefix}.passed"), other.passed);
    }

    pub fn record_trajectory(&mut self, traj: &Trajectory) {
        self.series = series_of(traj);
    }

    /// Key-value verdict text.
    pub fn verdict_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "passed = {}", self.passed);
        for (k, v) in &self.metrics {
            let _ = writeln!(out, "{k} = {v:e}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note = {n}");
        }
        out
    }
}

/// One CSV row per report; intermediate rows carry `running`, the last one
/// the final run status.
pub fn series_of(traj: &Trajectory) -> Vec<SeriesRow> {
    let n = traj.reports.len();
    traj.times
        .iter()
        .zip(&traj.reports)
        .enumerate()
        .map(|(i, (&t, r))| SeriesRow {
            t,
            report: *r,
            status: if i + 1 == n { traj.status.to_string() } else { "running".to_string() },
        })
        .collect()
}

pub(crate) fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub(crate) fn require_defocusing(spec: &NonlinearitySpec) -> Result<f64> {
    let g = spec.f_prime(1.0)?;
    if g > 0.0 {
        Ok(g)
    } else {
        Err(Error::Precondition(format!("{spec} is not defocusing (f'(1) = {g})")))
    }
}

pub(crate) fn relative_drift(reports: &[EnergyReport], value: impl Fn(&EnergyReport) -> f64) -> f64 {
    let v0 = value(&reports[0]);
    let scale = v0.abs().max(f64::MIN_POSITIVE);
    reports.iter().map(|r| (value(r) - v0).abs() / scale).fold(0.0, f64::max)
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub(crate) fn blowup_status(status: RunStatus) -> bool {
    status != RunStatus::Completed
}

/// Names accepted by [`run_scenario`], in suite order.
pub const SCENARIOS: [&str; 10] = [
    "catalog",
    "conservation",
    "soliton",
    "modulational",
    "metric_equivalence",
    "coercivity",
    "gronwall",
    "small_data",
    "picard",
    "focusing_blowup",
];

/// Run one scenario with its shipped defaults, negative controls included.
pub fn run_scenario(name: &str) -> Result<ScenarioResult> {
    match name {
        "catalog" => exp_catalog(&default_catalog()),
        "conservation" => default_conservation(),
        "soliton" => default_soliton(),
        "modulational" => default_modulational(),
        "metric_equivalence" => default_metric(),
        "coercivity" => default_coercivity(),
        "gronwall" => default_gronwall(),
        "small_data" => default_small_data(),
        "picard" => default_picard(),
        "focusing_blowup" => default_blowup(),
        other => Err(Error::Precondition(format!(
            "unknown scenario '{other}' (known: {})",
            SCENARIOS.join(", ")
        ))),
    }
}

/// Worker count from `NLSFARF_THREADS` (unset or 0 means automatic).
pub fn thread_cap() -> Result<usize> {
    match std::env::var("NLSFARF_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("NLSFARF_THREADS = '{s}' is not a thread count"))),
    }
}

/// Run scenarios in parallel and, when `out_dir` is given, write their
/// artifacts there. Results come back in the order of `names`.
pub fn run_scenarios(names: &[&str], out_dir: Option<&Path>) -> Result<Vec<Result<ScenarioResult>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }
    Ok(pool.install(|| {
        names
            .par_iter()
            .map(|name| {
                let mut r = run_scenario(name)?;
                if let Some(dir) = out_dir {
                    write_artifacts(&mut r, dir)?;
                }
                Ok(r)
            })
            .collect()
    }))
}

/// Write `<name>.csv` and `<name>.verdict` into `dir`.
pub fn write_artifacts(result: &mut ScenarioResult, dir: &Path) -> Result<()> {
    let csv = dir.join(format!("{}.csv", result.name));
    let verdict = dir.join(format!("{}.verdict", result.name));
    let mut file = fs::File::create(&csv)?;
    write_series(&mut file, &result.series)?;
    result.artifacts = vec![csv.clone(), verdict.clone()];
    let mut text = result.verdict_text();
    for a in &result.artifacts {
        let _ = writeln!(text, "artifact = {}", a.display());
    }
    fs::write(&verdict, text)?;
    Ok(())
}

fn default_conservation() -> Result<ScenarioResult> {
    let grid = Grid::cube(2, 32.0, 128)?;
    let gp = NonlinearitySpec::gp();
    let mut main = exp_conservation(&gp, &grid, 7, &[4e-3, 2e-3, 1e-3], 5.0)?;
    let control = exp_conservation(&gp, &grid, 7, &[2.0, 1.0, 0.5], 6.0)?;
    main.absorb("control_large_dt", &control);
    main.note("negative control: dt ladder {2, 1, 0.5} must fail the drift/order check");
    main.passed = main.passed && !control.passed;
    Ok(main)
}

fn default_soliton() -> Result<ScenarioResult> {
    let gp = NonlinearitySpec::gp();
    let mut main = exp_soliton_stationarity(&Grid::new(1, &[60.0], &[1024])?, &gp, 10.0, 1e-3)?;
    let coarse = exp_soliton_stationarity(&Grid::new(1, &[60.0], &[512])?, &gp, 10.0, 1e-3)?;
    let control =
        exp_soliton_stationarity(&Grid::new(1, &[60.0], &[1024])?, &NonlinearitySpec::power(-1.0, 1.0)?, 10.0, 1e-3)?;
    main.absorb("n512", &coarse);
    main.absorb("control_focusing", &control);
    main.note("negative control: power(-1,1) must not keep the profile stationary");
    main.passed = main.passed && coarse.passed && !control.passed;
    Ok(main)
}

fn default_modulational() -> Result<ScenarioResult> {
    let setup = ModulationalSetup::default();
    let mut main = exp_modulational(&NonlinearitySpec::gp(), &NonlinearitySpec::power(-1.0, 1.0)?, &setup)?;
    let control = exp_modulational(
        &NonlinearitySpec::gp(),
        &NonlinearitySpec::power(-1.0, 1.0)?,
        &ModulationalSetup { eps: 1e-2, check_linearity: false, ..setup },
    )?;
    let saturated = control.metric("unstable.saturated").unwrap_or(0.0) == 1.0;
    main.absorb("control_eps1e-2", &control);
    main.note("negative control: eps = 1e-2 must hit the saturation level inside the record");
    main.passed = main.passed && saturated;
    Ok(main)
}

fn default_metric() -> Result<ScenarioResult> {
    let grid = Grid::cube(2, 16.0, 32)?;
    let mut main = exp_metric_equivalence(&grid, 1.0, 100, 101)?;
    let control = exp_metric_equivalence(&grid, 10.0, 100, 101)?;
    let grows = control.metric("c_star").unwrap_or(0.0) >= main.metric("c_star").unwrap_or(f64::INFINITY);
    main.absorb("control_r10", &control);
    main.flag("control_r10.c_star_grows", grows);
    main.note("control: R = 10 must give a constant at least as large as R = 1");
    main.passed = main.passed && grows;
    Ok(main)
}

fn default_coercivity() -> Result<ScenarioResult> {
    let mut main = exp_coercivity_f(&NonlinearitySpec::gp(), &Grid::cube(2, 16.0, 64)?, 21, 100)?;
    let power = exp_coercivity_f(&NonlinearitySpec::power(1.0, 1.5)?, &Grid::cube(3, 8.0, 32)?, 22, 100)?;
    main.absorb("power1.5_3d", &power);
    let rejected =
        exp_coercivity_f(&NonlinearitySpec::competing(1.0, 2.5, 1.5, 0.5)?, &Grid::cube(2, 16.0, 32)?, 23, 10)
            .is_err();
    main.flag("control_negative_f.rejected", rejected);
    main.note("negative control: competing(1,2.5,1.5,0.5) has F < 0 somewhere and must be rejected");
    main.passed = main.passed && power.passed && rejected;
    Ok(main)
}

fn default_gronwall() -> Result<ScenarioResult> {
    let spec = NonlinearitySpec::competing(1.0, 1.2, 1.5, 0.5)?;
    let grid = Grid::cube(3, 16.0, 64)?;
    let mut main = exp_gronwall_m(&spec, &grid, None, GronwallData::Random { energy: 1.0, seed: 5 }, 5e-3, 5.0)?;
    let hole = GronwallData::Hole { depth: 0.9, radius: 3.0 };
    let deep = exp_gronwall_m(&spec, &grid, None, hole, 5e-3, 5.0)?;
    let deep_h = exp_gronwall_m(&spec, &grid, Some(0.0), hole, 5e-3, 5.0)?;
    let gp = exp_gronwall_m(
        &NonlinearitySpec::gp(),
        &Grid::cube(3, 16.0, 32)?,
        Some(0.0),
        GronwallData::Random { energy: 1.0, seed: 5 },
        5e-3,
        5.0,
    )?;
    main.absorb("deep_hole", &deep);
    main.absorb("control_c0_zero", &deep_h);
    main.absorb("gp_c0_zero", &gp);
    let gp_flat = gp.metric("c_hat").unwrap_or(f64::INFINITY) < 1e-3;
    main.note("negative control: with C0 = 0 the bound E <= C*M must fail on the deep-hole data");
    main.note("the Re v in L2 hypothesis holds trivially on a periodic lattice and is not tested");
    main.note("global existence is checked as bounded E with no blow-up flag over a finite horizon");
    main.passed = main.passed && deep.passed && gp_flat && deep_h.metric("energy_bound_holds") == Some(0.0);
    Ok(main)
}

fn default_small_data() -> Result<ScenarioResult> {
    let spec = NonlinearitySpec::competing(1.0, 0.5, 1.0, 1.5)?;
    let grid = Grid::cube(2, 16.0, 64)?;
    let mut main = exp_small_data(&spec, &grid, &[1e-2, 1e-3, 1e-4], 11, 10.0, 1e-3)?;
    let control = large_data_control(&spec, &grid, 3.0, 1.0)?;
    main.absorb("control_large", &control);
    main.note("negative control: a large bump must trip the blow-up flag");
    main.note("global existence is checked as bounded E with no blow-up flag over a finite horizon");
    main.passed = main.passed && control.passed;
    Ok(main)
}

fn default_picard() -> Result<ScenarioResult> {
    let gp = NonlinearitySpec::gp();
    let mut main = exp_picard_vs_strang(&gp, &Grid::cube(2, 16.0, 32)?, 31, 0.05)?;
    let saturated = exp_picard_vs_strang(&NonlinearitySpec::saturated(1.0)?, &Grid::cube(1, 32.0, 128)?, 32, 0.05)?;
    let control = exp_picard_vs_strang(&gp, &Grid::cube(2, 16.0, 32)?, 31, 5.0)?;
    main.absorb("saturated_1d", &saturated);
    main.absorb("control_t5", &control);
    let fails = control.metric("contraction_ratio").is_none_or(|r| r >= 1.0 / 3.0)
        || control.metric("converged") == Some(0.0);
    main.flag("control_t5.contraction_fails", fails);
    main.note("negative control: at T = 5 the fixed-point map must stop contracting");
    main.passed = main.passed && saturated.passed && fails;
    Ok(main)
}

fn default_blowup() -> Result<ScenarioResult> {
    let setup = BlowupSetup::default();
    let mut main = exp_focusing_blowup(&NonlinearitySpec::power(-1.0, 2.0)?, &setup)?;
    let control = exp_focusing_blowup(&NonlinearitySpec::gp(), &setup)?;
    main.absorb("control_gp", &control);
    main.note("negative control: the same bump under gp must finish without a flag");
    main.note("blow-up is flagged when E exceeds a multiple of E(0), not proven");
    main.passed = main.passed && !control.passed;
    Ok(main)
}
