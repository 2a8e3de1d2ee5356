use super::small_data::{bump, LARGE_DATA_FACTOR};
use super::{blowup_status, ScenarioResult};
use crate::energy::full_report;
use crate::error::Result;
use crate::field::{Grid, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{run, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupSetup {
    pub extent: f64,
    pub points: usize,
    pub amplitude: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl Default for BlowupSetup {
    fn default() -> Self {
        Self { extent: 16.0, points: 64, amplitude: 3.0, dt: 1e-4, t_end: 0.5 }
    }
}

/// A large 2D bump `1 + a·e^{-|x|²}`. Passes when the run is flagged,
/// with the threshold at 20·E(0).
pub fn exp_focusing_blowup(spec: &NonlinearitySpec, setup: &BlowupSetup) -> Result<ScenarioResult> {
    let grid = Grid::cube(2, setup.extent, setup.points)?;
    let ws = SpectralWorkspace::new(&grid);
    let field0 = bump(&grid, setup.amplitude)?;
    let e0 = full_report(&field0, spec, None, &ws)?.e;
    let config = SolverConfig {
        dt: setup.dt,
        t_end: setup.t_end,
        report_every: 10,
        blowup_e_threshold: LARGE_DATA_FACTOR * e0,
        ..SolverConfig::default()
    };
    let traj = run(&field0, spec, &config, &ws)?;
    let mut res = ScenarioResult::new("focusing_blowup");
    res.record_trajectory(&traj);
    res.set("E0", e0);
    res.set("threshold", config.blowup_e_threshold);
    res.set("sup_E", traj.reports.iter().map(|r| r.e).fold(0.0, f64::max));
    res.set("stop_time", traj.final_time());
    res.set("H_relative_drift", super::relative_drift(&traj.reports, |r| r.h));
    res.passed = blowup_status(traj.status);
    Ok(res)
}
