use std::f64::consts::PI;

use super::{unit, ScenarioResult};
use crate::error::{Error, Result};
use crate::field::{init_plane_wave_perturbed, Grid, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{bogoliubov_analyze, measure_mode_growth, run, GrowthFit, SolverConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationalSetup {
    pub eps: f64,
    pub points: usize,
    pub dt: f64,
    pub t_unstable: f64,
    pub t_stable: f64,
    /// Also rerun the unstable case at `2ε` and require the rate to move
    /// by less than 2 %.
    pub check_linearity: bool,
}

impl Default for ModulationalSetup {
    fn default() -> Self {
        Self { eps: 1e-4, points: 128, dt: 1e-3, t_unstable: 15.0, t_stable: 50.0, check_linearity: true }
    }
}

fn fit(
    spec: &NonlinearitySpec,
    grid: &Grid,
    k: f64,
    eps: f64,
    dt: f64,
    t_end: f64,
) -> Result<(GrowthFit, Trajectory)> {
    let ws = SpectralWorkspace::new(grid);
    let field0 = init_plane_wave_perturbed(grid, unit(), eps, &[k])?;
    let stride = ((0.05 / dt).round() as usize).max(1);
    let config = SolverConfig { dt, t_end, report_every: stride, snapshot_every: Some(stride), ..SolverConfig::default() };
    let traj = run(&field0, spec, &config, &ws)?;
    Ok((measure_mode_growth(&traj.snapshots, &[k], &ws)?, traj))
}

fn record(res: &mut ScenarioResult, prefix: &str, f: &GrowthFit) {
    res.set(&format!("{prefix}.rate"), f.rate);
    res.set(&format!("{prefix}.r_squared"), f.r_squared);
    res.set(&format!("{prefix}.window_start"), f.window.0);
    res.set(&format!("{prefix}.window_end"), f.window.1);
    res.set(&format!("{prefix}.points"), f.points as f64);
    res.flag(&format!("{prefix}.saturated"), f.saturated);
}

/// Growth of a perturbed plane wave at the peak of the unstable band.
///
/// The box is `L = 4π/k*` with `k*² = -2f'(1)` for the unstable spec, so
/// the peak mode sits on the lattice. Passes when the stable run's fitted
/// rate has magnitude below 1e-2 and the unstable rate is within 5 % of
/// the linearized prediction.
pub fn exp_modulational(
    stable: &NonlinearitySpec,
    unstable: &NonlinearitySpec,
    setup: &ModulationalSetup,
) -> Result<ScenarioResult> {
    let gs = stable.f_prime(1.0)?;
    let gu = unstable.f_prime(1.0)?;
    if gs <= 0.0 || gu >= 0.0 {
        return Err(Error::Precondition(format!("need f'(1) > 0 for {stable} and < 0 for {unstable}")));
    }
    let k = (-2.0 * gu).sqrt();
    let grid = Grid::new(1, &[4.0 * PI / k], &[setup.points])?;
    let predicted = bogoliubov_analyze(unstable, &[k])?.predicted_rate[0];
    let mut res = ScenarioResult::new("modulational");
    res.set("k", k);
    res.set("eps", setup.eps);
    res.set("predicted_rate", predicted);

    let (u, traj) = fit(unstable, &grid, k, setup.eps, setup.dt, setup.t_unstable)?;
    res.record_trajectory(&traj);
    record(&mut res, "unstable", &u);
    let rel = (u.rate - predicted).abs() / predicted;
    res.set("unstable.relative_error", rel);
    let (s, _) = fit(stable, &grid, k, setup.eps, setup.dt, setup.t_stable)?;
    record(&mut res, "stable", &s);
    let mut passed = s.rate.abs() < 1e-2 && rel < 0.05;

    if setup.check_linearity {
        let (u2, _) = fit(unstable, &grid, k, 2.0 * setup.eps, setup.dt, setup.t_unstable)?;
        let change = (u2.rate - u.rate).abs() / u.rate.abs();
        res.set("unstable_2eps.rate", u2.rate);
        res.set("linearity_change", change);
        passed &= change < 0.02;
    }
    if u.saturated && u.points < 20 {
        res.note(format!("unstable run saturates early: only {} points in the linear window", u.points));
    }
    res.passed = passed;
    Ok(res)
}
