use super::ScenarioResult;
use crate::error::{Error, Result};
use crate::field::{init_black_soliton_1d, l2_distance, l2_norm, Field, Grid, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{run, RunStatus, SolverConfig};

/// Largest pointwise value of `-½Δψ + f(|ψ|²)ψ`.
pub(crate) fn stationary_residual(field: &Field, spec: &NonlinearitySpec, ws: &SpectralWorkspace) -> Result<f64> {
    let lap = ws.laplacian(field);
    let mut worst = 0.0f64;
    for (psi, l) in field.values().iter().zip(&lap) {
        worst = worst.max((-0.5 * l + psi * spec.f(psi.norm_sqr())?).norm());
    }
    Ok(worst)
}

/// Evolve the black soliton and measure how far it moves.
///
/// Passes when the initial residual is below 1e-8 and the largest
/// `‖ψ(t) - ψ(0)‖₂ / ‖ψ(0) - c‖₂` over snapshots every 0.1 is below 1e-5.
pub fn exp_soliton_stationarity(grid: &Grid, spec: &NonlinearitySpec, t_end: f64, dt: f64) -> Result<ScenarioResult> {
    if grid.dim() != 1 || grid.extents()[0] < 60.0 {
        return Err(Error::Precondition("soliton scenario needs a 1D box with L >= 60".into()));
    }
    let ws = SpectralWorkspace::new(grid);
    let field0 = init_black_soliton_1d(grid)?;
    let residual = stationary_residual(&field0, spec, &ws)?;
    let stride = ((0.1 / dt).round() as usize).max(1);
    let config = SolverConfig { dt, t_end, report_every: stride, snapshot_every: Some(stride), ..SolverConfig::default() };
    let traj = run(&field0, spec, &config, &ws)?;
    let scale = l2_norm(grid, &field0.perturbation());
    let distance = |f: &Field| l2_distance(grid, f.values(), field0.values());
    let deviation =
        traj.snapshots.iter().map(|(_, f)| distance(f)).fold(distance(&traj.final_field), f64::max) / scale;
    let mut res = ScenarioResult::new("soliton");
    res.record_trajectory(&traj);
    res.set("points", grid.len() as f64);
    res.set("initial_residual", residual);
    res.set("max_relative_deviation", deviation);
    res.set("E_GL_per_kink", traj.reports[0].e_gl / 2.0);
    res.passed = traj.status == RunStatus::Completed && residual < 1e-8 && deviation < 1e-5;
    Ok(res)
}
