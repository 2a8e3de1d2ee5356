use super::{ls_slope, relative_drift, require_defocusing, unit, ScenarioResult};
use crate::error::{Error, Result};
use crate::field::{init_random_shaped, Grid, RandomShape, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{run, RunStatus, SolverConfig};

/// Spectral width of the conservation data. Narrower than the solver-wide
/// default so that the finest step resolves the drift below 1e-7.
const ENVELOPE_K0: f64 = 0.5;

/// Hamiltonian drift on a `dt` ladder.
///
/// Random data with `E = 1`; the drift of each run is the largest relative
/// deviation of `H` from its initial value over reports spaced 0.05 apart.
/// Passes when the finest drift is below 1e-7 and the fitted order of
/// drift against `dt` lies in `[1.8, 2.2]`.
pub fn exp_conservation(
    spec: &NonlinearitySpec,
    grid: &Grid,
    seed: u64,
    dts: &[f64],
    t_end: f64,
) -> Result<ScenarioResult> {
    require_defocusing(spec)?;
    if dts.len() < 2 {
        return Err(Error::Precondition("need at least two step sizes".into()));
    }
    let shape = RandomShape { k0: ENVELOPE_K0, ..RandomShape::for_grid(grid) };
    let field0 = init_random_shaped(grid, unit(), 1.0, seed, &shape)?;
    let ws = SpectralWorkspace::new(grid);
    let mut res = ScenarioResult::new("conservation");
    let finest_dt = dts.iter().copied().fold(f64::INFINITY, f64::min);
    let mut drifts = Vec::with_capacity(dts.len());
    let mut finest_drift = f64::NAN;
    let mut all_completed = true;
    for &dt in dts {
        let config = SolverConfig {
            dt,
            t_end,
            report_every: ((0.05 / dt).round() as usize).max(1),
            ..SolverConfig::default()
        };
        let traj = run(&field0, spec, &config, &ws)?;
        all_completed &= traj.status == RunStatus::Completed;
        let drift = relative_drift(&traj.reports, |r| r.h);
        res.set(&format!("drift_dt{dt:e}"), drift);
        drifts.push(drift);
        if dt == finest_dt {
            finest_drift = drift;
            res.record_trajectory(&traj);
        }
    }
    let logs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let logd: Vec<f64> = drifts.iter().map(|d| d.max(f64::MIN_POSITIVE).ln()).collect();
    let order = ls_slope(&logs, &logd);
    res.set("H0", res.series[0].report.h);
    res.set("E0", res.series[0].report.e);
    res.set("finest_dt", finest_dt);
    res.set("finest_drift", finest_drift);
    res.set("order", order);
    res.passed = all_completed && finest_drift < 1e-7 && (1.8..=2.2).contains(&order);
    Ok(res)
}
