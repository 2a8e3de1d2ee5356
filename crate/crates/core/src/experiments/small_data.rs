use num_complex::Complex64;

use super::{blowup_status, require_defocusing, unit, ScenarioResult};
use crate::energy::full_report;
use crate::error::{Error, Result};
use crate::field::{random_perturbation, scale_while, Field, Grid, RandomShape, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{run, SolverConfig};

/// Largest ratio allowed between the per-ε constants `sup E / ε`.
const K_SPREAD: f64 = 10.0;

/// Energy multiple at which the large-data control counts as blowing up.
pub const LARGE_DATA_FACTOR: f64 = 20.0;

/// Boundedness of `E` for small data.
///
/// For each ε the random direction is scaled as far as both
/// `∫|∇ψ₀|² ≤ ε` and `H(ψ₀) ≤ ε/4` allow. Passes when no run is flagged
/// and the constants `K_ε = sup_t E/ε` agree within a factor of 10, so a
/// single `K = max K_ε` bounds every run.
pub fn exp_small_data(
    spec: &NonlinearitySpec,
    grid: &Grid,
    eps_ladder: &[f64],
    seed: u64,
    t_end: f64,
    dt: f64,
) -> Result<ScenarioResult> {
    require_defocusing(spec)?;
    if eps_ladder.iter().any(|&e| e.is_nan() || e <= 0.0) || eps_ladder.is_empty() {
        return Err(Error::Precondition("eps ladder must be nonempty and positive".into()));
    }
    let ws = SpectralWorkspace::new(grid);
    let v = random_perturbation(grid, seed, &RandomShape::for_grid(grid))?;
    let config = SolverConfig { dt, t_end, report_every: ((0.05 / dt).round() as usize).max(1), ..SolverConfig::default() };
    let mut res = ScenarioResult::new("small_data");
    let mut ks = Vec::with_capacity(eps_ladder.len());
    let mut any_flag = false;
    for (i, &eps) in eps_ladder.iter().enumerate() {
        let field0 = scale_while(grid, unit(), &v, |f| {
            let r = full_report(f, spec, None, &ws)?;
            Ok(r.grad_part <= eps && r.h <= eps / 4.0)
        })?;
        let traj = run(&field0, spec, &config, &ws)?;
        any_flag |= blowup_status(traj.status);
        let sup = traj.reports.iter().map(|r| r.e).fold(0.0, f64::max);
        let k = sup / eps;
        res.set(&format!("eps{eps:e}.grad0"), traj.reports[0].grad_part);
        res.set(&format!("eps{eps:e}.H0"), traj.reports[0].h);
        res.set(&format!("eps{eps:e}.sup_E"), sup);
        res.set(&format!("eps{eps:e}.K"), k);
        ks.push(k);
        if i == 0 {
            res.record_trajectory(&traj);
        }
    }
    let k_max = ks.iter().copied().fold(0.0, f64::max);
    let k_min = ks.iter().copied().fold(f64::INFINITY, f64::min);
    res.set("K", k_max);
    res.set("K_spread", k_max / k_min);
    res.flag("any_flag", any_flag);
    res.passed = !any_flag && k_max.is_finite() && k_max / k_min <= K_SPREAD;
    Ok(res)
}

/// Large real bump `1 + amplitude·e^{-|x|²}` evolved with the flag set at
/// [`LARGE_DATA_FACTOR`]·E(0). Passes when the flag fires.
pub fn large_data_control(spec: &NonlinearitySpec, grid: &Grid, amplitude: f64, t_end: f64) -> Result<ScenarioResult> {
    let ws = SpectralWorkspace::new(grid);
    let field0 = bump(grid, amplitude)?;
    let e0 = full_report(&field0, spec, None, &ws)?.e;
    let config = SolverConfig {
        dt: 1e-4,
        t_end,
        report_every: 10,
        blowup_e_threshold: LARGE_DATA_FACTOR * e0,
        ..SolverConfig::default()
    };
    let traj = run(&field0, spec, &config, &ws)?;
    let mut res = ScenarioResult::new("large_data");
    res.record_trajectory(&traj);
    res.set("E0", e0);
    res.set("threshold", config.blowup_e_threshold);
    res.set("sup_E", traj.reports.iter().map(|r| r.e).fold(0.0, f64::max));
    res.set("stop_time", traj.final_time());
    res.passed = blowup_status(traj.status);
    Ok(res)
}

pub(crate) fn bump(grid: &Grid, amplitude: f64) -> Result<Field> {
    let v: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let x = grid.position(i);
            Complex64::new(amplitude * (-x.iter().map(|a| a * a).sum::<f64>()).exp(), 0.0)
        })
        .collect();
    Field::from_perturbation(grid.clone(), unit(), &v)
}
