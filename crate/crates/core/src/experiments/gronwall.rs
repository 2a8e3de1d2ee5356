use num_complex::Complex64;

use super::{unit, ScenarioResult};
use crate::error::{Error, Result};
use crate::field::{init_random_bounded, Field, Grid, SpectralWorkspace};
use crate::nonlinearity::{analyze_potential, coercivity_constants, NonlinearitySpec};
use crate::solver::{run, RunStatus, SolverConfig};

/// Initial data for the Gronwall scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GronwallData {
    /// Random field with `E` equal to the budget.
    Random { energy: f64, seed: u64 },
    /// Real dip `1 - depth·exp(-(|x|/radius)⁴)`, flat at the bottom so a
    /// sizable volume sits at density `(1 - depth)²`.
    Hole { depth: f64, radius: f64 },
}

impl GronwallData {
    pub fn build(&self, grid: &Grid) -> Result<Field> {
        match *self {
            GronwallData::Random { energy, seed } => init_random_bounded(grid, unit(), energy, seed),
            GronwallData::Hole { depth, radius } => {
                let v: Vec<Complex64> = (0..grid.len())
                    .map(|i| {
                        let x = grid.position(i);
                        let r2: f64 = x.iter().map(|a| a * a).sum::<f64>() / (radius * radius);
                        Complex64::new(-depth * (-r2 * r2).exp(), 0.0)
                    })
                    .collect();
                Field::from_perturbation(grid.clone(), unit(), &v)
            }
        }
    }
}

/// Growth of `M` along the flow.
///
/// `c0 = None` uses the constant derived from the potential structure. The
/// fitted rate is `Ĉ = max_t max(0, ln(M(t)/M(0)))/t`, the smallest rate
/// with `M(t) ≤ e^{Ĉt}M(0)` at every report. Passes when no flag is raised,
/// `Ĉ` is finite, and `E ≤ C_E·M` holds at every report.
pub fn exp_gronwall_m(
    spec: &NonlinearitySpec,
    grid: &Grid,
    c0: Option<f64>,
    data: GronwallData,
    dt: f64,
    t_end: f64,
) -> Result<ScenarioResult> {
    let structure = analyze_potential(spec, 16.0)?;
    if !structure.defocusing {
        return Err(Error::Precondition(format!("{spec} is not defocusing")));
    }
    let constants = coercivity_constants(spec, &structure)?;
    let c0 = c0.unwrap_or(constants.c0);
    let ws = SpectralWorkspace::new(grid);
    let field0 = data.build(grid)?;
    let config = SolverConfig {
        dt,
        t_end,
        report_every: ((0.05 / dt).round() as usize).max(1),
        c0: Some(c0),
        ..SolverConfig::default()
    };
    let traj = run(&field0, spec, &config, &ws)?;
    let m0 = traj.reports[0].m;
    let c_hat = traj
        .times
        .iter()
        .zip(&traj.reports)
        .skip(1)
        .map(|(&t, r)| (r.m / m0).ln().max(0.0) / t)
        .fold(0.0, f64::max);
    let envelope_ok = traj.times.iter().zip(&traj.reports).all(|(&t, r)| r.m <= (c_hat * t).exp() * m0 * (1.0 + 1e-12));
    let worst = traj.reports.iter().map(|r| r.e / (constants.c_energy * r.m)).fold(f64::NEG_INFINITY, f64::max);
    let bound_ok = traj.reports.iter().all(|r| r.m > 0.0 && r.e <= constants.c_energy * r.m);
    let min_rho = field0.values().iter().map(|z| z.norm_sqr()).fold(f64::INFINITY, f64::min);

    let mut res = ScenarioResult::new("gronwall");
    res.record_trajectory(&traj);
    res.set("c0", c0);
    res.set("c_energy", constants.c_energy);
    res.set("min_initial_density", min_rho);
    res.set("E0", traj.reports[0].e);
    res.set("M0", m0);
    res.set("c_hat", c_hat);
    res.flag("envelope_holds", envelope_ok);
    res.set("max_E_over_CM", worst);
    res.flag("energy_bound_holds", bound_ok);
    res.set("H_relative_drift", super::relative_drift(&traj.reports, |r| r.h));
    res.passed = traj.status == RunStatus::Completed && c_hat.is_finite() && envelope_ok && bound_ok;
    Ok(res)
}
