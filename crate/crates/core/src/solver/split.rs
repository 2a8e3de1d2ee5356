use num_complex::Complex64;

use super::picard::picard_solve;
use super::{RunStatus, Scheme, SolverConfig, Trajectory};
use crate::energy::full_report;
use crate::error::{Error, Result};
use crate::field::{Field, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;

/// Free-propagator multiplier `e^{-i|ξ|²t/2}`.
#[inline]
pub(crate) fn propagator(k2: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -0.5 * k2 * t)
}

/// Exact free flow `v ← e^{(i/2)dtΔ} v` on the affine part, optionally
/// projected onto the 2/3-rule band afterwards.
pub fn step_linear(field: &mut Field, dt: f64, ws: &SpectralWorkspace, dealias: bool) {
    apply_multiplier(field, &linear_multiplier(dt, ws, dealias), ws);
}

/// Spectral multiplier of [`step_linear`], with removed modes set to zero.
fn linear_multiplier(dt: f64, ws: &SpectralWorkspace, dealias: bool) -> Vec<Complex64> {
    ws.k_squared()
        .iter()
        .zip(ws.dealias_mask())
        .map(|(&k2, &keep)| if dealias && !keep { Complex64::default() } else { propagator(k2, dt) })
        .collect()
}

fn apply_multiplier(field: &mut Field, multiplier: &[Complex64], ws: &SpectralWorkspace) {
    let c = field.farfield();
    let mut v = field.perturbation();
    ws.forward(&mut v);
    for (z, m) in v.iter_mut().zip(multiplier) {
        *z *= m;
    }
    ws.inverse(&mut v);
    for (psi, z) in field.values_mut().iter_mut().zip(&v) {
        *psi = c + z;
    }
}

/// Exact potential flow `ψ ← e^{-i f(|ψ|²) dt} ψ`.
pub fn step_nonlinear(field: &mut Field, spec: &NonlinearitySpec, dt: f64) -> Result<()> {
    for psi in field.values_mut() {
        *psi *= spec.nonlinear_phase(psi.norm_sqr(), dt)?;
    }
    Ok(())
}

/// One Strang step: half potential flow, full free flow, half potential flow.
///
/// Returns `Ok(false)` when the result contains non-finite values.
pub fn step_strang(
    field: &mut Field,
    spec: &NonlinearitySpec,
    dt: f64,
    ws: &SpectralWorkspace,
    dealias: bool,
) -> Result<bool> {
    step_nonlinear(field, spec, 0.5 * dt)?;
    step_linear(field, dt, ws, dealias);
    step_nonlinear(field, spec, 0.5 * dt)?;
    Ok(field.is_finite())
}

/// Evolve `field0` from `t0` to `t0 + config.t_end`.
///
/// Reports are taken at the start, every `report_every` steps and at the
/// end. Blow-up is checked at report times against the absolute
/// threshold; non-finite values are checked after every step.
///
/// When `t0` is a multiple of `dt`, step indices and times are counted from
/// `t = 0`, so a run resumed from a snapshot reproduces the uninterrupted
/// run exactly. Between report and snapshot points the trailing half
/// potential step of one Strang step is merged with the leading half of
/// the next.
pub fn run_from(
    field0: &Field,
    t0: f64,
    spec: &NonlinearitySpec,
    config: &SolverConfig,
    ws: &SpectralWorkspace,
) -> Result<Trajectory> {
    config.validate()?;
    if field0.grid() != ws.grid() {
        return Err(Error::GridMismatch);
    }
    let dt = config.dt;
    let steps = config.steps();
    let k0 = (t0 / dt).round();
    let aligned = k0 >= 0.0 && (k0 * dt - t0).abs() <= 1e-12 * t0.abs().max(1.0);
    let base = if aligned { k0 as usize } else { 0 };
    let time_at = |k: usize| if aligned { (base + k) as f64 * dt } else { t0 + k as f64 * dt };

    let mut field = field0.clone();
    let mut traj = Trajectory::new(field0);
    let report = |f: &Field| full_report(f, spec, config.c0, ws);
    let first = report(&field)?;
    traj.push(time_at(0), first);
    if config.snapshot_every.is_some() {
        traj.snapshots.push((time_at(0), field.clone()));
    }
    if first.e >= config.blowup_e_threshold {
        traj.status = RunStatus::BlowupFlagged;
        traj.final_field = field;
        return Ok(traj);
    }

    let multiplier = linear_multiplier(dt, ws, config.dealias);
    let mut pending_half = false;
    for k in 1..=steps {
        let abs_k = base + k;
        let at_report = abs_k % config.report_every == 0 || k == steps;
        let at_snapshot = config.snapshot_every.is_some_and(|s| abs_k % s == 0);
        let finite = match config.scheme {
            Scheme::Strang => {
                step_nonlinear(&mut field, spec, if pending_half { dt } else { 0.5 * dt })?;
                apply_multiplier(&mut field, &multiplier, ws);
                pending_half = !(at_report || at_snapshot);
                if !pending_half {
                    step_nonlinear(&mut field, spec, 0.5 * dt)?;
                }
                field.is_finite()
            }
            Scheme::Picard => {
                let out = picard_solve(&field, spec, dt, config, ws)?;
                field = out.field;
                field.is_finite()
            }
        };
        if !finite {
            traj.status = RunStatus::NanDetected;
            traj.final_field = field;
            return Ok(traj);
        }
        let t = time_at(k);
        if at_report {
            let r = report(&field)?;
            traj.push(t, r);
            if !r.e.is_finite() || r.e >= config.blowup_e_threshold {
                traj.status = RunStatus::BlowupFlagged;
                traj.final_field = field;
                return Ok(traj);
            }
        }
        if at_snapshot {
            traj.snapshots.push((t, field.clone()));
        }
    }
    traj.status = RunStatus::Completed;
    traj.final_field = field;
    Ok(traj)
}

/// Evolve from `t = 0`.
pub fn run(field0: &Field, spec: &NonlinearitySpec, config: &SolverConfig, ws: &SpectralWorkspace) -> Result<Trajectory> {
    run_from(field0, 0.0, spec, config, ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{l2_distance, Grid};
    use std::f64::consts::PI;

    #[test]
    fn constants_are_fixed_points() {
        let g = Grid::new(2, &[8.0, 8.0], &[16, 16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let c = Complex64::from_polar(1.0, 0.7);
        let mut f = Field::constant(g, c).unwrap();
        let f0 = f.clone();
        for _ in 0..10 {
            assert!(step_strang(&mut f, &NonlinearitySpec::gp(), 0.1, &ws, true).unwrap());
        }
        assert_eq!(f, f0);
    }

    #[test]
    fn free_flow_of_a_single_mode() {
        let l = 10.0;
        let g = Grid::new(1, &[l], &[64]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let k = 2.0 * PI * 3.0 / l;
        let eps = 1e-3;
        let dt = 0.37;
        let c = Complex64::new(1.0, 0.0);
        let v: Vec<Complex64> = (0..64).map(|i| Complex64::from_polar(eps, k * g.coordinate(0, i))).collect();
        let mut f = Field::from_perturbation(g.clone(), c, &v).unwrap();
        step_linear(&mut f, dt, &ws, false);
        for i in 0..64 {
            let want = c + Complex64::from_polar(eps, k * g.coordinate(0, i) - k * k * dt / 2.0);
            assert!((f.values()[i] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn nonlinear_step_rotates_uniform_density() {
        let g = Grid::new(1, &[10.0], &[8]).unwrap();
        let c = Complex64::new(1.0, 0.0);
        let mut f = Field::new(g, vec![c * 2f64.sqrt(); 8], c).unwrap();
        step_nonlinear(&mut f, &NonlinearitySpec::gp(), 0.3).unwrap();
        let want = Complex64::from_polar(2f64.sqrt(), -0.3);
        assert!(f.values().iter().all(|z| (z - want).norm() < 1e-15));
    }

    #[test]
    fn strang_is_time_reversible() {
        let g = Grid::new(1, &[20.0], &[128]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let v: Vec<Complex64> = (0..128)
            .map(|i| {
                let x = g.coordinate(0, i);
                Complex64::new(0.4 * (-x * x).exp(), 0.2 * x * (-x * x / 2.0).exp())
            })
            .collect();
        let f0 = Field::from_perturbation(g.clone(), Complex64::new(1.0, 0.0), &v).unwrap();
        let mut f = f0.clone();
        let spec = NonlinearitySpec::gp();
        step_strang(&mut f, &spec, 0.01, &ws, false).unwrap();
        step_strang(&mut f, &spec, -0.01, &ws, false).unwrap();
        assert!(l2_distance(&g, f.values(), f0.values()) < 1e-11);
    }
}
