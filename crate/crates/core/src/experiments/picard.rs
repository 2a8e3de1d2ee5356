use super::{require_defocusing, unit, ScenarioResult};
use crate::error::Result;
use crate::field::{init_random_bounded, l2_distance, l2_norm, Grid, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{picard_solve, run, SolverConfig};

/// Quadrature node counts of the refinement ladder.
const NODES: [usize; 4] = [5, 9, 17, 33];
const STRANG_STEPS: usize = 2048;

/// Fixed-point solve of the Duhamel formula against fine-step Strang.
///
/// Random data with `E = 1`, both schemes without dealiasing. The Picard
/// solve is repeated with 5, 9, 17 and 33 time nodes; the reported
/// difference is `‖ψ_P(T) - ψ_S(T)‖₂ / ‖ψ_S(T) - c‖₂` at 33 nodes. Passes when that
/// difference is below 1e-6, the iteration converged, and the observed
/// contraction ratio is below 1/3.
pub fn exp_picard_vs_strang(spec: &NonlinearitySpec, grid: &Grid, seed: u64, t: f64) -> Result<ScenarioResult> {
    require_defocusing(spec)?;
    let ws = SpectralWorkspace::new(grid);
    let field0 = init_random_bounded(grid, unit(), 1.0, seed)?;
    let strang_cfg = SolverConfig {
        dt: t / STRANG_STEPS as f64,
        t_end: t,
        dealias: false,
        report_every: STRANG_STEPS,
        blowup_e_threshold: f64::INFINITY,
        ..SolverConfig::default()
    };
    let reference = run(&field0, spec, &strang_cfg, &ws)?;
    let scale = l2_norm(grid, &reference.final_field.perturbation());

    let mut res = ScenarioResult::new("picard");
    res.record_trajectory(&reference);
    res.set("T", t);
    let mut last = None;
    for nodes in NODES {
        let cfg = SolverConfig { picard_quad_nodes: nodes, dealias: false, ..SolverConfig::default() };
        let out = picard_solve(&field0, spec, t, &cfg, &ws)?;
        let diff = l2_distance(grid, out.field.values(), reference.final_field.values()) / scale;
        res.set(&format!("nodes{nodes}.relative_difference"), diff);
        res.set(&format!("nodes{nodes}.contraction_ratio"), out.contraction_ratio);
        res.set(&format!("nodes{nodes}.iterations"), out.iterations as f64);
        last = Some((diff, out));
    }
    let (diff, out) = last.expect("ladder is not empty");
    res.set("relative_difference", diff);
    res.set("contraction_ratio", out.contraction_ratio);
    res.flag("converged", out.converged);
    res.passed = out.converged && diff < 1e-6 && out.contraction_ratio < 1.0 / 3.0;
    Ok(res)
}
