use super::{unit, ScenarioResult};
use crate::energy::{eta_support_measure, full_report, EnergyReport};
use crate::error::{Error, Result};
use crate::field::{init_random_shaped, Field, Grid, RandomShape, SpectralWorkspace};
use crate::nonlinearity::{analyze_potential, NonlinearitySpec};

const DELTAS: [f64; 3] = [0.1, 0.25, 0.5];
const DECILES: usize = 10;

/// Largest `E` in each of ten consecutive groups after sorting by `H`.
pub fn decile_envelope(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = sorted.len();
    (0..DECILES)
        .filter_map(|d| {
            let chunk = &sorted[d * n / DECILES..(d + 1) * n / DECILES];
            (!chunk.is_empty()).then(|| {
                chunk.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |(h, e), &(hh, ee)| (h.max(hh), e.max(ee)))
            })
        })
        .collect()
}

/// `E` controlled by `H` for a nonnegative potential.
///
/// Random fields with energy budgets log-spaced over `[1e-4, 4]` are graded
/// by `H`. Passes when the per-decile maximum of `E` is nondecreasing in
/// `H`, the lowest decile has `max E < 10·max H`, and every field satisfies
/// the Chebyshev bound at δ ∈ {0.1, 0.25, 0.5} and `¼·E_mGL ≤ E`.
pub fn exp_coercivity_f(spec: &NonlinearitySpec, grid: &Grid, seed: u64, n_fields: usize) -> Result<ScenarioResult> {
    let structure = analyze_potential(spec, 16.0)?;
    if !structure.defocusing || structure.sup_f_minus > 0.0 {
        return Err(Error::Precondition(format!(
            "{spec}: needs f'(1) > 0 and F >= 0 (sup F- = {})",
            structure.sup_f_minus
        )));
    }
    if n_fields < DECILES {
        return Err(Error::Precondition(format!("need at least {DECILES} fields")));
    }
    let ws = SpectralWorkspace::new(grid);
    let shape = RandomShape { k0: 1.0, ..RandomShape::for_grid(grid) };
    let mut samples = Vec::with_capacity(n_fields);
    let (mut cheb_ok, mut quarter_ok, mut eighth_ok) = (true, true, true);
    let (mut worst_cheb, mut worst_quarter) = (0.0f64, 0.0f64);
    for i in 0..n_fields {
        let budget = 1e-4 * (4e4f64).powf(i as f64 / (n_fields - 1) as f64);
        let field: Field = init_random_shaped(grid, unit(), budget, seed.wrapping_add(i as u64), &shape)?;
        let r: EnergyReport = full_report(&field, spec, None, &ws)?;
        for &delta in &DELTAS {
            let measure = eta_support_measure(&field, delta);
            let bound = r.density_part / (delta * delta);
            cheb_ok &= measure <= bound;
            if bound > 0.0 {
                worst_cheb = worst_cheb.max(measure / bound);
            }
        }
        quarter_ok &= 0.25 * r.e_mgl <= r.e;
        eighth_ok &= 0.125 * r.e_mgl <= r.e;
        if r.e > 0.0 {
            worst_quarter = worst_quarter.max(0.25 * r.e_mgl / r.e);
        }
        samples.push((r.h, r.e));
    }
    let env = decile_envelope(&samples);
    let monotone = env.windows(2).all(|w| w[1].1 >= w[0].1);
    let (low_h, low_e) = env[0];
    let low_ok = low_e < 10.0 * low_h;

    let mut res = ScenarioResult::new("coercivity");
    res.set("fields", n_fields as f64);
    res.set("min_H", samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min));
    res.set("max_E", samples.iter().map(|s| s.1).fold(0.0, f64::max));
    for (d, (h, e)) in env.iter().enumerate() {
        res.set(&format!("decile{d}.max_H"), *h);
        res.set(&format!("decile{d}.max_E"), *e);
    }
    res.flag("envelope_monotone", monotone);
    res.set("lowest_decile_E_over_H", low_e / low_h);
    res.flag("chebyshev_holds", cheb_ok);
    res.set("chebyshev_worst_ratio", worst_cheb);
    res.flag("quarter_mgl_holds", quarter_ok);
    res.set("quarter_mgl_worst_ratio", worst_quarter);
    res.flag("eighth_mgl_holds", eighth_ok);
    res.passed = monotone && low_ok && cheb_ok && quarter_ok;
    Ok(res)
}
