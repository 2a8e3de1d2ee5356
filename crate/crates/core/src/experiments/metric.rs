use num_complex::Complex64;

use super::{unit, ScenarioResult};
use crate::energy::{energy_e, metric_de, metric_dgl};
use crate::error::{Error, Result};
use crate::field::{largest_scale, random_perturbation, Field, Grid, RandomShape, SpectralWorkspace};

/// Ratio `d_E / d_GL`, with `0/0 = 1`.
pub fn metric_ratio(de: f64, dgl: f64) -> f64 {
    if de == 0.0 && dgl == 0.0 {
        1.0
    } else {
        de / dgl
    }
}

/// Ensemble members drawn on `coarse` and, with the same band-limited
/// coefficients and scale, on `fine`.
fn member(coarse: &Grid, fine: &Grid, budget: f64, seed: u64, ws: &SpectralWorkspace) -> Result<(Field, Field)> {
    let shape = RandomShape { k0: 1.0, ..RandomShape::for_grid(coarse) };
    let v = random_perturbation(coarse, seed, &shape)?;
    let s = largest_scale(coarse, unit(), &v, |f| Ok(energy_e(f, ws) <= budget))?;
    let build = |g: &Grid, v: Vec<Complex64>| {
        let w: Vec<Complex64> = v.into_iter().map(|z| z * s).collect();
        Field::from_perturbation(g.clone(), unit(), &w)
    };
    Ok((build(coarse, v)?, build(fine, random_perturbation(fine, seed, &shape)?)?))
}

fn c_star(pairs: &[(Field, Field)], ws: &SpectralWorkspace) -> Result<(f64, f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (a, b) in pairs {
        let r = metric_ratio(metric_de(a, b, ws)?.value, metric_dgl(a, b, ws)?.value);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((hi.max(1.0 / lo), lo, hi))
}

/// Equivalence of `d_E` and `d_GL` on a random ensemble with `E ≤ R`.
///
/// `C*` is the smallest constant with `d_GL/C* ≤ d_E ≤ C*·d_GL` over all
/// pairs. Passes when `C*` is finite on `grid` and changes by less than
/// 10 % when the same band-limited ensemble is sampled on the doubled grid.
pub fn exp_metric_equivalence(grid: &Grid, r_budget: f64, n_pairs: usize, seed: u64) -> Result<ScenarioResult> {
    if n_pairs < 100 {
        return Err(Error::Precondition(format!("need at least 100 pairs, got {n_pairs}")));
    }
    let fine = grid.refined(2)?;
    let ws = SpectralWorkspace::new(grid);
    let ws_fine = SpectralWorkspace::new(&fine);
    let mut coarse_pairs = Vec::with_capacity(n_pairs);
    let mut fine_pairs = Vec::with_capacity(n_pairs);
    let mut e_max = 0.0f64;
    for p in 0..n_pairs as u64 {
        let (a, a_fine) = member(grid, &fine, r_budget, seed.wrapping_add(2 * p), &ws)?;
        let (b, b_fine) = member(grid, &fine, r_budget, seed.wrapping_add(2 * p + 1), &ws)?;
        e_max = e_max.max(energy_e(&a, &ws)).max(energy_e(&b, &ws));
        coarse_pairs.push((a, b));
        fine_pairs.push((a_fine, b_fine));
    }
    let (c, lo, hi) = c_star(&coarse_pairs, &ws)?;
    let (c_fine, lo_fine, hi_fine) = c_star(&fine_pairs, &ws_fine)?;
    let change = (c_fine - c).abs() / c;
    let mut res = ScenarioResult::new("metric_equivalence");
    res.set("R", r_budget);
    res.set("pairs", n_pairs as f64);
    res.set("max_E", e_max);
    res.set("c_star", c);
    res.set("min_ratio", lo);
    res.set("max_ratio", hi);
    res.set("c_star_fine", c_fine);
    res.set("min_ratio_fine", lo_fine);
    res.set("max_ratio_fine", hi_fine);
    res.set("refinement_change", change);
    res.note("X1+H1 summand evaluated with the canonical chi splitting (an upper bound of the infimum)");
    res.passed = c.is_finite() && c_fine.is_finite() && change < 0.1;
    Ok(res)
}
