use num_complex::Complex64;

use super::split::propagator;
use super::SolverConfig;
use crate::error::{Error, Result};
use crate::field::{Field, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;
use crate::quadrature::{GAUSS4_NODES, GAUSS4_WEIGHTS};

/// Result of a Duhamel fixed-point solve.
#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub field: Field,
    /// Largest ratio of successive iterate differences.
    pub contraction_ratio: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Size of the last iterate difference.
    pub last_increment: f64,
}

impl PicardOutcome {
    pub fn contracts(&self) -> bool {
        self.contraction_ratio < 1.0
    }
}

/// Increment size below which the iteration stops.
pub const PICARD_TOL: f64 = 1e-10;

/// Solve the Duhamel formulation on `[0, T]` by fixed-point iteration.
///
/// Works in the interaction picture: with `v₀ = ψ₀ - c`,
/// `ψ(s) = c + e^{(i/2)sΔ}(v₀ + w(s))` and
/// `w(t) = -i∫₀ᵗ e^{-(i/2)sΔ} N(ψ(s)) ds`, `N(ψ) = f(|ψ|²)ψ`.
/// Time is split into `picard_quad_nodes - 1` panels; `w` is stored at
/// panel ends, interpolated linearly inside, and each panel integral uses
/// 4-point Gauss–Legendre. Iterate differences are measured as the largest
/// lattice `L²` norm over panel ends.
pub fn picard_solve(
    field0: &Field,
    spec: &NonlinearitySpec,
    t: f64,
    config: &SolverConfig,
    ws: &SpectralWorkspace,
) -> Result<PicardOutcome> {
    if field0.grid() != ws.grid() {
        return Err(Error::GridMismatch);
    }
    if config.picard_quad_nodes < 2 || config.picard_iters < 1 {
        return Err(Error::Precondition("picard needs at least 2 nodes and 1 iteration".into()));
    }
    let grid = ws.grid();
    let c = field0.farfield();
    let n = grid.len();
    let panels = config.picard_quad_nodes - 1;
    let h = t / panels as f64;
    let norm_scale = grid.cell_volume() / n as f64;
    let mut v0 = field0.perturbation();
    ws.forward(&mut v0);
    let k2 = ws.k_squared();
    let mask = ws.dealias_mask();

    let mut w: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); n]; panels + 1];
    let mut prev_increment: Option<f64> = None;
    let mut ratio = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;
    let mut last_increment = f64::INFINITY;
    let mut buf = vec![Complex64::default(); n];

    for _ in 0..config.picard_iters {
        iterations += 1;
        let mut next: Vec<Vec<Complex64>> = Vec::with_capacity(panels + 1);
        next.push(vec![Complex64::default(); n]);
        for j in 0..panels {
            let mut acc = next[j].clone();
            for (&xi, &wt) in GAUSS4_NODES.iter().zip(&GAUSS4_WEIGHTS) {
                let theta = 0.5 * (xi + 1.0);
                let s = (j as f64 + theta) * h;
                for i in 0..n {
                    let wi = w[j][i] * (1.0 - theta) + w[j + 1][i] * theta;
                    buf[i] = (v0[i] + wi) * propagator(k2[i], s);
                }
                ws.inverse(&mut buf);
                for z in buf.iter_mut() {
                    let psi = c + *z;
                    *z = psi * spec.f(psi.norm_sqr())?;
                }
                ws.forward(&mut buf);
                let scale = Complex64::new(0.0, -0.5 * h * wt);
                for i in 0..n {
                    if config.dealias && !mask[i] {
                        continue;
                    }
                    acc[i] += scale * buf[i] * propagator(k2[i], -s);
                }
            }
            next.push(acc);
        }
        let increment = next
            .iter()
            .zip(&w)
            .map(|(a, b)| {
                let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
                (s * norm_scale).sqrt()
            })
            .fold(0.0, f64::max);
        w = next;
        last_increment = increment;
        if let Some(p) = prev_increment {
            if p > 0.0 {
                ratio = ratio.max(increment / p);
            }
        }
        if !increment.is_finite() {
            ratio = f64::INFINITY;
            break;
        }
        if increment < PICARD_TOL {
            converged = true;
            break;
        }
        prev_increment = Some(increment);
    }

    let mut out = w.pop().expect("at least one panel");
    for i in 0..n {
        out[i] = (v0[i] + out[i]) * propagator(k2[i], t);
    }
    ws.inverse(&mut out);
    let values: Vec<Complex64> = out.into_iter().map(|z| c + z).collect();
    // A divergent iterate has no meaningful field: return the far-field
    // constant and mark the ratio infinite.
    let field = if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Field::new(grid.clone(), values, c)?
    } else {
        ratio = f64::INFINITY;
        converged = false;
        Field::constant(grid.clone(), c)?
    };
    Ok(PicardOutcome { field, contraction_ratio: ratio, iterations, converged, last_increment })
}
