use num_complex::Complex64;

use super::cutoff::{h1_norm, split_by_chi, x1_norm};
use crate::error::{Error, Result};
use crate::field::{l2_distance, Field, SpectralWorkspace};

/// A metric evaluated with the canonical cutoff splitting, plus a lower bound.
///
/// The `X¹+H¹` norm is an infimum over all splittings. `value` uses the
/// split `w = χ(w)w + (1-χ(w))w` of the difference, an upper bound;
/// `lower_bound` replaces that summand by `‖∇w‖₂`, which no splitting can beat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub lower_bound: f64,
}

/// Canonical-split value of `‖w‖_{X¹+H¹}` and the gradient lower bound.
pub fn sum_space_norm(ws: &SpectralWorkspace, w: &[Complex64]) -> (f64, f64) {
    let (inf, q, count) = split_by_chi(w);
    let grid = ws.grid();
    let upper = if count == 0 { x1_norm(ws, &inf) } else { x1_norm(ws, &inf) + h1_norm(grid, ws, &q) };
    (upper, ws.grad_norm_sq_of(w).sqrt())
}

fn difference(f1: &Field, f2: &Field) -> Result<Vec<Complex64>> {
    if f1.grid() != f2.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(f1.values().iter().zip(f2.values()).map(|(a, b)| a - b).collect())
}

fn with_modulus_term(
    f1: &Field,
    f2: &Field,
    ws: &SpectralWorkspace,
    modulus: impl Fn(Complex64) -> f64,
) -> Result<MetricValue> {
    let w = difference(f1, f2)?;
    let (upper, lower) = sum_space_norm(ws, &w);
    let s: f64 = f1.values().iter().zip(f2.values()).map(|(&a, &b)| (modulus(a) - modulus(b)).powi(2)).sum();
    let term = (s * f1.grid().cell_volume()).sqrt();
    Ok(MetricValue { value: upper + term, lower_bound: lower + term })
}

/// `d_E = ‖ψ₁-ψ₂‖_{X¹+H¹} + ‖|ψ₁|-|ψ₂|‖₂`.
pub fn metric_de(f1: &Field, f2: &Field, ws: &SpectralWorkspace) -> Result<MetricValue> {
    with_modulus_term(f1, f2, ws, |z| z.norm())
}

/// `d_GL = ‖ψ₁-ψ₂‖_{X¹+H¹} + ‖|ψ₁|²-|ψ₂|²‖₂`.
pub fn metric_dgl(f1: &Field, f2: &Field, ws: &SpectralWorkspace) -> Result<MetricValue> {
    with_modulus_term(f1, f2, ws, |z| z.norm_sqr())
}

/// Far-field constants and affine parts of two fields.
#[derive(Debug, Clone)]
pub struct MetricInputs3D {
    pub c1: Complex64,
    pub c2: Complex64,
    pub v1: Vec<Complex64>,
    pub v2: Vec<Complex64>,
}

impl MetricInputs3D {
    pub fn from_fields(f1: &Field, f2: &Field) -> Result<Self> {
        if f1.grid() != f2.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { c1: f1.farfield(), c2: f2.farfield(), v1: f1.perturbation(), v2: f2.perturbation() })
    }
}

/// Affine metric `|c₁-c₂| + ‖∇(v₁-v₂)‖₂ + ‖|v₁|²+2Re(c̄₁v₁) - |v₂|²-2Re(c̄₂v₂)‖₂`.
pub fn metric_delta3d(inputs: &MetricInputs3D, ws: &SpectralWorkspace) -> Result<f64> {
    for c in [inputs.c1, inputs.c2] {
        if (c.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidField(format!("far-field constant {c} is not of unit modulus")));
        }
    }
    let grid = ws.grid();
    if inputs.v1.len() != grid.len() || inputs.v2.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    if grid.dim() != 3 {
        log::warn!("affine metric evaluated in dimension {}", grid.dim());
    }
    let dv: Vec<Complex64> = inputs.v1.iter().zip(&inputs.v2).map(|(a, b)| a - b).collect();
    let grad = ws.grad_norm_sq_of(&dv).sqrt();
    let q = |c: Complex64, v: Complex64| v.norm_sqr() + 2.0 * (c.conj() * v).re;
    let s: f64 = inputs
        .v1
        .iter()
        .zip(&inputs.v2)
        .map(|(&a, &b)| (q(inputs.c1, a) - q(inputs.c2, b)).powi(2))
        .sum();
    Ok((inputs.c1 - inputs.c2).norm() + grad + (s * grid.cell_volume()).sqrt())
}

/// Plain lattice `L²` distance of two fields.
pub fn l2_field_distance(f1: &Field, f2: &Field) -> Result<f64> {
    if f1.grid() != f2.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(l2_distance(f1.grid(), f1.values(), f2.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    fn bump(g: &Grid, amp: f64, phase: f64) -> Field {
        let v: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::from_polar(amp * (-(g.coordinate(0, i)).powi(2)).exp(), phase))
            .collect();
        Field::from_perturbation(g.clone(), Complex64::new(1.0, 0.0), &v).unwrap()
    }

    #[test]
    fn identical_fields_have_zero_distance() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let f = bump(&g, 0.5, 1.0);
        assert_eq!(metric_de(&f, &f, &ws).unwrap().value, 0.0);
        assert_eq!(metric_dgl(&f, &f, &ws).unwrap().value, 0.0);
        let inp = MetricInputs3D::from_fields(&f, &f).unwrap();
        assert_eq!(metric_delta3d(&inp, &ws).unwrap(), 0.0);
    }

    #[test]
    fn metrics_are_symmetric() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let (a, b) = (bump(&g, 0.5, 1.0), bump(&g, 3.0, -0.4));
        assert_eq!(metric_de(&a, &b, &ws).unwrap(), metric_de(&b, &a, &ws).unwrap());
        assert_eq!(metric_dgl(&a, &b, &ws).unwrap(), metric_dgl(&b, &a, &ws).unwrap());
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g1 = Grid::new(1, &[10.0], &[64]).unwrap();
        let g2 = Grid::new(1, &[10.0], &[32]).unwrap();
        let ws = SpectralWorkspace::new(&g1);
        assert!(matches!(metric_de(&bump(&g1, 1.0, 0.0), &bump(&g2, 1.0, 0.0), &ws), Err(Error::GridMismatch)));
    }

    #[test]
    fn shifted_real_part() {
        // Same c, v₂ = v₁ + a: third term is ‖2a Re(c̄) + a² + 2a Re v₁‖ for real a and real c.
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let c = Complex64::new(1.0, 0.0);
        let v1: Vec<Complex64> =
            (0..64).map(|i| Complex64::new(0.3 * (g.coordinate(0, i)).sin(), 0.1)).collect();
        let a = 0.2;
        let v2: Vec<Complex64> = v1.iter().map(|z| z + a).collect();
        let inp = MetricInputs3D { c1: c, c2: c, v1: v1.clone(), v2 };
        let got = metric_delta3d(&inp, &ws).unwrap();
        let s: f64 = v1.iter().map(|z| (2.0 * a + a * a + 2.0 * a * z.re).powi(2)).sum();
        let want = (s * g.cell_volume()).sqrt();
        assert!((got - want).abs() < 1e-12 * want);
    }
}
