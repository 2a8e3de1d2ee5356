use num_complex::Complex64;

use crate::field::{l2_norm, Field, Grid, SpectralWorkspace};

/// Smooth radial cutoff: 1 on `|z| ≤ 2`, `exp(1 - 1/(1-t²))` with `t = |z|-2`
/// on `(2, 3)`, 0 from 3 on.
pub fn chi(modulus: f64) -> f64 {
    if modulus <= 2.0 {
        1.0
    } else if modulus >= 3.0 {
        0.0
    } else {
        let t = modulus - 2.0;
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// `ψ = ψ_∞ + ψ_q` with `ψ_∞ = χ(ψ)ψ` bounded and `ψ_q` supported where `|ψ| > 2`.
#[derive(Debug, Clone)]
pub struct ChiDecomposition {
    pub psi_inf: Field,
    pub psi_q: Vec<Complex64>,
    pub support_measure_q: f64,
}

/// Split an array by the cutoff; returns `(χ(w)w, w - χ(w)w, #sites with χ < 1)`.
pub fn split_by_chi(values: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>, usize) {
    let mut inf = Vec::with_capacity(values.len());
    let mut q = Vec::with_capacity(values.len());
    let mut count = 0;
    for &z in values {
        let x = chi(z.norm());
        if x == 1.0 {
            inf.push(z);
            q.push(Complex64::default());
        } else {
            count += 1;
            let a = z * x;
            inf.push(a);
            q.push(z - a);
        }
    }
    (inf, q, count)
}

pub fn decompose_chi(field: &Field) -> ChiDecomposition {
    let (inf, q, count) = split_by_chi(field.values());
    let grid = field.grid().clone();
    let measure = count as f64 * grid.cell_volume();
    let psi_inf = Field::new(grid, inf, field.farfield()).expect("cutoff keeps values finite");
    ChiDecomposition { psi_inf, psi_q: q, support_measure_q: measure }
}

/// Lattice measure of `{||ψ|-1| > δ}`.
pub fn eta_support_measure(field: &Field, delta: f64) -> f64 {
    let n = field.values().iter().filter(|z| (z.norm() - 1.0).abs() > delta).count();
    n as f64 * field.grid().cell_volume()
}

/// `‖v‖_{H¹} = (‖v‖₂² + ‖∇v‖₂²)^{1/2}`.
pub fn h1_norm(grid: &Grid, ws: &SpectralWorkspace, v: &[Complex64]) -> f64 {
    (l2_norm(grid, v).powi(2) + ws.grad_norm_sq_of(v)).sqrt()
}

/// Zhidkov norm `‖v‖_∞ + ‖∇v‖₂`.
pub fn x1_norm(ws: &SpectralWorkspace, v: &[Complex64]) -> f64 {
    let sup = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    sup + ws.grad_norm_sq_of(v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_profile() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(2.0), 1.0);
        assert_eq!(chi(3.0), 0.0);
        assert!(chi(2.5) > 0.0 && chi(2.5) < 1.0);
        assert!(chi(2.999_999) < 1e-10);
    }

    #[test]
    fn bounded_field_has_no_q_part() {
        let g = Grid::new(1, &[10.0], &[32]).unwrap();
        let v: Vec<Complex64> = (0..32).map(|i| Complex64::new(0.5 * (i as f64 * 0.3).sin(), 0.0)).collect();
        let f = Field::from_perturbation(g, Complex64::new(1.0, 0.0), &v).unwrap();
        let d = decompose_chi(&f);
        assert!(d.psi_q.iter().all(|z| *z == Complex64::default()));
        assert_eq!(d.support_measure_q, 0.0);
        assert_eq!(d.psi_inf, f);
    }

    #[test]
    fn parts_sum_to_field() {
        let g = Grid::new(1, &[10.0], &[32]).unwrap();
        let vals: Vec<Complex64> = (0..32).map(|i| Complex64::from_polar(0.2 * i as f64, i as f64)).collect();
        let f = Field::new(g, vals, Complex64::new(1.0, 0.0)).unwrap();
        let d = decompose_chi(&f);
        for ((a, b), z) in d.psi_inf.values().iter().zip(&d.psi_q).zip(f.values()) {
            assert!((a + b - z).norm() <= 1e-15 * z.norm());
            assert!(a.norm() <= 3.0);
        }
    }
}
