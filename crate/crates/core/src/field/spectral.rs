use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{Field, Grid};

/// Precomputed wavenumbers and FFT plans for one grid.
///
/// Immutable after construction. The rustfft plans are `Sync`, and every
/// transform allocates its own scratch, so one workspace can be shared
/// across threads.
pub struct SpectralWorkspace {
    grid: Grid,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    k_axis: [Vec<f64>; 3],
    k2: Vec<f64>,
    dealias: Vec<bool>,
}

impl std::fmt::Debug for SpectralWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralWorkspace").field("grid", &self.grid).finish_non_exhaustive()
    }
}

impl SpectralWorkspace {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let shape = grid.shape3();
        let forward = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        let k_axis: [Vec<f64>; 3] =
            std::array::from_fn(|a| (0..shape[a]).map(|i| grid.wavenumber(a, i)).collect());
        let mut k2 = Vec::with_capacity(grid.len());
        let mut dealias = Vec::with_capacity(grid.len());
        for i0 in 0..shape[0] {
            for i1 in 0..shape[1] {
                for i2 in 0..shape[2] {
                    k2.push(k_axis[0][i0].powi(2) + k_axis[1][i1].powi(2) + k_axis[2][i2].powi(2));
                    let keep = [(0, i0), (1, i1), (2, i2)]
                        .iter()
                        .all(|&(a, i)| {
                            a >= grid.dim() || 3 * grid.mode_index(a, i).unsigned_abs() < shape[a] as u64
                        });
                    dealias.push(keep);
                }
            }
        }
        Self { grid: grid.clone(), forward, inverse, k_axis, k2, dealias }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `|ξ|²` per lattice site in FFT order.
    pub fn k_squared(&self) -> &[f64] {
        &self.k2
    }

    /// Wavenumbers of one axis in FFT order.
    pub fn axis_wavenumbers(&self, axis: usize) -> &[f64] {
        &self.k_axis[axis]
    }

    /// Sites kept by the 2/3 rule (`3|m| < N` on every axis).
    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse transform in place, divided by the number of sites.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.grid.len(), "array does not match the workspace grid");
        let [n0, n1, n2] = self.grid.shape3();
        if n2 > 1 {
            let plan = &plans[2];
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(data, &mut scratch);
        }
        for (axis, n, stride) in [(1, n1, n2), (0, n0, n1 * n2)] {
            if n == 1 {
                continue;
            }
            let plan = &plans[axis];
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            let mut line = vec![Complex64::default(); n];
            let block = n * stride;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (j, z) in line.iter_mut().enumerate() {
                        *z = data[base + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, z) in line.iter().enumerate() {
                        data[base + j * stride] = *z;
                    }
                }
            }
        }
    }

    /// Spectrum of the affine part `ψ - c`.
    pub fn perturbation_spectrum(&self, field: &Field) -> Vec<Complex64> {
        let mut v = field.perturbation();
        self.forward(&mut v);
        v
    }

    /// `Δψ`, computed on `ψ - c` so the far-field constant drops out exactly.
    pub fn laplacian(&self, field: &Field) -> Vec<Complex64> {
        let mut v = self.perturbation_spectrum(field);
        for (z, &k2) in v.iter_mut().zip(&self.k2) {
            *z *= -k2;
        }
        self.inverse(&mut v);
        v
    }

    /// Spectral gradient of `ψ - c`, one array per axis.
    pub fn gradient(&self, field: &Field) -> Vec<Vec<Complex64>> {
        let spec = self.perturbation_spectrum(field);
        (0..self.grid.dim())
            .map(|axis| {
                let mut d = spec.clone();
                for (flat, z) in d.iter_mut().enumerate() {
                    let k = self.k_axis[axis][self.grid.unravel(flat)[axis]];
                    *z *= Complex64::new(0.0, k);
                }
                self.inverse(&mut d);
                d
            })
            .collect()
    }

    /// `∫|∇v|²` from an already transformed `v̂` (Parseval).
    pub fn grad_norm_sq_from_spectrum(&self, spectrum: &[Complex64]) -> f64 {
        let s: f64 = spectrum.iter().zip(&self.k2).map(|(z, &k2)| k2 * z.norm_sqr()).sum();
        s * self.grid.cell_volume() / self.grid.len() as f64
    }

    /// `∫|∇ψ|²` over the box.
    pub fn grad_norm_sq_integral(&self, field: &Field) -> f64 {
        self.grad_norm_sq_from_spectrum(&self.perturbation_spectrum(field))
    }

    /// `∫|∇v|²` for a bare array `v` on this grid.
    pub fn grad_norm_sq_of(&self, v: &[Complex64]) -> f64 {
        let mut s = v.to_vec();
        self.forward(&mut s);
        self.grad_norm_sq_from_spectrum(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c1() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn k_squared_vanishes_only_at_zero_mode() {
        let g = Grid::new(2, &[5.0, 7.0], &[8, 16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        assert_eq!(ws.k_squared()[0], 0.0);
        assert!(ws.k_squared()[1..].iter().all(|&k| k > 0.0));
    }

    #[test]
    fn constant_has_zero_laplacian() {
        let g = Grid::new(3, &[4.0, 5.0, 6.0], &[8, 8, 4]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let c = Complex64::from_polar(1.0, 0.3);
        let f = Field::constant(g, c).unwrap();
        assert!(ws.laplacian(&f).iter().all(|z| *z == Complex64::default()));
        assert_eq!(ws.grad_norm_sq_integral(&f), 0.0);
    }

    #[test]
    fn plane_wave_is_an_eigenfunction() {
        let l = 10.0;
        let g = Grid::new(2, &[l, l], &[32, 32]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let k = [2.0 * PI * 3.0 / l, -2.0 * PI / l];
        let eps = 1e-2;
        let v: Vec<Complex64> = (0..g.len())
            .map(|i| {
                let x = g.position(i);
                Complex64::from_polar(eps, k[0] * x[0] + k[1] * x[1])
            })
            .collect();
        let f = Field::from_perturbation(g.clone(), c1(), &v).unwrap();
        let lap = ws.laplacian(&f);
        let k2 = k[0] * k[0] + k[1] * k[1];
        for (a, b) in lap.iter().zip(&v) {
            assert!((a + b * k2).norm() <= 1e-12 * eps * k2);
        }
        let grad = ws.grad_norm_sq_integral(&f);
        let exact = k2 * eps * eps * g.volume();
        assert!((grad - exact).abs() <= 1e-10 * exact);
    }

    #[test]
    fn parseval_matches_real_space_gradient() {
        let g = Grid::new(2, &[8.0, 6.0], &[32, 16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let v: Vec<Complex64> = (0..g.len())
            .map(|i| {
                let x = g.position(i);
                let r2 = x[0] * x[0] + x[1] * x[1];
                Complex64::new((-r2).exp(), 0.5 * (-(r2 * 2.0)).exp() * x[0])
            })
            .collect();
        let f = Field::from_perturbation(g.clone(), c1(), &v).unwrap();
        let spectral = ws.grad_norm_sq_integral(&f);
        let grad = ws.gradient(&f);
        let direct: f64 = (0..g.len())
            .map(|i| grad.iter().map(|d| d[i].norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * g.cell_volume();
        assert!((spectral - direct).abs() <= 1e-10 * spectral);
    }

    #[test]
    fn dealias_mask_keeps_lower_two_thirds() {
        let g = Grid::new(1, &[1.0], &[16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let kept: Vec<i64> =
            (0..16).filter(|&i| ws.dealias_mask()[i]).map(|i| g.mode_index(0, i)).collect();
        assert_eq!(kept, vec![0, 1, 2, 3, 4, 5, -5, -4, -3, -2, -1]);
    }
}
