use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::grid::{Field, Grid};
use super::spectral::SpectralWorkspace;
use crate::energy::energy_e;
use crate::error::{Error, Result};

/// `ψ = c(1 + ε cos(k·x))` with `k` on the lattice.
pub fn init_plane_wave_perturbed(grid: &Grid, c: Complex64, eps: f64, k: &[f64]) -> Result<Field> {
    if !(0.0..=0.1).contains(&eps) {
        return Err(Error::InvalidField(format!("perturbation amplitude {eps} not in [0, 0.1]")));
    }
    grid.modes_of(k)?;
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.position(i);
            let phase: f64 = k.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            c * (1.0 + eps * phase.cos())
        })
        .collect();
    Field::new(grid.clone(), values, c)
}

/// Black soliton `tanh(x)` made periodic.
///
/// The box is `[-L/2, L/2)`, so the kink sits at the origin and a mirror
/// antikink sits on the boundary:
/// `ψ = tanh(x) tanh(L/2 - x) tanh(L/2 + x)`. The declared far field is the
/// boundary value `-1`. Functionals of the result count both kinks.
pub fn init_black_soliton_1d(grid: &Grid) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::InvalidGrid(format!(
            "black soliton needs a 1D grid, got dimension {}",
            grid.dim()
        )));
    }
    let l = grid.extents()[0];
    if l < 30.0 {
        return Err(Error::InvalidGrid(format!("black soliton needs extent >= 30, got {l}")));
    }
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.coordinate(0, i);
            Complex64::new(x.tanh() * (0.5 * l - x).tanh() * (0.5 * l + x).tanh(), 0.0)
        })
        .collect();
    Field::new(grid.clone(), values, Complex64::new(-1.0, 0.0))
}

/// Spectral shape of random perturbations.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomShape {
    /// Gaussian envelope width in wavenumber.
    pub k0: f64,
    /// Largest |mode| drawn per axis. Fixing it makes a field reproducible
    /// on refined grids of the same box.
    pub max_mode: Vec<i64>,
}

impl RandomShape {
    /// Envelope `k0 = 2` with the 2/3-rule band of `grid`.
    pub fn for_grid(grid: &Grid) -> Self {
        Self {
            k0: 2.0,
            max_mode: grid.points().iter().map(|&n| ((n - 1) / 3) as i64).collect(),
        }
    }
}

/// Band-limited random field `c + v` with `E ≤ energy_budget`.
pub fn init_random_bounded(grid: &Grid, c: Complex64, energy_budget: f64, seed: u64) -> Result<Field> {
    init_random_shaped(grid, c, energy_budget, seed, &RandomShape::for_grid(grid))
}

/// Random perturbation with unit-variance Gaussian coefficients, before rescaling.
pub fn random_perturbation(grid: &Grid, seed: u64, shape: &RandomShape) -> Result<Vec<Complex64>> {
    if shape.max_mode.len() != grid.dim() {
        return Err(Error::InvalidGrid(format!("max_mode needs {} entries", grid.dim())));
    }
    let mut bounds = [0i64; 3];
    for (axis, &m) in shape.max_mode.iter().enumerate() {
        let n = grid.points()[axis] as i64;
        if m < 0 || m >= n / 2 {
            return Err(Error::InvalidGrid(format!(
                "axis {axis}: mode bound {m} outside the lattice of {n} points"
            )));
        }
        bounds[axis] = m;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex64::default(); grid.len()];
    let two_pi = 2.0 * std::f64::consts::PI;
    let ext = grid.extents();
    for m0 in -bounds[0]..=bounds[0] {
        for m1 in -bounds[1]..=bounds[1] {
            for m2 in -bounds[2]..=bounds[2] {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                if (m0, m1, m2) == (0, 0, 0) {
                    continue;
                }
                let m = [m0, m1, m2];
                let k2: f64 = (0..grid.dim()).map(|a| (two_pi * m[a] as f64 / ext[a]).powi(2)).sum();
                let amp = (-0.5 * k2 / (shape.k0 * shape.k0)).exp();
                // Phase so the coefficient is attached to x = 0, not the box corner.
                let shift: f64 = (0..grid.dim()).map(|a| std::f64::consts::PI * m[a] as f64).sum();
                let z = Complex64::new(re, im) * amp * Complex64::from_polar(1.0, shift);
                spectrum[grid.ravel_periodic(m)] = z;
            }
        }
    }
    let ws = SpectralWorkspace::new(grid);
    ws.inverse(&mut spectrum);
    // Make the real-space amplitude independent of the number of sites.
    let norm = spectrum.iter().map(|z| z.norm_sqr()).sum::<f64>() / grid.len() as f64;
    let scale = if norm > 0.0 { 1.0 / norm.sqrt() } else { 0.0 };
    Ok(spectrum.into_iter().map(|z| z * scale).collect())
}

/// Random field with a caller-chosen spectral shape, rescaled so `E ≤ energy_budget`.
pub fn init_random_shaped(
    grid: &Grid,
    c: Complex64,
    energy_budget: f64,
    seed: u64,
    shape: &RandomShape,
) -> Result<Field> {
    if !(energy_budget.is_finite() && energy_budget > 0.0) {
        return Err(Error::InvalidField(format!("energy budget {energy_budget} must be positive")));
    }
    let v = random_perturbation(grid, seed, shape)?;
    let ws = SpectralWorkspace::new(grid);
    scale_to_energy(grid, c, &v, energy_budget, &ws)
}

/// Largest found scale `s` (by bracketing then bisection) with `E(c + s v) ≤ budget`.
pub fn scale_to_energy(
    grid: &Grid,
    c: Complex64,
    v: &[Complex64],
    budget: f64,
    ws: &SpectralWorkspace,
) -> Result<Field> {
    scale_while(grid, c, v, |f| Ok(energy_e(f, ws) <= budget))
}

/// The field `c + s v` for the scale `s` returned by [`largest_scale`].
pub fn scale_while<P>(grid: &Grid, c: Complex64, v: &[Complex64], accept: P) -> Result<Field>
where
    P: FnMut(&Field) -> Result<bool>,
{
    let s = largest_scale(grid, c, v, accept)?;
    let scaled: Vec<Complex64> = v.iter().map(|z| z * s).collect();
    Field::from_perturbation(grid.clone(), c, &scaled)
}

/// Largest found scale `s` such that `accept(c + s v)` holds, assuming the
/// accepted scales form an interval starting at 0.
///
/// Doubles from `s = 1` until rejection, then bisects to relative width
/// 1e-12. Returns 0 when nothing positive is accepted or `v` vanishes.
pub fn largest_scale<P>(grid: &Grid, c: Complex64, v: &[Complex64], mut accept: P) -> Result<f64>
where
    P: FnMut(&Field) -> Result<bool>,
{
    if v.iter().all(|z| *z == Complex64::default()) {
        return Ok(0.0);
    }
    let mut test = |s: f64| -> Result<bool> {
        let scaled: Vec<Complex64> = v.iter().map(|z| z * s).collect();
        accept(&Field::from_perturbation(grid.clone(), c, &scaled)?)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while test(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidField("scaling accepted without bound".into()));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if test(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::energy_e;
    use std::f64::consts::PI;

    #[test]
    fn zero_amplitude_gives_constant() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        let c = Complex64::from_polar(1.0, 1.0);
        let f = init_plane_wave_perturbed(&g, c, 0.0, &[2.0 * PI / 10.0]).unwrap();
        assert!(f.values().iter().all(|&z| z == c));
    }

    #[test]
    fn cosine_splits_into_two_modes() {
        let l = 10.0;
        let g = Grid::new(1, &[l], &[64]).unwrap();
        let f = init_plane_wave_perturbed(&g, Complex64::new(1.0, 0.0), 0.01, &[2.0 * PI / l]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let spec = ws.perturbation_spectrum(&f);
        let n = g.len() as f64;
        assert!((spec[1].norm() / n - 0.005).abs() < 1e-15);
        assert!((spec[63].norm() / n - 0.005).abs() < 1e-15);
        let rest: f64 = spec.iter().enumerate().filter(|(i, _)| *i != 1 && *i != 63).map(|(_, z)| z.norm()).sum();
        assert!(rest < 1e-14 * n);
    }

    #[test]
    fn off_lattice_mode_rejected() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        assert!(init_plane_wave_perturbed(&g, Complex64::new(1.0, 0.0), 0.01, &[1.0]).is_err());
    }

    #[test]
    fn soliton_vanishes_at_center() {
        let g = Grid::new(1, &[60.0], &[1024]).unwrap();
        let f = init_black_soliton_1d(&g).unwrap();
        assert_eq!(f.values()[512].norm(), 0.0);
        assert_eq!(f.farfield(), Complex64::new(-1.0, 0.0));
        assert!(init_black_soliton_1d(&Grid::new(2, &[60.0, 60.0], &[16, 16]).unwrap()).is_err());
        assert!(init_black_soliton_1d(&Grid::new(1, &[20.0], &[64]).unwrap()).is_err());
    }

    #[test]
    fn random_field_respects_budget_and_seed() {
        let g = Grid::new(2, &[16.0, 16.0], &[32, 32]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let c = Complex64::from_polar(1.0, 0.4);
        let a = init_random_bounded(&g, c, 0.7, 11).unwrap();
        let b = init_random_bounded(&g, c, 0.7, 11).unwrap();
        let d = init_random_bounded(&g, c, 0.7, 12).unwrap();
        assert!(energy_e(&a, &ws) <= 0.7);
        assert!(energy_e(&a, &ws) > 0.69);
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn fixed_shape_survives_refinement() {
        let g = Grid::new(1, &[20.0], &[64]).unwrap();
        let fine = g.refined(2).unwrap();
        let shape = RandomShape { k0: 2.0, max_mode: vec![10] };
        let coarse_v = random_perturbation(&g, 5, &shape).unwrap();
        let fine_v = random_perturbation(&fine, 5, &shape).unwrap();
        for (i, z) in coarse_v.iter().enumerate() {
            assert!((z - fine_v[2 * i]).norm() < 1e-12);
        }
    }
}
