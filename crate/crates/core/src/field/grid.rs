use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Periodic lattice on the box `[-L_i/2, L_i/2)` standing in for ℝᵈ.
///
/// Unused trailing axes are stored with one point so that every grid is
/// addressed as a row-major `N0 x N1 x N2` array, axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    extents: [f64; 3],
    points: [usize; 3],
}

impl Grid {
    pub fn new(dim: usize, extents: &[f64], points: &[usize]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if extents.len() != dim || points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} extents and points, got {} and {}",
                extents.len(),
                points.len()
            )));
        }
        let mut e = [1.0; 3];
        let mut p = [1usize; 3];
        for axis in 0..dim {
            let (l, n) = (extents[axis], points[axis]);
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("axis {axis}: extent {l} must be positive")));
            }
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "axis {axis}: {n} points (need an even count >= 4)"
                )));
            }
            if !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!("axis {axis}: {n} points is not a power of two")));
            }
            e[axis] = l;
            p[axis] = n;
        }
        Ok(Self { dim, extents: e, points: p })
    }

    /// Cube with the same extent and point count on every axis.
    pub fn cube(dim: usize, extent: f64, points: usize) -> Result<Self> {
        Self::new(dim, &vec![extent; dim], &vec![points; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents[..self.dim]
    }

    pub fn points(&self) -> &[usize] {
        &self.points[..self.dim]
    }

    /// Row-major shape padded to three axes.
    pub fn shape3(&self) -> [usize; 3] {
        self.points
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.extents[axis] / self.points[axis] as f64
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.extents().iter().product()
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        -0.5 * self.extents[axis] + i as f64 * self.spacing(axis)
    }

    /// Signed mode number of FFT slot `i` on `axis`: `i` below `N/2`, `i - N` above.
    pub fn mode_index(&self, axis: usize, i: usize) -> i64 {
        let n = self.points[axis];
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        if axis >= self.dim {
            return 0.0;
        }
        2.0 * PI * self.mode_index(axis, i) as f64 / self.extents[axis]
    }

    /// Physical wave vector of the integer mode `modes`.
    pub fn lattice_wavevector(&self, modes: &[i64]) -> Result<Vec<f64>> {
        if modes.len() != self.dim {
            return Err(Error::InvalidGrid(format!("mode vector needs {} entries", self.dim)));
        }
        let mut k = Vec::with_capacity(self.dim);
        for (axis, &m) in modes.iter().enumerate() {
            let n = self.points[axis] as i64;
            if m < -n / 2 || m >= n / 2 {
                return Err(Error::OffLattice(
                    modes.iter().map(|&x| x as f64).collect::<Vec<_>>(),
                ));
            }
            k.push(2.0 * PI * m as f64 / self.extents[axis]);
        }
        Ok(k)
    }

    /// Integer mode numbers of a physical wave vector, or `OffLattice`.
    pub fn modes_of(&self, k: &[f64]) -> Result<Vec<i64>> {
        if k.len() != self.dim {
            return Err(Error::OffLattice(k.to_vec()));
        }
        let mut modes = Vec::with_capacity(self.dim);
        for (axis, &ki) in k.iter().enumerate() {
            let m = ki * self.extents[axis] / (2.0 * PI);
            let r = m.round();
            let n = self.points[axis] as f64;
            if (m - r).abs() > 1e-9 * m.abs().max(1.0) || r < -n / 2.0 || r >= n / 2.0 {
                return Err(Error::OffLattice(k.to_vec()));
            }
            modes.push(r as i64);
        }
        Ok(modes)
    }

    /// Flat index to per-axis indices.
    pub fn unravel(&self, flat: usize) -> [usize; 3] {
        let [_, n1, n2] = self.points;
        [flat / (n1 * n2), (flat / n2) % n1, flat % n2]
    }

    /// Flat index of a periodic multi-index (each entry taken modulo N).
    pub fn ravel_periodic(&self, idx: [i64; 3]) -> usize {
        let [n0, n1, n2] = self.points.map(|n| n as i64);
        let i0 = idx[0].rem_euclid(n0) as usize;
        let i1 = idx[1].rem_euclid(n1) as usize;
        let i2 = idx[2].rem_euclid(n2) as usize;
        (i0 * n1 as usize + i1) * n2 as usize + i2
    }

    /// Physical position of lattice site `flat`.
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = self.coordinate(axis, idx[axis]);
        }
        x
    }

    /// Same box, `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let points: Vec<usize> = self.points().iter().map(|&n| n * factor).collect();
        Self::new(self.dim, self.extents(), &points)
    }
}

/// Complex wave function on a grid together with its declared far-field constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
    farfield: Complex64,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<Complex64>, farfield: Complex64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "{} values for a grid of {} sites",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidField(format!("non-finite value at site {i}")));
        }
        if (farfield.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidField(format!(
                "far-field constant {farfield} is not of unit modulus"
            )));
        }
        Ok(Self { grid, values, farfield })
    }

    pub fn constant(grid: Grid, c: Complex64) -> Result<Self> {
        let values = vec![c; grid.len()];
        Self::new(grid, values, c)
    }

    /// `c + v` for an affine part `v`.
    pub fn from_perturbation(grid: Grid, c: Complex64, v: &[Complex64]) -> Result<Self> {
        let values = v.iter().map(|&z| c + z).collect();
        Self::new(grid, values, c)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Mutable access for in-place evolution; callers keep the values finite.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn farfield(&self) -> Complex64 {
        self.farfield
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Affine part `v = ψ - c`.
    pub fn perturbation(&self) -> Vec<Complex64> {
        self.values.iter().map(|&z| z - self.farfield).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiply by a unit constant; rotates the far field with the values.
    pub fn rotated(&self, phase: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&z| z * phase).collect(),
            farfield: self.farfield * phase,
        }
    }
}

/// Lattice L² norm `(Σ|z|² h^d)^{1/2}`.
pub fn l2_norm(grid: &Grid, values: &[Complex64]) -> f64 {
    (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.cell_volume()).sqrt()
}

/// Lattice L² distance between two arrays of the same length.
pub fn l2_distance(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    (s * grid.cell_volume()).sqrt()
}

/// Trapezoid rule on the periodic lattice.
pub fn integrate(grid: &Grid, density: impl Iterator<Item = f64>) -> f64 {
    density.sum::<f64>() * grid.cell_volume()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_is_extent_over_points() {
        let g = Grid::new(1, &[40.0], &[512]).unwrap();
        assert_eq!(g.spacing(0), 0.078125);
        assert_eq!(g.len(), 512);
    }

    #[test]
    fn two_dimensional_grid() {
        let g = Grid::new(2, &[20.0, 20.0], &[128, 128]).unwrap();
        assert_eq!(g.shape3(), [128, 128, 1]);
        assert!((g.volume() - 400.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(3, &[10.0; 3], &[7, 8, 8]).is_err());
        assert!(Grid::new(1, &[10.0], &[2]).is_err());
        assert!(Grid::new(1, &[10.0], &[12]).is_err());
        assert!(Grid::new(1, &[0.0], &[16]).is_err());
        assert!(Grid::new(1, &[-1.0], &[16]).is_err());
        assert!(Grid::new(4, &[1.0; 4], &[8; 4]).is_err());
    }

    #[test]
    fn wavenumbers_follow_fft_order() {
        let g = Grid::new(1, &[2.0 * PI], &[8]).unwrap();
        let ks: Vec<f64> = (0..8).map(|i| g.wavenumber(0, i)).collect();
        assert_eq!(ks, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn off_lattice_wavevector_rejected() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        assert!(g.modes_of(&[2.0 * PI / 10.0 * 3.0]).is_ok());
        assert!(g.modes_of(&[1.0]).is_err());
        assert!(g.lattice_wavevector(&[32]).is_err());
    }

    #[test]
    fn ravel_roundtrip() {
        let g = Grid::new(3, &[1.0; 3], &[4, 8, 16]).unwrap();
        for flat in [0, 5, 77, 511] {
            let [a, b, c] = g.unravel(flat);
            assert_eq!(g.ravel_periodic([a as i64, b as i64, c as i64]), flat);
        }
    }

    #[test]
    fn field_rejects_non_unit_farfield() {
        let g = Grid::new(1, &[1.0], &[4]).unwrap();
        assert!(Field::constant(g.clone(), Complex64::new(2.0, 0.0)).is_err());
        let bad = vec![Complex64::new(f64::NAN, 0.0); 4];
        assert!(Field::new(g, bad, Complex64::new(1.0, 0.0)).is_err());
    }
}
