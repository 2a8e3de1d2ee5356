use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Field, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;

/// All functionals of one field at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyReport {
    pub e: f64,
    pub grad_part: f64,
    pub density_part: f64,
    pub e_gl: f64,
    pub e_mgl: f64,
    pub h: f64,
    pub m: f64,
    pub z: f64,
}

/// `∫(|ψ|-1)²`.
pub fn density_part(field: &Field) -> f64 {
    let s: f64 = field.values().iter().map(|z| (z.norm() - 1.0).powi(2)).sum();
    s * field.grid().cell_volume()
}

/// `(∫|∇ψ|², ∫(|ψ|-1)²)`.
pub fn energy_parts(field: &Field, ws: &SpectralWorkspace) -> (f64, f64) {
    (ws.grad_norm_sq_integral(field), density_part(field))
}

/// `E(ψ) = ∫|∇ψ|² + (|ψ|-1)²`.
pub fn energy_e(field: &Field, ws: &SpectralWorkspace) -> f64 {
    let (g, d) = energy_parts(field, ws);
    g + d
}

fn gl_density(z: Complex64) -> f64 {
    let rho = z.norm_sqr();
    0.5 * (rho - 1.0) * (rho - 1.0)
}

/// Ginzburg–Landau energy `∫ ½|∇ψ|² + ½(|ψ|²-1)²`.
pub fn energy_gl(field: &Field, ws: &SpectralWorkspace) -> f64 {
    let s: f64 = field.values().iter().map(|&z| gl_density(z)).sum();
    0.5 * ws.grad_norm_sq_integral(field) + s * field.grid().cell_volume()
}

/// Truncation of the modulus used by the modified GL energy.
///
/// Identity on `[0, 2]`, constant 3 from 4 on, and on `[2, 4]` the quartic
/// `2 + s - s³/4 + s⁴/16` with `s = r - 2`, which matches value, slope and
/// curvature at both ends and keeps `φ' ∈ [0, 1]`.
pub fn phi(r: f64) -> f64 {
    if r <= 2.0 {
        r
    } else if r >= 4.0 {
        3.0
    } else {
        let s = r - 2.0;
        2.0 + s - s.powi(3) / 4.0 + s.powi(4) / 16.0
    }
}

fn mgl_density(z: Complex64) -> f64 {
    let p = phi(z.norm());
    0.5 * (p * p - 1.0).powi(2)
}

/// Modified GL energy `∫|∇ψ|² + ½(φ(|ψ|)²-1)²`.
pub fn energy_mgl(field: &Field, ws: &SpectralWorkspace) -> f64 {
    let s: f64 = field.values().iter().map(|&z| mgl_density(z)).sum();
    ws.grad_norm_sq_integral(field) + s * field.grid().cell_volume()
}

/// `∫F(|ψ|²)`.
pub fn potential_integral(field: &Field, spec: &NonlinearitySpec) -> Result<f64> {
    let mut s = 0.0;
    for z in field.values() {
        s += spec.potential(z.norm_sqr())?;
    }
    Ok(s * field.grid().cell_volume())
}

/// Hamiltonian `H = ∫ ½|∇ψ|² + F(|ψ|²)`.
pub fn hamiltonian(field: &Field, spec: &NonlinearitySpec, ws: &SpectralWorkspace) -> Result<f64> {
    Ok(0.5 * ws.grad_norm_sq_integral(field) + potential_integral(field, spec)?)
}

/// `∫|Re v|²` with `v = c̄ψ - 1`, i.e. after rotating the far field to 1.
pub fn real_part_mass(field: &Field) -> f64 {
    let cbar = field.farfield().conj();
    let s: f64 = field.values().iter().map(|&z| ((cbar * z).re - 1.0).powi(2)).sum();
    s * field.grid().cell_volume()
}

/// `M(ψ) = H(ψ) + C₀∫|Re v|²`.
///
/// `H` is invariant under constant phases, so the rotation `ψ → c̄ψ` only
/// affects the second term.
pub fn functional_m(field: &Field, c0: f64, spec: &NonlinearitySpec, ws: &SpectralWorkspace) -> Result<f64> {
    Ok(hamiltonian(field, spec, ws)? + c0 * real_part_mass(field))
}

/// `Z = ‖∇ψ‖₂ + ‖|ψ|-1‖₂` at one instant.
pub fn z_value(field: &Field, ws: &SpectralWorkspace) -> f64 {
    let (g, d) = energy_parts(field, ws);
    g.sqrt() + d.sqrt()
}

/// Every functional in one pass over the field. `C₀` defaults to 0, making `M = H`.
pub fn full_report(
    field: &Field,
    spec: &NonlinearitySpec,
    c0: Option<f64>,
    ws: &SpectralWorkspace,
) -> Result<EnergyReport> {
    let grad = ws.grad_norm_sq_integral(field);
    let cbar = field.farfield().conj();
    let (mut dens, mut gl, mut mgl, mut pot, mut re2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &z in field.values() {
        let r = z.norm();
        dens += (r - 1.0).powi(2);
        gl += gl_density(z);
        mgl += mgl_density(z);
        pot += spec.potential(z.norm_sqr())?;
        re2 += ((cbar * z).re - 1.0).powi(2);
    }
    let vol = field.grid().cell_volume();
    let (dens, gl, mgl, pot, re2) = (dens * vol, gl * vol, mgl * vol, pot * vol, re2 * vol);
    let h = 0.5 * grad + pot;
    Ok(EnergyReport {
        e: grad + dens,
        grad_part: grad,
        density_part: dens,
        e_gl: 0.5 * grad + gl,
        e_mgl: grad + mgl,
        h,
        m: h + c0.unwrap_or(0.0) * re2,
        z: grad.sqrt() + dens.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    #[test]
    fn constant_field_has_zero_report() {
        let g = Grid::new(2, &[6.0, 6.0], &[16, 16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let f = Field::constant(g, Complex64::from_polar(1.0, 2.0)).unwrap();
        let r = full_report(&f, &NonlinearitySpec::gp(), Some(3.0), &ws).unwrap();
        assert_eq!(r.e, 0.0);
        assert_eq!(r.h, 0.0);
        assert_eq!(r.e_mgl, 0.0);
        assert!(r.m.abs() < 1e-28);
    }

    #[test]
    fn phi_endpoints() {
        assert_eq!(phi(1.5), 1.5);
        assert_eq!(phi(2.0), 2.0);
        assert_eq!(phi(4.0), 3.0);
        assert_eq!(phi(7.0), 3.0);
        let h = 1e-6;
        for r in [2.0 + h, 4.0 - h] {
            let slope = (phi(r + h) - phi(r - h)) / (2.0 * h);
            assert!((0.0..=1.0 + 1e-6).contains(&slope));
        }
    }

    #[test]
    fn plateau_density() {
        let g = Grid::new(1, &[10.0], &[16]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let c = Complex64::new(1.0, 0.0);
        let f = Field::new(g.clone(), vec![c * 5.0; 16], c).unwrap();
        assert!((energy_mgl(&f, &ws) - 32.0 * 10.0).abs() < 1e-12);
    }

    #[test]
    fn gp_hamiltonian_equals_gl_energy() {
        let g = Grid::new(1, &[10.0], &[64]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let v: Vec<Complex64> =
            (0..64).map(|i| Complex64::new((-(g.coordinate(0, i)).powi(2)).exp(), 0.3)).collect();
        let f = Field::from_perturbation(g, Complex64::new(1.0, 0.0), &v).unwrap();
        let gp = NonlinearitySpec::gp();
        assert_eq!(hamiltonian(&f, &gp, &ws).unwrap(), energy_gl(&f, &ws));
        let r = full_report(&f, &gp, None, &ws).unwrap();
        assert_eq!(r.h, r.e_gl);
        assert_eq!(r.m, r.h);
    }
}
