//! Energy-space functionals, cutoff decompositions and metrics.

mod cutoff;
mod functionals;
mod metrics;

pub use cutoff::{chi, decompose_chi, eta_support_measure, h1_norm, split_by_chi, x1_norm, ChiDecomposition};
pub use functionals::{
    density_part, energy_e, energy_gl, energy_mgl, energy_parts, full_report, functional_m, hamiltonian, phi,
    potential_integral, real_part_mass, z_value, EnergyReport,
};
pub use metrics::{
    l2_field_distance, metric_de, metric_delta3d, metric_dgl, sum_space_norm, MetricInputs3D, MetricValue,
};

use crate::error::Result;
use crate::nonlinearity::{coercivity_constants, NonlinearitySpec, PotentialStructure};

/// Weight `C₀` of the functional `M` for a defocusing spec.
pub fn choose_c0(spec: &NonlinearitySpec, structure: &PotentialStructure) -> Result<f64> {
    Ok(coercivity_constants(spec, structure)?.c0)
}
