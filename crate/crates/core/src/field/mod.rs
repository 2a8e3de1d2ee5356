//! Periodic grids, complex fields with a far-field constant, spectral
//! operators and initial data.

mod grid;
mod init;
mod spectral;

pub use grid::{integrate, l2_distance, l2_norm, Field, Grid};
pub use init::{
    init_black_soliton_1d, init_plane_wave_perturbed, init_random_bounded, init_random_shaped,
    random_perturbation, largest_scale, scale_to_energy, scale_while, RandomShape,
};
pub use spectral::SpectralWorkspace;
