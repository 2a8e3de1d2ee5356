//! Catalog of nonlinearities `f`, their potentials `F`, and structural checks.

mod analysis;
mod catalog;

pub use analysis::{
    analyze_potential, check_kato, coercivity_constants, find_roots, CoercivityConstants, KatoReport,
    PotentialStructure, KATO_SLOPE_LIMIT,
};
pub use catalog::{Kind, NonlinearitySpec};
