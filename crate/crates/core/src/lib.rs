//! Nonlinear Schrödinger equations with a non-vanishing far field.

pub mod cli;
pub mod energy;
pub mod error;
pub mod experiments;
pub mod field;
pub mod io;
pub mod nonlinearity;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
