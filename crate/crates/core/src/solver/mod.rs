//! Time integration: free and potential flows, Strang splitting, the
//! Duhamel fixed point, and linear stability of the constant state.

mod bogoliubov;
mod picard;
mod split;

pub use bogoliubov::{
    bogoliubov_analyze, bogoliubov_rate, measure_mode_growth, mode_pair_amplitude, BogoliubovReport, GrowthFit,
    SATURATION_AMPLITUDE,
};
pub use picard::{picard_solve, PicardOutcome, PICARD_TOL};
pub use split::{run, run_from, step_linear, step_nonlinear, step_strang};

use std::fmt;
use std::str::FromStr;

use crate::energy::EnergyReport;
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Strang,
    Picard,
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strang" => Ok(Scheme::Strang),
            "picard" => Ok(Scheme::Picard),
            other => Err(format!("unknown scheme '{other}' (expected strang or picard)")),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Strang => "strang",
            Scheme::Picard => "picard",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    pub picard_iters: usize,
    /// Time nodes of the Duhamel quadrature, panel ends included.
    pub picard_quad_nodes: usize,
    /// Absolute energy at which a run is flagged as blowing up.
    pub blowup_e_threshold: f64,
    pub report_every: usize,
    pub dealias: bool,
    /// Weight of the `M` functional in reports; `None` gives `M = H`.
    pub c0: Option<f64>,
    /// Keep a copy of the field every this many steps.
    pub snapshot_every: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            scheme: Scheme::Strang,
            picard_iters: 50,
            picard_quad_nodes: 9,
            blowup_e_threshold: 1e6,
            report_every: 100,
            dealias: true,
            c0: None,
            snapshot_every: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) || self.dt > self.t_end * (1.0 + 1e-12) {
            return bad(format!("t_end = {} must be positive and at least dt", self.t_end));
        }
        if self.picard_iters < 1 || self.picard_quad_nodes < 2 {
            return bad("picard_iters >= 1 and picard_quad_nodes >= 2 required".into());
        }
        if self.blowup_e_threshold.is_nan() || self.blowup_e_threshold <= 0.0 {
            return bad("blow-up threshold must be positive".into());
        }
        if self.report_every < 1 || self.snapshot_every == Some(0) {
            return bad("report and snapshot strides must be at least 1".into());
        }
        Ok(())
    }

    /// Number of steps, `t_end/dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowupFlagged,
    NanDetected,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Completed => "completed",
            RunStatus::BlowupFlagged => "blowup_flagged",
            RunStatus::NanDetected => "nan_detected",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub reports: Vec<EnergyReport>,
    pub snapshots: Vec<(f64, Field)>,
    pub status: RunStatus,
    pub final_field: Field,
}

impl Trajectory {
    fn new(initial: &Field) -> Self {
        Self {
            times: Vec::new(),
            reports: Vec::new(),
            snapshots: Vec::new(),
            status: RunStatus::Completed,
            final_field: initial.clone(),
        }
    }

    fn push(&mut self, t: f64, r: EnergyReport) {
        self.times.push(t);
        self.reports.push(r);
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}
