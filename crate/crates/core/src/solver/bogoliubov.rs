use crate::error::{Error, Result};
use crate::field::{Field, SpectralWorkspace};
use crate::nonlinearity::NonlinearitySpec;

/// Linearized growth rates of perturbations of the constant state.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovReport {
    pub k_values: Vec<f64>,
    pub predicted_rate: Vec<f64>,
    pub measured_rate: Vec<Option<f64>>,
    /// `(0, 2√(-f'(1)))` when `f'(1) < 0`.
    pub unstable_band: Option<(f64, f64)>,
}

/// `σ(k) = √max(0, -(k²/2)(k²/2 + 2f'(1)))`.
pub fn bogoliubov_rate(k: f64, f_prime_one: f64) -> f64 {
    let a = 0.5 * k * k;
    (-(a * (a + 2.0 * f_prime_one))).max(0.0).sqrt()
}

pub fn bogoliubov_analyze(spec: &NonlinearitySpec, k_values: &[f64]) -> Result<BogoliubovReport> {
    let g = spec.f_prime(1.0)?;
    Ok(BogoliubovReport {
        k_values: k_values.to_vec(),
        predicted_rate: k_values.iter().map(|&k| bogoliubov_rate(k, g)).collect(),
        measured_rate: vec![None; k_values.len()],
        unstable_band: (g < 0.0).then(|| (0.0, 2.0 * (-g).sqrt())),
    })
}

/// Least-squares fit of `log a(t)` for one Fourier mode pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub rate: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
    /// The amplitude reached the saturation level inside the record.
    pub saturated: bool,
}

/// Amplitude bound beyond which the perturbation is no longer linear.
pub const SATURATION_AMPLITUDE: f64 = 0.1;

/// Normalized amplitude `(|v̂(k)|² + |v̂(-k)|²)^{1/2} / N` of the pair `±k`.
pub fn mode_pair_amplitude(field: &Field, modes: &[i64], ws: &SpectralWorkspace) -> f64 {
    let grid = field.grid();
    let spec = ws.perturbation_spectrum(field);
    let mut idx = [0i64; 3];
    let mut neg = [0i64; 3];
    for (a, &m) in modes.iter().enumerate() {
        idx[a] = m;
        neg[a] = -m;
    }
    let p = spec[grid.ravel_periodic(idx)].norm_sqr();
    let q = if idx == neg { 0.0 } else { spec[grid.ravel_periodic(neg)].norm_sqr() };
    (p + q).sqrt() / grid.len() as f64
}

/// Fit the exponential rate of mode `k` over its linear-growth window.
///
/// The window opens once the amplitude reaches ten times its initial value
/// (or at the start if it never does, as for stable modes) and closes
/// before the amplitude passes [`SATURATION_AMPLITUDE`].
pub fn measure_mode_growth(snapshots: &[(f64, Field)], k: &[f64], ws: &SpectralWorkspace) -> Result<GrowthFit> {
    if snapshots.len() < 5 {
        return Err(Error::WindowDetection(format!("{} snapshots, need at least 5", snapshots.len())));
    }
    let modes = ws.grid().modes_of(k)?;
    let series: Vec<(f64, f64)> =
        snapshots.iter().map(|(t, f)| (*t, mode_pair_amplitude(f, &modes, ws))).collect();
    let a0 = series[0].1;
    if a0 <= 0.0 {
        return Err(Error::WindowDetection("mode is not excited initially".into()));
    }
    let start = series.iter().position(|&(_, a)| a >= 10.0 * a0).unwrap_or(0);
    let sat = series.iter().position(|&(_, a)| a > SATURATION_AMPLITUDE);
    let end = sat.unwrap_or(series.len());
    if end <= start || end - start < 5 {
        return Err(Error::WindowDetection(format!(
            "only {} points between growth onset and saturation",
            end.saturating_sub(start)
        )));
    }
    let window = &series[start..end];
    let n = window.len() as f64;
    let (mt, my) = window.iter().fold((0.0, 0.0), |(st, sy), &(t, a)| (st + t, sy + a.ln()));
    let (mt, my) = (mt / n, my / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(t, a) in window {
        let (dx, dy) = (t - mt, a.ln() - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let rate = sxy / sxx;
    let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(GrowthFit {
        rate,
        r_squared,
        window: (window[0].0, window[window.len() - 1].0),
        points: window.len(),
        saturated: sat.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_is_stable() {
        let r = bogoliubov_analyze(&NonlinearitySpec::gp(), &[0.0, 0.5, 1.0, 3.0]).unwrap();
        assert!(r.predicted_rate.iter().all(|&s| s == 0.0));
        assert_eq!(r.unstable_band, None);
    }

    #[test]
    fn focusing_gp_peak() {
        let spec = NonlinearitySpec::power(-1.0, 1.0).unwrap();
        let r = bogoliubov_analyze(&spec, &[0.0, 2f64.sqrt(), 2.0]).unwrap();
        assert_eq!(r.predicted_rate[0], 0.0);
        assert!((r.predicted_rate[1] - 1.0).abs() < 1e-15);
        assert_eq!(r.predicted_rate[2], 0.0);
        assert_eq!(r.unstable_band, Some((0.0, 2.0)));
    }
}
