use super::catalog::NonlinearitySpec;
use crate::error::{Error, Result};

/// Sampled evidence for the growth bounds `|f(ρ)|, |ρf'(ρ)| ≤ C(1+ρ^α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KatoReport {
    pub alpha_used: f64,
    pub max_ratio_f: f64,
    pub max_ratio_rho_fprime: f64,
    /// Log-log slope of each ratio over the last decade of samples.
    pub tail_slope_f: f64,
    pub tail_slope_rho_fprime: f64,
    pub passed: bool,
}

/// Tail slope above which a ratio is treated as unbounded.
pub const KATO_SLOPE_LIMIT: f64 = 0.5;

/// Sample both Kato ratios on `n_samples` log-spaced points of `[1e-6, rho_max]`.
///
/// A ratio counts as bounded when it is finite everywhere and its log-log
/// slope over the last decade stays below [`KATO_SLOPE_LIMIT`].
pub fn check_kato(spec: &NonlinearitySpec, alpha: f64, rho_max: f64, n_samples: usize) -> Result<KatoReport> {
    if rho_max <= 1.0 || n_samples < 1000 {
        return Err(Error::Precondition(format!(
            "check_kato needs rho_max > 1 and at least 1000 samples (got {rho_max}, {n_samples})"
        )));
    }
    let lo = 1e-6f64.ln();
    let hi = rho_max.ln();
    let ratios = |rho: f64| -> Result<(f64, f64)> {
        let denom = 1.0 + rho.powf(alpha);
        Ok((spec.f(rho)?.abs() / denom, (rho * spec.f_prime(rho)?).abs() / denom))
    };
    let (mut max_f, mut max_fp) = (0.0f64, 0.0f64);
    for i in 0..n_samples {
        let rho = (lo + (hi - lo) * i as f64 / (n_samples - 1) as f64).exp();
        let (rf, rfp) = ratios(rho)?;
        max_f = if rf.is_nan() { f64::INFINITY } else { max_f.max(rf) };
        max_fp = if rfp.is_nan() { f64::INFINITY } else { max_fp.max(rfp) };
    }
    let (top_f, top_fp) = ratios(rho_max)?;
    let (dec_f, dec_fp) = ratios(rho_max / 10.0)?;
    let slope = |top: f64, dec: f64| {
        if top == 0.0 && dec == 0.0 {
            0.0
        } else {
            (top / dec).log10()
        }
    };
    let tail_slope_f = slope(top_f, dec_f);
    let tail_slope_rho_fprime = slope(top_fp, dec_fp);
    let passed = max_f.is_finite()
        && max_fp.is_finite()
        && tail_slope_f <= KATO_SLOPE_LIMIT
        && tail_slope_rho_fprime <= KATO_SLOPE_LIMIT;
    Ok(KatoReport {
        alpha_used: alpha,
        max_ratio_f: max_f,
        max_ratio_rho_fprime: max_fp,
        tail_slope_f,
        tail_slope_rho_fprime,
        passed,
    })
}

/// Roots, sign structure and the convexity window of `F` around `ρ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialStructure {
    pub f_prime_one: f64,
    pub defocusing: bool,
    pub roots_of_f: Vec<f64>,
    /// Largest `ρ < 1` where `F(ρ) < 0`, if `F` is negative anywhere below 1.
    pub rho2: Option<f64>,
    pub f_positive_above_one: bool,
    /// Largest window half-width `δ ≤ 1/2` with `(ρ-1)²/C₁ ≤ F(ρ) ≤ C₁(ρ-1)²` on `|ρ-1| < δ`.
    pub convexity_window_delta: Option<f64>,
    pub c1: f64,
    /// Largest value of `F₋` on `[0, 1]`.
    pub sup_f_minus: f64,
    pub rho_max: f64,
}

const WINDOW_STEP: f64 = 1e-3;
const WINDOW_MAX: f64 = 0.5;

/// Analyze `f` and `F` on `[0, rho_max]`.
pub fn analyze_potential(spec: &NonlinearitySpec, rho_max: f64) -> Result<PotentialStructure> {
    if rho_max < 4.0 {
        return Err(Error::Precondition(format!("analyze_potential needs rho_max >= 4, got {rho_max}")));
    }
    let fp1 = spec.f_prime(1.0)?;
    if fp1.abs() <= 1e-10 {
        return Err(Error::Degenerate(format!("{spec}: f'(1) = {fp1:e} vanishes")));
    }
    let roots_of_f = find_roots(|r| spec.f(r), rho_max)?;

    let f_at = |r: f64| spec.potential(r);
    let mut rho2 = None;
    let mut sup_f_minus = 0.0f64;
    let n_low = 10_000;
    let mut last_negative = None;
    for i in 0..n_low {
        let r = i as f64 / n_low as f64;
        let v = f_at(r)?;
        if v < 0.0 {
            last_negative = Some(r);
            sup_f_minus = sup_f_minus.max(-v);
        }
    }
    if let Some(r) = last_negative {
        let (mut a, mut b) = (r, r + 1.0 / n_low as f64);
        while b - a > 1e-13 {
            let m = 0.5 * (a + b);
            if f_at(m)? < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        rho2 = Some(a);
    }

    let mut f_positive_above_one = true;
    let n_high = 10_000;
    for i in 1..=n_high {
        let r = 1.0 + (rho_max - 1.0) * (i as f64 / n_high as f64).powi(2);
        if f_at(r)? <= 0.0 {
            f_positive_above_one = false;
            break;
        }
    }

    let q = 0.5 * fp1;
    let c1 = 2.0 * q.abs().max(1.0 / q.abs());
    let mut window = None;
    if fp1 > 0.0 {
        let ok = |r: f64| -> Result<bool> {
            let d2 = (r - 1.0) * (r - 1.0);
            let v = f_at(r)?;
            Ok(d2 / c1 <= v && v <= c1 * d2)
        };
        let steps = (WINDOW_MAX / WINDOW_STEP).round() as usize;
        let mut j = 1;
        while j <= steps {
            let d = j as f64 * WINDOW_STEP;
            if !(ok(1.0 - d)? && ok(1.0 + d)?) {
                break;
            }
            j += 1;
        }
        // Samples strictly inside (1-δ, 1+δ) all passed.
        if j > 1 {
            window = Some((j as f64 * WINDOW_STEP).min(WINDOW_MAX));
        }
    }

    Ok(PotentialStructure {
        f_prime_one: fp1,
        defocusing: fp1 > 0.0,
        roots_of_f,
        rho2,
        f_positive_above_one,
        convexity_window_delta: window,
        c1,
        sup_f_minus,
        rho_max,
    })
}

/// Sign changes of `g` on a 10⁴-point log grid over `(0, rho_max]`, refined by
/// bisection to 1e-12. Exact zeros at grid points (including `ρ = 1`) are kept.
pub fn find_roots(g: impl Fn(f64) -> Result<f64>, rho_max: f64) -> Result<Vec<f64>> {
    let n = 10_000;
    let (lo, hi) = (1e-10f64.ln(), rho_max.ln());
    let mut grid: Vec<f64> = (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect();
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev = (grid[0], g(grid[0])?);
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for &x in &grid[1..] {
        let v = g(x)?;
        if v == 0.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && prev.1.signum() != v.signum() {
            let (mut a, mut b, mut ga) = (prev.0, x, prev.1);
            while b - a > 1e-12 * b.max(1.0) {
                let m = 0.5 * (a + b);
                let gm = g(m)?;
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if gm.signum() == ga.signum() {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = (x, v);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(roots)
}

/// Constants relating `(|ψ|-1)²` to `F(|ψ|²)` outside the low-density region.
#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityConstants {
    /// `sup (√ρ-1)²/F` over the convexity window.
    pub c_low: f64,
    /// `sup (√ρ-1)²/F` over `ρ ≥ 1+δ`.
    pub c_high: f64,
    pub eta: f64,
    pub c0: f64,
    /// Constant `C` in `E ≤ C·M` implied by the choice of `C₀`.
    pub c_energy: f64,
}

/// Sampled coercivity constants and the weight `C₀` for the functional `M`.
///
/// With `η = 1 - √(1-δ)`, `C = max(C_l, C_h)` and `S = sup F₋`,
/// `C₀ = (1 + max(C, S))/η²`. Then `E ≤ max(2, C)·M` pointwise in the
/// integrand, and `C₀` reduces to `(1 + C)/η²` whenever `S ≤ C`.
pub fn coercivity_constants(spec: &NonlinearitySpec, structure: &PotentialStructure) -> Result<CoercivityConstants> {
    if !structure.defocusing {
        return Err(Error::Precondition(format!("{spec} is not defocusing (f'(1) = {})", structure.f_prime_one)));
    }
    let delta = structure.convexity_window_delta.ok_or_else(|| {
        Error::Precondition(format!("{spec}: no convexity window around rho = 1"))
    })?;
    if !structure.f_positive_above_one {
        return Err(Error::Precondition(format!("{spec}: F is not positive above rho = 1")));
    }
    let ratio = |r: f64| -> Result<f64> {
        let v = spec.potential(r)?;
        let num = (r.sqrt() - 1.0).powi(2);
        if v <= 0.0 {
            return Err(Error::Precondition(format!("{spec}: F({r}) = {v} is not positive")));
        }
        Ok(num / v)
    };
    // The sampled sup is inflated by 1% to cover the gaps between samples.
    const MARGIN: f64 = 1.01;
    let n = 4000;
    let mut c_low = 0.0f64;
    for i in 1..n {
        let r = 1.0 - delta + 2.0 * delta * i as f64 / n as f64;
        if (r - 1.0).abs() < 1e-9 {
            continue;
        }
        c_low = c_low.max(ratio(r)?);
    }
    let mut c_high = 0.0f64;
    let (a, b) = ((1.0 + delta).ln(), 1e8f64.max(structure.rho_max).ln());
    for i in 0..=n {
        let r = (a + (b - a) * i as f64 / n as f64).exp();
        c_high = c_high.max(ratio(r)?);
    }
    c_low *= MARGIN;
    c_high *= MARGIN;
    let c = c_low.max(c_high);
    let eta = 1.0 - (1.0 - delta).sqrt();
    let c0 = (1.0 + c.max(structure.sup_f_minus)) / (eta * eta);
    Ok(CoercivityConstants { c_low, c_high, eta, c0, c_energy: c.max(2.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_structure() {
        let s = analyze_potential(&NonlinearitySpec::gp(), 16.0).unwrap();
        assert!(s.defocusing);
        assert_eq!(s.roots_of_f, vec![1.0]);
        assert_eq!(s.rho2, None);
        assert!(s.f_positive_above_one);
        assert_eq!(s.convexity_window_delta, Some(0.5));
        assert_eq!(s.c1, 4.0);
    }

    #[test]
    fn focusing_gp_is_not_defocusing() {
        let s = analyze_potential(&NonlinearitySpec::power(-1.0, 1.0).unwrap(), 16.0).unwrap();
        assert!(!s.defocusing);
        assert_eq!(s.convexity_window_delta, None);
    }

    #[test]
    fn degenerate_slope_rejected() {
        // f = ρ² - 2ρ + 1 has a double root at 1.
        let s = NonlinearitySpec::cubic_quintic(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(analyze_potential(&s, 16.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn kato_gp_bounded() {
        let r = check_kato(&NonlinearitySpec::gp(), 1.0, 1e4, 2000).unwrap();
        assert!(r.passed);
        assert!(r.max_ratio_f <= 1.0 && r.max_ratio_rho_fprime <= 1.0);
    }

    #[test]
    fn kato_detects_supercritical_growth() {
        let s = NonlinearitySpec::power(1.0, 3.0).unwrap();
        assert!(!check_kato(&s, 2.0, 1e4, 2000).unwrap().passed);
        assert!(check_kato(&s, 3.0, 1e4, 2000).unwrap().passed);
        assert!(check_kato(&NonlinearitySpec::logarithmic(), 1.5, 1e4, 2000).unwrap().passed);
    }

    #[test]
    fn gp_c0_is_finite() {
        let gp = NonlinearitySpec::gp();
        let s = analyze_potential(&gp, 16.0).unwrap();
        let c = coercivity_constants(&gp, &s).unwrap();
        assert!(c.c0.is_finite() && c.c0 > 0.0);
        let focusing = NonlinearitySpec::power(-1.0, 1.0).unwrap();
        let fs = analyze_potential(&focusing, 16.0).unwrap();
        assert!(coercivity_constants(&focusing, &fs).is_err());
    }
}
