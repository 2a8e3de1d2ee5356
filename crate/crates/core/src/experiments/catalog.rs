use super::ScenarioResult;
use crate::error::Result;
use crate::nonlinearity::NonlinearitySpec;

/// Every catalog member with representative parameters.
pub fn default_catalog() -> Vec<NonlinearitySpec> {
    let mut out = vec![NonlinearitySpec::gp(), NonlinearitySpec::logarithmic()];
    let built = [
        NonlinearitySpec::power(1.0, 1.0),
        NonlinearitySpec::power(1.0, 1.5),
        NonlinearitySpec::power(-1.0, 1.0),
        NonlinearitySpec::power(-1.0, 2.0),
        NonlinearitySpec::competing(1.0, 1.2, 1.5, 0.5),
        NonlinearitySpec::competing(1.0, 2.5, 1.5, 0.5),
        NonlinearitySpec::competing(1.0, 0.5, 1.0, 1.5),
        NonlinearitySpec::cubic_quintic(1.0, 3.0, 2.0),
        NonlinearitySpec::saturated(1.0),
        NonlinearitySpec::exponential(1.0),
        NonlinearitySpec::transiting(0.3, 0.7),
    ];
    out.extend(built.into_iter().map(|s| s.expect("catalog parameters are valid")));
    out
}

const SAMPLES: [f64; 8] = [0.05, 0.3, 0.7, 0.95, 1.05, 1.6, 3.0, 7.5];

/// Pointwise consistency of `f`, `f'` and `F` for each spec.
///
/// Checks `f(1) = 0`, `F(1) = 0`, centered differences of `f` and `F`
/// against `f'` and `f` (relative to `max(|value|, 1)`), and closed-form
/// `F` against adaptive quadrature of `f`.
pub fn exp_catalog(specs: &[NonlinearitySpec]) -> Result<ScenarioResult> {
    let mut res = ScenarioResult::new("catalog");
    let (mut f_one, mut big_f_one, mut fd_fprime, mut fd_f, mut quad) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for spec in specs {
        f_one = f_one.max(spec.f(1.0)?.abs());
        big_f_one = big_f_one.max(spec.potential(1.0)?.abs());
        for &rho in &SAMPLES {
            let h = 1e-5 * rho;
            let d = (spec.f(rho + h)? - spec.f(rho - h)?) / (2.0 * h);
            let fp = spec.f_prime(rho)?;
            fd_fprime = fd_fprime.max((d - fp).abs() / fp.abs().max(1.0));
            let h = 1e-4 * rho;
            let d = (spec.potential(rho + h)? - spec.potential(rho - h)?) / (2.0 * h);
            let f = spec.f(rho)?;
            fd_f = fd_f.max((d - f).abs() / f.abs().max(1.0));
            if !spec.potential_needs_quadrature() {
                let closed = spec.potential(rho)?;
                quad = quad.max((closed - spec.potential_by_quadrature(rho)?).abs() / closed.abs().max(1.0));
            }
        }
    }
    res.set("specs", specs.len() as f64);
    res.set("max_abs_f_at_1", f_one);
    res.set("max_abs_F_at_1", big_f_one);
    res.set("max_rel_err_fprime_fd", fd_fprime);
    res.set("max_rel_err_F_prime_vs_f", fd_f);
    res.set("max_rel_err_F_closed_vs_quadrature", quad);
    res.passed = f_one <= 1e-12 && big_f_one <= 1e-12 && fd_fprime <= 1e-5 && fd_f <= 1e-5 && quad <= 1e-10;
    Ok(res)
}
