use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

/// Members of the nonlinearity catalog. All are normalized so that `f(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// `λ(ρ^α - 1)`
    Power { lambda: f64, alpha: f64 },
    /// `a₁(ρ^α₁ - 1) - a₂(ρ^α₂ - 1)`
    Competing { a1: f64, a2: f64, alpha1: f64, alpha2: f64 },
    /// `α₅ρ² - α₃ρ + α₁` with `α₁ - α₃ + α₅ = 0`
    CubicQuintic { alpha1: f64, alpha3: f64, alpha5: f64 },
    /// `ρ/(1+γρ) - 1/(1+γ)`
    Saturated { gamma: f64 },
    /// `e^{-γ} - e^{-γρ}`
    Exponential { gamma: f64 },
    /// `2ρ(1 + a tanh(γ(ρ²-1))) - 2`
    Transiting { a: f64, gamma: f64 },
    /// `ρ ln ρ`
    Logarithmic,
    /// `ρ - 1`
    Gp,
    /// `f ≡ 0`, the free equation. Used to test the propagators.
    Free,
}

/// A catalog nonlinearity with the growth exponent used for Kato checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearitySpec {
    kind: Kind,
    alpha_growth: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidNonlinearity(format!("{name} = {x} must be positive")))
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidNonlinearity(format!("{name} = {x} must be finite")))
    }
}

impl NonlinearitySpec {
    pub fn new(kind: Kind) -> Result<Self> {
        match kind {
            Kind::Power { lambda, alpha } => {
                if lambda != 1.0 && lambda != -1.0 {
                    return Err(Error::InvalidNonlinearity(format!(
                        "power: lambda = {lambda} must be +1 or -1"
                    )));
                }
                positive("alpha", alpha)?;
            }
            Kind::Competing { a1, a2, alpha1, alpha2 } => {
                positive("a1", a1)?;
                finite("a2", a2)?;
                positive("alpha1", alpha1)?;
                positive("alpha2", alpha2)?;
            }
            Kind::CubicQuintic { alpha1, alpha3, alpha5 } => {
                finite("alpha1", alpha1)?;
                finite("alpha3", alpha3)?;
                finite("alpha5", alpha5)?;
            }
            Kind::Saturated { gamma } | Kind::Exponential { gamma } => positive("gamma", gamma)?,
            Kind::Transiting { a, gamma } => {
                finite("a", a)?;
                positive("gamma", gamma)?;
            }
            Kind::Logarithmic | Kind::Gp | Kind::Free => {}
        }
        let spec = Self { kind, alpha_growth: natural_alpha(kind) };
        let f1 = spec.f(1.0)?;
        if f1.abs() > 1e-12 {
            return Err(Error::InvalidNonlinearity(format!("{}: f(1) = {f1:e}, expected 0", spec.name())));
        }
        Ok(spec)
    }

    pub fn gp() -> Self {
        Self { kind: Kind::Gp, alpha_growth: 1.0 }
    }

    pub fn free() -> Self {
        Self { kind: Kind::Free, alpha_growth: 1.0 }
    }

    pub fn logarithmic() -> Self {
        Self { kind: Kind::Logarithmic, alpha_growth: 1.5 }
    }

    pub fn power(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(Kind::Power { lambda, alpha })
    }

    pub fn competing(a1: f64, a2: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(Kind::Competing { a1, a2, alpha1, alpha2 })
    }

    pub fn cubic_quintic(alpha1: f64, alpha3: f64, alpha5: f64) -> Result<Self> {
        Self::new(Kind::CubicQuintic { alpha1, alpha3, alpha5 })
    }

    pub fn saturated(gamma: f64) -> Result<Self> {
        Self::new(Kind::Saturated { gamma })
    }

    pub fn exponential(gamma: f64) -> Result<Self> {
        Self::new(Kind::Exponential { gamma })
    }

    pub fn transiting(a: f64, gamma: f64) -> Result<Self> {
        Self::new(Kind::Transiting { a, gamma })
    }

    /// Override the growth exponent reported for Kato checks.
    pub fn with_alpha_growth(mut self, alpha: f64) -> Result<Self> {
        positive("alpha_growth", alpha)?;
        self.alpha_growth = alpha;
        Ok(self)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alpha_growth(&self) -> f64 {
        self.alpha_growth
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Power { .. } => "power",
            Kind::Competing { .. } => "competing",
            Kind::CubicQuintic { .. } => "cubic_quintic",
            Kind::Saturated { .. } => "saturated",
            Kind::Exponential { .. } => "exponential",
            Kind::Transiting { .. } => "transiting",
            Kind::Logarithmic => "logarithmic",
            Kind::Gp => "gp",
            Kind::Free => "free",
        }
    }

    /// True when `F` is only available by quadrature.
    pub fn potential_needs_quadrature(&self) -> bool {
        matches!(self.kind, Kind::Transiting { .. })
    }

    fn check_rho(&self, rho: f64) -> Result<()> {
        if rho.is_nan() || rho < 0.0 {
            return Err(Error::Domain { kind: self.name(), rho });
        }
        Ok(())
    }

    /// `f(ρ)`.
    pub fn f(&self, rho: f64) -> Result<f64> {
        self.check_rho(rho)?;
        Ok(match self.kind {
            Kind::Power { lambda, alpha } => lambda * (rpow(rho, alpha) - 1.0),
            Kind::Competing { a1, a2, alpha1, alpha2 } => {
                a1 * (rpow(rho, alpha1) - 1.0) - a2 * (rpow(rho, alpha2) - 1.0)
            }
            Kind::CubicQuintic { alpha1, alpha3, alpha5 } => (alpha5 * rho - alpha3) * rho + alpha1,
            Kind::Saturated { gamma } => rho / (1.0 + gamma * rho) - 1.0 / (1.0 + gamma),
            Kind::Exponential { gamma } => (-gamma).exp() - (-gamma * rho).exp(),
            Kind::Transiting { a, gamma } => {
                2.0 * rho * (1.0 + a * (gamma * (rho * rho - 1.0)).tanh()) - 2.0
            }
            Kind::Logarithmic => {
                if rho == 0.0 {
                    return Err(Error::Domain { kind: self.name(), rho });
                }
                rho * rho.ln()
            }
            Kind::Gp => rho - 1.0,
            Kind::Free => 0.0,
        })
    }

    /// `f'(ρ)` for `ρ > 0`.
    pub fn f_prime(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::Domain { kind: self.name(), rho });
        }
        Ok(match self.kind {
            Kind::Power { lambda, alpha } => lambda * alpha * rho.powf(alpha - 1.0),
            Kind::Competing { a1, a2, alpha1, alpha2 } => {
                a1 * alpha1 * rho.powf(alpha1 - 1.0) - a2 * alpha2 * rho.powf(alpha2 - 1.0)
            }
            Kind::CubicQuintic { alpha3, alpha5, .. } => 2.0 * alpha5 * rho - alpha3,
            Kind::Saturated { gamma } => (1.0 + gamma * rho).powi(-2),
            Kind::Exponential { gamma } => gamma * (-gamma * rho).exp(),
            Kind::Transiting { a, gamma } => {
                let u = gamma * (rho * rho - 1.0);
                let sech2 = 1.0 / u.cosh().powi(2);
                2.0 * (1.0 + a * u.tanh()) + 4.0 * a * gamma * rho * rho * sech2
            }
            Kind::Logarithmic => rho.ln() + 1.0,
            Kind::Gp => 1.0,
            Kind::Free => 0.0,
        })
    }

    /// Potential `F(ρ) = ∫₁^ρ f`.
    pub fn potential(&self, rho: f64) -> Result<f64> {
        self.check_rho(rho)?;
        Ok(match self.kind {
            Kind::Power { lambda, alpha } => {
                lambda / (alpha + 1.0) * (rho.powf(alpha + 1.0) - 1.0 - (alpha + 1.0) * (rho - 1.0))
            }
            Kind::Competing { a1, a2, alpha1, alpha2 } => {
                let p = |a: f64| (rho.powf(a + 1.0) - 1.0) / (a + 1.0) - (rho - 1.0);
                a1 * p(alpha1) - a2 * p(alpha2)
            }
            Kind::CubicQuintic { alpha1, alpha3, alpha5 } => {
                alpha5 * (rho.powi(3) - 1.0) / 3.0 - alpha3 * (rho * rho - 1.0) / 2.0
                    + alpha1 * (rho - 1.0)
            }
            Kind::Saturated { gamma } => {
                (rho - 1.0) / gamma - ((1.0 + gamma * rho) / (1.0 + gamma)).ln() / (gamma * gamma)
                    - (rho - 1.0) / (1.0 + gamma)
            }
            Kind::Exponential { gamma } => {
                (-gamma).exp() * (rho - 1.0) + ((-gamma * rho).exp() - (-gamma).exp()) / gamma
            }
            Kind::Transiting { .. } => return self.potential_by_quadrature(rho),
            Kind::Logarithmic => {
                let log_term = if rho == 0.0 { 0.0 } else { 0.5 * rho * rho * rho.ln() };
                log_term - 0.25 * rho * rho + 0.25
            }
            Kind::Gp => 0.5 * (rho - 1.0) * (rho - 1.0),
            Kind::Free => 0.0,
        })
    }

    /// `∫₁^ρ f` by adaptive Gauss–Kronrod, independent of any closed form.
    pub fn potential_by_quadrature(&self, rho: f64) -> Result<f64> {
        self.check_rho(rho)?;
        let f = |r: f64| {
            if r == 0.0 && matches!(self.kind, Kind::Logarithmic) {
                0.0
            } else {
                self.f(r).unwrap_or(f64::NAN)
            }
        };
        integrate_adaptive(f, 1.0, rho, 1e-12, 1e-14)
    }

    /// Exact flow of `i∂ₜψ = f(|ψ|²)ψ` over `dt`: `e^{-i f(ρ) dt}`.
    pub fn nonlinear_phase(&self, rho: f64, dt: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, -self.f(rho)? * dt))
    }

    /// `(key, value)` pairs; parameters are written with shortest round-trip formatting.
    pub fn to_kv(&self) -> Vec<(String, String)> {
        let mut out = vec![("kind".to_string(), self.name().to_string())];
        let mut push = |k: &str, v: f64| out.push((k.to_string(), format!("{v}")));
        match self.kind {
            Kind::Power { lambda, alpha } => {
                push("lambda", lambda);
                push("alpha", alpha);
            }
            Kind::Competing { a1, a2, alpha1, alpha2 } => {
                push("a1", a1);
                push("a2", a2);
                push("alpha1", alpha1);
                push("alpha2", alpha2);
            }
            Kind::CubicQuintic { alpha1, alpha3, alpha5 } => {
                push("alpha1", alpha1);
                push("alpha3", alpha3);
                push("alpha5", alpha5);
            }
            Kind::Saturated { gamma } | Kind::Exponential { gamma } => push("gamma", gamma),
            Kind::Transiting { a, gamma } => {
                push("a", a);
                push("gamma", gamma);
            }
            Kind::Logarithmic | Kind::Gp | Kind::Free => {}
        }
        if self.alpha_growth != natural_alpha(self.kind) {
            push("alpha_growth", self.alpha_growth);
        }
        out
    }

    /// Inverse of [`to_kv`](Self::to_kv). Unknown or missing keys are errors.
    pub fn from_kv(pairs: &[(String, String)]) -> Result<Self> {
        let get = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let kind_name = get("kind").unwrap_or("gp");
        let allowed: &[&str] = match kind_name {
            "power" => &["lambda", "alpha"],
            "competing" => &["a1", "a2", "alpha1", "alpha2"],
            "cubic_quintic" => &["alpha1", "alpha3", "alpha5"],
            "saturated" | "exponential" => &["gamma"],
            "transiting" => &["a", "gamma"],
            "logarithmic" | "gp" | "free" => &[],
            other => {
                return Err(Error::InvalidNonlinearity(format!("unknown kind '{other}'")));
            }
        };
        for (k, _) in pairs {
            if k != "kind" && k != "alpha_growth" && !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidNonlinearity(format!("unknown key '{k}' for kind {kind_name}")));
            }
        }
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match get(key) {
                Some(v) => v.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidNonlinearity(format!("{key}: cannot parse '{v}' as a number"))
                }),
                None => default.ok_or_else(|| Error::InvalidNonlinearity(format!("{kind_name}: missing {key}"))),
            }
        };
        let kind = match kind_name {
            "power" => Kind::Power { lambda: num("lambda", None)?, alpha: num("alpha", None)? },
            "competing" => Kind::Competing {
                a1: num("a1", Some(1.0))?,
                a2: num("a2", None)?,
                alpha1: num("alpha1", None)?,
                alpha2: num("alpha2", None)?,
            },
            "cubic_quintic" => Kind::CubicQuintic {
                alpha1: num("alpha1", None)?,
                alpha3: num("alpha3", None)?,
                alpha5: num("alpha5", None)?,
            },
            "saturated" => Kind::Saturated { gamma: num("gamma", None)? },
            "exponential" => Kind::Exponential { gamma: num("gamma", None)? },
            "transiting" => Kind::Transiting { a: num("a", None)?, gamma: num("gamma", None)? },
            "logarithmic" => Kind::Logarithmic,
            "gp" => Kind::Gp,
            _ => Kind::Free,
        };
        let spec = Self::new(kind)?;
        match get("alpha_growth") {
            Some(_) => spec.with_alpha_growth(num("alpha_growth", None)?),
            None => Ok(spec),
        }
    }
}

fn natural_alpha(kind: Kind) -> f64 {
    match kind {
        Kind::Power { alpha, .. } => alpha,
        Kind::Competing { alpha1, alpha2, .. } => alpha1.max(alpha2),
        Kind::CubicQuintic { .. } => 2.0,
        Kind::Logarithmic => 1.5,
        _ => 1.0,
    }
}

impl fmt::Display for NonlinearitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.to_kv().into_iter().skip(1).map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), params.join(", "))
    }
}

/// `ρ^a` with exact shortcuts for the half-integer exponents used in the
/// solver hot loop; `powf` is several times slower.
#[inline]
fn rpow(rho: f64, a: f64) -> f64 {
    if a == 0.5 {
        rho.sqrt()
    } else if a == 1.0 {
        rho
    } else if a == 1.5 {
        rho * rho.sqrt()
    } else if a == 2.0 {
        rho * rho
    } else {
        rho.powf(a)
    }
}
