//! One-dimensional quadrature rules.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 4-point Gauss–Legendre nodes and weights on [-1, 1].
pub const GAUSS4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
pub const GAUSS4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod 7-15 integration of `f` over `[a, b]`.
///
/// Intervals are bisected until each local error estimate is below its
/// share of `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate_adaptive(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (whole, _) = gk15(&f, a, b);
    let tol = abs_tol.max(rel_tol * whole.abs());
    let width = (b - a).abs();
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        if !val.is_finite() {
            return Err(Error::Quadrature { a: lo, b: hi, err: f64::INFINITY });
        }
        let share = tol * (hi - lo).abs() / width;
        if err <= share || err <= 1e-15 * val.abs() {
            total += val;
        } else if depth >= 48 {
            return Err(Error::Quadrature { a: lo, b: hi, err });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate_adaptive(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-13, 0.0).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate_adaptive(f64::exp, 1.0, 0.0, 1e-13, 0.0).unwrap();
        assert!((v + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn sech_fourth_integral() {
        let v = integrate_adaptive(|x: f64| x.cosh().powi(-4), -40.0, 40.0, 1e-14, 0.0).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss4_integrates_cubics() {
        let s: f64 = GAUSS4_NODES
            .iter()
            .zip(GAUSS4_WEIGHTS)
            .map(|(&x, w)| w * (x.powi(6) + x.powi(3)))
            .sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-15);
    }
}
