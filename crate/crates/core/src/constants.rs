//! Gamma function and the normalising constants of the fractional operators.
//!
//! Every operator in the crate is scaled by one of these constants, so they
//! are evaluated to close to double precision:
//!
//! * `mu(n, a)   = 2^a pi^(-n/2) Gamma((n+a+1)/2) / Gamma((1-a)/2)`
//! * `nu(n, b)   = 2^b pi^(-n/2) Gamma((n+b)/2)   / Gamma(-b/2)`
//! * `riesz(n,s) = 2^-s pi^(-n/2) Gamma((n-s)/2)  / Gamma(s/2)`

// Coefficient tables are kept at their published digits.
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest |x| accepted by [`gamma`].
pub const GAMMA_ARG_LIMIT: f64 = 64.0;

/// Largest dimension accepted by the constant routines.
pub const MAX_CONSTANT_DIM: usize = 8;

// Pugh's 11-term Lanczos fit (r = 10.900511), relative error below 1e-15 on
// the right half-line.
const LANCZOS_R: f64 = 10.900_511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_655_46e-5,
    1.051_423_785_817_219_742_10,
    -3.456_870_972_220_162_354_69,
    4.512_277_094_668_948_237_00,
    -2.982_852_253_235_766_556_21,
    1.056_397_115_771_267_130_77,
    -1.954_287_731_916_458_695_83e-1,
    1.709_705_434_044_412_243_07e-2,
    -5.719_261_174_043_057_812_83e-4,
    4.633_994_733_599_056_367_08e-6,
    -2.719_949_084_886_077_039_10e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

/// Gamma on the right half-line x >= 1/2.
fn gamma_right(x: f64) -> f64 {
    let base = (x - 0.5 + LANCZOS_R) / std::f64::consts::E;
    // split the power so that Gamma(64) does not overflow the intermediate
    let half = base.powf(0.5 * (x - 0.5));
    lanczos_sum(x) * TWO_SQRT_E_OVER_PI * half * half
}

/// The Gamma function for real arguments with `|x| <= 64`.
///
/// Negative non-integers go through the reflection formula.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > GAMMA_ARG_LIMIT {
        return Err(Error::OutOfRange {
            what: "gamma argument",
            value: x,
            range: "[-64, 64]",
        });
    }
    if x <= 0.0 && x == x.round() {
        return Err(Error::PoleArgument(x));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if (1.0..=23.0).contains(&x) && x == x.round() {
        // exact factorials
        return (2..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    if x >= 0.5 {
        gamma_right(x)
    } else {
        // sin(pi x) computed from the distance to the nearest integer keeps the
        // reflection accurate near the poles
        let k = x.round();
        let frac = x - k;
        let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let sin_pi_x = sign * (PI * frac).sin();
        PI / (sin_pi_x * gamma_right(1.0 - x))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CONSTANT_DIM {
        return Err(Error::Dimension(n));
    }
    Ok(())
}

fn check_open(what: &'static str, v: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if v.is_finite() && v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: v,
            range,
        })
    }
}

/// Normalisation of the fractional gradient; defined for `alpha` in (-1, 1).
pub fn mu(n: usize, alpha: f64) -> Result<f64> {
    check_dim(n)?;
    check_open("alpha", alpha, -1.0, 1.0, "(-1, 1)")?;
    let nf = n as f64;
    Ok(2f64.powf(alpha) * PI.powf(-0.5 * nf) * gamma_unchecked(0.5 * (nf + alpha + 1.0))
        / gamma_unchecked(0.5 * (1.0 - alpha)))
}

/// Normalisation of the fractional Laplacian of order `beta` in (0, 1).
/// Always negative.
pub fn nu(n: usize, beta: f64) -> Result<f64> {
    check_dim(n)?;
    check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
    let nf = n as f64;
    Ok(2f64.powf(beta) * PI.powf(-0.5 * nf) * gamma_unchecked(0.5 * (nf + beta))
        / gamma_unchecked(-0.5 * beta))
}

/// Normalisation of the Riesz potential of order `s` in (0, n).
pub fn riesz_constant(n: usize, s: f64) -> Result<f64> {
    check_dim(n)?;
    check_open("s", s, 0.0, n as f64, "(0, n)")?;
    let nf = n as f64;
    Ok(2f64.powf(-s) * PI.powf(-0.5 * nf) * gamma_unchecked(0.5 * (nf - s))
        / gamma_unchecked(0.5 * s))
}

/// Lebesgue measure of the unit ball in R^n.
pub fn ball_volume(n: usize) -> Result<f64> {
    if n == 0 || n > 2 * GAMMA_ARG_LIMIT as usize - 2 {
        return Err(Error::Dimension(n));
    }
    let nf = n as f64;
    Ok(PI.powf(0.5 * nf) / gamma_unchecked(0.5 * nf + 1.0))
}

/// Surface measure of the unit sphere S^{n-1}, i.e. `n * ball_volume(n)`.
pub fn sphere_area(n: usize) -> Result<f64> {
    Ok(n as f64 * ball_volume(n)?)
}

/// The three Hardy constants: the sharp one-dimensional constant
/// `2 mu(1,a)/a`, Spector's constant and their maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyConstants {
    pub c_half: f64,
    pub gamma_spector: f64,
    pub c_max: f64,
}

pub fn hardy_constants(n: usize, alpha: f64) -> Result<HardyConstants> {
    check_dim(n)?;
    check_open("alpha", alpha, 0.0, 1.0, "(0, 1)")?;
    let nf = n as f64;
    let c_half = 2.0 * mu(1, alpha)? / alpha;
    let gamma_spector = 2f64.powf(alpha)
        * gamma_unchecked(0.5 * alpha)
        * gamma_unchecked(0.5 * (nf + 1.0))
        / (PI.powf(1.0 - 0.5 * alpha) * gamma_unchecked(0.5 * (nf - alpha)));
    Ok(HardyConstants {
        c_half,
        gamma_spector,
        c_max: c_half.max(gamma_spector),
    })
}

/// Constants needed by one operator evaluation, computed once up front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConstants {
    pub n: usize,
    pub alpha: f64,
    /// `mu(n, alpha)`
    pub mu_n: f64,
    /// `mu(1, alpha)`
    pub mu_1: f64,
    /// `nu(n, 1 - alpha)`
    pub nu_complement: f64,
    /// `riesz_constant(n, 1 - alpha)`
    pub riesz_complement: f64,
    pub omega_n: f64,
}

impl KernelConstants {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        check_open("alpha", alpha, 0.0, 1.0, "(0, 1)")?;
        Ok(Self {
            n,
            alpha,
            mu_n: mu(n, alpha)?,
            mu_1: mu(1, alpha)?,
            nu_complement: nu(n, 1.0 - alpha)?,
            riesz_complement: riesz_constant(n, 1.0 - alpha)?,
            omega_n: ball_volume(n)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // Stirling series after shifting the argument above 20; independent of the
    // Lanczos coefficients.
    fn stirling_gamma(x: f64) -> f64 {
        let mut shift = 1.0;
        let mut z = x;
        while z < 20.0 {
            shift *= z;
            z += 1.0;
        }
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 360.0
                        - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
        let lg = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
        lg.exp() / shift
    }

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-15);
        // mpmath, 30 digits
        assert!(rel(gamma(-0.25).unwrap(), -4.901_666_809_860_710_580_516) < 1e-13);
        assert!(rel(gamma(0.75).unwrap(), 1.225_416_702_465_177_645_129) < 1e-14);
        assert!(rel(gamma(10.3).unwrap(), 716_430.689_062_376_406_625_4) < 1e-13);
        assert!(rel(gamma(33.7).unwrap(), 3.032_162_654_739_871_787_065e36) < 1e-13);
        assert!(rel(gamma(63.9).unwrap(), 1.309_161_773_447_210_610_762e87) < 1e-12);
        assert!(rel(gamma(-3.7).unwrap(), 0.251_643_995_902_422_681_285_8) < 1e-13);
        assert!(rel(gamma(0.1).unwrap(), 9.513_507_698_668_731_285_808) < 1e-14);
    }

    #[test]
    fn gamma_minus_quarter_by_recurrence() {
        let g = gamma(-0.25).unwrap();
        assert!(rel(g, -4.0 * gamma(0.75).unwrap()) < 1e-13);
        assert!(rel(g, -4.0 * stirling_gamma(0.75)) < 1e-12);
    }

    #[test]
    fn gamma_rejects_poles_and_range() {
        assert_eq!(gamma(0.0), Err(Error::PoleArgument(0.0)));
        assert_eq!(gamma(-3.0), Err(Error::PoleArgument(-3.0)));
        assert!(matches!(gamma(64.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(gamma(f64::NAN), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn stirling_oracle_agrees_on_grid() {
        for i in 1..=120 {
            let x = -7.95 + 0.55 * i as f64;
            if (x - x.round()).abs() < 1e-3 && x <= 0.0 {
                continue;
            }
            assert!(rel(gamma(x).unwrap(), stirling_gamma(x)) < 1e-12, "x = {x}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn recurrence(x in -62.9f64..62.9) {
            prop_assume!((x - x.round()).abs() > 1e-6 && (x + 1.0 - (x + 1.0).round()).abs() > 1e-6);
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            prop_assert!(rel(lhs, rhs) <= 1e-12, "x={} {} {}", x, lhs, rhs);
        }

        #[test]
        fn reflection(x in 0.001f64..0.999) {
            let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            let rhs = PI / (PI * x).sin();
            prop_assert!(rel(lhs, rhs) <= 1e-10);
        }

        #[test]
        fn mu_definition_round_trip(n in 1usize..=8, a in -0.99f64..0.99) {
            let m = mu(n, a).unwrap();
            let back = m * gamma((1.0 - a) / 2.0).unwrap() / (2f64.powf(a) * PI.powf(-(n as f64) / 2.0));
            prop_assert!(rel(back, gamma((n as f64 + a + 1.0) / 2.0).unwrap()) <= 1e-12);
        }

        #[test]
        fn signs(n in 1usize..=8, a in 0.001f64..0.999) {
            prop_assert!(mu(n, a).unwrap() > 0.0);
            prop_assert!(mu(n, -a).unwrap() > 0.0);
            prop_assert!(nu(n, a).unwrap() < 0.0);
        }
    }

    #[test]
    fn mu_examples() {
        let s2pi = (2.0 * PI).sqrt();
        assert!(rel(mu(1, 0.5).unwrap(), 1.0 / (2.0 * s2pi)) < 1e-14);
        assert!(rel(mu(1, -0.5).unwrap(), 1.0 / s2pi) < 1e-14);
        assert!(rel(mu(2, 0.5).unwrap(), 0.114_111_419_793_701_561_950_1) < 1e-13);
        assert!(rel(mu(3, 0.3).unwrap(), 0.093_174_968_839_357_422_557_19) < 1e-13);
        assert!(mu(1, 1.0).is_err());
        assert!(mu(0, 0.5).is_err());
    }

    #[test]
    fn mu_decreases_to_zero_as_alpha_tends_to_one() {
        // Gamma((1-a)/2) blows up, so mu(1, a) falls monotonically from 1/pi
        let mut prev = mu(1, 0.0).unwrap();
        assert!(rel(prev, 1.0 / PI) < 1e-15);
        for k in 1..1000 {
            let m = mu(1, k as f64 / 1000.0).unwrap();
            assert!(m < prev, "k = {k}");
            prev = m;
        }
        assert!(mu(1, 0.999_999).unwrap() < 1e-6);
    }

    #[test]
    fn nu_examples() {
        assert!(rel(nu(1, 0.5).unwrap(), -mu(1, 0.5).unwrap()) < 1e-14);
        assert!(rel(nu(2, 0.5).unwrap(), -0.083_241_983_875_425_065_488_94) < 1e-13);
        assert!(rel(nu(3, 0.25).unwrap(), -0.021_965_496_090_801_028_716_29) < 1e-13);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((ball_volume(2).unwrap() - PI).abs() < 1e-14);
        assert!(rel(ball_volume(3).unwrap(), 4.0 * PI / 3.0) < 1e-14);
        assert!((sphere_area(2).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn hardy_constant_examples() {
        let h = hardy_constants(1, 0.5).unwrap();
        assert!(rel(h.c_half, (2.0 / PI).sqrt()) < 1e-14);
        assert!(rel(hardy_constants(3, 0.5).unwrap().gamma_spector, 2.397_245_900_612_894_983_713) < 1e-13);
        assert!(rel(hardy_constants(2, 0.5).unwrap().gamma_spector, 1.571_429_180_799_464_384_995) < 1e-13);
        for k in 1..10 {
            let a = k as f64 / 10.0;
            let h3 = hardy_constants(3, a).unwrap();
            assert!(h3.gamma_spector > h3.c_half, "alpha = {a}");
            for n in 1..=8 {
                let h = hardy_constants(n, a).unwrap();
                assert!(h.c_max >= h.c_half && h.c_max >= h.gamma_spector);
            }
        }
    }
}
