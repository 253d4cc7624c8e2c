//! Exact expressions used as oracles for the quadrature operators.

use serde::Serialize;

use crate::constants::{self, gamma};
use crate::error::{Error, Result};
use crate::fields::{HalfSpace, ScalarField};
use crate::quadrature::{integrate_1d, QuadResult, QuadSpec, Singularity};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
            range: "(0, 1)",
        })
    }
}

fn distance_to(h: &HalfSpace, x: &[f64]) -> Result<f64> {
    if x.len() != h.dim() {
        return Err(Error::Dimension(x.len()));
    }
    let d = h.signed_distance(x);
    if d == 0.0 {
        return Err(Error::SingularPoint(x.to_vec()));
    }
    Ok(d.abs())
}

/// Fractional gradient of the indicator of `{(y - x0) . nu > 0}` off the
/// hyperplane: `(mu(1,a)/a) nu / |(x - x0) . nu|^a`, on either side.
pub fn half_space_gradient(alpha: f64, h: &HalfSpace, x: &[f64]) -> Result<Vec<f64>> {
    let s = riesz_hyperplane(alpha, h, x)?;
    Ok(h.nu().iter().map(|v| s * v).collect())
}

/// Riesz potential of order `1 - a` of surface measure on the hyperplane.
pub fn riesz_hyperplane(alpha: f64, h: &HalfSpace, x: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    let d = distance_to(h, x)?;
    Ok(constants::mu(1, alpha)? / alpha * d.powf(-alpha))
}

/// `int_0^inf rho^(n-2) (1 + rho^2)^(-(n+a-1)/2) d rho` through Gamma values.
pub fn gamma_radial_integral(n: usize, alpha: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    check_alpha(alpha)?;
    let nf = n as f64;
    Ok(gamma(0.5 * alpha)? * gamma(0.5 * (nf - 1.0))? / (2.0 * gamma(0.5 * (nf + alpha - 1.0))?))
}

/// The same integral by quadrature.
pub fn gamma_radial_quadrature(n: usize, alpha: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    check_alpha(alpha)?;
    let nf = n as f64;
    let e = -0.5 * (nf + alpha - 1.0);
    // for large rho: rho^(n-2) (rho^2 (1 + rho^-2))^e, evaluated without overflow
    let q = integrate_1d(
        |rho: f64| {
            if rho <= 1.0 {
                rho.powf(nf - 2.0) * (1.0 + rho * rho).powf(e)
            } else {
                rho.powf(nf - 2.0 + 2.0 * e) * (1.0 + (rho * rho).recip()).powf(e)
            }
        },
        0.0,
        f64::INFINITY,
        &[Singularity::breakpoint(1.0), Singularity::tail(1.0 + alpha)],
        spec,
    )?;
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    Ok(q)
}

/// Values from the optimality argument for the one-dimensional Hardy
/// constant, all for the unit interval around a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalIdentities {
    /// `int_(-1,1) |x|^-a dx = 2/(1-a)`
    pub hardy_integral: f64,
    /// `|D^a chi_(-1,1)|(R) = 4 mu(1,a) / (a (1-a))`
    pub variation: f64,
    /// `c(1,a) = 2 mu(1,a)/a`
    pub hardy_constant: f64,
}

pub fn interval_identities(alpha: f64) -> Result<IntervalIdentities> {
    check_alpha(alpha)?;
    let mu = constants::mu(1, alpha)?;
    Ok(IntervalIdentities {
        hardy_integral: 2.0 / (1.0 - alpha),
        variation: 4.0 * mu / (alpha * (1.0 - alpha)),
        hardy_constant: 2.0 * mu / alpha,
    })
}

/// Sphere average of `(mu(1,a)/a) |t (nu . e) - r|^-a`, the weight of the
/// weighted Hardy inequality with `t = |x - x0|`.
///
/// For `n >= 2` this is `k_n (mu(1,a)/a) int_(-1,1) (1-s^2)^((n-3)/2) |s t - r|^-a ds`
/// with `k_n = (n-1) omega_(n-1) / (n omega_n)` the density of `nu . e`;
/// the singular point `s = r/t` (when `t > r`) is passed to the quadrature.
pub fn weight_w(n: usize, alpha: f64, t: f64, r: f64, spec: &QuadSpec) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t >= 0.0 && t.is_finite() && r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("weight needs t >= 0 and r > 0, got t = {t}, r = {r}")));
    }
    let c = constants::mu(1, alpha)? / alpha;
    if n == 1 {
        if t == r {
            return Err(Error::NonIntegrable(-alpha));
        }
        return Ok(0.5 * c * ((t - r).abs().powf(-alpha) + (t + r).powf(-alpha)));
    }
    if n > constants::MAX_CONSTANT_DIM {
        return Err(Error::Dimension(n));
    }
    let nf = n as f64;
    let k = (nf - 1.0) * constants::ball_volume(n - 1)? / (nf * constants::ball_volume(n)?);
    let end = 0.5 * (nf - 3.0);
    if t == 0.0 {
        // int (1-s^2)^end ds = 1/k
        return Ok(c * r.powf(-alpha));
    }
    let s0 = r / t;
    if s0 == 1.0 && end - alpha <= -1.0 {
        return Err(Error::NonIntegrable(end - alpha));
    }
    // Each piece is integrated in the offset from its singular end, so that
    // neither 1 -+ s nor s - s0 is formed by cancellation near the end.
    let piece = |len: f64, exponent: f64, g: &(dyn Fn(f64) -> f64 + Sync)| -> Result<QuadResult> {
        let q = integrate_1d(g, 0.0, len, &[Singularity::new(0.0, exponent)], spec)?;
        if !q.converged {
            return Err(Error::BudgetExceeded(q.evals_used));
        }
        Ok(q)
    };
    let a = -alpha;
    let mut total = 0.0;
    if s0 < 1.0 {
        let (m1, m2) = (0.5 * (s0 - 1.0), 0.5 * (s0 + 1.0));
        // [-1, m1] from -1, [m1, s0] and [s0, m2] from s0, [m2, 1] from 1
        total += piece(m1 + 1.0, end, &|v| (v * (2.0 - v)).powf(end) * (t * (1.0 + s0 - v)).powf(a))?.value;
        total += piece(s0 - m1, a, &|u| {
            let s = s0 - u;
            ((1.0 - s) * (1.0 + s)).powf(end) * (t * u).powf(a)
        })?
        .value;
        total += piece(m2 - s0, a, &|u| {
            let s = s0 + u;
            ((1.0 - s) * (1.0 + s)).powf(end) * (t * u).powf(a)
        })?
        .value;
        total += piece(1.0 - m2, end, &|v| (v * (2.0 - v)).powf(end) * (t * (1.0 - s0 - v)).abs().powf(a))?.value;
    } else {
        let gap = s0 - 1.0;
        let right = if gap == 0.0 { end + a } else { end };
        total += piece(1.0, end, &|v| (v * (2.0 - v)).powf(end) * (t * (1.0 + s0 - v)).powf(a))?.value;
        total += piece(1.0, right, &|v| (v * (2.0 - v)).powf(end) * (t * (gap + v)).powf(a))?.value;
    }
    Ok(k * c * total)
}

/// Value of the chain-rule counterexample `f_a` at `x`.
pub fn f_alpha_closed(alpha: f64, x: f64) -> Result<f64> {
    ScalarField::f_alpha(alpha)?.eval(&[x])
}
