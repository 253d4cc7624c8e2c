use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::quadrature::{integrate_1d, QuadSpec, Singularity};

/// Fourier-side oracle for the one-dimensional fractional gradient of a
/// Gaussian `a exp(-pi (x-c)^2 / w^2)`:
///
/// `grad^a f(x) = -2 a w int_0^inf (2 pi xi)^a exp(-pi w^2 xi^2) sin(2 pi (x-c) xi) dxi`,
///
/// the inverse transform of the symbol `(2 pi i xi) |2 pi xi|^(a-1)` applied
/// to `f^`. The integral is cut where the Gaussian factor drops below
/// `exp(-144 pi)`.
pub fn spectral_gradient_1d(f: &ScalarField, alpha: f64, x: f64) -> Result<f64> {
    let ScalarField::Gaussian(g) = f else {
        return Err(Error::UnsupportedField(f.kind_name().to_string()));
    };
    if g.center.len() != 1 {
        return Err(Error::Dimension(g.center.len()));
    }
    // the oracle is valid on all of (0, 1), wider than the operator range
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("order {alpha} outside (0, 1)")));
    }
    let (a, w, d) = (g.amplitude, g.width, x - g.center[0]);
    if d == 0.0 {
        return Ok(0.0);
    }
    let cutoff = 12.0 / w;
    // split at the zeros of the sine so the pieces do not oscillate
    let period = 0.5 / d.abs();
    let breaks: Vec<Singularity> = (1..)
        .map(|k| k as f64 * period)
        .take_while(|&p| p < cutoff)
        .take(400)
        .map(Singularity::breakpoint)
        .collect();
    let spec = QuadSpec::for_dim(1).with_tol(1e-12, 1e-15);
    let q = integrate_1d(
        |xi| (2.0 * PI * xi).powf(alpha) * (-PI * w * w * xi * xi).exp() * (2.0 * PI * d * xi).sin(),
        0.0,
        cutoff,
        &breaks,
        &spec,
    )?;
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    Ok(-2.0 * a * w * q.value)
}
