//! Convolution with the standard mollifier
//! `rho(u) = C_n exp(1 / (|u|^2 - 1))` on the unit ball.

use std::sync::OnceLock;

use super::{Mollified, ScalarField, MAX_FIELD_DIM};
use crate::constants;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_ball, QuadSpec, Singularity};

static NORMALIZERS: [OnceLock<f64>; MAX_FIELD_DIM] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];

fn profile(u2: f64) -> f64 {
    if u2 >= 1.0 {
        0.0
    } else {
        (1.0 / (u2 - 1.0)).exp()
    }
}

/// `C_n`, so that `rho` has unit mass in dimension `n`.
pub(crate) fn normalizer(n: usize) -> f64 {
    *NORMALIZERS[n - 1].get_or_init(|| {
        let spec = QuadSpec::for_dim(1).with_tol(1e-14, 1e-300);
        let radial = integrate_1d(|r| profile(r * r) * r.powi(n as i32 - 1), 0.0, 1.0, &[], &spec)
            .expect("mollifier mass integral")
            .value;
        let area = constants::sphere_area(n).expect("supported dimension");
        1.0 / (area * radial)
    })
}

/// `rho_eps(z) = eps^-n rho(z / eps)`.
pub fn kernel(z: &[f64], eps: f64) -> f64 {
    let n = z.len();
    let u2 = z.iter().map(|v| v * v).sum::<f64>() / (eps * eps);
    normalizer(n) * profile(u2) / eps.powi(n as i32)
}

/// `rho_eps * field`, evaluated pointwise by quadrature over `B_eps(x)`.
pub fn mollify(field: &ScalarField, eps: f64) -> Result<ScalarField> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Descriptor(format!("mollifier radius {eps} must be positive")));
    }
    let n = field.dim();
    let quad = QuadSpec::for_dim(1).with_tol(if n == 1 { 1e-11 } else { 1e-8 }, 1e-15);
    Ok(ScalarField::Mollified(Mollified {
        base: Box::new(field.clone()),
        eps,
        quad,
    }))
}

pub(crate) fn value(m: &Mollified, x: &[f64]) -> Result<f64> {
    let n = x.len();
    let base = &*m.base;
    let q = if n == 1 {
        let mut sings = Vec::new();
        for dir in [1.0, -1.0] {
            let mut feats = Vec::new();
            base.ray_features(x, &[dir], &mut feats);
            sings.extend(
                feats
                    .iter()
                    .filter(|(t, _)| *t < m.eps)
                    .map(|&(t, e)| Singularity::new(x[0] + dir * t, e)),
            );
        }
        integrate_1d(|y| kernel(&[x[0] - y], m.eps) * base.value(&[y]), x[0] - m.eps, x[0] + m.eps, &sings, &m.quad)?
    } else {
        integrate_ball(
            |y| {
                let mut z = [0.0; 3];
                for i in 0..n {
                    z[i] = y[i] - x[i];
                }
                kernel(&z[..n], m.eps) * base.value(y)
            },
            x,
            m.eps,
            &m.quad,
        )?
    };
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    Ok(q.value)
}
