//! `f = (-Delta)^((1-a)/2) chi_Q` for `Q = (-1, 1)^n`:
//!
//! `f(x) = nu (chi_ext(x) int_Q |y-x|^-(n+b) dy - chi_Q(x) int_{Q^c} |y-x|^-(n+b) dy)`
//! with `b = 1 - a`. Along each ray the radial integral is exact, so only the
//! angular integral needs quadrature (none at all for n = 1).

use std::f64::consts::PI;

use super::{geom, MagicCube};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_sphere, Singularity};

/// Closed form for n = 1.
pub(crate) fn value_1d(alpha: f64, nu: f64, x: f64) -> f64 {
    let e = alpha - 1.0;
    let ax = x.abs();
    if ax > 1.0 {
        nu * ((ax - 1.0).powf(e) - (ax + 1.0).powf(e)) / (1.0 - alpha)
    } else {
        -nu * ((1.0 - x).powf(e) + (1.0 + x).powf(e)) / (1.0 - alpha)
    }
}

pub(crate) fn value(m: &MagicCube, x: &[f64]) -> Result<f64> {
    let n = m.dim;
    if x.len() != n {
        return Err(Error::Domain("point and field dimensions differ".into()));
    }
    let dmax = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if dmax == 1.0 {
        return Err(Error::SingularPoint(x.to_vec()));
    }
    if n == 1 {
        return Ok(value_1d(m.alpha, m.nu, x[0]));
    }
    let beta = 1.0 - m.alpha;
    let inside = dmax < 1.0;
    let lo = vec![-1.0; n];
    let hi = vec![1.0; n];
    // radial integral of r^(-1-b) over the part of the ray in Q (outside)
    // or in the complement (inside)
    let along = |theta: &[f64]| -> f64 {
        match geom::box_crossings(x, theta, &lo, &hi) {
            Some((_, t1)) if inside => t1.powf(-beta) / beta,
            Some((t0, t1)) if t0 > 0.0 => (t0.powf(-beta) - t1.powf(-beta)) / beta,
            _ => 0.0,
        }
    };
    let q = if n == 2 {
        let mut sings: Vec<Singularity> = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                let a = (sy - x[1]).atan2(sx - x[0]).rem_euclid(2.0 * PI);
                sings.push(Singularity::breakpoint(a));
            }
        }
        integrate_1d(|phi| along(&[phi.cos(), phi.sin()]), 0.0, 2.0 * PI, &sings, &m.quad)?
    } else {
        integrate_sphere(n, along, &m.quad)?
    };
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    Ok(if inside { -m.nu * q.value } else { m.nu * q.value })
}
