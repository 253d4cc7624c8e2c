use serde::Serialize;

use super::frac_divergence;
use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::quadrature::{integrate_1d, QuadResult, QuadSpec, Singularity};

/// Lower bound `max_phi int f div^a phi` over a finite family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationBound {
    pub value: f64,
    /// Index of the maximising member; `None` for an empty family.
    pub best: Option<usize>,
    /// `int f div^a phi` for every member, in family order.
    pub per_member: Vec<f64>,
}

/// Gagliardo seminorm `int int |f(x) - f(y)| / |x - y|^(1+a) dx dy` in one
/// dimension, for fields with bounded (or Gaussian) support `[a, b]`:
///
/// `2 int_a^b |f(y)| (y-a)^-a / a dy
///  + 2 int_a^b (int_0^(b-x) |f(x+h) - f(x)| h^(-1-a) dh + |f(x)| (b-x)^-a / a) dx`,
///
/// where the parts with a point outside the support have been integrated in
/// closed form.
pub fn gagliardo_seminorm(f: &ScalarField, alpha: f64, spec: &QuadSpec) -> Result<QuadResult> {
    super::FracOrder::gradient(alpha)?;
    if f.dim() != 1 {
        return Err(Error::Dimension(f.dim()));
    }
    let (lo, hi) = f
        .effective_box()
        .ok_or_else(|| Error::UnsupportedField(f.kind_name().to_string()))?;
    let (a, b) = (lo[0], hi[0]);
    if b <= a {
        return Ok(QuadResult::zero());
    }
    let inner_spec = spec.inner(0.1);
    let floor = 10.0 * f64::EPSILON * f.sup_bound().unwrap_or(1.0) / alpha;
    let left = integrate_1d(
        |y| f.value(&[y]).abs() * (y - a).powf(-alpha) / alpha,
        a,
        b,
        &[Singularity::new(a, -alpha)],
        spec,
    )?;
    let failed = std::sync::atomic::AtomicBool::new(false);
    let evals = std::sync::atomic::AtomicUsize::new(0);
    let body = integrate_1d(
        |x| {
            let fx = f.value(&[x]);
            let reach = b - x;
            if reach <= 0.0 {
                return 0.0;
            }
            // |f(x+h) - f(x)| is noise below h ~ eps^(1/3): close [0, delta]
            // from the leading power and put decades above it
            let delta = f64::EPSILON.cbrt() * reach;
            let k = |h: f64| (f.value(&[x + h]) - fx).abs() * h.powf(-1.0 - alpha);
            let closure = delta * k(delta) / (1.0 - alpha);
            let mut sings = Vec::new();
            let mut d = delta;
            while 10.0 * d < reach {
                d *= 10.0;
                sings.push(Singularity::breakpoint(d));
            }
            let spec = QuadSpec { abs_tol: inner_spec.abs_tol.max(floor * delta.powf(-alpha)), ..inner_spec };
            let inner = integrate_1d(k, delta, reach, &sings, &spec);
            match inner {
                Ok(q) if q.converged => {
                    evals.fetch_add(q.evals_used, std::sync::atomic::Ordering::Relaxed);
                    closure + q.value + fx.abs() * reach.powf(-alpha) / alpha
                }
                _ => {
                    failed.store(true, std::sync::atomic::Ordering::Relaxed);
                    f64::NAN
                }
            }
        },
        a,
        b,
        &[Singularity::new(b, -alpha)],
        &spec.parallel(true),
    )?;
    if failed.into_inner() || !left.converged || !body.converged {
        return Err(Error::BudgetExceeded(left.evals_used + body.evals_used + evals.into_inner()));
    }
    Ok(QuadResult {
        value: 2.0 * (left.value + body.value),
        err_estimate: 2.0 * (left.err_estimate + body.err_estimate),
        evals_used: left.evals_used + body.evals_used + evals.into_inner(),
        converged: true,
    })
}

/// `max` over `family` of `int f div^a phi dx`, a lower bound for the total
/// fractional variation `|D^a f|`. Every member must satisfy `|phi| <= 1`.
pub fn variation_lower_bound(f: &ScalarField, alpha: f64, family: &[VectorField], spec: &QuadSpec) -> Result<VariationBound> {
    super::FracOrder::gradient(alpha)?;
    for phi in family {
        if phi.dim() != f.dim() {
            return Err(Error::Domain("test field and function differ in dimension".into()));
        }
        phi.check_sup(1.0)?;
    }
    // a lower bound gains nothing from digits the wide test fields cannot
    // hold: their centres carry ulp(reach) of rounding into the thin gap
    let spec = &spec.with_tol(spec.rel_tol.max(1e-6), spec.abs_tol);
    let div_decay = 1.0 + alpha;
    let per_member = family
        .iter()
        .map(|phi| {
            let inner = spec.inner(0.1);
            let q = super::integrate_against(f, |x| Ok(frac_divergence(phi, alpha, x, &inner)?.value[0]), div_decay, spec)?;
            Ok(q.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut value = 0.0;
    let mut best = None;
    for (i, &v) in per_member.iter().enumerate() {
        if best.is_none() || v > value {
            value = v;
            best = Some(i);
        }
    }
    // phi = 0 is always admissible
    if value < 0.0 {
        value = 0.0;
    }
    Ok(VariationBound { value, best, per_member })
}

/// Test fields for one-dimensional functions concentrated near the origin:
/// odd pairs `psi((x - c)/w) - psi((x + c)/w)` of plateau bumps with `c = w`,
/// so that each pair is close to `sgn(x)` on `(-2w, 2w)` away from a thin
/// gap at 0. Twenty members over scales `2w` from 1 to 1024; wider pairs
/// lose the thin gap to rounding of their centres.
pub fn default_test_family() -> Vec<VectorField> {
    let mut out = Vec::new();
    let reach = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 128.0, 256.0, 512.0, 1024.0];
    for &r in &reach {
        out.push(odd_pair(r, 0.02));
    }
    for &r in &[4.0, 64.0, 1024.0] {
        out.push(odd_pair(r, 0.2));
    }
    out
}

/// Odd plateau pair reaching out to `reach` with an inner gap `gap`.
fn odd_pair(reach: f64, gap: f64) -> VectorField {
    let w = 0.5 * reach;
    let plateau = 1.0 - gap / w;
    let right = ScalarField::plateau_bump(&[w], w, plateau, 1.0).expect("valid bump");
    let left = ScalarField::plateau_bump(&[-w], w, plateau, 1.0).expect("valid bump");
    let phi = ScalarField::sum(vec![(1.0, right), (-1.0, left)]).expect("same dimension");
    VectorField::from_scalar(phi).expect("one-dimensional")
}
