//! Pointwise evaluation of the fractional gradient, divergence, Riesz
//! potential, fractional Laplacian and non-local gradient from their
//! defining integrals.

mod engine;
mod spectral;
mod variation;

use serde::Serialize;

use crate::constants;
use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::quadrature::{integrate_1d, integrate_rect, QuadResult, QuadSpec, Singularity};
use engine::Radial;

pub use spectral::spectral_gradient_1d;
pub use variation::{default_test_family, gagliardo_seminorm, variation_lower_bound, VariationBound};

/// Orders accepted by the quadrature operators.
pub const ORDER_MIN: f64 = 0.05;
pub const ORDER_MAX: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderRole {
    /// `alpha` of the gradient, divergence and non-local gradient.
    Gradient,
    /// `s` of the Riesz potential.
    Potential,
    /// `beta` of the fractional Laplacian.
    Laplacian,
}

/// A validated fractional exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracOrder {
    pub value: f64,
    pub role: OrderRole,
}

impl FracOrder {
    pub fn gradient(alpha: f64) -> Result<Self> {
        Self::checked(alpha, OrderRole::Gradient, "alpha", ORDER_MAX)
    }

    pub fn laplacian(beta: f64) -> Result<Self> {
        Self::checked(beta, OrderRole::Laplacian, "beta", ORDER_MAX)
    }

    /// `s` in `[0.05, n - 0.05]`.
    pub fn potential(s: f64, n: usize) -> Result<Self> {
        Self::checked(s, OrderRole::Potential, "s", n as f64 - ORDER_MIN)
    }

    fn checked(value: f64, role: OrderRole, what: &'static str, max: f64) -> Result<Self> {
        if value >= ORDER_MIN && value <= max {
            Ok(Self { value, role })
        } else {
            Err(Error::OutOfRange {
                what,
                value,
                range: match role {
                    OrderRole::Potential => "[0.05, n - 0.05]",
                    _ => "[0.05, 0.95]",
                },
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Grad,
    Div,
    Riesz,
    Laplacian,
    NlGrad,
}

/// One operator evaluation. `quad.value` holds the Euclidean norm of
/// `value`; the remaining `quad` fields describe the whole nested quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorEval {
    pub op: OperatorKind,
    pub order: FracOrder,
    pub point: Vec<f64>,
    pub value: Vec<f64>,
    pub quad: QuadResult,
}

fn check_point(n: usize, x: &[f64]) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::Dimension(n));
    }
    if x.len() != n {
        return Err(Error::Domain(format!("point has {} coordinates, field is {n}-dimensional", x.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite point {x:?}")));
    }
    Ok(())
}

fn check_regular(f: &ScalarField, x: &[f64]) -> Result<()> {
    if f.is_singular(x) {
        Err(Error::SingularPoint(x.to_vec()))
    } else {
        Ok(())
    }
}

fn axis_of(fields: &[&ScalarField]) -> Option<Vec<f64>> {
    fields.iter().find_map(|f| f.preferred_axis())
}

fn critical_of(fields: &[&ScalarField]) -> Vec<Vec<f64>> {
    fields.iter().flat_map(|f| f.critical_points()).collect()
}

fn finish<K>(op: OperatorKind, order: FracOrder, x: &[f64], radial: Radial<'_, K>, scale: f64, spec: &QuadSpec) -> Result<OperatorEval>
where
    K: Fn(&[f64], f64) -> f64 + Sync,
{
    spec.validate()?;
    let n = x.len();
    let fields = radial.fields.clone();
    let q = radial.integrate(axis_of(&fields), &critical_of(&fields), spec)?;
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    let width = if radial.vector { n } else { 1 };
    let value: Vec<f64> = q.value[..width].iter().map(|v| v * scale).collect();
    if value.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite operator value at {x:?}")));
    }
    let norm = value.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(OperatorEval {
        op,
        order,
        point: x.to_vec(),
        value,
        quad: QuadResult {
            value: norm,
            err_estimate: q.err_estimate * scale.abs(),
            evals_used: q.evals_used,
            converged: true,
        },
    })
}

fn offset(x: &[f64], theta: &[f64], r: f64, out: &mut [f64; 3]) {
    for i in 0..x.len() {
        out[i] = x[i] + r * theta[i];
    }
}

/// One-dimensional gradient or divergence at a point well away from the
/// fields' box, where `f(x) = 0` and the kernel is smooth over the box:
/// `mu int_box sgn(y - x) f(y) |y - x|^(-1-a) dy`. Integrating in `y` keeps
/// full precision at distances where `x + r` would round away the support.
fn exterior_1d(op: OperatorKind, order: FracOrder, x: f64, f: &ScalarField, spec: &QuadSpec) -> Option<Result<OperatorEval>> {
    let (lo, hi) = f.effective_box()?;
    let (lo, hi) = (lo[0], hi[0]);
    let dist = (lo - x).max(x - hi);
    if !(hi > lo && dist >= 0.5 * (hi - lo)) {
        return None;
    }
    let alpha = order.value;
    Some((|| {
        spec.validate()?;
        let mut feats = Vec::new();
        f.ray_features(&[lo], &[1.0], &mut feats);
        let sings: Vec<Singularity> = feats
            .iter()
            .filter(|&&(t, _)| t > 0.0 && lo + t < hi)
            .map(|&(t, e)| Singularity::new(lo + t, e))
            .collect();
        let side = if x < lo { 1.0 } else { -1.0 };
        let q = integrate_1d(|y| f.value(&[y]) * (y - x).abs().powf(-1.0 - alpha), lo, hi, &sings, spec)?;
        if !q.converged {
            return Err(Error::BudgetExceeded(q.evals_used));
        }
        let scale = side * constants::mu(1, alpha)?;
        let value = scale * q.value;
        Ok(OperatorEval {
            op,
            order,
            point: vec![x],
            value: vec![value],
            quad: QuadResult {
                value: value.abs(),
                err_estimate: q.err_estimate * scale.abs(),
                evals_used: q.evals_used,
                converged: true,
            },
        })
    })())
}

/// `grad^a f(x) = mu(n,a) int (y - x)(f(y) - f(x)) / |y - x|^(n+a+1) dy`.
pub fn frac_gradient(f: &ScalarField, alpha: f64, x: &[f64], spec: &QuadSpec) -> Result<OperatorEval> {
    let order = FracOrder::gradient(alpha)?;
    let n = f.dim();
    check_point(n, x)?;
    check_regular(f, x)?;
    if n == 1 {
        if let Some(r) = exterior_1d(OperatorKind::Grad, order, x[0], f, spec) {
            return r;
        }
    }
    let radial = Radial {
        x,
        fields: vec![f],
        near_exponent: -alpha,
        kernel_power: 1.0 + alpha,
        far_const: 0.0,
        field_decay: f.decay_exponent(),
        magnitude: f.sup_bound().map(|m| 2.0 * m),
        integrand: |theta: &[f64], r: f64| {
            let (mut p, mut m) = ([0.0; 3], [0.0; 3]);
            offset(x, theta, r, &mut p);
            offset(x, theta, -r, &mut m);
            (f.value(&p[..n]) - f.value(&m[..n])) * r.powf(-1.0 - alpha)
        },
        vector: true,
    };
    finish(OperatorKind::Grad, order, x, radial, constants::mu(n, alpha)?, spec)
}

/// `div^a phi(x) = mu(n,a) int (y - x).(phi(y) - phi(x)) / |y - x|^(n+a+1) dy`.
pub fn frac_divergence(phi: &VectorField, alpha: f64, x: &[f64], spec: &QuadSpec) -> Result<OperatorEval> {
    let order = FracOrder::gradient(alpha)?;
    let n = phi.dim();
    check_point(n, x)?;
    for c in phi.components() {
        check_regular(c, x)?;
    }
    let comps = phi.components();
    if n == 1 {
        if let Some(r) = exterior_1d(OperatorKind::Div, order, x[0], &comps[0], spec) {
            return r;
        }
    }
    let radial = Radial {
        x,
        fields: comps.iter().collect(),
        near_exponent: -alpha,
        kernel_power: 1.0 + alpha,
        far_const: 0.0,
        field_decay: comps.iter().map(|c| c.decay_exponent()).fold(f64::INFINITY, f64::min),
        magnitude: comps.iter().map(|c| c.sup_bound().map(|m| 2.0 * m)).sum(),
        integrand: |theta: &[f64], r: f64| {
            let (mut p, mut m) = ([0.0; 3], [0.0; 3]);
            offset(x, theta, r, &mut p);
            offset(x, theta, -r, &mut m);
            let dot: f64 = comps
                .iter()
                .zip(theta)
                .map(|(c, t)| t * (c.value(&p[..n]) - c.value(&m[..n])))
                .sum();
            dot * r.powf(-1.0 - alpha)
        },
        vector: false,
    };
    finish(OperatorKind::Div, order, x, radial, constants::mu(n, alpha)?, spec)
}

/// `I_s f(x) = c(n,s) int f(y) / |x - y|^(n-s) dy`.
pub fn riesz_potential(f: &ScalarField, s: f64, x: &[f64], spec: &QuadSpec) -> Result<OperatorEval> {
    let n = f.dim();
    let order = FracOrder::potential(s, n)?;
    check_point(n, x)?;
    check_regular(f, x)?;
    let decay = f.decay_exponent();
    if decay.is_nan() || decay <= s {
        return Err(Error::DivergentPotential { decay, order: s });
    }
    let radial = Radial {
        x,
        fields: vec![f],
        near_exponent: s - 1.0,
        kernel_power: 1.0 - s,
        far_const: 0.0,
        field_decay: decay,
        magnitude: None,
        integrand: |theta: &[f64], r: f64| {
            let (mut p, mut m) = ([0.0; 3], [0.0; 3]);
            offset(x, theta, r, &mut p);
            offset(x, theta, -r, &mut m);
            (f.value(&p[..n]) + f.value(&m[..n])) * r.powf(s - 1.0)
        },
        vector: false,
    };
    finish(OperatorKind::Riesz, order, x, radial, constants::riesz_constant(n, s)?, spec)
}

/// `(-Delta)^(b/2) f(x) = nu(n,b) int (f(x + y) - f(x)) / |y|^(n+b) dy`.
pub fn frac_laplacian(f: &ScalarField, beta: f64, x: &[f64], spec: &QuadSpec) -> Result<OperatorEval> {
    let order = FracOrder::laplacian(beta)?;
    let n = f.dim();
    check_point(n, x)?;
    check_regular(f, x)?;
    let fx = f.eval(x)?;
    let radial = Radial {
        x,
        fields: vec![f],
        near_exponent: 1.0 - beta,
        kernel_power: 1.0 + beta,
        far_const: -2.0 * fx,
        // the -2 f(x) term does not decay
        field_decay: if fx == 0.0 { f.decay_exponent() } else { 0.0 },
        magnitude: f.sup_bound().map(|m| 4.0 * m),
        integrand: |theta: &[f64], r: f64| {
            let (mut p, mut m) = ([0.0; 3], [0.0; 3]);
            offset(x, theta, r, &mut p);
            offset(x, theta, -r, &mut m);
            (f.value(&p[..n]) + f.value(&m[..n]) - 2.0 * fx) * r.powf(-1.0 - beta)
        },
        vector: false,
    };
    finish(OperatorKind::Laplacian, order, x, radial, constants::nu(n, beta)?, spec)
}

/// `grad^a_NL(f, g)(x) = mu(n,a) int (y - x)(f(y) - f(x))(g(y) - g(x)) / |y - x|^(n+a+1) dy`.
pub fn nl_gradient(f: &ScalarField, g: &ScalarField, alpha: f64, x: &[f64], spec: &QuadSpec) -> Result<OperatorEval> {
    let order = FracOrder::gradient(alpha)?;
    let n = f.dim();
    if g.dim() != n {
        return Err(Error::Domain("the two fields differ in dimension".into()));
    }
    check_point(n, x)?;
    check_regular(f, x)?;
    check_regular(g, x)?;
    let (fx, gx) = (f.eval(x)?, g.eval(x)?);
    let radial = Radial {
        x,
        fields: vec![f, g],
        near_exponent: 1.0 - alpha,
        kernel_power: 1.0 + alpha,
        far_const: 0.0,
        field_decay: f.decay_exponent().min(g.decay_exponent()),
        magnitude: f.sup_bound().zip(g.sup_bound()).map(|(a, b)| 8.0 * a * b),
        integrand: |theta: &[f64], r: f64| {
            let (mut p, mut m) = ([0.0; 3], [0.0; 3]);
            offset(x, theta, r, &mut p);
            offset(x, theta, -r, &mut m);
            let plus = (f.value(&p[..n]) - fx) * (g.value(&p[..n]) - gx);
            let minus = (f.value(&m[..n]) - fx) * (g.value(&m[..n]) - gx);
            (plus - minus) * r.powf(-1.0 - alpha)
        },
        vector: true,
    };
    finish(OperatorKind::NlGrad, order, x, radial, constants::mu(n, alpha)?, spec)
}

/// `int f(x) g(x) dx` over `R^n`, where `g` (typically an operator value)
/// decays like `|x|^-g_decay`. Fields with bounded or Gaussian support are
/// integrated over that box; otherwise (n = 1 only) over the line with the
/// field's singular points split out and algebraic tails at both ends. The
/// outer nodes are evaluated in parallel.
pub fn integrate_against<G>(f: &ScalarField, g: G, g_decay: f64, spec: &QuadSpec) -> Result<QuadResult>
where
    G: Fn(&[f64]) -> Result<f64> + Sync,
{
    let n = f.dim();
    let failure = std::sync::Mutex::new(None);
    let integrand = |x: &[f64]| {
        let fx = f.value(x);
        if fx == 0.0 {
            return 0.0;
        }
        match g(x) {
            Ok(v) => fx * v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outer = spec.parallel(true);
    let q = match f.effective_box() {
        Some((lo, hi)) => {
            if lo.iter().zip(&hi).any(|(a, b)| b <= a) {
                return Ok(QuadResult::zero());
            }
            if n == 1 {
                let mut feats = Vec::new();
                f.ray_features(&lo, &[1.0], &mut feats);
                let sings: Vec<Singularity> = feats
                    .iter()
                    .filter(|&&(t, _)| t > 0.0 && lo[0] + t < hi[0])
                    .map(|&(t, e)| Singularity::new(lo[0] + t, e))
                    .collect();
                integrate_1d(|t| integrand(&[t]), lo[0], hi[0], &sings, &outer)?
            } else {
                integrate_rect(integrand, &lo, &hi, &vec![Vec::new(); n], &outer)?
            }
        }
        None if n == 1 => {
            let decay = f.decay_exponent() + g_decay;
            let mut sings = vec![
                Singularity::tail(decay),
                Singularity::new(f64::NEG_INFINITY, -decay),
            ];
            for dir in [1.0, -1.0] {
                let mut feats = Vec::new();
                f.ray_features(&[0.0], &[dir], &mut feats);
                sings.extend(feats.iter().map(|&(t, e)| Singularity::new(dir * t, e)));
            }
            integrate_1d(|t| integrand(&[t]), f64::NEG_INFINITY, f64::INFINITY, &sings, &outer)?
        }
        None => return Err(Error::UnsupportedField(f.kind_name().to_string())),
    };
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    if !q.value.is_finite() {
        return Err(Error::Domain("non-finite value in an outer integral".into()));
    }
    if !q.converged {
        return Err(Error::BudgetExceeded(q.evals_used));
    }
    Ok(q)
}

/// Evaluate one operator at many points, in parallel when enabled. The
/// result order matches `points`.
pub fn batch<F>(points: &[Vec<f64>], eval: F) -> Vec<Result<OperatorEval>>
where
    F: Fn(&[f64]) -> Result<OperatorEval> + Sync + Send,
{
    crate::par::map(points, |p| eval(p))
}

#[cfg(test)]
mod tests;
