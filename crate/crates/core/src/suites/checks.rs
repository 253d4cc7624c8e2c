use std::sync::Mutex;
use std::time::Instant;

use super::{Case, Relation, SuiteConfig, SuiteReport};
use crate::closed_forms;
use crate::constants;
use crate::error::{Error, Result};
use crate::fields::{HalfSpace, ScalarField, VectorField};
use crate::operators::{
    default_test_family, frac_divergence, frac_gradient, gagliardo_seminorm, integrate_against, nl_gradient,
    variation_lower_bound,
};
use crate::quadrature::{integrate_1d, integrate_rect_smooth, QuadResult, QuadSpec, Singularity};

pub(crate) fn spec_1d(rel: f64) -> QuadSpec {
    QuadSpec::for_dim(1).with_tol(rel, 1e-15)
}

/// Cut-offs for the logarithmic divergence fit, seven decades.
pub(crate) const CHAIN_EPS: [f64; 7] = [1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13];

fn finish(name: &str, start: Instant, cases: Vec<Case>) -> SuiteReport {
    SuiteReport {
        suite: name.to_string(),
        cases,
        wall_time: start.elapsed(),
    }
}

/// Turn a computed `(lhs, rhs)` (or the error that stopped it) into a row.
fn row(suite: &str, id: &str, alpha: f64, n: usize, tol: f64, rel: Relation, r: Result<(f64, f64)>) -> Case {
    match r {
        Ok((l, r)) => Case::compare(suite, id, alpha, n, l, r, tol, rel),
        Err(e) => Case::failed(suite, id, alpha, n, tol, rel, &e),
    }
}

fn converged(q: QuadResult) -> Result<f64> {
    if q.converged {
        Ok(q.value)
    } else {
        Err(Error::BudgetExceeded(q.evals_used))
    }
}

/// 1-D quadrature of an integrand that can fail; the first failure wins.
/// Nodes are evaluated concurrently since every node is an operator call.
fn integrate_try<G>(g: G, a: f64, b: f64, sings: &[Singularity], spec: &QuadSpec) -> Result<f64>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let failure = Mutex::new(None);
    let q = integrate_1d(
        |x| match g(x) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        sings,
        &spec.parallel(true),
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    converged(q?)
}

fn integrate_box_try<G>(g: G, lo: &[f64], hi: &[f64], spec: &QuadSpec) -> Result<f64>
where
    G: Fn(&[f64]) -> Result<f64> + Sync,
{
    let failure = Mutex::new(None);
    let q = integrate_rect_smooth(
        |x: &[f64]| match g(x) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        &spec.parallel(true),
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    converged(q?)
}

/// Both sides of the two-sided tail splitting for 1-D integrands decaying
/// like `|x|^-decay`, with breakpoints.
fn line_sings(decay: f64, breaks: &[f64]) -> Vec<Singularity> {
    let mut s = vec![Singularity::tail(decay), Singularity::new(f64::NEG_INFINITY, -decay)];
    s.extend(breaks.iter().map(|&b| Singularity::breakpoint(b)));
    s
}

fn support_1d(f: &ScalarField) -> Result<(f64, f64)> {
    let (lo, hi) = f
        .effective_box()
        .ok_or_else(|| Error::UnsupportedField(f.kind_name().to_string()))?;
    Ok((lo[0], hi[0]))
}

fn grad_1d<'a>(f: &'a ScalarField, alpha: f64, spec: &'a QuadSpec) -> impl Fn(f64) -> Result<f64> + Sync + 'a {
    move |x| Ok(frac_gradient(f, alpha, &[x], spec)?.value[0])
}

// ---------------------------------------------------------------- ibp

/// `int f div^a phi` against `-int phi . grad^a f`, both by quadrature.
pub fn suite_ibp(alpha: f64, f: &ScalarField, phi: &VectorField, spec: &QuadSpec, tol: f64) -> SuiteReport {
    let start = Instant::now();
    let n = f.dim();
    let inner = spec.inner(0.1);
    let r = (|| {
        if phi.dim() != n {
            return Err(Error::Domain("field and test field differ in dimension".into()));
        }
        let div = |x: &[f64]| Ok(frac_divergence(phi, alpha, x, &inner)?.value[0]);
        let lhs = if n == 1 {
            converged(integrate_against(f, div, 1.0 + alpha, spec)?)?
        } else {
            // both integrands are smooth and each node is a full operator
            // call, so a fixed tensor rule beats the iterated adaptive one
            let (lo, hi) = f
                .effective_box()
                .ok_or_else(|| Error::Domain("2-D field needs bounded support".into()))?;
            integrate_box_try(
                |x| match f.value(x) {
                    0.0 => Ok(0.0),
                    fx => Ok(fx * div(x)?),
                },
                &lo,
                &hi,
                spec,
            )?
        };
        let (lo, hi) = phi
            .effective_box()
            .ok_or_else(|| Error::Domain("test field needs bounded support".into()))?;
        let pairing = |x: &[f64]| -> Result<f64> {
            let p = phi.value(x);
            if p.iter().all(|v| *v == 0.0) {
                return Ok(0.0);
            }
            let g = frac_gradient(f, alpha, x, &inner)?.value;
            Ok(p.iter().zip(&g).map(|(a, b)| a * b).sum())
        };
        let rhs = if n == 1 {
            integrate_try(|t| pairing(&[t]), lo[0], hi[0], &[], spec)?
        } else {
            integrate_box_try(pairing, &lo, &hi, spec)?
        };
        Ok((lhs, -rhs))
    })();
    let id = format!("n{n}-{}-vs-{}", f.kind_name(), phi.components()[0].kind_name());
    finish("ibp", start, vec![row("ibp", &id, alpha, n, tol, Relation::Close, r)])
}

/// One-dimensional pairs at every order; the 2-D pair costs about a minute
/// on one core and runs only when `with_2d` is set.
pub(crate) fn default_ibp(alpha: f64, with_2d: bool, cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    let s1 = cfg.spec(spec_1d(1e-9));
    let zero = ScalarField::gaussian_scaled(&[0.0], 1.0, 0.0).expect("valid");
    let bump = VectorField::bump_vector(&[-0.2], 1.5, &[1.0]).expect("valid");
    let mut r = suite_ibp(alpha, &zero, &bump, &s1, 1e-12).cases;
    r[0].case_id = "zero-field".into();
    r[0].relation = Relation::CloseAbs;
    r[0].pass = r[0].error.is_none() && r[0].abs_err <= r[0].tol;
    cases.append(&mut r);
    let g = ScalarField::gaussian(&[0.3], 1.0).expect("valid");
    cases.append(&mut suite_ibp(alpha, &g, &bump, &s1, 1e-6).cases);
    let plateau = ScalarField::plateau_bump(&[0.5], 1.2, 0.4, 1.0).expect("valid");
    let phi = VectorField::bump_vector(&[0.1], 0.8, &[-1.0]).expect("valid");
    let mut r = suite_ibp(alpha, &plateau, &phi, &s1, 1e-6).cases;
    r[0].case_id = "n1-plateau-vs-smooth_bump".into();
    cases.append(&mut r);
    if with_2d {
        let s2 = cfg.spec(QuadSpec::for_dim(2).with_tol(1e-4, 1e-13));
        let f2 = ScalarField::smooth_bump(&[0.2, -0.1], 1.0).expect("valid");
        let phi2 = VectorField::bump_vector(&[-0.3, 0.2], 0.9, &[0.6, 0.8]).expect("valid");
        cases.append(&mut suite_ibp(alpha, &f2, &phi2, &s2, 1e-4).cases);
    }
    cases
}

// ---------------------------------------------------------- halfspace

/// Quadrature of the half-space indicator's gradient against the closed
/// form; 1-D at every distance, 2-D with a tilted normal at distance 1.
pub fn suite_halfspace(alpha: f64, distances: &[f64], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "halfspace";
    let mut cases = Vec::new();
    let h1 = HalfSpace::new(&[1.0], &[0.0]).expect("unit normal");
    let f1 = ScalarField::half_space_indicator(h1.clone());
    let rows: Vec<Case> = crate::par::map(distances, |&d| {
        let r = (|| {
            let q = frac_gradient(&f1, alpha, &[d], spec)?.value[0];
            Ok((q, closed_forms::half_space_gradient(alpha, &h1, &[d])?[0]))
        })();
        row(name, &format!("n1-d{d}"), alpha, 1, 1e-6, Relation::Close, r)
    });
    cases.extend(rows);

    let nu = [0.6, 0.8];
    let h2 = HalfSpace::new(&nu, &[0.2, -0.3]).expect("unit normal");
    let f2 = ScalarField::half_space_indicator(h2.clone());
    // one unit along nu from x0, shifted tangentially
    let x = [0.2 + 0.6 - 0.8 * 1.5, -0.3 + 0.8 + 0.6 * 1.5];
    let s2 = QuadSpec { rel_tol: spec.rel_tol.max(1e-8), ..*spec };
    match frac_gradient(&f2, alpha, &x, &s2) {
        Ok(g) => {
            let want = closed_forms::half_space_gradient(alpha, &h2, &x).expect("off the plane");
            let normal = g.value[0] * nu[0] + g.value[1] * nu[1];
            let tangential = -g.value[0] * nu[1] + g.value[1] * nu[0];
            let want_normal = want[0] * nu[0] + want[1] * nu[1];
            cases.push(Case::compare(name, "n2-tilted-normal", alpha, 2, normal, want_normal, 1e-4, Relation::Close));
            cases.push(Case::compare(name, "n2-tilted-tangential", alpha, 2, tangential, 0.0, 1e-8, Relation::CloseAbs));
        }
        Err(e) => cases.push(Case::failed(name, "n2-tilted", alpha, 2, 1e-4, Relation::Close, &e)),
    }
    finish(name, start, cases)
}

// -------------------------------------------------------------- hardy

/// `c(1,a) * 2/(1-a) = 4 mu(1,a) / (a (1-a))` and the quadrature of
/// `int_(-1,1) |x|^-a dx`.
pub fn suite_hardy_optimal(alpha_grid: &[f64], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "hardy";
    let mut cases = Vec::new();
    for &a in alpha_grid {
        let r = closed_forms::interval_identities(a).map(|v| (v.hardy_constant * v.hardy_integral, v.variation));
        cases.push(row(name, "identity", a, 1, 1e-14, Relation::Close, r));
        let r = integrate_1d(|x: f64| x.abs().powf(-a), -1.0, 1.0, &[Singularity::new(0.0, -a)], spec)
            .and_then(converged)
            .map(|q| (q, 2.0 / (1.0 - a)));
        cases.push(row(name, "quadrature", a, 1, 1e-8, Relation::Close, r));
    }
    finish(name, start, cases)
}

/// The values at `a = 1/2` as printed to six digits.
pub(crate) fn hardy_reference_rows() -> Vec<Case> {
    let v = closed_forms::interval_identities(0.5).expect("valid order");
    vec![
        Case::compare("hardy", "reference-integral", 0.5, 1, v.hardy_integral, 4.0, 1e-14, Relation::Close),
        Case::compare("hardy", "reference-variation", 0.5, 1, v.variation, 3.19154, 1e-5, Relation::Close),
        Case::compare("hardy", "reference-constant", 0.5, 1, v.hardy_constant, 0.79788, 1e-5, Relation::Close),
    ]
}

// -------------------------------------------------------------- chain

/// Ingredients of the chain-rule counterexample: the pairing
/// `int f_a div^a phi = phi(1) - phi(0)` for three bumps, and the
/// logarithmic growth of `int_eps^(1/2) |f_a| / x^a dx`.
pub fn suite_chain_failure(alpha: f64, eps_list: &[f64], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "chain";
    let mut cases = Vec::new();
    let f = match ScalarField::f_alpha(alpha) {
        Ok(f) => f,
        Err(e) => return finish(name, start, vec![Case::failed(name, "f-alpha", alpha, 1, 0.0, Relation::Close, &e)]),
    };
    let bumps = [
        ("pair-centred-0", [0.0], 0.5),
        ("pair-far", [5.0], 1.0),
        ("pair-both-ends", [0.7], 0.8),
    ];
    // one pairing is exactly zero, so an absolute floor well under the
    // row tolerance is needed for it to terminate
    let spec = &QuadSpec { abs_tol: spec.abs_tol.max(1e-8), ..*spec };
    let inner = spec.inner(0.1);
    for (id, c, r) in bumps {
        let res = (|| {
            let phi = VectorField::bump_vector(&c, r, &[1.0])?;
            let lhs = converged(integrate_against(
                &f,
                |x| Ok(frac_divergence(&phi, alpha, x, &inner)?.value[0]),
                1.0 + alpha,
                spec,
            )?)?;
            let p = |x: f64| phi.value(&[x])[0];
            Ok((lhs, p(1.0) - p(0.0)))
        })();
        cases.push(row(name, id, alpha, 1, 1e-4, Relation::CloseAbs, res));
    }

    let res = (|| {
        let scale = constants::mu(1, -alpha)?.abs();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &eps in eps_list {
            if !(eps > 0.0 && eps < 0.5) {
                return Err(Error::Invalid(format!("cut-off {eps} outside (0, 1/2)")));
            }
            // decades as breakpoints: the integrand behaves like 1/x
            let mut sings = Vec::new();
            let mut b = eps * 10.0;
            while b < 0.5 {
                sings.push(Singularity::breakpoint(b));
                b *= 10.0;
            }
            let p = integrate_1d(|x: f64| f.value(&[x]).abs() * x.powf(-alpha), eps, 0.5, &sings, spec).and_then(converged)?;
            xs.push((1.0 / eps).ln());
            ys.push(p);
        }
        if xs.len() < 2 {
            return Err(Error::Invalid("the log fit needs at least two cut-offs".into()));
        }
        Ok((least_squares_slope(&xs, &ys), scale))
    })();
    cases.push(row(name, "log-slope", alpha, 1, 0.02, Relation::Close, res));
    finish(name, start, cases)
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

// ------------------------------------------------ half-space integrals

/// One-dimensional bump and half-line `{(x - x0) nu > 0}`.
#[derive(Debug, Clone)]
pub struct GreenGeometry {
    pub id: &'static str,
    pub f: ScalarField,
    pub x0: f64,
    pub nu: f64,
}

pub(crate) fn green_geometries() -> Vec<GreenGeometry> {
    let bump = |c: f64, r: f64| ScalarField::smooth_bump(&[c], r).expect("valid");
    vec![
        GreenGeometry { id: "centred-on-plane", f: bump(0.0, 1.0), x0: 0.0, nu: 1.0 },
        GreenGeometry { id: "inside", f: bump(0.5, 0.4), x0: 0.0, nu: 1.0 },
        GreenGeometry { id: "reversed-normal", f: bump(0.3, 1.0), x0: 0.2, nu: -1.0 },
        GreenGeometry { id: "outside", f: bump(-2.0, 1.0), x0: 0.0, nu: 1.0 },
        GreenGeometry {
            id: "plateau",
            f: ScalarField::plateau_bump(&[0.0], 1.5, 0.5, 1.0).expect("valid"),
            x0: -0.6,
            nu: 1.0,
        },
    ]
}

/// `(mu(1,a)/a) int f(x) / |x - x0|^a dx`.
fn hardy_side(f: &ScalarField, alpha: f64, x0: f64, spec: &QuadSpec) -> Result<f64> {
    let (lo, hi) = support_1d(f)?;
    if hi <= lo {
        return Ok(0.0);
    }
    let mut sings = Vec::new();
    if x0 > lo && x0 < hi {
        sings.push(Singularity::new(x0, -alpha));
    }
    let q = integrate_1d(|x: f64| f.value(&[x]) * (x - x0).abs().powf(-alpha), lo, hi, &sings, spec)?;
    Ok(constants::mu(1, alpha)? / alpha * converged(q)?)
}

/// `int over {(x - x0) nu > 0} of g`, for `g` decaying like `|x|^-(1+a)`.
fn half_line<G>(g: G, x0: f64, nu: f64, alpha: f64, breaks: &[f64], spec: &QuadSpec) -> Result<f64>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let decay = 1.0 + alpha;
    let inside = |b: &f64| (b - x0) * nu > 0.0;
    let mut sings: Vec<Singularity> = breaks.iter().filter(|b| inside(b)).map(|&b| Singularity::breakpoint(b)).collect();
    if nu > 0.0 {
        sings.push(Singularity::tail(decay));
        integrate_try(g, x0, f64::INFINITY, &sings, spec)
    } else {
        sings.push(Singularity::new(f64::NEG_INFINITY, -decay));
        integrate_try(g, f64::NEG_INFINITY, x0, &sings, spec)
    }
}

/// Gauss-Green on a half-line: `(mu/a) int f / |x - x0|^a = -nu int_{H+} grad^a f`.
pub fn suite_gauss_green(alpha: f64, geometries: &[GreenGeometry], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "gauss-green";
    let inner = spec.inner(0.1);
    let cases = geometries
        .iter()
        .map(|g| {
            let r = (|| {
                let lhs = hardy_side(&g.f, alpha, g.x0, spec)?;
                let (lo, hi) = support_1d(&g.f)?;
                let rhs = half_line(grad_1d(&g.f, alpha, &inner), g.x0, g.nu, alpha, &[lo, hi], spec)?;
                Ok((lhs, -g.nu * rhs))
            })();
            row(name, g.id, alpha, 1, 1e-4, Relation::Close, r)
        })
        .collect();
    finish(name, start, cases)
}

fn zero_field() -> GreenGeometry {
    GreenGeometry {
        id: "zero-field",
        f: ScalarField::gaussian_scaled(&[0.0], 1.0, 0.0).expect("valid"),
        x0: 0.0,
        nu: 1.0,
    }
}

pub(crate) fn default_gauss_green(alpha: f64, cfg: &SuiteConfig) -> Vec<Case> {
    let spec = cfg.spec(spec_1d(1e-9));
    let mut cases = suite_gauss_green(alpha, &green_geometries(), &spec).cases;
    let mut z = suite_gauss_green(alpha, &[zero_field()], &spec).cases;
    for c in &mut z {
        *c = Case::compare(&c.suite, &c.case_id, c.alpha, 1, c.lhs, c.rhs, 1e-12, Relation::CloseAbs);
    }
    cases.append(&mut z);
    cases
}

/// Hardy inequality on a half-line: `(mu/a) int f / |x - x0|^a <= int_{closure H+} |grad^a f|`.
pub fn suite_hardy_halfspace(alpha: f64, geometries: &[GreenGeometry], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "hardy-half";
    let inner = spec.inner(0.1);
    let cases = geometries
        .iter()
        .map(|g| {
            let r = (|| {
                let lhs = hardy_side(&g.f, alpha, g.x0, spec)?;
                let (lo, hi) = support_1d(&g.f)?;
                let grad = grad_1d(&g.f, alpha, &inner);
                let rhs = half_line(|x| Ok(grad(x)?.abs()), g.x0, g.nu, alpha, &[lo, hi], spec)?;
                Ok((lhs, rhs))
            })();
            row(name, g.id, alpha, 1, 1e-6, Relation::AtMost, r)
        })
        .collect();
    finish(name, start, cases)
}

pub(crate) fn default_hardy_half(alpha: f64, cfg: &SuiteConfig) -> Vec<Case> {
    let spec = cfg.spec(spec_1d(1e-9));
    let mut geoms = green_geometries();
    geoms.push(GreenGeometry {
        id: "far-plane",
        f: ScalarField::smooth_bump(&[0.0], 1.0).expect("valid"),
        x0: 10.0,
        nu: 1.0,
    });
    geoms.push(zero_field());
    suite_hardy_halfspace(alpha, &geoms, &spec).cases
}

// ----------------------------------------------------------- weighted

/// `int f w(|x - x0|, r) dx <= int_{|x - x0| >= r} |grad^a f|` in 1-D.
pub fn suite_weighted_hardy(alpha: f64, f: &ScalarField, x0: f64, radii: &[f64], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "weighted";
    let inner = spec.inner(0.1);
    let cases = radii
        .iter()
        .map(|&r| {
            let res = (|| {
                let (lo, hi) = support_1d(f)?;
                let lhs = if hi > lo {
                    let mut sings = vec![Singularity::breakpoint(x0)];
                    for p in [x0 - r, x0 + r] {
                        sings.push(Singularity::new(p, -alpha));
                    }
                    sings.retain(|s| s.at > lo && s.at < hi);
                    let w = |x: f64| -> Result<f64> {
                        let fx = f.value(&[x]);
                        if fx == 0.0 {
                            return Ok(0.0);
                        }
                        Ok(fx * closed_forms::weight_w(1, alpha, (x - x0).abs(), r, spec)?)
                    };
                    integrate_try(w, lo, hi, &sings, spec)?
                } else {
                    0.0
                };
                let grad = grad_1d(f, alpha, &inner);
                let abs = |x: f64| Ok(grad(x)?.abs());
                let rhs = half_line(abs, x0 + r, 1.0, alpha, &[lo, hi], spec)? + half_line(abs, x0 - r, -1.0, alpha, &[lo, hi], spec)?;
                Ok((lhs, rhs))
            })();
            row(name, &format!("r{r}"), alpha, 1, 1e-6, Relation::AtMost, res)
        })
        .collect();
    finish(name, start, cases)
}

pub(crate) fn default_weighted(alpha: f64, cfg: &SuiteConfig) -> Vec<Case> {
    let spec = cfg.spec(spec_1d(1e-9));
    let f = ScalarField::smooth_bump(&[0.2], 1.0).expect("valid");
    let mut cases = suite_weighted_hardy(alpha, &f, 0.0, &[0.5, 1.0, 2.0, 8.0], &spec).cases;
    let zero = ScalarField::gaussian_scaled(&[0.0], 1.0, 0.0).expect("valid");
    let mut z = suite_weighted_hardy(alpha, &zero, 0.0, &[1.0], &spec).cases;
    z[0].case_id = "zero-field".into();
    cases.append(&mut z);
    cases
}

// ----------------------------------------------------------- rigidity

/// Sign of the gradient of a non-negative bump supported in `(-L, L)` at
/// `sample_count` points of `[L, 4L]`, and the decay exponent far away.
pub fn suite_rigidity(alpha: f64, l: f64, sample_count: usize, spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "rigidity";
    let f = match ScalarField::plateau_bump(&[0.0], l, 0.3, 1.0) {
        Ok(f) => f,
        Err(e) => return finish(name, start, vec![Case::failed(name, "bump", alpha, 1, 0.0, Relation::Below, &e)]),
    };
    let xs: Vec<f64> = (0..sample_count)
        .map(|k| l + 3.0 * l * k as f64 / (sample_count.max(2) - 1) as f64)
        .collect();
    let mut cases = crate::par::map(&xs, |&x| {
        let r = frac_gradient(&f, alpha, &[x], spec).map(|g| (g.value[0], 0.0));
        row(name, &format!("sign-x{x:.4}"), alpha, 1, 0.0, Relation::Below, r)
    });

    // |grad| ~ C x^-(n + a) far from the support
    let far: Vec<f64> = [8.0, 16.0, 32.0, 64.0, 128.0].iter().map(|m| m * l).collect();
    let r = (|| {
        let vals = far
            .iter()
            .map(|&x| Ok(frac_gradient(&f, alpha, &[x], spec)?.value[0].abs().ln()))
            .collect::<Result<Vec<f64>>>()?;
        let logs: Vec<f64> = far.iter().map(|x| x.ln()).collect();
        Ok((-least_squares_slope(&logs, &vals), 1.0 + alpha))
    })();
    cases.push(row(name, "tail-exponent", alpha, 1, 0.15, Relation::Close, r));
    finish(name, start, cases)
}

// ------------------------------------------------------------ leibniz

/// `grad^a(fg) = g grad^a f + f grad^a g + grad^a_NL(f, g)` pointwise.
pub fn suite_leibniz(alpha: f64, f: &ScalarField, g: &ScalarField, points: &[f64], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "leibniz";
    let fg = match ScalarField::product(f.clone(), g.clone()) {
        Ok(p) => p,
        Err(e) => return finish(name, start, vec![Case::failed(name, "product", alpha, 1, 1e-6, Relation::CloseAbs, &e)]),
    };
    let mut cases = crate::par::map(points, |&x| {
        let r = (|| {
            let p = [x];
            let lhs = frac_gradient(&fg, alpha, &p, spec)?.value[0];
            let gf = frac_gradient(f, alpha, &p, spec)?.value[0];
            let gg = frac_gradient(g, alpha, &p, spec)?.value[0];
            let nl = nl_gradient(f, g, alpha, &p, spec)?.value[0];
            Ok((lhs, g.value(&p) * gf + f.value(&p) * gg + nl))
        })();
        row(name, &format!("x{x:.4}"), alpha, 1, 1e-6, Relation::CloseAbs, r)
    });
    if let Some(&x) = points.first() {
        let r = (|| {
            let a = nl_gradient(f, g, alpha, &[x], spec)?.value[0];
            let b = nl_gradient(g, f, alpha, &[x], spec)?.value[0];
            Ok((a, b))
        })();
        cases.push(row(name, "nl-symmetry", alpha, 1, 1e-12, Relation::CloseAbs, r));
    }
    finish(name, start, cases)
}

pub(crate) fn default_leibniz(alpha: f64, cfg: &SuiteConfig) -> Vec<Case> {
    let spec = cfg.spec(spec_1d(1e-10));
    let f = ScalarField::gaussian(&[0.3], 0.8).expect("valid");
    let g = ScalarField::gaussian(&[-0.4], 1.1).expect("valid");
    let points: Vec<f64> = (0..10).map(|k| -2.0 + 4.0 * k as f64 / 9.0).collect();
    suite_leibniz(alpha, &f, &g, &points, &spec).cases
}

// ----------------------------------------------------------- varbound

/// Lower bound for the variation of the unit interval's indicator from the
/// shipped test family, against the exact value.
pub fn suite_variation_bound(alpha: f64, spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "varbound";
    let mut cases = Vec::new();
    let chi = ScalarField::interval_indicator(0.0, 1.0).expect("valid");
    let exact = closed_forms::interval_identities(alpha).map(|v| v.variation);
    match (variation_lower_bound(&chi, alpha, &default_test_family(), spec), exact) {
        (Ok(b), Ok(exact)) => {
            cases.push(Case::compare(name, "upper", alpha, 1, b.value, exact, 1e-6 * exact, Relation::AtMost));
            cases.push(Case::compare(name, "positive", alpha, 1, 0.0, b.value, 0.0, Relation::Below));
            cases.push(Case::compare(name, "ratio", alpha, 1, 0.6, b.value / exact, 0.0, Relation::AtMost));
        }
        (Err(e), _) | (_, Err(e)) => cases.push(Case::failed(name, "upper", alpha, 1, 0.0, Relation::AtMost, &e)),
    }
    let r = variation_lower_bound(&chi, alpha, &[], spec).map(|b| (b.value, 0.0));
    cases.push(row(name, "empty-family", alpha, 1, 0.0, Relation::CloseAbs, r));
    finish(name, start, cases)
}

// ---------------------------------------------------------- gagliardo

/// `int |grad^a f| <= mu(1,a) [f]_(W^(a,1))`.
pub fn suite_gagliardo_bound(alpha: f64, fields: &[(&str, ScalarField)], spec: &QuadSpec) -> SuiteReport {
    let start = Instant::now();
    let name = "gagliardo";
    let inner = spec.inner(0.1);
    let cases = fields
        .iter()
        .map(|(id, f)| {
            let r = (|| {
                let (lo, hi) = support_1d(f)?;
                let grad = grad_1d(f, alpha, &inner);
                let l1 = integrate_try(|x| Ok(grad(x)?.abs()), f64::NEG_INFINITY, f64::INFINITY, &line_sings(1.0 + alpha, &[lo, hi]), spec)?;
                let semi = converged(gagliardo_seminorm(f, alpha, spec)?)?;
                Ok((l1, constants::mu(1, alpha)? * semi))
            })();
            row(name, id, alpha, 1, 1e-6, Relation::AtMost, r)
        })
        .collect();
    finish(name, start, cases)
}

pub(crate) fn default_gagliardo(alpha: f64, cfg: &SuiteConfig) -> Vec<Case> {
    let spec = cfg.spec(spec_1d(1e-8));
    let fields = [
        ("bump", ScalarField::smooth_bump(&[0.0], 1.0).expect("valid")),
        ("plateau", ScalarField::plateau_bump(&[0.3], 2.0, 0.6, 1.0).expect("valid")),
        ("gaussian", ScalarField::gaussian(&[0.0], 1.0).expect("valid")),
    ];
    suite_gagliardo_bound(alpha, &fields, &spec).cases
}
