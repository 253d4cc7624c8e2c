use std::f64::consts::PI;

use super::gauss_kronrod::panel_rule;
use super::{integrate_1d, NestedStats, QuadResult, QuadSpec, Singularity};
use crate::par;
use crate::error::{Error, Result};

const INNER: f64 = 0.1;

fn check_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(n))
    }
}

fn direction(n: usize, angles: &[f64]) -> [f64; 3] {
    match n {
        1 => [angles[0], 0.0, 0.0],
        2 => [angles[0].cos(), angles[0].sin(), 0.0],
        _ => {
            let (sp, cp) = angles[0].sin_cos();
            let (sa, ca) = angles[1].sin_cos();
            [sp * ca, sp * sa, cp]
        }
    }
}

/// Integrate `g(theta)` over the unit sphere `S^{n-1}` (two points for n = 1).
pub fn integrate_sphere<G>(n: usize, g: G, spec: &QuadSpec) -> Result<QuadResult>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    check_dim(n)?;
    match n {
        1 => {
            let v = g(&[1.0]) + g(&[-1.0]);
            Ok(QuadResult {
                value: v,
                err_estimate: 0.0,
                evals_used: 2,
                converged: true,
            })
        }
        2 => integrate_1d(
            |phi| {
                let d = direction(2, &[phi]);
                g(&d[..2])
            },
            0.0,
            2.0 * PI,
            &[],
            spec,
        ),
        _ => {
            let stats = NestedStats::new();
            let inner = spec.inner(INNER);
            let outer = integrate_1d(
                |psi| {
                    let r = integrate_1d(|phi| g(&direction(3, &[psi, phi])), 0.0, 2.0 * PI, &[], &inner);
                    match r {
                        Ok(r) => {
                            stats.record(&r);
                            r.value * psi.sin()
                        }
                        Err(_) => {
                            stats.fail();
                            f64::NAN
                        }
                    }
                },
                0.0,
                PI,
                &[],
                spec,
            )?;
            Ok(stats.finish(outer, PI))
        }
    }
}

fn radial<F>(f: &F, center: &[f64], theta: &[f64], lo: f64, hi: f64, sings: &[Singularity], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = center.len();
    integrate_1d(
        |r| {
            let mut y = [0.0; 3];
            for i in 0..n {
                y[i] = center[i] + r * theta[i];
            }
            f(&y[..n]) * r.powi(n as i32 - 1)
        },
        lo,
        hi,
        sings,
        spec,
    )
}

fn polar<F>(f: &F, center: &[f64], lo: f64, hi: f64, sings: &[Singularity], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = center.len();
    let stats = NestedStats::new();
    let inner = spec.inner(INNER);
    let along = |theta: &[f64]| match radial(f, center, theta, lo, hi, sings, &inner) {
        Ok(r) => {
            stats.record(&r);
            r.value
        }
        Err(_) => {
            stats.fail();
            f64::NAN
        }
    };
    let outer = integrate_sphere(n, along, spec)?;
    Ok(stats.finish(outer, crate::constants::sphere_area(n)?))
}

/// Integrate `f` over the ball `B_radius(center)` in polar coordinates.
pub fn integrate_ball<F>(f: F, center: &[f64], radius: f64, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    check_dim(center.len())?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("ball radius {radius} must be positive")));
    }
    polar(&f, center, 0.0, radius, &[], spec)
}

/// Integrate `f` over `R^n \ B_radius(center)`; `tail_exponent` is the
/// algebraic decay rate of `f` and must exceed `n`.
pub fn integrate_complement<F>(f: F, center: &[f64], radius: f64, tail_exponent: f64, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let n = center.len();
    check_dim(n)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("ball radius {radius} must be positive")));
    }
    if tail_exponent.is_nan() || tail_exponent <= n as f64 {
        return Err(Error::Domain(format!(
            "tail exponent {tail_exponent} must exceed the dimension {n}"
        )));
    }
    let sings = [Singularity::tail(tail_exponent - (n as f64 - 1.0))];
    polar(&f, center, radius, f64::INFINITY, &sings, spec)
}

/// Iterated integral over an axis-aligned box (possibly unbounded along an
/// axis, in which case that axis needs a tail singularity). `axis_sings[i]`
/// lists breakpoints and singularities along axis `i`.
pub fn integrate_rect<F>(f: F, lo: &[f64], hi: &[f64], axis_sings: &[Vec<Singularity>], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let n = lo.len();
    check_dim(n)?;
    if hi.len() != n || axis_sings.len() != n {
        return Err(Error::Invalid("box bounds and singularity lists must match".into()));
    }
    let mut x = [0.0; 3];
    rect_level(&f, lo, hi, axis_sings, 0, &mut x, spec)
}

fn rect_level<F>(f: &F, lo: &[f64], hi: &[f64], sings: &[Vec<Singularity>], axis: usize, prefix: &mut [f64; 3], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = lo.len();
    if axis + 1 == n {
        let p = *prefix;
        return integrate_1d(
            |t| {
                let mut y = p;
                y[axis] = t;
                f(&y[..n])
            },
            lo[axis],
            hi[axis],
            &sings[axis],
            spec,
        );
    }
    let stats = NestedStats::new();
    let inner = spec.inner(INNER);
    let p = *prefix;
    let outer = integrate_1d(
        |t| {
            let mut y = p;
            y[axis] = t;
            match rect_level(f, lo, hi, sings, axis + 1, &mut y, &inner) {
                Ok(r) => {
                    stats.record(&r);
                    r.value
                }
                Err(_) => {
                    stats.fail();
                    f64::NAN
                }
            }
        },
        lo[axis],
        hi[axis],
        &sings[axis],
        spec,
    )?;
    let width = hi[axis] - lo[axis];
    Ok(stats.finish(outer, if width.is_finite() { width } else { 1.0 }))
}

/// Tensor Gauss-Kronrod on a uniform panel grid over a bounded box, the
/// panel count doubling until the Kronrod sum agrees with the embedded
/// Gauss sum or with the previous level.
/// Meant for smooth integrands that are expensive to evaluate: the iterated
/// adaptive rule spends most of its nodes tightening inner tolerances.
pub fn integrate_rect_smooth<F>(f: F, lo: &[f64], hi: &[f64], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let n = lo.len();
    check_dim(n)?;
    if hi.len() != n {
        return Err(Error::Invalid("box bounds must match".into()));
    }
    if lo.iter().chain(hi).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("smooth box rule needs a bounded box".into()));
    }
    let mut evals = 0;
    let mut panels = 1;
    let mut last = QuadResult::zero();
    loop {
        let rules: Vec<Vec<(f64, f64, f64)>> = (0..n).map(|i| panel_rule(lo[i], hi[i], panels)).collect();
        let count: usize = rules.iter().map(Vec::len).product();
        if evals + count > spec.max_evals {
            return Ok(QuadResult { converged: false, evals_used: evals, ..last });
        }
        let points: Vec<usize> = (0..count).collect();
        let sums = |&k: &usize| {
            let mut x = [0.0; 3];
            let (mut wk, mut wg, mut rest) = (1.0, 1.0, k);
            for (i, rule) in rules.iter().enumerate() {
                let (xi, k_i, g_i) = rule[rest % rule.len()];
                rest /= rule.len();
                x[i] = xi;
                wk *= k_i;
                wg *= g_i;
            }
            let v = f(&x[..n]);
            (wk * v, wg * v)
        };
        let vals = if spec.parallel_nodes { par::map(&points, sums) } else { par::seq_map(&points, sums) };
        evals += count;
        let (k, g) = vals.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
        // the embedded Gauss sum is the weak partner near flat edges such as
        // a bump's; the previous, coarser Kronrod sum is a sharper yardstick
        let mut err = (k - g).abs();
        if panels > 1 {
            err = err.min((k - last.value).abs());
        }
        last = QuadResult { value: k, err_estimate: err, evals_used: evals, converged: true };
        if !k.is_finite() {
            return Ok(QuadResult { converged: false, ..last });
        }
        if err <= spec.abs_tol.max(spec.rel_tol * k.abs()) {
            return Ok(last);
        }
        panels *= 2;
    }
}
