//! Shared polar quadrature for the operators.
//!
//! Every operator here is `C * int_{S+} w(theta) int_0^inf k(theta, r) dr dtheta`
//! where the radial integrand already pairs the directions `theta` and
//! `-theta`; this removes the `f(x)` term and leaves an integrable kernel at
//! `r = 0`. The radial integrand is split at the jumps and singularities that
//! the fields report along the ray, and closed analytically (or with an
//! algebraic tail map) past the support.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::quadrature::{integrate_1d, integrate_1d_vec, NestedStats, QuadResult, QuadSpec, Singularity, VecQuadResult};

const INNER: f64 = 0.1;

/// Radial problem in one direction pair.
pub(crate) struct Radial<'a, K> {
    pub x: &'a [f64],
    /// Fields whose jumps and singularities split the radial integral.
    pub fields: Vec<&'a ScalarField>,
    /// Local exponent of the integrand at `r = 0`.
    pub near_exponent: f64,
    /// Power `p` of the kernel `r^-p`.
    pub kernel_power: f64,
    /// Past the support on both sides the integrand is `far_const * r^-p`.
    pub far_const: f64,
    /// Algebraic decay of the field part when there is no bounded extent.
    pub field_decay: f64,
    /// Bound on the terms of the paired difference, which sets the
    /// roundoff floor of the radial integral.
    pub magnitude: Option<f64>,
    /// `(theta, r) -> integrand`.
    pub integrand: K,
    /// Multiply the radial integral by `theta` (vector operators).
    pub vector: bool,
}

impl<K> Radial<'_, K>
where
    K: Fn(&[f64], f64) -> f64 + Sync,
{
    fn along(&self, theta: &[f64], spec: &QuadSpec) -> Result<QuadResult> {
        let n = self.x.len();
        let minus: Vec<f64> = theta.iter().map(|v| -v).collect();
        let mut extent = Some(0.0f64);
        let mut feats = Vec::new();
        for f in &self.fields {
            for dir in [theta, &minus[..n]] {
                let before = feats.len();
                f.ray_features(self.x, dir, &mut feats);
                // a jump through x itself makes the kernel non-integrable;
                // for smooth fields the crossing is only a hint
                if feats[before..].iter().any(|&(t, _)| t == 0.0) {
                    if !f.is_smooth() {
                        return Err(Error::SingularPoint(self.x.to_vec()));
                    }
                    feats.retain(|&(t, _)| t > 0.0);
                }
                extent = match (extent, f.ray_extent(self.x, dir)) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
        }
        let p = self.kernel_power;
        let mut sings = vec![Singularity::new(0.0, self.near_exponent)];
        let upper = match extent {
            // the ray misses the support: only the analytic part is left,
            // kept away from r = 0 where it is not integrable
            Some(r) if r == 0.0 && self.far_const != 0.0 => 1.0,
            Some(r) => r,
            None => {
                let decay = p + self.field_decay;
                if decay.is_nan() || decay <= 1.0 {
                    return Err(Error::Domain(format!(
                        "integrand decays like r^-{decay}, which is not integrable"
                    )));
                }
                sings.push(Singularity::tail(decay));
                f64::INFINITY
            }
        };
        sings.extend(
            feats
                .iter()
                .filter(|&&(t, _)| t < upper)
                .map(|&(t, e)| Singularity::new(t, e)),
        );
        let far = |r: f64| {
            if self.far_const == 0.0 || !r.is_finite() {
                0.0
            } else {
                self.far_const * r.powf(1.0 - p) / (p - 1.0)
            }
        };
        if upper == 0.0 {
            return Ok(QuadResult::zero());
        }
        let k = |r: f64| (self.integrand)(theta, r);
        let mut q = match self.near_cut(&sings, upper) {
            Some(delta) => {
                // [0, delta] from the leading power; past it, decades of r as
                // breakpoints so the power law is resolved without a map
                let e = self.near_exponent;
                let closure = delta * k(delta) / (1.0 + e);
                sings.retain(|s| s.at != 0.0);
                let mut b = delta;
                while 10.0 * b < upper.min(1.0) {
                    b *= 10.0;
                    sings.push(Singularity::breakpoint(b));
                }
                // the differences carry eps * magnitude of noise each, so
                // values cancelling to near zero are only known that well
                let floor = self.magnitude.map_or(0.0, |m| {
                    let p = self.kernel_power;
                    10.0 * f64::EPSILON * m * delta.powf(1.0 - p) / (p - 1.0).max(1e-3)
                });
                let spec = &QuadSpec { abs_tol: spec.abs_tol.max(floor), ..*spec };
                let mut q = integrate_1d(k, delta, upper, &sings, spec)?;
                q.value += closure;
                q
            }
            None => integrate_1d(k, 0.0, upper, &sings, spec)?,
        };
        q.value += far(upper);
        Ok(q)
    }

    /// Where the paired differences near `r = 0` stop carrying digits.
    ///
    /// A numerator of order `r^k` loses `eps / r^k` to cancellation while the
    /// leading-power closure of `[0, delta]` is off by `O(delta^2)`; the two
    /// balance at `delta = eps^(1 / (2 + k))`, scaled down when a feature of
    /// the field is close.
    fn near_cut(&self, sings: &[Singularity], upper: f64) -> Option<f64> {
        let order = self.near_exponent + self.kernel_power;
        if order < 1.0 - 1e-12 {
            return None;
        }
        let first = sings
            .iter()
            .filter(|s| s.at > 0.0 && s.at.is_finite())
            .map(|s| s.at)
            .fold(upper, f64::min);
        let delta = f64::EPSILON.powf(1.0 / (2.0 + order)) * (0.5 * first).min(1.0);
        (delta > 0.0 && delta < 0.5 * upper).then_some(delta)
    }

    /// The angular integral over the half sphere, as `[f64; 3]` (the
    /// components beyond `n`, and beyond the first for scalar operators,
    /// are zero).
    pub fn integrate(&self, axis: Option<Vec<f64>>, critical: &[Vec<f64>], spec: &QuadSpec) -> Result<VecQuadResult<[f64; 3]>> {
        let n = self.x.len();
        let pack = |theta: &[f64], v: f64| -> [f64; 3] {
            if self.vector {
                let mut out = [0.0; 3];
                for i in 0..n {
                    out[i] = theta[i] * v;
                }
                out
            } else {
                [v, 0.0, 0.0]
            }
        };
        let abs_pack = |_: &[f64], v: f64| [v.abs(), 0.0, 0.0];
        match n {
            1 => {
                let q = self.along(&[1.0], spec)?;
                Ok(VecQuadResult {
                    value: pack(&[1.0], q.value),
                    err_estimate: q.err_estimate,
                    evals_used: q.evals_used,
                    converged: q.converged,
                })
            }
            2 => {
                // a pilot pass over |ray| fixes the absolute accuracy; the
                // value itself may cancel to zero by symmetry
                let pilot = self.planar(axis.as_deref(), critical, &spec.with_tol(1e-2, spec.abs_tol), spec.abs_tol, &abs_pack)?;
                let l1 = pilot.value[0];
                let ray_abs = spec.abs_tol.max(0.01 * spec.rel_tol * l1 / PI);
                let mut q = self.planar(axis.as_deref(), critical, &outer_floor(spec, l1), ray_abs, &pack)?;
                q.evals_used += pilot.evals_used;
                Ok(q)
            }
            3 => {
                let pilot = self.spatial(axis.as_deref(), &spec.with_tol(1e-2, spec.abs_tol), spec.abs_tol, &abs_pack)?;
                let l1 = pilot.value[0];
                let ray_abs = spec.abs_tol.max(0.01 * spec.rel_tol * l1 / (2.0 * PI));
                let mut q = self.spatial(axis.as_deref(), &outer_floor(spec, l1), ray_abs, &pack)?;
                q.evals_used += pilot.evals_used;
                Ok(q)
            }
            _ => Err(Error::Dimension(n)),
        }
    }

    fn planar<P>(&self, axis: Option<&[f64]>, critical: &[Vec<f64>], spec: &QuadSpec, ray_abs: f64, pack: &P) -> Result<VecQuadResult<[f64; 3]>>
    where
        P: Fn(&[f64], f64) -> [f64; 3] + Sync,
    {
        let centre = axis.map_or(0.0, |a| a[1].atan2(a[0]));
        let (lo, hi) = (centre - 0.5 * PI, centre + 0.5 * PI);
        let mut sings = Vec::new();
        for c in critical {
            let (dx, dy) = (c[0] - self.x[0], c[1] - self.x[1]);
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let a = lo + (dy.atan2(dx) - lo).rem_euclid(PI);
            if a > lo && a < hi {
                sings.push(Singularity::breakpoint(a));
            }
        }
        let stats = NestedStats::new();
        let inner = spec.inner(INNER).with_tol(spec.rel_tol * INNER, ray_abs);
        let outer = integrate_1d_vec(
            |phi| {
                let theta = [phi.cos(), phi.sin()];
                match self.along(&theta, &inner) {
                    Ok(q) => {
                        stats.record(&q);
                        pack(&theta, q.value)
                    }
                    Err(_) => {
                        stats.fail();
                        [f64::NAN; 3]
                    }
                }
            },
            lo,
            hi,
            &sings,
            spec,
        )?;
        Ok(finish_vec(&stats, outer, PI))
    }

    fn spatial<P>(&self, axis: Option<&[f64]>, spec: &QuadSpec, ray_abs: f64, pack: &P) -> Result<VecQuadResult<[f64; 3]>>
    where
        P: Fn(&[f64], f64) -> [f64; 3] + Sync,
    {
        let a = axis.map_or([0.0, 0.0, 1.0], |v| [v[0], v[1], v[2]]);
        let (u, v) = frame(a);
        let stats = NestedStats::new();
        let mid = spec.inner(INNER);
        let inner = spec.inner(INNER * INNER).with_tol(spec.rel_tol * INNER * INNER, ray_abs);
        let outer = integrate_1d_vec(
            |psi| {
                let (sp, cp) = psi.sin_cos();
                let ring = integrate_1d_vec(
                    |phi| {
                        let (sf, cf) = phi.sin_cos();
                        let theta: [f64; 3] = std::array::from_fn(|i| cp * a[i] + sp * (cf * u[i] + sf * v[i]));
                        match self.along(&theta, &inner) {
                            Ok(q) => {
                                stats.record(&q);
                                pack(&theta, q.value)
                            }
                            Err(_) => {
                                stats.fail();
                                [f64::NAN; 3]
                            }
                        }
                    },
                    0.0,
                    2.0 * PI,
                    &[],
                    &mid,
                );
                match ring {
                    Ok(r) => {
                        stats.record_parts(r.evals_used, r.err_estimate, r.converged);
                        std::array::from_fn(|i| r.value[i] * sp)
                    }
                    Err(_) => {
                        stats.fail();
                        [f64::NAN; 3]
                    }
                }
            },
            0.0,
            0.5 * PI,
            &[],
            spec,
        )?;
        Ok(finish_vec(&stats, outer, 2.0 * PI))
    }
}

/// Absolute target `0.1 rel int |ray|`: below `rel |value|` unless the
/// directions cancel.
fn outer_floor(spec: &QuadSpec, l1: f64) -> QuadSpec {
    spec.with_tol(spec.rel_tol, spec.abs_tol.max(0.1 * spec.rel_tol * l1))
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn finish_vec(stats: &NestedStats, outer: VecQuadResult<[f64; 3]>, measure: f64) -> VecQuadResult<[f64; 3]> {
    let folded = stats.finish(
        QuadResult {
            value: 0.0,
            err_estimate: outer.err_estimate,
            evals_used: outer.evals_used,
            converged: outer.converged,
        },
        measure,
    );
    VecQuadResult {
        value: outer.value,
        err_estimate: folded.err_estimate,
        evals_used: folded.evals_used,
        converged: folded.converged,
    }
}

/// Two unit vectors completing `a` to an orthonormal frame.
fn frame(a: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = helper[0] * a[0] + helper[1] * a[1] + helper[2] * a[2];
    let mut u: [f64; 3] = std::array::from_fn(|i| helper[i] - d * a[i]);
    let nu = norm3(u);
    u.iter_mut().for_each(|c| *c /= nu);
    let v = [a[1] * u[2] - a[2] * u[1], a[2] * u[0] - a[0] * u[2], a[0] * u[1] - a[1] * u[0]];
    (u, v)
}
