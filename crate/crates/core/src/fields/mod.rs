//! Catalog of analytic test functions, with the metadata the operator
//! quadrature needs: support, tail decay, and where each ray from a point
//! meets a jump or an algebraic singularity.

mod desc;
pub(crate) mod geom;
mod magic;
mod measure;
mod mollify;
mod vector;

use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_ball, QuadSpec, Singularity};

pub use desc::{FieldDesc, TermDesc};
pub use measure::{d_alpha_measure, Atom, Density, SignedMeasure};
pub use mollify::{kernel as mollifier_kernel, mollify};
pub use vector::VectorField;

/// Largest dimension for evaluable fields.
pub const MAX_FIELD_DIM: usize = 3;

/// Gaussians are treated as zero beyond this many widths from the centre
/// (the value there is below `exp(-113)` of the peak).
pub const GAUSSIAN_CUTOFF: f64 = 6.0;

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_FIELD_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(n))
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Descriptor(format!("{what} must be positive and finite, got {v}")))
    }
}

fn check_point(p: &[f64]) -> Result<()> {
    check_dim(p.len())?;
    if p.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Descriptor(format!("non-finite coordinates in {p:?}")))
    }
}

/// The closed half-space boundary `H = {(x - x0) . nu = 0}` with unit normal.
/// The open side `H+` is where `(x - x0) . nu > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    nu: Vec<f64>,
    x0: Vec<f64>,
}

impl HalfSpace {
    /// `nu` must have unit length to within 1e-14.
    pub fn new(nu: &[f64], x0: &[f64]) -> Result<Self> {
        check_point(nu)?;
        check_point(x0)?;
        if nu.len() != x0.len() {
            return Err(Error::Descriptor("normal and base point differ in dimension".into()));
        }
        let norm = geom::dot(nu, nu).sqrt();
        if (norm - 1.0).abs() > 1e-14 {
            return Err(Error::Descriptor(format!("half-space normal has length {norm}, expected 1")));
        }
        Ok(Self {
            nu: nu.to_vec(),
            x0: x0.to_vec(),
        })
    }

    /// Normalises `dir` first.
    pub fn normalized(dir: &[f64], x0: &[f64]) -> Result<Self> {
        check_point(dir)?;
        let norm = geom::dot(dir, dir).sqrt();
        if norm == 0.0 {
            return Err(Error::Descriptor("half-space normal is zero".into()));
        }
        let nu: Vec<f64> = dir.iter().map(|v| v / norm).collect();
        Self::new(&nu, x0)
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn dim(&self) -> usize {
        self.nu.len()
    }

    /// `(x - x0) . nu`
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.x0).zip(&self.nu).map(|((a, b), n)| (a - b) * n).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub(crate) center: Vec<f64>,
    pub(crate) width: f64,
    pub(crate) amplitude: f64,
}

/// Radial bump `amplitude * psi(|x - c| / radius)`. With `plateau = 0` the
/// profile is `exp(1 - 1/(1 - u^2))`; with `plateau = p > 0` it is 1 on
/// `u <= p` and falls off through a smooth step on `(p, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothBump {
    pub(crate) center: Vec<f64>,
    pub(crate) radius: f64,
    pub(crate) plateau: f64,
    pub(crate) amplitude: f64,
}

/// Indicator of the open cube `center + (-h, h)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeIndicator {
    pub(crate) center: Vec<f64>,
    pub(crate) half_width: f64,
}

/// `f_a(x) = mu(1, -a) (|x|^(a-1) sgn x - |x-1|^(a-1) sgn(x-1))`, whose
/// fractional variation is `delta_0 - delta_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FAlpha {
    pub(crate) alpha: f64,
    pub(crate) scale: f64,
}

/// `(-Delta)^((1-a)/2)` of the indicator of `(-1, 1)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicCube {
    pub(crate) alpha: f64,
    pub(crate) dim: usize,
    pub(crate) nu: f64,
    pub(crate) quad: QuadSpec,
}

/// `rho_eps * base`, evaluated by quadrature over `B_eps(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollified {
    pub(crate) base: Box<ScalarField>,
    pub(crate) eps: f64,
    pub(crate) quad: QuadSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldDesc", into = "FieldDesc")]
pub enum ScalarField {
    Gaussian(Gaussian),
    SmoothBump(SmoothBump),
    CubeIndicator(CubeIndicator),
    HalfSpaceIndicator(HalfSpace),
    FAlpha(FAlpha),
    MagicCube(MagicCube),
    Mollified(Mollified),
    Sum(Vec<(f64, ScalarField)>),
    Product(Box<ScalarField>, Box<ScalarField>),
}

/// Where a field vanishes identically.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Bounded { lo: Vec<f64>, hi: Vec<f64> },
    Unbounded,
}

/// Sets on which a field is undefined or unbounded.
#[derive(Debug, Clone, PartialEq)]
pub enum SingularSet {
    Point(Vec<f64>),
    Hyperplane(HalfSpace),
    CubeBoundary { center: Vec<f64>, half_width: f64 },
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

fn box_union(a: (Vec<f64>, Vec<f64>), b: (Vec<f64>, Vec<f64>)) -> (Vec<f64>, Vec<f64>) {
    let lo = a.0.iter().zip(&b.0).map(|(x, y)| x.min(*y)).collect();
    let hi = a.1.iter().zip(&b.1).map(|(x, y)| x.max(*y)).collect();
    (lo, hi)
}

fn box_intersection(a: (Vec<f64>, Vec<f64>), b: (Vec<f64>, Vec<f64>)) -> (Vec<f64>, Vec<f64>) {
    let lo: Vec<f64> = a.0.iter().zip(&b.0).map(|(x, y)| x.max(*y)).collect();
    let hi = a.1.iter().zip(&b.1).zip(&lo).map(|((x, y), l)| x.min(*y).max(*l)).collect();
    (lo, hi)
}

fn centered_box(c: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    (c.iter().map(|v| v - h).collect(), c.iter().map(|v| v + h).collect())
}

impl ScalarField {
    /// `amplitude` defaults to 1; the profile is `exp(-pi |x - c|^2 / width^2)`.
    pub fn gaussian(center: &[f64], width: f64) -> Result<Self> {
        Self::gaussian_scaled(center, width, 1.0)
    }

    pub fn gaussian_scaled(center: &[f64], width: f64, amplitude: f64) -> Result<Self> {
        check_point(center)?;
        check_positive("gaussian width", width)?;
        Ok(Self::Gaussian(Gaussian {
            center: center.to_vec(),
            width,
            amplitude,
        }))
    }

    pub fn smooth_bump(center: &[f64], radius: f64) -> Result<Self> {
        Self::plateau_bump(center, radius, 0.0, 1.0)
    }

    pub fn plateau_bump(center: &[f64], radius: f64, plateau: f64, amplitude: f64) -> Result<Self> {
        check_point(center)?;
        check_positive("bump radius", radius)?;
        if !(0.0..1.0).contains(&plateau) {
            return Err(Error::Descriptor(format!("bump plateau {plateau} must lie in [0, 1)")));
        }
        if !amplitude.is_finite() {
            return Err(Error::Descriptor("bump amplitude must be finite".into()));
        }
        Ok(Self::SmoothBump(SmoothBump {
            center: center.to_vec(),
            radius,
            plateau,
            amplitude,
        }))
    }

    /// Indicator of `(center - half_width, center + half_width)`.
    pub fn interval_indicator(center: f64, half_width: f64) -> Result<Self> {
        Self::cube_indicator(&[center], half_width)
    }

    pub fn cube_indicator(center: &[f64], half_width: f64) -> Result<Self> {
        check_point(center)?;
        check_positive("cube half-width", half_width)?;
        Ok(Self::CubeIndicator(CubeIndicator {
            center: center.to_vec(),
            half_width,
        }))
    }

    pub fn half_space_indicator(h: HalfSpace) -> Self {
        Self::HalfSpaceIndicator(h)
    }

    pub fn f_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha,
                range: "(0, 1)",
            });
        }
        Ok(Self::FAlpha(FAlpha {
            alpha,
            scale: constants::mu(1, -alpha)?,
        }))
    }

    pub fn magic_cube(alpha: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha,
                range: "(0, 1)",
            });
        }
        let quad = match dim {
            1 => QuadSpec::for_dim(1),
            2 => QuadSpec::for_dim(1).with_tol(1e-10, 1e-15),
            _ => QuadSpec::for_dim(1).with_tol(1e-7, 1e-13),
        };
        Ok(Self::MagicCube(MagicCube {
            alpha,
            dim,
            nu: constants::nu(dim, 1.0 - alpha)?,
            quad,
        }))
    }

    /// `sum_i w_i f_i`; all terms must share a dimension.
    pub fn sum(terms: Vec<(f64, ScalarField)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Descriptor("empty sum".into()));
        };
        let n = first.1.dim();
        if terms.iter().any(|(w, f)| f.dim() != n || !w.is_finite()) {
            return Err(Error::Descriptor("sum terms need finite weights and equal dimensions".into()));
        }
        Ok(Self::Sum(terms))
    }

    pub fn product(a: ScalarField, b: ScalarField) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::Descriptor("product factors differ in dimension".into()));
        }
        Ok(Self::Product(Box::new(a), Box::new(b)))
    }

    pub fn scaled(self, k: f64) -> Result<Self> {
        Self::sum(vec![(k, self)])
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian(g) => g.center.len(),
            Self::SmoothBump(b) => b.center.len(),
            Self::CubeIndicator(c) => c.center.len(),
            Self::HalfSpaceIndicator(h) => h.dim(),
            Self::FAlpha(_) => 1,
            Self::MagicCube(m) => m.dim,
            Self::Mollified(m) => m.base.dim(),
            Self::Sum(t) => t[0].1.dim(),
            Self::Product(a, _) => a.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Gaussian(_) => "gaussian",
            Self::SmoothBump(_) => "smooth_bump",
            Self::CubeIndicator(c) if c.center.len() == 1 => "interval_indicator",
            Self::CubeIndicator(_) => "cube_indicator",
            Self::HalfSpaceIndicator(_) => "half_space_indicator",
            Self::FAlpha(_) => "f_alpha",
            Self::MagicCube(_) => "magic_cube",
            Self::Mollified(_) => "mollified",
            Self::Sum(_) => "sum",
            Self::Product(..) => "product",
        }
    }

    /// Value at `x` without checks. Indicators are 0 on their boundary;
    /// declared singular points give NaN or infinity, and quadrature-backed
    /// kinds give NaN if their quadrature fails.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Gaussian(g) => {
                let d = geom::dist(x, &g.center) / g.width;
                g.amplitude * (-std::f64::consts::PI * d * d).exp()
            }
            Self::SmoothBump(b) => {
                let u = geom::dist(x, &b.center) / b.radius;
                if u >= 1.0 {
                    0.0
                } else if b.plateau == 0.0 {
                    b.amplitude * (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    b.amplitude * smooth_step((1.0 - u) / (1.0 - b.plateau))
                }
            }
            Self::CubeIndicator(c) => {
                let inside = x.iter().zip(&c.center).all(|(a, m)| (a - m).abs() < c.half_width);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            Self::HalfSpaceIndicator(h) => {
                if h.signed_distance(x) > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::FAlpha(f) => {
                let t = x[0];
                let e = f.alpha - 1.0;
                let part = |y: f64| {
                    if y == 0.0 {
                        f64::NAN
                    } else {
                        y.abs().powf(e) * y.signum()
                    }
                };
                f.scale * (part(t) - part(t - 1.0))
            }
            Self::MagicCube(m) => magic::value(m, x).unwrap_or(f64::NAN),
            Self::Mollified(m) => mollify::value(m, x).unwrap_or(f64::NAN),
            Self::Sum(terms) => terms.iter().map(|(w, f)| w * f.value(x)).sum(),
            Self::Product(a, b) => a.value(x) * b.value(x),
        }
    }

    /// Checked evaluation.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Domain(format!(
                "point has {} coordinates, field is {}-dimensional",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite point {x:?}")));
        }
        if self.is_singular(x) {
            return Err(Error::SingularPoint(x.to_vec()));
        }
        match self {
            Self::MagicCube(m) => magic::value(m, x),
            Self::Mollified(m) => mollify::value(m, x),
            Self::Sum(terms) => terms.iter().try_fold(0.0, |acc, (w, f)| Ok(acc + w * f.eval(x)?)),
            Self::Product(a, b) => Ok(a.eval(x)? * b.eval(x)?),
            _ => Ok(self.value(x)),
        }
    }

    pub fn is_singular(&self, x: &[f64]) -> bool {
        self.singular_set().iter().any(|s| match s {
            SingularSet::Point(p) => p.as_slice() == x,
            SingularSet::Hyperplane(h) => h.signed_distance(x) == 0.0,
            SingularSet::CubeBoundary { center, half_width } => {
                let d = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c).abs())
                    .fold(0.0, f64::max);
                d == *half_width
            }
        })
    }

    pub fn singular_set(&self) -> Vec<SingularSet> {
        match self {
            Self::HalfSpaceIndicator(h) => vec![SingularSet::Hyperplane(h.clone())],
            Self::FAlpha(_) => vec![SingularSet::Point(vec![0.0]), SingularSet::Point(vec![1.0])],
            Self::MagicCube(m) => vec![SingularSet::CubeBoundary {
                center: vec![0.0; m.dim],
                half_width: 1.0,
            }],
            Self::Sum(terms) => terms.iter().flat_map(|(_, f)| f.singular_set()).collect(),
            Self::Product(a, b) => {
                let mut s = a.singular_set();
                s.extend(b.singular_set());
                s
            }
            _ => Vec::new(),
        }
    }

    pub fn support(&self) -> Support {
        let bounded = |(lo, hi): (Vec<f64>, Vec<f64>)| Support::Bounded { lo, hi };
        match self {
            Self::SmoothBump(b) => bounded(centered_box(&b.center, b.radius)),
            Self::CubeIndicator(c) => bounded(centered_box(&c.center, c.half_width)),
            Self::Mollified(m) => match m.base.support() {
                Support::Bounded { lo, hi } => Support::Bounded {
                    lo: lo.iter().map(|v| v - m.eps).collect(),
                    hi: hi.iter().map(|v| v + m.eps).collect(),
                },
                Support::Unbounded => Support::Unbounded,
            },
            Self::Sum(terms) => {
                let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
                for (_, f) in terms {
                    match f.support() {
                        Support::Bounded { lo, hi } => {
                            acc = Some(match acc {
                                Some(a) => box_union(a, (lo, hi)),
                                None => (lo, hi),
                            })
                        }
                        Support::Unbounded => return Support::Unbounded,
                    }
                }
                acc.map_or(Support::Unbounded, bounded)
            }
            Self::Product(a, b) => match (a.support(), b.support()) {
                (Support::Bounded { lo, hi }, Support::Bounded { lo: l2, hi: h2 }) => {
                    bounded(box_intersection((lo, hi), (l2, h2)))
                }
                (s @ Support::Bounded { .. }, _) | (_, s @ Support::Bounded { .. }) => s,
                _ => Support::Unbounded,
            },
            _ => Support::Unbounded,
        }
    }

    /// A box outside which the field is zero or numerically negligible
    /// (Gaussians are cut at [`GAUSSIAN_CUTOFF`] widths). `None` for
    /// algebraic tails.
    pub fn effective_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Self::Gaussian(g) => Some(centered_box(&g.center, GAUSSIAN_CUTOFF * g.width)),
            Self::Mollified(m) => m.base.effective_box().map(|(lo, hi)| {
                (
                    lo.iter().map(|v| v - m.eps).collect(),
                    hi.iter().map(|v| v + m.eps).collect(),
                )
            }),
            Self::Sum(terms) => {
                let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
                for (_, f) in terms {
                    let b = f.effective_box()?;
                    acc = Some(match acc {
                        Some(a) => box_union(a, b),
                        None => b,
                    });
                }
                acc
            }
            Self::Product(a, b) => match (a.effective_box(), b.effective_box()) {
                (Some(x), Some(y)) => Some(box_intersection(x, y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            _ => match self.support() {
                Support::Bounded { lo, hi } => Some((lo, hi)),
                Support::Unbounded => None,
            },
        }
    }

    /// Algebraic decay rate of the field (or of its differences at
    /// opposite points, where that is what the operators see); infinite for
    /// compact or Gaussian support.
    pub fn decay_exponent(&self) -> f64 {
        match self {
            Self::HalfSpaceIndicator(_) => 0.0,
            Self::FAlpha(f) => 2.0 - f.alpha,
            Self::MagicCube(m) => m.dim as f64 + 1.0 - m.alpha,
            Self::Mollified(m) => m.base.decay_exponent(),
            Self::Sum(terms) => terms.iter().map(|(_, f)| f.decay_exponent()).fold(f64::INFINITY, f64::min),
            Self::Product(a, b) => a.decay_exponent() + b.decay_exponent(),
            _ => f64::INFINITY,
        }
    }

    /// True for the infinitely differentiable catalog entries.
    pub fn is_smooth(&self) -> bool {
        match self {
            Self::Gaussian(_) | Self::SmoothBump(_) | Self::Mollified(_) => true,
            Self::Sum(terms) => terms.iter().all(|(_, f)| f.is_smooth()),
            Self::Product(a, b) => a.is_smooth() && b.is_smooth(),
            _ => false,
        }
    }

    /// Declared bound on `sup |f|`, if the field is bounded.
    pub fn sup_bound(&self) -> Option<f64> {
        match self {
            Self::Gaussian(g) => Some(g.amplitude.abs()),
            Self::SmoothBump(b) => Some(b.amplitude.abs()),
            Self::CubeIndicator(_) | Self::HalfSpaceIndicator(_) => Some(1.0),
            Self::FAlpha(_) | Self::MagicCube(_) => None,
            Self::Mollified(m) => m.base.sup_bound(),
            Self::Sum(terms) => terms.iter().try_fold(0.0, |acc, (w, f)| Some(acc + w.abs() * f.sup_bound()?)),
            Self::Product(a, b) => Some(a.sup_bound()? * b.sup_bound()?),
        }
    }

    /// Jumps and algebraic singularities of `t -> f(x + t theta)` for
    /// `t >= 0`, as `(t, exponent)`.
    pub(crate) fn ray_features(&self, x: &[f64], theta: &[f64], out: &mut Vec<(f64, f64)>) {
        match self {
            Self::SmoothBump(b) => {
                geom::push_crossings(geom::ball_crossings(x, theta, &b.center, b.radius), 0.0, out);
                if b.plateau > 0.0 {
                    let inner = geom::ball_crossings(x, theta, &b.center, b.plateau * b.radius);
                    geom::push_crossings(inner, 0.0, out);
                }
            }
            Self::CubeIndicator(c) => {
                let (lo, hi) = centered_box(&c.center, c.half_width);
                geom::push_crossings(geom::box_crossings(x, theta, &lo, &hi), 0.0, out)
            }
            Self::HalfSpaceIndicator(h) => {
                let c = geom::dot(theta, &h.nu);
                if c != 0.0 {
                    let t = -h.signed_distance(x) / c;
                    if t >= 0.0 {
                        out.push((t, 0.0));
                    }
                }
            }
            Self::FAlpha(f) => {
                for p in [0.0, 1.0] {
                    let t = (p - x[0]) / theta[0];
                    if t >= 0.0 {
                        out.push((t, f.alpha - 1.0));
                    }
                }
            }
            Self::MagicCube(m) => {
                let lo = vec![-1.0; m.dim];
                let hi = vec![1.0; m.dim];
                geom::push_crossings(geom::box_crossings(x, theta, &lo, &hi), m.alpha - 1.0, out)
            }
            Self::Sum(terms) => {
                for (_, f) in terms {
                    f.ray_features(x, theta, out);
                }
            }
            Self::Product(a, b) => {
                a.ray_features(x, theta, out);
                b.ray_features(x, theta, out);
            }
            Self::Gaussian(_) | Self::Mollified(_) => {}
        }
    }

    /// Distance along the ray past which the field is (effectively) zero;
    /// `None` if it never is.
    pub(crate) fn ray_extent(&self, x: &[f64], theta: &[f64]) -> Option<f64> {
        match self {
            Self::Gaussian(g) => Some(geom::exit_distance(geom::ball_crossings(
                x,
                theta,
                &g.center,
                GAUSSIAN_CUTOFF * g.width,
            ))),
            Self::SmoothBump(b) => Some(geom::exit_distance(geom::ball_crossings(x, theta, &b.center, b.radius))),
            Self::Sum(terms) => terms
                .iter()
                .try_fold(0.0, |acc: f64, (_, f)| Some(acc.max(f.ray_extent(x, theta)?))),
            Self::Product(a, b) => match (a.ray_extent(x, theta), b.ray_extent(x, theta)) {
                (Some(p), Some(q)) => Some(p.min(q)),
                (Some(p), None) | (None, Some(p)) => Some(p),
                (None, None) => None,
            },
            _ => self
                .effective_box()
                .map(|(lo, hi)| geom::exit_distance(geom::box_crossings(x, theta, &lo, &hi))),
        }
    }

    /// Points whose direction from the evaluation point changes the ray
    /// structure (cube corners); used as angular breakpoints in the plane.
    pub(crate) fn critical_points(&self) -> Vec<Vec<f64>> {
        fn corners(c: &[f64], h: f64) -> Vec<Vec<f64>> {
            let n = c.len();
            (0..1usize << n)
                .map(|mask| (0..n).map(|i| c[i] + if mask >> i & 1 == 1 { h } else { -h }).collect())
                .collect()
        }
        match self {
            Self::CubeIndicator(c) => corners(&c.center, c.half_width),
            Self::MagicCube(m) => corners(&vec![0.0; m.dim], 1.0),
            Self::Sum(terms) => terms.iter().flat_map(|(_, f)| f.critical_points()).collect(),
            Self::Product(a, b) => {
                let mut v = a.critical_points();
                v.extend(b.critical_points());
                v
            }
            _ => Vec::new(),
        }
    }

    /// Direction around which the angular quadrature should be centred.
    pub(crate) fn preferred_axis(&self) -> Option<Vec<f64>> {
        match self {
            Self::HalfSpaceIndicator(h) => Some(h.nu.clone()),
            Self::Sum(terms) => terms.iter().find_map(|(_, f)| f.preferred_axis()),
            Self::Product(a, b) => a.preferred_axis().or_else(|| b.preferred_axis()),
            _ => None,
        }
    }
}

/// The precise representative `f*(x)`: the limit of averages over
/// `B_r(x)` as `r -> 0`, taken along `r = r0 / 2^k` with Richardson
/// extrapolation of the `r^2` term.
pub fn precise_representative(field: &ScalarField, x: &[f64], spec: &QuadSpec) -> Result<f64> {
    let n = field.dim();
    if x.len() != n {
        return Err(Error::Domain("point and field dimensions differ".into()));
    }
    if !field.is_singular(x) && field.is_smooth() {
        return field.eval(x);
    }
    let inner = spec.with_tol(spec.rel_tol * 0.01, spec.abs_tol * 0.01);
    let average = |r: f64| -> Result<f64> {
        let q = if n == 1 {
            let mut feats = Vec::new();
            field.ray_features(x, &[1.0], &mut feats);
            let mut sings: Vec<Singularity> = feats
                .iter()
                .filter(|(t, _)| *t < r)
                .map(|&(t, e)| Singularity::new(x[0] + t, e))
                .collect();
            feats.clear();
            field.ray_features(x, &[-1.0], &mut feats);
            sings.extend(feats.iter().filter(|(t, _)| *t < r).map(|&(t, e)| Singularity::new(x[0] - t, e)));
            integrate_1d(|y| field.value(&[y]), x[0] - r, x[0] + r, &sings, &inner)?
        } else {
            integrate_ball(|y| field.value(y), x, r, &inner)?
        };
        if !q.converged {
            return Err(Error::BudgetExceeded(q.evals_used));
        }
        Ok(q.value / (constants::ball_volume(n)? * r.powi(n as i32)))
    };
    let tol = |v: f64| spec.abs_tol.max(spec.rel_tol * v.abs()).max(1e-12);
    let mut r = 0.25;
    let mut prev_avg = average(r)?;
    let mut prev_extrap: Option<f64> = None;
    for _ in 0..30 {
        r *= 0.5;
        let avg = average(r)?;
        let extrap = avg + (avg - prev_avg) / 3.0;
        if let Some(p) = prev_extrap {
            if (extrap - p).abs() <= tol(extrap) {
                return Ok(extrap);
            }
        }
        prev_avg = avg;
        prev_extrap = Some(extrap);
    }
    Err(Error::NonConvergentAverage(prev_avg, prev_extrap.unwrap_or(f64::NAN)))
}
