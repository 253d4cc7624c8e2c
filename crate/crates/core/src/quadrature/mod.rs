//! Adaptive Gauss–Kronrod integration with declared algebraic singularities
//! and algebraic tails, plus polar cubature on balls and ball complements in
//! dimensions 1 to 3.

mod cubature;
mod gauss_kronrod;

use serde::{Deserialize, Serialize};

pub use cubature::{integrate_ball, integrate_complement, integrate_rect, integrate_rect_smooth, integrate_sphere};
pub use gauss_kronrod::{integrate_1d, integrate_1d_vec, QuadValue, VecQuadResult};

pub(crate) use gauss_kronrod::NestedStats;

/// How the near field of a singular kernel is split off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum NearRadius {
    /// Split the radial integral at this radius.
    Fixed { delta: f64 },
    /// Split at half the distance to the nearest declared breakpoint, capped at 1.
    #[default]
    Auto,
}

/// How the far field of an operator integral is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum FarStrategy {
    /// Pick from the field metadata.
    #[default]
    Auto,
    /// Integrate only over a ball covering the support.
    ExactCompact,
    /// Integrate to infinity assuming this algebraic decay of the integrand.
    PowerTail { exponent: f64 },
    /// Pair opposite directions so the `f(x)` terms cancel, then integrate
    /// over the support only.
    SymmetricCancel,
}

/// Quadrature policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub near_radius: NearRadius,
    pub far_strategy: FarStrategy,
    pub max_evals: usize,
    /// Evaluate the Kronrod nodes of each refinement step concurrently.
    /// Only worth it for expensive integrands such as nested operators.
    #[serde(skip)]
    pub parallel_nodes: bool,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self::for_dim(1)
    }
}

pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

impl QuadSpec {
    /// Default tolerances: 1e-8 for n = 1, 1e-6 for n = 2, 1e-5 for n >= 3.
    pub fn for_dim(n: usize) -> Self {
        let rel_tol = match n {
            0 | 1 => 1e-8,
            2 => 1e-6,
            _ => 1e-5,
        };
        Self {
            rel_tol,
            abs_tol: 1e-14,
            near_radius: NearRadius::Auto,
            far_strategy: FarStrategy::Auto,
            max_evals: DEFAULT_MAX_EVALS,
            parallel_nodes: false,
        }
    }

    pub fn with_tol(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel_nodes = on;
        self
    }

    /// Spec for an inner integral nested inside this one.
    pub fn inner(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            parallel_nodes: false,
            ..*self
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(crate::Error::Invalid(format!(
                "tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_evals < 100 {
            return Err(crate::Error::Invalid(format!(
                "max_evals = {} is below the minimum of 100",
                self.max_evals
            )));
        }
        if let NearRadius::Fixed { delta } = self.near_radius {
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(crate::Error::Invalid(format!("near radius {delta} must be positive")));
            }
        }
        Ok(())
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evals_used: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            err_estimate: 0.0,
            evals_used: 0,
            converged: true,
        }
    }

    /// Combine two independent integrals over disjoint pieces.
    pub fn merge(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evals_used: self.evals_used + other.evals_used,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            err_estimate: self.err_estimate * factor.abs(),
            ..self
        }
    }
}

/// Local algebraic behaviour `|x - at|^exponent` near a finite point, or
/// `|x|^exponent` as `x` tends to an infinite endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub at: f64,
    pub exponent: f64,
}

impl Singularity {
    pub fn new(at: f64, exponent: f64) -> Self {
        Self { at, exponent }
    }

    /// A plain breakpoint (jump or kink) with no blow-up.
    pub fn breakpoint(at: f64) -> Self {
        Self { at, exponent: 0.0 }
    }

    /// Algebraic decay `|x|^-decay` at `+inf`.
    pub fn tail(decay: f64) -> Self {
        Self {
            at: f64::INFINITY,
            exponent: -decay,
        }
    }
}
