use serde::{Deserialize, Serialize};

use super::{geom, ScalarField};
use crate::error::{Error, Result};

/// A vector field given by one catalog field per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorDesc", into = "VectorDesc")]
pub struct VectorField {
    components: Vec<ScalarField>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDesc {
    components: Vec<ScalarField>,
}

impl TryFrom<VectorDesc> for VectorField {
    type Error = Error;
    fn try_from(d: VectorDesc) -> Result<Self> {
        VectorField::new(d.components)
    }
}

impl From<VectorField> for VectorDesc {
    fn from(v: VectorField) -> Self {
        VectorDesc { components: v.components }
    }
}

impl VectorField {
    /// One component per coordinate, all of the same dimension.
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let n = components.len();
        if n == 0 || components.iter().any(|c| c.dim() != n) {
            return Err(Error::Descriptor(format!(
                "a vector field in dimension n needs n components of dimension n (got {n})"
            )));
        }
        Ok(Self { components })
    }

    /// `direction * bump(x)`.
    pub fn bump_vector(center: &[f64], radius: f64, direction: &[f64]) -> Result<Self> {
        if direction.len() != center.len() {
            return Err(Error::Descriptor("direction and centre differ in dimension".into()));
        }
        let comps = direction
            .iter()
            .map(|&d| ScalarField::plateau_bump(center, radius, 0.0, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// A scalar field viewed as a one-dimensional vector field.
    pub fn from_scalar(f: ScalarField) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.value(x)).collect()
    }

    pub fn value_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.value(x);
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.components.iter().all(|c| c.is_smooth())
    }

    /// Union of the component boxes.
    pub fn effective_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
        for c in &self.components {
            let b = c.effective_box()?;
            acc = Some(match acc {
                Some(a) => super::box_union(a, b),
                None => b,
            });
        }
        acc
    }

    /// Upper bound on `sup |phi|` from the component bounds.
    pub fn declared_sup(&self) -> Option<f64> {
        let mut s = 0.0;
        for c in &self.components {
            let b = c.sup_bound()?;
            s += b * b;
        }
        Some(s.sqrt())
    }

    /// Checks `|phi| <= bound`: first from the declared bounds, otherwise by
    /// sampling a grid over the support. Returns the largest value seen.
    pub fn check_sup(&self, bound: f64) -> Result<f64> {
        if let Some(s) = self.declared_sup() {
            if s <= bound {
                return Ok(s);
            }
        }
        let (lo, hi) = self
            .effective_box()
            .ok_or_else(|| Error::Descriptor("cannot bound a field without bounded support".into()))?;
        let n = self.dim();
        let per_axis: usize = match n {
            1 => 4001,
            2 => 201,
            _ => 41,
        };
        let mut max: f64 = 0.0;
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let mut v = vec![0.0; n];
        loop {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] as f64 / (per_axis - 1) as f64;
            }
            self.value_into(&x, &mut v);
            max = max.max(geom::dot(&v, &v).sqrt());
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < per_axis {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        if max > bound * (1.0 + 1e-12) {
            return Err(Error::TestFieldNorm(max));
        }
        Ok(max)
    }
}
