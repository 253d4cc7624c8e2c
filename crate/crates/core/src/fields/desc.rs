//! JSON descriptors, e.g. `{"kind":"f_alpha","alpha":0.5}` or
//! `{"kind":"gaussian","center":[0],"width":1,"dim":1}`.

use serde::{Deserialize, Serialize};

use super::{HalfSpace, ScalarField};
use crate::error::{Error, Result};

fn one() -> f64 {
    1.0
}

fn one_dim() -> usize {
    1
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDesc {
    Gaussian {
        center: Vec<f64>,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        amplitude: f64,
    },
    SmoothBump {
        center: Vec<f64>,
        radius: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        plateau: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        amplitude: f64,
    },
    IntervalIndicator {
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        half_width: f64,
    },
    CubeIndicator {
        center: Vec<f64>,
        #[serde(default = "one")]
        half_width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    HalfSpaceIndicator {
        nu: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x0: Option<Vec<f64>>,
    },
    FAlpha {
        alpha: f64,
    },
    MagicCube {
        alpha: f64,
        #[serde(default = "one_dim")]
        dim: usize,
    },
    Mollified {
        base: Box<FieldDesc>,
        eps: f64,
    },
    Sum {
        terms: Vec<TermDesc>,
    },
    Product {
        factors: Vec<FieldDesc>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    #[serde(default = "one")]
    pub weight: f64,
    pub field: FieldDesc,
}

fn check_dim_tag(center: &[f64], dim: Option<usize>) -> Result<()> {
    match dim {
        Some(d) if d != center.len() => Err(Error::Descriptor(format!(
            "dim = {d} but the centre has {} coordinates",
            center.len()
        ))),
        _ => Ok(()),
    }
}

impl TryFrom<FieldDesc> for ScalarField {
    type Error = Error;

    fn try_from(d: FieldDesc) -> Result<Self> {
        match d {
            FieldDesc::Gaussian {
                center,
                width,
                dim,
                amplitude,
            } => {
                check_dim_tag(&center, dim)?;
                ScalarField::gaussian_scaled(&center, width, amplitude)
            }
            FieldDesc::SmoothBump {
                center,
                radius,
                plateau,
                dim,
                amplitude,
            } => {
                check_dim_tag(&center, dim)?;
                ScalarField::plateau_bump(&center, radius, plateau, amplitude)
            }
            FieldDesc::IntervalIndicator { center, half_width } => ScalarField::interval_indicator(center, half_width),
            FieldDesc::CubeIndicator { center, half_width, dim } => {
                check_dim_tag(&center, dim)?;
                ScalarField::cube_indicator(&center, half_width)
            }
            FieldDesc::HalfSpaceIndicator { nu, x0 } => {
                let x0 = x0.unwrap_or_else(|| vec![0.0; nu.len()]);
                Ok(ScalarField::half_space_indicator(HalfSpace::new(&nu, &x0)?))
            }
            FieldDesc::FAlpha { alpha } => ScalarField::f_alpha(alpha),
            FieldDesc::MagicCube { alpha, dim } => ScalarField::magic_cube(alpha, dim),
            FieldDesc::Mollified { base, eps } => super::mollify(&ScalarField::try_from(*base)?, eps),
            FieldDesc::Sum { terms } => {
                let terms = terms
                    .into_iter()
                    .map(|t| Ok((t.weight, ScalarField::try_from(t.field)?)))
                    .collect::<Result<Vec<_>>>()?;
                ScalarField::sum(terms)
            }
            FieldDesc::Product { factors } => {
                let mut it = factors.into_iter();
                let first = it
                    .next()
                    .ok_or_else(|| Error::Descriptor("empty product".into()))?;
                it.try_fold(ScalarField::try_from(first)?, |acc, f| {
                    ScalarField::product(acc, ScalarField::try_from(f)?)
                })
            }
        }
    }
}

impl From<ScalarField> for FieldDesc {
    fn from(f: ScalarField) -> Self {
        match f {
            ScalarField::Gaussian(g) => FieldDesc::Gaussian {
                dim: Some(g.center.len()),
                center: g.center,
                width: g.width,
                amplitude: g.amplitude,
            },
            ScalarField::SmoothBump(b) => FieldDesc::SmoothBump {
                dim: Some(b.center.len()),
                center: b.center,
                radius: b.radius,
                plateau: b.plateau,
                amplitude: b.amplitude,
            },
            ScalarField::CubeIndicator(c) if c.center.len() == 1 => FieldDesc::IntervalIndicator {
                center: c.center[0],
                half_width: c.half_width,
            },
            ScalarField::CubeIndicator(c) => FieldDesc::CubeIndicator {
                dim: Some(c.center.len()),
                center: c.center,
                half_width: c.half_width,
            },
            ScalarField::HalfSpaceIndicator(h) => FieldDesc::HalfSpaceIndicator {
                nu: h.nu,
                x0: Some(h.x0),
            },
            ScalarField::FAlpha(f) => FieldDesc::FAlpha { alpha: f.alpha },
            ScalarField::MagicCube(m) => FieldDesc::MagicCube {
                alpha: m.alpha,
                dim: m.dim,
            },
            ScalarField::Mollified(m) => FieldDesc::Mollified {
                base: Box::new((*m.base).into()),
                eps: m.eps,
            },
            ScalarField::Sum(terms) => FieldDesc::Sum {
                terms: terms
                    .into_iter()
                    .map(|(weight, f)| TermDesc {
                        weight,
                        field: f.into(),
                    })
                    .collect(),
            },
            ScalarField::Product(a, b) => FieldDesc::Product {
                factors: vec![(*a).into(), (*b).into()],
            },
        }
    }
}

impl ScalarField {
    /// Parse a JSON descriptor.
    pub fn from_json(s: &str) -> Result<Self> {
        let d: FieldDesc = serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))?;
        Self::try_from(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FieldDesc::from(self.clone())).expect("descriptor serialisation")
    }
}
