use super::{geom, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_rect, QuadSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: Vec<f64>,
}

/// Absolutely continuous part of a fractional variation measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    /// `D^a f = grad^a f dx` for smooth `f`.
    FracGradient { field: ScalarField, alpha: f64 },
}

impl Density {
    pub fn eval(&self, x: &[f64], spec: &QuadSpec) -> Result<Vec<f64>> {
        match self {
            Density::FracGradient { field, alpha } => Ok(crate::operators::frac_gradient(field, *alpha, x, spec)?.value),
        }
    }
}

/// Vector-valued signed measure: atoms plus an optional density.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure {
    atoms: Vec<Atom>,
    density: Option<Density>,
}

impl SignedMeasure {
    /// Atoms must sit at distinct points.
    pub fn new(atoms: Vec<Atom>, density: Option<Density>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.point == a.point) {
                return Err(Error::Invalid(format!("repeated atom at {:?}", a.point)));
            }
        }
        Ok(Self { atoms, density })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    /// `sum |w_i|` over the atoms.
    pub fn atomic_variation(&self) -> f64 {
        self.atoms.iter().map(|a| geom::dot(&a.weight, &a.weight).sqrt()).sum()
    }

    /// `int phi . d mu`. The density part is integrated over the support of
    /// `phi`.
    pub fn pair(&self, phi: &VectorField, spec: &QuadSpec) -> Result<f64> {
        let mut total: f64 = self.atoms.iter().map(|a| geom::dot(&a.weight, &phi.value(&a.point))).sum();
        if let Some(d) = &self.density {
            let (lo, hi) = phi
                .effective_box()
                .ok_or_else(|| Error::Domain("pairing a density needs a compactly supported test field".into()))?;
            let n = phi.dim();
            let inner = spec.inner(0.1);
            let sings = vec![Vec::new(); n];
            let q = integrate_rect(
                |x| match d.eval(x, &inner) {
                    Ok(g) => geom::dot(&g, &phi.value(x)),
                    Err(_) => f64::NAN,
                },
                &lo,
                &hi,
                &sings,
                spec,
            )?;
            if !q.value.is_finite() {
                return Err(Error::Domain("density evaluation failed inside the pairing".into()));
            }
            total += q.value;
        }
        Ok(total)
    }
}

/// The fractional variation `D^a f` for the fields where it is known:
/// `delta_0 - delta_1` for `f_a`, `D chi_(-1,1)` for the one-dimensional
/// cube function, and `grad^a f dx` for smooth fields.
pub fn d_alpha_measure(field: &ScalarField, alpha: f64) -> Result<SignedMeasure> {
    let same_order = |a: f64| (a - alpha).abs() <= 1e-15;
    match field {
        ScalarField::FAlpha(f) if same_order(f.alpha) => SignedMeasure::new(
            vec![
                Atom {
                    point: vec![0.0],
                    weight: vec![1.0],
                },
                Atom {
                    point: vec![1.0],
                    weight: vec![-1.0],
                },
            ],
            None,
        ),
        ScalarField::MagicCube(m) if m.dim == 1 && same_order(m.alpha) => SignedMeasure::new(
            vec![
                Atom {
                    point: vec![-1.0],
                    weight: vec![1.0],
                },
                Atom {
                    point: vec![1.0],
                    weight: vec![-1.0],
                },
            ],
            None,
        ),
        f if f.is_smooth() => SignedMeasure::new(
            Vec::new(),
            Some(Density::FracGradient {
                field: f.clone(),
                alpha,
            }),
        ),
        f => Err(Error::UnsupportedField(f.kind_name().to_string())),
    }
}
