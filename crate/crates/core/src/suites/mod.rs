//! Verification suites: each one pits a definitional quadrature against a
//! closed form, an identity or an inequality and reports one row per case.

mod checks;
#[cfg(test)]
mod tests;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quadrature::QuadSpec;

pub use checks::{
    suite_chain_failure, suite_gagliardo_bound, suite_gauss_green, suite_halfspace, suite_hardy_halfspace,
    suite_hardy_optimal, suite_ibp, suite_leibniz, suite_rigidity, suite_variation_bound, suite_weighted_hardy,
    GreenGeometry,
};

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `|lhs - rhs| <= tol * |rhs|`, or `<= tol` when `rhs` is (near) zero.
    Close,
    /// `|lhs - rhs| <= tol`.
    CloseAbs,
    /// `lhs <= rhs` up to `tol`; `abs_err` holds the signed margin `rhs - lhs`.
    AtMost,
    /// `lhs < rhs` strictly.
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub suite: String,
    pub case_id: String,
    pub alpha: f64,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub relation: Relation,
    pub pass: bool,
    /// Set when the case could not be computed.
    pub error: Option<String>,
    pub budget_exceeded: bool,
}

/// Below this `|rhs|` a `Close` case is judged on the absolute error.
const NEAR_ZERO: f64 = 1e-12;

impl Case {
    #[allow(clippy::too_many_arguments)]
    pub fn compare(suite: &str, case_id: impl Into<String>, alpha: f64, n: usize, lhs: f64, rhs: f64, tol: f64, relation: Relation) -> Self {
        let (abs_err, rel_err, pass) = match relation {
            Relation::Close | Relation::CloseAbs => {
                let abs = (lhs - rhs).abs();
                let rel = if rhs == 0.0 { if abs == 0.0 { 0.0 } else { f64::INFINITY } } else { abs / rhs.abs() };
                let pass = match relation {
                    Relation::Close if rhs.abs() < NEAR_ZERO => abs <= tol,
                    Relation::Close => rel <= tol,
                    _ => abs <= tol,
                };
                (abs, rel, pass)
            }
            Relation::AtMost | Relation::Below => {
                let margin = rhs - lhs;
                let rel = if rhs == 0.0 { margin } else { margin / rhs.abs() };
                let pass = match relation {
                    Relation::AtMost => margin >= -tol,
                    _ => lhs < rhs,
                };
                (margin, rel, pass)
            }
        };
        Self {
            suite: suite.to_string(),
            case_id: case_id.into(),
            alpha,
            n,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            relation,
            pass: pass && lhs.is_finite() && rhs.is_finite(),
            error: None,
            budget_exceeded: false,
        }
    }

    pub fn failed(suite: &str, case_id: impl Into<String>, alpha: f64, n: usize, tol: f64, relation: Relation, err: &Error) -> Self {
        Self {
            suite: suite.to_string(),
            case_id: case_id.into(),
            alpha,
            n,
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tol,
            relation,
            pass: false,
            error: Some(err.to_string()),
            budget_exceeded: matches!(err, Error::BudgetExceeded(_)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
    /// Not part of the CSV, which must not depend on the machine.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn budget_exceeded(&self) -> bool {
        self.cases.iter().any(|c| c.budget_exceeded)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

pub const CSV_HEADER: &str = "suite,case_id,alpha,n,lhs,rhs,abs_err,rel_err,tol,pass";

/// The CSV report for a list of suites, header included. Floats are written
/// in shortest round-trip form.
pub fn to_csv(reports: &[SuiteReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for case in reports.iter().flat_map(|r| &r.cases) {
        let _ = writeln!(
            out,
            "{},{},{:?},{},{:e},{:e},{:e},{:e},{:e},{}",
            case.suite, case.case_id, case.alpha, case.n, case.lhs, case.rhs, case.abs_err, case.rel_err, case.tol, case.pass
        );
    }
    out
}

/// Exit status for a finished run: 0 all pass, 1 some case failed,
/// 3 some case ran out of quadrature budget.
pub fn exit_status(reports: &[SuiteReport]) -> i32 {
    if reports.iter().any(SuiteReport::budget_exceeded) {
        3
    } else if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Ibp,
    Halfspace,
    Hardy,
    Chain,
    GaussGreen,
    HardyHalf,
    Weighted,
    Rigidity,
    Leibniz,
    Varbound,
    Gagliardo,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::Ibp,
        SuiteId::Halfspace,
        SuiteId::Hardy,
        SuiteId::Chain,
        SuiteId::GaussGreen,
        SuiteId::HardyHalf,
        SuiteId::Weighted,
        SuiteId::Rigidity,
        SuiteId::Leibniz,
        SuiteId::Varbound,
        SuiteId::Gagliardo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Ibp => "ibp",
            SuiteId::Halfspace => "halfspace",
            SuiteId::Hardy => "hardy",
            SuiteId::Chain => "chain",
            SuiteId::GaussGreen => "gauss-green",
            SuiteId::HardyHalf => "hardy-half",
            SuiteId::Weighted => "weighted",
            SuiteId::Rigidity => "rigidity",
            SuiteId::Leibniz => "leibniz",
            SuiteId::Varbound => "varbound",
            SuiteId::Gagliardo => "gagliardo",
        }
    }

    /// Orders checked when the configuration gives none. The analytic
    /// identities are cheap and use a nine-point grid.
    pub fn default_alphas(self) -> Vec<f64> {
        match self {
            SuiteId::Hardy => (1..=9).map(|k| k as f64 / 10.0).collect(),
            _ => vec![0.25, 0.5, 0.75],
        }
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

impl std::fmt::Display for SuiteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Run configuration, usually read from JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Orders to check; each suite's default grid when absent.
    pub alphas: Option<Vec<f64>>,
    /// Quadrature policy for the outer integrals; each suite picks its own
    /// when absent.
    pub quad: Option<QuadSpec>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if let Some(q) = &self.quad {
            q.validate()?;
        }
        if let Some(a) = &self.alphas {
            if a.is_empty() {
                return Err(Error::Invalid("empty alpha list".into()));
            }
            if let Some(bad) = a.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
                return Err(Error::Invalid(format!("alpha {bad} is outside (0, 1)")));
            }
        }
        Ok(())
    }

    fn alphas(&self, id: SuiteId) -> Vec<f64> {
        self.alphas.clone().unwrap_or_else(|| id.default_alphas())
    }

    fn spec(&self, default: QuadSpec) -> QuadSpec {
        self.quad.unwrap_or(default)
    }
}

/// Run one suite on its default cases.
pub fn run(id: SuiteId, cfg: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let alphas = cfg.alphas(id);
    let mut cases = Vec::new();
    for (i, &a) in alphas.iter().enumerate() {
        let mut part = match id {
            SuiteId::Ibp => checks::default_ibp(a, i == alphas.len() / 2, cfg),
            SuiteId::Halfspace => suite_halfspace(a, &[0.25, 1.0, 4.0], &cfg.spec(checks::spec_1d(1e-9))).cases,
            SuiteId::Hardy => suite_hardy_optimal(&[a], &cfg.spec(checks::spec_1d(1e-12))).cases,
            SuiteId::Chain => suite_chain_failure(a, &checks::CHAIN_EPS, &cfg.spec(checks::spec_1d(1e-9))).cases,
            SuiteId::GaussGreen => checks::default_gauss_green(a, cfg),
            SuiteId::HardyHalf => checks::default_hardy_half(a, cfg),
            SuiteId::Weighted => checks::default_weighted(a, cfg),
            SuiteId::Rigidity => suite_rigidity(a, 1.0, 20, &cfg.spec(checks::spec_1d(1e-9))).cases,
            SuiteId::Leibniz => checks::default_leibniz(a, cfg),
            SuiteId::Varbound => suite_variation_bound(a, &cfg.spec(QuadSpec::for_dim(1))).cases,
            SuiteId::Gagliardo => checks::default_gagliardo(a, cfg),
        };
        cases.append(&mut part);
    }
    if id == SuiteId::Hardy {
        cases.append(&mut checks::hardy_reference_rows());
    }
    SuiteReport {
        suite: id.name().to_string(),
        cases,
        wall_time: start.elapsed(),
    }
}

/// Every suite, in the fixed order of [`SuiteId::ALL`].
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    SuiteId::ALL.iter().map(|&id| run(id, cfg)).collect()
}
