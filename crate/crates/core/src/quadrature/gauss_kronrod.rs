// Node tables are kept at their published digits.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering as AtomicOrdering};

use super::{QuadResult, QuadSpec, Singularity};
use crate::error::{Error, Result};
use crate::par;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_106_222,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const NODES: usize = 21;

/// Integrand values: scalars or fixed-size vectors integrated component-wise
/// under one shared error budget.
pub trait QuadValue: Copy + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    /// Euclidean norm.
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
    /// Apply the Gauss–Kronrod pair componentwise; the error is the norm of
    /// the componentwise estimates.
    fn combine(a: f64, b: f64, fv: &[Self]) -> (Self, f64);
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn combine(a: f64, b: f64, fv: &[Self]) -> (Self, f64) {
        combine(a, b, fv)
    }
}

impl<const K: usize> QuadValue for [f64; K] {
    fn zero() -> Self {
        [0.0; K]
    }
    fn add(self, other: Self) -> Self {
        std::array::from_fn(|i| self[i] + other[i])
    }
    fn sub(self, other: Self) -> Self {
        std::array::from_fn(|i| self[i] - other[i])
    }
    fn scale(self, k: f64) -> Self {
        std::array::from_fn(|i| self[i] * k)
    }
    fn norm(self) -> f64 {
        self.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
    fn is_finite(self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
    fn combine(a: f64, b: f64, fv: &[Self]) -> (Self, f64) {
        let mut value = [0.0; K];
        let mut err2 = 0.0;
        let mut column = [0.0; NODES];
        for i in 0..K {
            for (c, v) in column.iter_mut().zip(fv) {
                *c = v[i];
            }
            let (v, e) = combine(a, b, &column);
            value[i] = v;
            err2 += e * e;
        }
        (value, err2.sqrt())
    }
}

/// Change of variables applied to one piece of the domain.
#[derive(Debug, Clone, Copy)]
enum Map {
    Linear,
    /// `x = p + len * t^m`, algebraic singularity at `p`.
    Left { p: f64, len: f64, m: i32 },
    /// `x = q - len * t^m`, algebraic singularity at `q`.
    Right { q: f64, len: f64, m: i32 },
    /// `x = l + s * (u^(-1/k) - 1)` for `u` in (0, 1]; maps onto [l, inf).
    Tail { l: f64, s: f64, k: f64 },
    /// Mirror of `Tail` onto (-inf, l].
    NegTail { l: f64, s: f64, k: f64 },
}

impl Map {
    #[inline]
    fn apply(&self, t: f64) -> (f64, f64) {
        match *self {
            Map::Linear => (t, 1.0),
            Map::Left { p, len, m } => {
                let tm1 = t.powi(m - 1);
                (p + len * tm1 * t, len * m as f64 * tm1)
            }
            Map::Right { q, len, m } => {
                let tm1 = t.powi(m - 1);
                (q - len * tm1 * t, len * m as f64 * tm1)
            }
            Map::Tail { l, s, k } => {
                let w = t.powf(-1.0 / k);
                (l + s * (w - 1.0), s / k * w / t)
            }
            Map::NegTail { l, s, k } => {
                let w = t.powf(-1.0 / k);
                (l - s * (w - 1.0), s / k * w / t)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    piece: usize,
    a: f64,
    b: f64,
    value: V,
    err: f64,
    seq: u64,
}

impl<V: QuadValue> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V: QuadValue> Eq for Segment<V> {}
impl<V: QuadValue> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V: QuadValue> Ord for Segment<V> {
    // max-heap on error; earlier segments win ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / resasc).powf(1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

fn nodes_of(a: f64, b: f64) -> [f64; NODES] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; NODES];
    for j in 0..10 {
        out[2 * j] = c - h * XGK[j];
        out[2 * j + 1] = c + h * XGK[j];
    }
    out[20] = c;
    out
}

/// `(x, kronrod weight, gauss weight)` for the 21-point pair on each of
/// `panels` equal pieces of `[a, b]`; Gauss weight 0 off the Gauss nodes.
pub(super) fn panel_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64, f64)> {
    let step = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * NODES);
    for p in 0..panels {
        let lo = a + p as f64 * step;
        let hi = if p + 1 == panels { b } else { lo + step };
        let h = 0.5 * (hi - lo);
        let xs = nodes_of(lo, hi);
        for j in 0..10 {
            let wg = if j % 2 == 1 { WG[j / 2] * h } else { 0.0 };
            out.push((xs[2 * j], WGK[j] * h, wg));
            out.push((xs[2 * j + 1], WGK[j] * h, wg));
        }
        out.push((xs[20], WGK[10] * h, 0.0));
    }
    out
}

/// Apply the Kronrod/Gauss pair to 21 integrand values laid out by `nodes_of`.
fn combine(a: f64, b: f64, fv: &[f64]) -> (f64, f64) {
    let h = 0.5 * (b - a);
    let fc = fv[20];
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    for j in 0..10 {
        let (f1, f2) = (fv[2 * j], fv[2 * j + 1]);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let err = rescale_error((res_k - res_g) * h, res_abs * h.abs(), res_asc * h.abs());
    (res_k * h, err)
}

#[inline]
fn transformed<V: QuadValue, F: Fn(f64) -> V>(f: &F, map: &Map, t: f64) -> V {
    let (x, jac) = map.apply(t);
    if !x.is_finite() || jac == 0.0 {
        return V::zero();
    }
    f(x).scale(jac)
}

fn evaluate_batch<V, F>(f: &F, pieces: &[Piece], ranges: &[(usize, f64, f64)], parallel: bool) -> Vec<(V, f64)>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    let mut points = Vec::with_capacity(ranges.len() * NODES);
    for &(pi, a, b) in ranges {
        for t in nodes_of(a, b) {
            points.push((pi, t));
        }
    }
    let eval = |&(pi, t): &(usize, f64)| transformed(f, &pieces[pi].map, t);
    let values = if parallel {
        par::map(&points, eval)
    } else {
        par::seq_map(&points, eval)
    };
    ranges
        .iter()
        .zip(values.chunks(NODES))
        .map(|(&(_, a, b), fv)| V::combine(a, b, fv))
        .collect()
}

fn substitution_power(exponent: f64) -> i32 {
    if exponent >= 0.0 {
        1
    } else {
        ((1.0 / (1.0 + exponent)) - 1e-9).ceil().clamp(1.0, 30.0) as i32
    }
}

/// Offset below which a singular end is closed analytically.
///
/// At `p = 0` offsets are exact and the sliver can be tiny. Elsewhere the
/// integrand only sees `p + s` rounded to a multiple of ulp(p), which perturbs
/// a `s^e` integrand by about `ulp(p) * s^e`; stopping near sqrt(ulp(p))
/// balances that against the closure error.
fn closure_offset(p: f64, len: f64, side: f64) -> f64 {
    let d = (1e-12 * len).max((f64::EPSILON * p.abs()).sqrt());
    // snap so that p + side * offset is exact
    ((p + side * d) - p) * side
}

struct Plan {
    pieces: Vec<Piece>,
    /// Analytic contributions from the `[p, p + delta]` slivers at singular ends,
    /// as `(x, delta, exponent)`; the integral is `delta * f(x) / (1 + exponent)`.
    closures: Vec<(f64, f64, f64)>,
}

fn finite_piece(plan: &mut Plan, p: f64, q: f64, left: Option<f64>, right: Option<f64>) {
    if q <= p {
        return;
    }
    let singular = |e: Option<f64>| e.is_some_and(|e| e < 0.0);
    match (singular(left), singular(right)) {
        (false, false) => plan.pieces.push(Piece {
            map: Map::Linear,
            lo: p,
            hi: q,
        }),
        (true, true) => {
            let mid = 0.5 * (p + q);
            finite_piece(plan, p, mid, left, None);
            finite_piece(plan, mid, q, None, right);
        }
        (true, false) => {
            let e = left.unwrap_or(0.0);
            let len = q - p;
            let m = substitution_power(e);
            let delta = closure_offset(p, len, 1.0);
            if delta >= len {
                plan.pieces.push(Piece {
                    map: Map::Linear,
                    lo: p,
                    hi: q,
                });
                return;
            }
            plan.closures.push((p + delta, delta, e));
            plan.pieces.push(Piece {
                map: Map::Left { p, len, m },
                lo: (delta / len).powf(1.0 / m as f64),
                hi: 1.0,
            });
        }
        (false, true) => {
            let e = right.unwrap_or(0.0);
            let len = q - p;
            let m = substitution_power(e);
            let delta = closure_offset(q, len, -1.0);
            if delta >= len {
                plan.pieces.push(Piece {
                    map: Map::Linear,
                    lo: p,
                    hi: q,
                });
                return;
            }
            plan.closures.push((q - delta, delta, e));
            plan.pieces.push(Piece {
                map: Map::Right { q, len, m },
                lo: (delta / len).powf(1.0 / m as f64),
                hi: 1.0,
            });
        }
    }
}

fn build_plan(a: f64, b: f64, singularities: &[Singularity]) -> Result<Plan> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    for s in singularities {
        if s.at.is_finite() && s.exponent <= -1.0 {
            return Err(Error::NonIntegrable(s.exponent));
        }
        if s.at.is_infinite() && s.exponent >= -1.0 {
            return Err(Error::NonIntegrable(s.exponent));
        }
    }
    let tail_exp = |end: f64| {
        singularities
            .iter()
            .filter(|s| s.at == end)
            .map(|s| s.exponent)
            .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))))
    };
    let lower_tail = if a.is_infinite() {
        Some(tail_exp(f64::NEG_INFINITY).ok_or_else(|| {
            Error::Domain("infinite lower limit needs a declared tail exponent".into())
        })?)
    } else {
        None
    };
    let upper_tail = if b.is_infinite() {
        Some(tail_exp(f64::INFINITY).ok_or_else(|| {
            Error::Domain("infinite upper limit needs a declared tail exponent".into())
        })?)
    } else {
        None
    };

    // finite breakpoints with their strongest declared exponent
    let mut points: Vec<(f64, Option<f64>)> = Vec::new();
    for s in singularities.iter().filter(|s| s.at.is_finite()) {
        if s.at < a || s.at > b {
            continue;
        }
        match points.iter_mut().find(|(p, _)| *p == s.at) {
            Some((_, e)) => *e = Some(e.map_or(s.exponent, |e| e.min(s.exponent))),
            None => points.push((s.at, Some(s.exponent))),
        }
    }
    if a.is_finite() && !points.iter().any(|(p, _)| *p == a) {
        points.push((a, None));
    }
    if b.is_finite() && !points.iter().any(|(p, _)| *p == b) {
        points.push((b, None));
    }
    points.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Tails start from a regular point so the substitution sees smooth data.
    let is_singular = |e: Option<f64>| e.is_some_and(|e| e < 0.0);
    if upper_tail.is_some() {
        match points.last().copied() {
            Some((l, e)) if is_singular(e) => points.push((l + l.abs().max(1.0), None)),
            None => points.push((0.0, None)),
            _ => {}
        }
    }
    if lower_tail.is_some() {
        match points.first().copied() {
            Some((l, e)) if is_singular(e) => points.insert(0, (l - l.abs().max(1.0), None)),
            None => points.insert(0, (0.0, None)),
            _ => {}
        }
    }

    let mut plan = Plan {
        pieces: Vec::new(),
        closures: Vec::new(),
    };
    if let (Some(e), Some(&(l, _))) = (lower_tail, points.first()) {
        plan.pieces.push(Piece {
            map: Map::NegTail {
                l,
                s: l.abs().max(1.0),
                k: -e - 1.0,
            },
            lo: 0.0,
            hi: 1.0,
        });
    }
    for w in points.windows(2) {
        finite_piece(&mut plan, w[0].0, w[1].0, w[0].1, w[1].1);
    }
    if let (Some(e), Some(&(l, _))) = (upper_tail, points.last()) {
        plan.pieces.push(Piece {
            map: Map::Tail {
                l,
                s: l.abs().max(1.0),
                k: -e - 1.0,
            },
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(plan)
}

/// Integrate `f` over `[a, b]`.
///
/// `a` may be `-inf` and `b` may be `+inf`; an infinite end needs a
/// [`Singularity`] at that end giving the algebraic decay of `f` (exponent
/// below -1). Finite singularities inside or at the ends of the interval are
/// split out and handled by a power substitution plus an analytic closure of
/// a tiny sliver next to the singular point. Exponents must exceed -1.
///
/// The subdivision is fully deterministic; `spec.parallel_nodes` only changes
/// where the node values are computed, not the result.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, singularities: &[Singularity], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let r = adaptive(&f, a, b, singularities, spec)?;
    Ok(QuadResult {
        value: r.value,
        err_estimate: r.err_estimate,
        evals_used: r.evals_used,
        converged: r.converged,
    })
}

/// Vector-valued variant of [`integrate_1d`]: all components share the
/// subdivision and the tolerance is relative to the norm of the result, so a
/// component that integrates to zero does not drive refinement on its own.
pub fn integrate_1d_vec<const K: usize, F>(
    f: F,
    a: f64,
    b: f64,
    singularities: &[Singularity],
    spec: &QuadSpec,
) -> Result<VecQuadResult<[f64; K]>>
where
    F: Fn(f64) -> [f64; K] + Sync,
{
    adaptive(&f, a, b, singularities, spec)
}

/// Result of a vector-valued integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecQuadResult<V> {
    pub value: V,
    /// Norm of the componentwise error estimates.
    pub err_estimate: f64,
    pub evals_used: usize,
    pub converged: bool,
}

fn adaptive<V, F>(f: &F, a: f64, b: f64, singularities: &[Singularity], spec: &QuadSpec) -> Result<VecQuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V + Sync,
{
    spec.validate()?;
    let plan = build_plan(a, b, singularities)?;
    let parallel = spec.parallel_nodes;

    let mut closure_value = V::zero();
    let mut evals = 0usize;
    for &(x, delta, e) in &plan.closures {
        let v = f(x);
        evals += 1;
        if v.is_finite() {
            closure_value = closure_value.add(v.scale(delta / (1.0 + e)));
        }
    }

    let ranges: Vec<(usize, f64, f64)> = plan
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.lo, p.hi))
        .collect();
    let first = evaluate_batch(f, &plan.pieces, &ranges, parallel);
    evals += NODES * ranges.len();

    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    let mut total = closure_value;
    let mut total_err = 0.0;
    for (&(piece, a, b), &(value, err)) in ranges.iter().zip(&first) {
        total = total.add(value);
        total_err += err;
        heap.push(Segment {
            piece,
            a,
            b,
            value,
            err,
            seq,
        });
        seq += 1;
    }
    let mut retired: Vec<Segment<V>> = Vec::new();
    let mut converged = true;

    while total_err > spec.target(total.norm()) {
        if evals + 2 * NODES > spec.max_evals {
            converged = false;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= 1e-14 * scale || mid <= worst.a || mid >= worst.b {
            retired.push(worst);
            continue;
        }
        let halves = [(worst.piece, worst.a, mid), (worst.piece, mid, worst.b)];
        let res = evaluate_batch(f, &plan.pieces, &halves, parallel);
        evals += 2 * NODES;
        total = total.add(res[0].0).add(res[1].0).sub(worst.value);
        total_err += res[0].1 + res[1].1 - worst.err;
        for (&(piece, a, b), &(value, err)) in halves.iter().zip(&res) {
            heap.push(Segment {
                piece,
                a,
                b,
                value,
                err,
                seq,
            });
            seq += 1;
        }
    }

    // Final sums in a canonical order so the result does not depend on
    // floating-point drift in the running totals.
    let mut segments: Vec<Segment<V>> = heap.into_vec();
    segments.extend(retired);
    segments.sort_by(|x, y| x.piece.cmp(&y.piece).then(x.a.total_cmp(&y.a)));
    let value = segments.iter().fold(closure_value, |acc, s| acc.add(s.value));
    let err = segments.iter().map(|s| s.err).sum::<f64>();
    let converged = converged && err <= spec.target(value.norm());
    Ok(VecQuadResult {
        value,
        err_estimate: err,
        evals_used: evals,
        converged,
    })
}

/// Bookkeeping for integrals nested inside an outer quadrature.
///
/// Counts are order-independent (sums of integers, max of non-negative
/// floats), so concurrent recording keeps results deterministic.
#[derive(Debug, Default)]
pub(crate) struct NestedStats {
    evals: AtomicUsize,
    max_err_bits: AtomicU64,
    failed: AtomicBool,
}

impl NestedStats {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn record(&self, r: &QuadResult) {
        self.record_parts(r.evals_used, r.err_estimate, r.converged);
    }

    pub(crate) fn record_parts(&self, evals: usize, err: f64, converged: bool) {
        self.evals.fetch_add(evals, AtomicOrdering::Relaxed);
        let e = if err.is_finite() { err.max(0.0) } else { f64::MAX };
        self.max_err_bits.fetch_max(e.to_bits(), AtomicOrdering::Relaxed);
        if !converged {
            self.failed.store(true, AtomicOrdering::Relaxed);
        }
    }

    pub(crate) fn fail(&self) {
        self.failed.store(true, AtomicOrdering::Relaxed);
    }

    /// Fold the inner statistics into the outer result; `measure` bounds the
    /// size of the outer domain in the outer integration variable.
    pub(crate) fn finish(&self, outer: QuadResult, measure: f64) -> QuadResult {
        let max_err = f64::from_bits(self.max_err_bits.load(AtomicOrdering::Relaxed));
        QuadResult {
            value: outer.value,
            err_estimate: outer.err_estimate + max_err * measure,
            evals_used: outer.evals_used + self.evals.load(AtomicOrdering::Relaxed),
            converged: outer.converged && !self.failed.load(AtomicOrdering::Relaxed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadSpec {
        QuadSpec::for_dim(1).with_tol(1e-12, 1e-15)
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_1d(|x| 3.0 * x * x, 0.0, 2.0, &[], &spec()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
        assert!(r.converged);
        assert_eq!(r.evals_used, 21);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let r = integrate_1d(|x| x.powf(-0.5), 0.0, 1.0, &[Singularity::new(0.0, -0.5)], &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11, "{r:?}");
        assert!(r.converged);
        assert!(r.err_estimate >= (r.value - 2.0).abs());
    }

    #[test]
    fn undeclared_endpoint_singularity_still_converges() {
        let r = integrate_1d(|x| x.powf(-0.5), 0.0, 1.0, &[], &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn arcsine_weight_both_ends() {
        let sings = [Singularity::new(-1.0, -0.5), Singularity::new(1.0, -0.5)];
        let r = integrate_1d(|s| (1.0 - s * s).powf(-0.5), -1.0, 1.0, &sings, &spec()).unwrap();
        assert!((r.value - PI).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn strong_singularity_near_minus_one() {
        // int_0^1 x^-0.95 = 20
        let r = integrate_1d(|x| x.powf(-0.95), 0.0, 1.0, &[Singularity::new(0.0, -0.95)], &spec()).unwrap();
        assert!((r.value - 20.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn interior_singularity_away_from_origin() {
        // int_0^3 |x - 1.7|^-0.75 dx = 4 (1.7^0.25 + 1.3^0.25)
        let exact = 4.0 * (1.7f64.powf(0.25) + 1.3f64.powf(0.25));
        let sings = [Singularity::new(1.7, -0.75)];
        let r = integrate_1d(|x| (x - 1.7f64).abs().powf(-0.75), 0.0, 3.0, &sings, &spec()).unwrap();
        assert!((r.value - exact).abs() < 1e-10, "{} vs {exact}", r.value);
    }

    #[test]
    fn algebraic_tail() {
        // int_0^inf rho (1 + rho^2)^(-(2 + a)/2) = 1/a, a = 0.5
        let r = integrate_1d(|p| p * (1.0 + p * p).powf(-1.25), 0.0, f64::INFINITY, &[Singularity::tail(1.5)], &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn two_sided_tail() {
        let sings = [
            Singularity::tail(2.0),
            Singularity {
                at: f64::NEG_INFINITY,
                exponent: -2.0,
            },
        ];
        let r = integrate_1d(|x| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, f64::INFINITY, &sings, &spec()).unwrap();
        assert!((r.value - PI).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn tail_from_singular_point() {
        // int_0^inf x^-0.5 / (1 + x) = pi
        let sings = [Singularity::new(0.0, -0.5), Singularity::tail(1.5)];
        let r = integrate_1d(|x| x.powf(-0.5) / (1.0 + x), 0.0, f64::INFINITY, &sings, &spec()).unwrap();
        assert!((r.value - PI).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn errors() {
        let s = spec();
        assert!(matches!(
            integrate_1d(|x| x, 0.0, 1.0, &[Singularity::new(0.0, -1.0)], &s),
            Err(Error::NonIntegrable(_))
        ));
        assert!(matches!(integrate_1d(|x| x, 1.0, 0.0, &[], &s), Err(Error::Domain(_))));
        assert!(matches!(
            integrate_1d(|x| x, 0.0, f64::INFINITY, &[], &s),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn vector_zero_component_does_not_stall() {
        // second component integrates to zero by symmetry
        let r = integrate_1d_vec(|x| [(-x * x).exp(), x * (-x * x).exp()], -6.0, 6.0, &[], &spec()).unwrap();
        assert!(r.converged);
        assert!((r.value[0] - PI.sqrt()).abs() < 1e-11);
        assert!(r.value[1].abs() < 1e-13);
        assert!(r.evals_used < 2000);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = spec().with_max_evals(100);
        let r = integrate_1d(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &[], &s).unwrap();
        assert!(!r.converged);
        assert!(r.evals_used <= 100);
    }

    #[test]
    fn parallel_nodes_are_bitwise_identical() {
        let f = |x: f64| (x.sin() * x).exp() * x.abs().powf(-0.3);
        let sings = [Singularity::new(0.0, -0.3)];
        let a = integrate_1d(f, -2.0, 5.0, &sings, &spec()).unwrap();
        let b = integrate_1d(f, -2.0, 5.0, &sings, &spec().parallel(true)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.err_estimate.to_bits(), b.err_estimate.to_bits());
    }

    proptest::proptest! {
        #[test]
        fn linear_in_the_integrand(lambda in 0.5f64..4.0, shift in -1.0f64..1.0) {
            let s = spec();
            let f = |x: f64| (x - shift).abs().powf(-0.4) * (-x * x).exp();
            let sings = [Singularity::new(shift, -0.4)];
            let base = integrate_1d(f, -3.0, 3.0, &sings, &s).unwrap();
            let scaled = integrate_1d(|x| lambda * f(x), -3.0, 3.0, &sings, &s).unwrap();
            proptest::prop_assert!((scaled.value - lambda * base.value).abs() <= 1e-14 * (lambda * base.value).abs() * 4.0);
        }
    }
}
