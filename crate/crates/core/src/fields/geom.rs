//! Ray/box and ray/ball intersections used to locate jumps along rays.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Parameters `t` at which the line `x + t theta` enters and leaves the open
/// box `(lo, hi)`, or `None` if it misses.
pub(crate) fn box_crossings(x: &[f64], theta: &[f64], lo: &[f64], hi: &[f64]) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for i in 0..x.len() {
        if theta[i] == 0.0 {
            if x[i] <= lo[i] || x[i] >= hi[i] {
                return None;
            }
            continue;
        }
        let a = (lo[i] - x[i]) / theta[i];
        let b = (hi[i] - x[i]) / theta[i];
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t1 > t0).then_some((t0, t1))
}

/// Same for the ball `|y - c| < radius`.
pub(crate) fn ball_crossings(x: &[f64], theta: &[f64], c: &[f64], radius: f64) -> Option<(f64, f64)> {
    let mut b = 0.0;
    let mut q = -radius * radius;
    for i in 0..x.len() {
        let d = x[i] - c[i];
        b += theta[i] * d;
        q += d * d;
    }
    let disc = b * b - q;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((-b - s, -b + s))
}

/// Push the non-negative crossings of an interval as breakpoints.
pub(crate) fn push_crossings(span: Option<(f64, f64)>, exponent: f64, out: &mut Vec<(f64, f64)>) {
    if let Some((t0, t1)) = span {
        for t in [t0, t1] {
            if t >= 0.0 {
                out.push((t, exponent));
            }
        }
    }
}

/// How far the ray runs before leaving the set for good (0 if it never meets it).
pub(crate) fn exit_distance(span: Option<(f64, f64)>) -> f64 {
    span.map_or(0.0, |(_, t1)| t1.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_and_ball() {
        let (a, b) = box_crossings(&[-2.0, 0.0], &[1.0, 0.0], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!((a, b), (1.0, 3.0));
        assert!(box_crossings(&[-2.0, 2.0], &[1.0, 0.0], &[-1.0, -1.0], &[1.0, 1.0]).is_none());
        let (a, b) = ball_crossings(&[0.0, 0.0], &[0.6, 0.8], &[0.0, 0.0], 2.0).unwrap();
        assert!((a + 2.0).abs() < 1e-15 && (b - 2.0).abs() < 1e-15);
    }
}
