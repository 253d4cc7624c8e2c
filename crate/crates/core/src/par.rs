//! Order-preserving map over a slice.
//!
//! With the `parallel` feature the map runs on the rayon pool; without it the
//! same call is a plain iterator. Results always come back in input order, and
//! every reduction in the crate happens sequentially over the collected
//! vector, so both paths produce bit-identical numbers.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, in parallel when the feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    seq_map(items, f)
}

/// Always-sequential map; the reference path for benchmarks and tests.
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// True when the crate was built with the rayon backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Size the global rayon pool. A no-op without the `parallel` feature or if
/// the pool has already been initialised.
pub fn init_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads.filter(|&t| t > 0) {
            builder = builder.num_threads(t);
        }
        let _ = builder.build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let ys = map(&xs, |x| x * x);
        assert_eq!(ys, seq_map(&xs, |x| x * x));
    }

    #[test]
    fn float_results_match_sequential_bitwise() {
        let xs: Vec<f64> = (0..257).map(|i| i as f64 * 0.37).collect();
        let f = |x: &f64| (x.sin() * x.exp().ln_1p()).powf(1.3);
        let a: Vec<u64> = map(&xs, f).into_iter().map(f64::to_bits).collect();
        let b: Vec<u64> = seq_map(&xs, f).into_iter().map(f64::to_bits).collect();
        assert_eq!(a, b);
    }
}
