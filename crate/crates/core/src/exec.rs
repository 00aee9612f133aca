//! Data-parallel execution helpers. With the `parallel` feature (default)
//! work is spread over a rayon pool; without it the same entry points run
//! sequentially. All merges are associative and commutative, so results are
//! identical regardless of thread count or schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `0..len` and reduces with `merge`. `identity` must be a neutral
/// element of `merge`.
pub fn map_reduce<R, F, M>(len: u64, map: F, identity: R, merge: M) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len)
            .into_par_iter()
            .map(map)
            .reduce(|| identity.clone(), merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(map).fold(identity, merge)
    }
}

/// Runs `f` on a pool with the requested thread count. `None` uses the
/// global pool (or the current thread without the `parallel` feature).
pub fn run_with_threads<T, F>(threads: Option<usize>, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        match threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_match_sequential() {
        let par = map_reduce(10_000, |i| i as i64, 0i64, |a, b| a + b);
        let seq: i64 = (0..10_000).sum();
        assert_eq!(par, seq);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let f = || map_reduce(1 << 16, |i| (i * i) as u128, 0u128, |a, b| a + b);
        let one = run_with_threads(Some(1), f);
        let many = run_with_threads(Some(8), f);
        assert_eq!(one, many);
    }
}
