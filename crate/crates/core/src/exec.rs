//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! global pool. Without it every strategy runs sequentially. Results never
//! depend on the strategy: all reductions are exact and order-stable.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving input order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over `0..n`, preserving index order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Folds `0..n` in chunks and combines the per-chunk accumulators in
    /// index order.
    pub fn fold_range<A, F, C>(
        self,
        n: u64,
        init: impl Fn() -> A + Sync + Send,
        fold: F,
        combine: C,
    ) -> A
    where
        A: Send,
        F: Fn(A, u64) -> A + Sync + Send,
        C: Fn(A, A) -> A + Sync + Send,
    {
        const CHUNK: u64 = 1 << 12;
        let chunks = n.div_ceil(CHUNK) as usize;
        let run = |c: usize| {
            let lo = c as u64 * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).fold(init(), &fold)
        };
        self.map_range(chunks, run)
            .into_iter()
            .fold(init(), combine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let seq = Exec::Sequential.fold_range(100_000, || 0u64, |a, i| a + i * i, |a, b| a + b);
        let par = Exec::Parallel.fold_range(100_000, || 0u64, |a, i| a + i * i, |a, b| a + b);
        assert_eq!(seq, par);
        let items: Vec<u32> = (0..1000).collect();
        assert_eq!(
            Exec::Sequential.map(&items, |x| x * 3),
            Exec::Parallel.map(&items, |x| x * 3)
        );
    }
}
