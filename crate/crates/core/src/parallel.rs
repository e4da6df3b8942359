//! Deterministic parallel reduction.
//!
//! Work items are grouped into fixed-size chunks keyed by index. Each chunk
//! is folded sequentially in index order and the chunk results are merged in
//! chunk order, so the floating-point result does not depend on how many
//! threads rayon uses or how it schedules them.

use rayon::prelude::*;

use crate::error::Result;

/// Items per chunk. Part of the reproducibility contract: changing it changes
/// the summation order of every ensemble statistic.
pub const CHUNK: u64 = 16;

pub fn fold_ordered<A, I, F, M>(n: u64, init: I, fold: F, mut merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) -> Result<()> + Sync,
    M: FnMut(&mut A, A),
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Result<A>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                fold(&mut acc, i)?;
            }
            Ok(acc)
        })
        .collect();
    let mut out = init();
    for p in partials {
        merge(&mut out, p?);
    }
    Ok(out)
}

/// Ordered parallel map; the output is indexed like the input range.
pub fn map_ordered<R, F>(n: u64, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(u64) -> Result<R> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic_sum(threads: usize) -> f64 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            fold_ordered(
                1000,
                || 0.0,
                |acc, i| {
                    *acc += 1.0 / (i as f64 + 1.0).powf(1.3);
                    Ok(())
                },
                |a, b| *a += b,
            )
            .unwrap()
        })
    }

    #[test]
    fn result_is_thread_count_independent() {
        let one = harmonic_sum(1);
        assert_eq!(one.to_bits(), harmonic_sum(3).to_bits());
        assert_eq!(one.to_bits(), harmonic_sum(8).to_bits());
    }

    #[test]
    fn errors_propagate() {
        let r = fold_ordered(
            40,
            || (),
            |_, i| if i == 33 { Err(crate::Error::Empty("x")) } else { Ok(()) },
            |_, _| {},
        );
        assert!(r.is_err());
    }
}
