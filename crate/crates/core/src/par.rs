//! Row-parallel helpers.
//!
//! With the `parallel` feature the work is spread over the rayon pool,
//! otherwise it runs on the calling thread. Every helper hands each closure a
//! disjoint output chunk and never reduces across chunks, so results are
//! bit-identical regardless of feature or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length for flat elementwise maps.
#[cfg(feature = "parallel")]
const FLAT_CHUNK: usize = 4096;

/// Calls `f(row_index, row)` for every `width`-long row of `out`.
pub(crate) fn for_each_row<F>(out: &mut [f64], width: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Send + Sync,
{
    debug_assert!(width > 0 && out.len().is_multiple_of(width));
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| f(y, row));
    #[cfg(not(feature = "parallel"))]
    out.chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| f(y, row));
}

/// Fills `out[i] = f(i)`.
pub(crate) fn fill_indexed<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Send + Sync,
{
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(FLAT_CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let base = c * FLAT_CHUNK;
            for (i, v) in chunk.iter_mut().enumerate() {
                *v = f(base + i);
            }
        });
    #[cfg(not(feature = "parallel"))]
    for (i, v) in out.iter_mut().enumerate() {
        *v = f(i);
    }
}

/// Maps `f` over independent work items, preserving order.
pub(crate) fn map_items<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Send + Sync,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    items.iter().map(f).collect()
}
