//! Data-parallel map helper. Sweeps fan out across independent work items;
//! with the `parallel` feature the map runs on the rayon pool, otherwise
//! sequentially. Results keep the input order either way, so reports are
//! identical across both modes.

#[cfg(feature = "parallel")]
pub(crate) fn ordered_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn ordered_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential variant, kept available for benchmarking against the
/// parallel path.
pub(crate) fn ordered_map_serial<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}
