//! Thin indirection over rayon so the whole crate falls back to sequential
//! iteration when the `parallel` feature is disabled.

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
pub fn all<T, F>(items: &[T], f: F) -> bool
where
    F: Fn(&T) -> bool,
{
    items.iter().all(f)
}

/// Map over a range of mask values, keeping those for which `f` returns true.
#[cfg(feature = "parallel")]
pub fn filter_masks<F>(end: u64, f: F) -> Vec<u32>
where
    F: Fn(u32) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    (0..end)
        .into_par_iter()
        .filter(|&m| f(m as u32))
        .map(|m| m as u32)
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn filter_masks<F>(end: u64, f: F) -> Vec<u32>
where
    F: Fn(u32) -> bool,
{
    (0..end).filter(|&m| f(m as u32)).map(|m| m as u32).collect()
}
