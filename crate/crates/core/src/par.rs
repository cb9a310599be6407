//! Index-space map that runs on rayon with the `parallel` feature and serially otherwise.
//! Output order is the index order in both cases.

use alloc::vec::Vec;

use crate::Result;

#[cfg(feature = "parallel")]
pub(crate) fn try_map<T, F>(len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_map<T, F>(len: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..len).map(f).collect()
}
