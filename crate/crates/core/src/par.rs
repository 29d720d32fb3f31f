// Iterator entry points that switch between rayon and std depending on the
// `parallel` feature. Only adaptors shared by both (`map`, `for_each`,
// `enumerate`, `sum`, `collect`, `zip`) may be chained onto these.

#[cfg(feature = "parallel")]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        rayon::iter::IntoParallelIterator::into_par_iter($e)
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        ::std::iter::IntoIterator::into_iter($e)
    };
}

#[cfg(feature = "parallel")]
macro_rules! maybe_par_chunks_mut {
    ($slice:expr, $n:expr) => {
        rayon::slice::ParallelSliceMut::par_chunks_mut($slice, $n)
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! maybe_par_chunks_mut {
    ($slice:expr, $n:expr) => {
        <[_]>::chunks_mut($slice, $n)
    };
}

/// Traits the rayon adaptors need at the call site; empty without the
/// `parallel` feature.
pub(crate) mod prelude {
    #[cfg(feature = "parallel")]
    pub use rayon::prelude::*;
}
