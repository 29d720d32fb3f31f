//! Dynamic lattice supersymmetry of open spin-ℓ/2 XXZ chains.
//!
//! The crate builds the length-changing supercharges `Q_{j,k}(y)` of the open
//! XXZ chain at its supersymmetric point, the Hamiltonians they generate, and
//! the tools needed to interrogate them numerically:
//!
//! - [`qcore`]: q-numbers at the root of unity, supercharge coefficients, the
//!   special vectors `χ`, `φ(y)`, `ξ_k(y)` and the enumeration sequences
//!   entering the spin-1/2 ground state.
//! - [`operators`]: basis indexing, sparse length-changing maps, local and
//!   global supercharges, symmetry operators and the contracting homotopy.
//! - [`hamiltonian`]: bulk density and boundary terms, with two independent
//!   assembly routes.
//! - [`spectra`]: dense and Lanczos eigensolvers, zero-energy states, doublet
//!   matching and conformal finite-size fits.
//! - [`cohomology`]: Betti numbers of the supercharge complex and the
//!   (co)homology decompositions of zero-energy states.
//! - [`observables`]: ground-state overlaps, their sum rules, the logarithmic
//!   bipartite fidelity and its conformal prediction.
//! - [`identities`]: the residual battery behind `susyxxz verify`.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to plain iterators otherwise.

#[macro_use]
mod par;

pub mod cohomology;
pub mod error;
pub mod hamiltonian;
pub mod identities;
pub mod observables;
pub mod operators;
pub mod qcore;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Crate version, embedded in every CLI report header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Whether data-parallel loops are backed by rayon in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
