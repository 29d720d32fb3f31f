//! Hamiltonian density, boundary terms and full-chain assembly.
//!
//! Two independent routes build the same operator: the explicit density plus
//! boundary terms, and the anticommutator `Q Q† + Q† Q` of the supercharges.

mod assemble;
mod boundary;
mod density;
mod pauli;

pub use assemble::{assemble, from_supercharges, ChainHamiltonian, HamiltonianSpec};
pub use boundary::boundary_term;
pub use density::{density_coeffs, density_explicit, density_from_supercharge, density_of, DensityCoeffs};
pub use pauli::pauli_reference;
