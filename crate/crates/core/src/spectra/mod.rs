//! Eigensolvers, zero-energy states, doublet matching and conformal
//! finite-size fits.

mod dense;
mod doublet;
mod fit;
mod ground;
mod lanczos;

pub use dense::{
    dense_eigenvalues, dense_eigh, full_spectrum, zero_threshold, SpectrumReport, DENSE_CAP,
};
pub use doublet::{doublet_match, DoubletMatch, DoubletTable};
pub use fit::{conformal_fit, conformal_fit_with, FitModel, ScalingFit, FERMI_VELOCITY};
pub use ground::{
    dense_zero_multiplicity, distinguished_digits, lowest_states, supercharge_residuals,
    zero_energy_state, zero_energy_state_with, zero_multiplicity, GroundState, SolverMethod,
    SolverOptions, ZeroCount,
};
pub use lanczos::{lowest_eigenpairs, EigenPair, LanczosOptions, Operator};
