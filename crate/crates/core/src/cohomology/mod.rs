//! Cohomology of the supercharge complex: Betti numbers from numerical
//! ranks, the tensor-product representatives of the zero-energy classes,
//! and the class and homology decompositions of zero-energy states.

mod betti;
mod classes;
mod lsq;
mod rank;

pub use betti::{betti_numbers, betti_numbers_with, BettiRow, CohomologyReport};
pub use classes::{
    class_decomposition, homology_decomposition, representative, s_map, ClassDecomposition,
    HomologyDecomposition,
};
pub use rank::{numerical_rank, RankInfo, RankTolerance};
