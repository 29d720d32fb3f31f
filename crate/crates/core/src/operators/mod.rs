//! State-space indexing and the sparse operator algebra: local and global
//! supercharges, symmetry operators and the contracting homotopy.

mod basis;
pub mod export;
mod global;
mod homotopy;
mod local;
mod sparse;
mod symmetry;

pub use basis::{BasisIndex, StateVector};
pub use global::{
    global_supercharge, supercharge_at_infinity, SuperchargeOperator, SuperchargeSpec,
};
pub use homotopy::homotopy_s;
pub use local::{
    gauge_supercharge, local_supercharge, local_supercharge_bar, local_supercharge_deformed,
};
pub use sparse::LinearMap;
pub use symmetry::{charge_rotation, magnetisation, parity, spin_reversal};
