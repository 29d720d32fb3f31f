//! Scalar layer: q-numbers at the root of unity, the supercharge
//! coefficients, the special single- and two-site vectors, and the
//! enumeration sequences of the spin-1/2 ground state.

mod params;
mod sequences;
mod vectors;

pub use params::{AmkFault, SpinParams};
pub use sequences::{
    asymptotic_constants, ln_seq_av, ln_seq_n8, seq_av, seq_n8, LogSequences, SequenceName,
    SequenceValue,
};
pub use vectors::{SpecialKind, SpecialVector, XiMatrix};
