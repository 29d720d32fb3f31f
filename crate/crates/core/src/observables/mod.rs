//! Zero-energy-state scalar products and their sum rules, the spin-1/2
//! component conjecture, the logarithmic bipartite fidelity and its
//! free-boson prediction.

mod cache;
mod cft;
mod conjecture;
mod lbf;
mod overlap;

pub use cache::GroundStateCache;
pub use cft::{cft_prediction, ground_charge, lbf_f, lbf_g, u1_charge, CftCharges, CftPrediction};
pub use conjecture::{
    asymptotic_ratio, component_asymptotics, component_conjecture, conjectured_component,
    ln_component_asymptotics, ln_conjectured_component, ln_decay_rate, AsymptoticCheck,
    ComponentCheck,
};
pub use lbf::{
    fidelity_scan, lattice_constant, lbf, lbf_conjectured, lbf_measured, subleading_fit,
    LbfMode, LbfResult, SubleadingFit,
};
pub use overlap::{
    admissible_partitions, overlap_direct, overlap_report, overlap_sum_rule, parity_case,
    total_length, OverlapKind, OverlapReport, ParityCase,
};
