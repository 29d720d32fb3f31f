use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::qcore::SpinParams;
use crate::spectra::{zero_energy_state_with, GroundState, SolverOptions};
use crate::Result;

/// Zero-energy states keyed by `(ℓ, L)`, computed once and shared.
///
/// Readers never block each other; a miss computes outside the lock and the
/// first writer wins, so concurrent misses on the same key waste work but
/// never disagree.
#[derive(Debug, Default)]
pub struct GroundStateCache {
    opts: SolverOptions,
    states: RwLock<HashMap<(usize, usize), Arc<GroundState>>>,
}

impl GroundStateCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_options(opts: SolverOptions) -> Self {
        GroundStateCache {
            opts,
            states: RwLock::default(),
        }
    }

    pub fn get(&self, ell: usize, len: usize) -> Result<Arc<GroundState>> {
        if let Some(g) = self.states.read().expect("cache lock").get(&(ell, len)) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(zero_energy_state_with(&SpinParams::new(ell), len, &self.opts)?);
        let mut w = self.states.write().expect("cache lock");
        Ok(Arc::clone(w.entry((ell, len)).or_insert(g)))
    }

    /// `(ψ_L)_{0ℓ0ℓ…} / ‖ψ_L‖`, real positive by the phase convention.
    pub fn normalized_component(&self, ell: usize, len: usize) -> Result<f64> {
        let g = self.get(ell, len)?;
        Ok(g.distinguished().re / g.vector.norm())
    }

    pub fn len(&self) -> usize {
        self.states.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
