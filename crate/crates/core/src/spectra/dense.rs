use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::HamiltonianSpec;
use crate::operators::{LinearMap, SuperchargeSpec};
use crate::{Error, Result, C64};

/// Default largest dimension handed to the dense solver.
pub const DENSE_CAP: usize = 4096;

/// Eigenvalues counted as zero lie below `1e-8 · max(1, ‖H‖)`.
pub fn zero_threshold(norm: f64) -> f64 {
    1e-8 * norm.max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spec: SuperchargeSpec,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_multiplicity: usize,
    pub threshold: f64,
}

impl SpectrumReport {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    /// Eigenvalues above the zero threshold.
    pub fn positive(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().copied().filter(move |&e| e >= self.threshold)
    }
}

/// All eigenpairs of a Hermitian map, eigenvalues ascending and eigenvectors
/// in matching columns.
pub fn dense_eigh(map: &LinearMap) -> (Vec<f64>, DMatrix<C64>) {
    let m = map.to_dense();
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Eigenvalues only.
pub fn dense_eigenvalues(map: &LinearMap) -> Vec<f64> {
    let m = map.to_dense();
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// The complete spectrum of an assembled Hamiltonian.
pub fn full_spectrum(h: &HamiltonianSpec, cap: usize) -> Result<SpectrumReport> {
    let dim = h.dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let eigenvalues = dense_eigenvalues(&h.matrix);
    let threshold = zero_threshold(h.matrix.max_row_sum());
    let zero_multiplicity = eigenvalues.iter().filter(|e| e.abs() < threshold).count();
    Ok(SpectrumReport {
        spec: h.spec,
        eigenvalues,
        zero_multiplicity,
        threshold,
    })
}
