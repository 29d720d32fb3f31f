use serde::{Deserialize, Serialize};

use super::dense::{dense_eigh, zero_threshold, DENSE_CAP};
use super::lanczos::{lowest_eigenpairs, LanczosOptions, Operator};
use crate::hamiltonian::{ChainHamiltonian, HamiltonianSpec};
use crate::operators::{BasisIndex, StateVector, SuperchargeOperator, SuperchargeSpec};
use crate::qcore::SpinParams;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Hard limit for dense diagonalisation of full spectra.
    pub dense_cap: usize,
    /// Bottom-of-spectrum problems at or below this dimension use the dense
    /// solver; larger ones use Lanczos.
    pub dense_below: usize,
    pub lanczos: LanczosOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            dense_cap: DENSE_CAP,
            dense_below: 1024,
            lanczos: LanczosOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    /// Closed form (the single-site chain).
    Exact,
    Dense,
    Lanczos,
}

/// The unit-norm zero-energy state of `H(0)` on `V^L`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroundState {
    pub ell: usize,
    pub len: usize,
    pub energy: f64,
    /// `‖Q ψ‖`.
    pub residual_q: f64,
    /// `‖Q† ψ‖`.
    pub residual_qdag: f64,
    /// Whether the distinguished component was made real positive.
    pub phase_fixed: bool,
    pub method: SolverMethod,
    pub vector: StateVector,
}

impl GroundState {
    /// The alternating component `(ψ)_{0ℓ0ℓ…}`.
    pub fn distinguished(&self) -> C64 {
        self.vector
            .component(&distinguished_digits(self.ell, self.len))
            .expect("digits in range")
    }
}

/// `(0, ℓ, 0, ℓ, …)` of length `len`.
pub fn distinguished_digits(ell: usize, len: usize) -> Vec<usize> {
    (0..len).map(|i| if i % 2 == 0 { 0 } else { ell }).collect()
}

/// `(zero count, threshold, lowest eigenvalue above the threshold)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: usize,
    pub threshold: f64,
    pub min_eigenvalue: f64,
    pub gap: f64,
    pub method: SolverMethod,
}

fn fix_phase(v: &mut [C64], flat: usize) -> bool {
    let c = v[flat];
    if c.norm() < 1e-12 {
        return false;
    }
    let u = c.conj() / c.norm();
    v.iter_mut().for_each(|a| *a *= u);
    v[flat] = C64::new(v[flat].norm(), 0.0);
    true
}

fn chain_op(spec: &SuperchargeSpec) -> Result<ChainHamiltonian> {
    ChainHamiltonian::new(spec)
}

/// Counts eigenvalues of `H_{j,k}(y)` below the zero threshold. On the
/// Lanczos path each further zero mode is sought orthogonally to those
/// already found, so degenerate kernels are not missed.
pub fn zero_multiplicity(spec: &SuperchargeSpec, opts: &SolverOptions) -> Result<ZeroCount> {
    let op = chain_op(spec)?;
    let dim = op.dim();
    if dim <= opts.dense_below {
        let m = op.to_sparse()?;
        let threshold = zero_threshold(m.max_row_sum());
        let (vals, _) = dense_eigh(&m);
        let count = vals.iter().filter(|e| e.abs() < threshold).count();
        return Ok(ZeroCount {
            count,
            threshold,
            min_eigenvalue: vals[0],
            gap: vals.iter().copied().find(|e| e.abs() >= threshold).unwrap_or(f64::NAN),
            method: SolverMethod::Dense,
        });
    }
    let threshold = zero_threshold(op.norm_estimate());
    let mut found: Vec<Vec<C64>> = Vec::new();
    let mut min_eigenvalue = f64::INFINITY;
    loop {
        let pair = lowest_eigenpairs(&op, 1, &found, &opts.lanczos)?
            .pop()
            .expect("one pair");
        min_eigenvalue = min_eigenvalue.min(pair.value);
        if pair.value.abs() < threshold {
            found.push(pair.vector);
        } else {
            return Ok(ZeroCount {
                count: found.len(),
                threshold,
                min_eigenvalue,
                gap: pair.value,
                method: SolverMethod::Lanczos,
            });
        }
    }
}

/// The `count` lowest eigenvalues of `H_{j,k}(y)` with eigenvectors.
pub fn lowest_states(
    spec: &SuperchargeSpec,
    count: usize,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, Vec<Vec<C64>>, SolverMethod)> {
    let op = chain_op(spec)?;
    if op.dim() <= opts.dense_below {
        let (vals, vecs) = dense_eigh(&op.to_sparse()?);
        let k = count.min(vals.len());
        let vs = (0..k).map(|c| vecs.column(c).iter().copied().collect()).collect();
        return Ok((vals[..k].to_vec(), vs, SolverMethod::Dense));
    }
    let pairs = lowest_eigenpairs(&op, count, &[], &opts.lanczos)?;
    let vals = pairs.iter().map(|p| p.value).collect();
    let vecs = pairs.into_iter().map(|p| p.vector).collect();
    Ok((vals, vecs, SolverMethod::Lanczos))
}

/// `‖Q ψ‖` and `‖Q† ψ‖` for `ψ ∈ V^L` with the supercharges of `spec`.
pub fn supercharge_residuals(spec: &SuperchargeSpec, psi: &[C64]) -> Result<(f64, f64)> {
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let q = SuperchargeOperator::new(spec)?;
    let rq = norm(&q.apply(psi));
    let rqd = if spec.len >= 2 {
        let below = SuperchargeOperator::new(&spec.with_len(spec.len - 1))?;
        norm(&below.apply_adjoint(psi))
    } else {
        0.0
    };
    Ok((rq, rqd))
}

pub fn zero_energy_state(p: &SpinParams, len: usize) -> Result<GroundState> {
    zero_energy_state_with(p, len, &SolverOptions::default())
}

/// Kernel vector of `H(0)` on `V^L`, checked to be unique and then phase
/// fixed so that the distinguished component is real positive.
pub fn zero_energy_state_with(
    p: &SpinParams,
    len: usize,
    opts: &SolverOptions,
) -> Result<GroundState> {
    if len == 0 {
        return Err(Error::LengthTooShort { len, min: 1 });
    }
    let ell = p.ell();
    let spec = SuperchargeSpec::new(ell, len).with_fault(p.fault());
    if len == 1 {
        let vector = StateVector::basis(ell, &[0])?;
        let (rq, _) = supercharge_residuals(&spec, vector.amplitudes())?;
        return Ok(GroundState {
            ell,
            len,
            energy: 0.0,
            residual_q: rq,
            residual_qdag: 0.0,
            phase_fixed: true,
            method: SolverMethod::Exact,
            vector,
        });
    }
    let op = chain_op(&spec)?;
    let (energy, mut amps, method) = if op.dim() <= opts.dense_below {
        let m = op.to_sparse()?;
        let threshold = zero_threshold(m.max_row_sum());
        let (vals, vecs) = dense_eigh(&m);
        let found = vals.iter().filter(|e| e.abs() < threshold).count();
        if found != 1 {
            return Err(Error::ZeroMultiplicity { found, threshold });
        }
        (vals[0], vecs.column(0).iter().copied().collect::<Vec<_>>(), SolverMethod::Dense)
    } else {
        let threshold = zero_threshold(op.norm_estimate());
        let first = lowest_eigenpairs(&op, 1, &[], &opts.lanczos)?.remove(0);
        if first.value.abs() >= threshold {
            return Err(Error::ZeroMultiplicity { found: 0, threshold });
        }
        let second = lowest_eigenpairs(&op, 1, &[first.vector.clone()], &opts.lanczos)?.remove(0);
        if second.value.abs() < threshold {
            return Err(Error::ZeroMultiplicity { found: 2, threshold });
        }
        (first.value, first.vector, SolverMethod::Lanczos)
    };
    let flat = BasisIndex::new(ell, len).flat(&distinguished_digits(ell, len))?;
    let phase_fixed = fix_phase(&mut amps, flat);
    let (residual_q, residual_qdag) = supercharge_residuals(&spec, &amps)?;
    Ok(GroundState {
        ell,
        len,
        energy,
        residual_q,
        residual_qdag,
        phase_fixed,
        method,
        vector: StateVector::from_amplitudes(ell, len, amps)?,
    })
}

/// Kernel dimension of an assembled Hamiltonian by dense diagonalisation.
pub fn dense_zero_multiplicity(h: &HamiltonianSpec) -> usize {
    let threshold = zero_threshold(h.matrix.max_row_sum());
    dense_eigh(&h.matrix)
        .0
        .iter()
        .filter(|e| e.abs() < threshold)
        .count()
}
