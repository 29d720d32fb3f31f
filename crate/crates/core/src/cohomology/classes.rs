use serde::{Deserialize, Serialize};

use super::lsq::cgls;
use crate::operators::{BasisIndex, LinearMap, StateVector, SuperchargeOperator, SuperchargeSpec};
use crate::qcore::SpinParams;
use crate::spectra::distinguished_digits;
use crate::{Error, Result, C64};

/// `χ^{⊗n}` for `L = 2n`, `|0⟩ ⊗ χ^{⊗(n−1)}` for `L = 2n − 1`.
pub fn representative(p: &SpinParams, len: usize) -> Result<StateVector> {
    if len == 0 {
        return Err(Error::LengthTooShort { len, min: 1 });
    }
    let ell = p.ell();
    let chi = StateVector::from_amplitudes(ell, 2, p.chi_vector().amplitudes)?;
    let mut v = if len % 2 == 1 {
        StateVector::basis(ell, &[0])?
    } else {
        chi.clone()
    };
    while v.len() < len {
        v = v.tensor(&chi)?;
    }
    Ok(v)
}

/// `S: V^L → V^{L+2}`, `ψ ↦ ψ ⊗ χ`.
pub fn s_map(p: &SpinParams, len: usize) -> Result<LinearMap> {
    let chi = p.chi_vector().amplitudes;
    let d2 = p.d() * p.d();
    LinearMap::from_columns(p.ell(), len, len + 2, |col| {
        chi.iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(i, &v)| (col * d2 + i, v))
            .collect()
    })
}

/// Decomposition `ψ = λ·rep + Q φ` of a cocycle of `Q(0)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassDecomposition {
    pub lambda: C64,
    /// `φ ∈ V^{L−1}`; absent for `L = 1`.
    pub certificate: Option<StateVector>,
    /// `‖ψ − λ·rep − Qφ‖`.
    pub residual: f64,
}

/// Decomposition `ψ = μ·|0ℓ0ℓ…⟩ + Q† φ̃` of a cycle of `Q(0)†`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomologyDecomposition {
    pub mu: C64,
    /// `φ̃ ∈ V^{L+1}`.
    pub certificate: StateVector,
    /// `‖ψ − μ·|0ℓ0ℓ…⟩ − Q†φ̃‖`.
    pub residual: f64,
}

const CLOSED_TOL: f64 = 1e-8;
const CGLS_TOL: f64 = 1e-14;

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn class_decomposition(psi: &StateVector, p: &SpinParams) -> Result<ClassDecomposition> {
    let (ell, len) = (p.ell(), psi.len());
    let q = SuperchargeOperator::new(&SuperchargeSpec::new(ell, len))?;
    let closed = l2(&q.apply(psi.amplitudes()));
    if closed > CLOSED_TOL * psi.norm().max(1.0) {
        return Err(Error::NotClosed {
            which: "Q",
            residual: closed,
        });
    }
    let lambda = psi.component(&distinguished_digits(ell, len))?;
    let mut target = psi.clone();
    target.axpy(-lambda, &representative(p, len)?)?;
    if len == 1 {
        return Ok(ClassDecomposition {
            lambda,
            certificate: None,
            residual: target.norm(),
        });
    }
    let below = SuperchargeOperator::new(&SuperchargeSpec::new(ell, len - 1))?;
    let n = BasisIndex::new(ell, len - 1).dim();
    let (phi, residual) = cgls(
        |x| below.apply(x),
        |y| below.apply_adjoint(y),
        target.amplitudes(),
        n,
        CGLS_TOL,
        20 * n.max(50),
    );
    Ok(ClassDecomposition {
        lambda,
        certificate: Some(StateVector::from_amplitudes(ell, len - 1, phi)?),
        residual,
    })
}

pub fn homology_decomposition(psi: &StateVector, p: &SpinParams) -> Result<HomologyDecomposition> {
    let (ell, len) = (p.ell(), psi.len());
    if len >= 2 {
        let below = SuperchargeOperator::new(&SuperchargeSpec::new(ell, len - 1))?;
        let closed = l2(&below.apply_adjoint(psi.amplitudes()));
        if closed > CLOSED_TOL * psi.norm().max(1.0) {
            return Err(Error::NotClosed {
                which: "Q†",
                residual: closed,
            });
        }
    }
    let mu = representative(p, len)?.inner(psi)?;
    let mut target = psi.clone();
    target.axpy(-mu, &StateVector::basis(ell, &distinguished_digits(ell, len))?)?;
    let q = SuperchargeOperator::new(&SuperchargeSpec::new(ell, len))?;
    let n = BasisIndex::new(ell, len + 1).dim();
    let (phi, residual) = cgls(
        |x| q.apply_adjoint(x),
        |y| q.apply(y),
        target.amplitudes(),
        n,
        CGLS_TOL,
        20 * n.max(50),
    );
    Ok(HomologyDecomposition {
        mu,
        certificate: StateVector::from_amplitudes(ell, len + 1, phi)?,
        residual,
    })
}
