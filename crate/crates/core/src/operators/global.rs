use serde::{Deserialize, Serialize};

use super::local::{columns, local_supercharge_deformed};
use super::{spin_reversal, BasisIndex, LinearMap};
use crate::qcore::{AmkFault, SpinParams};
#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use crate::{Error, Result, C64};

/// One member `Q_{j,k}(y): V^L → V^{L+1}` of the supercharge family.
///
/// The labels run over `0..=ℓ+1`; `j = k = ℓ+1` is the undecorated `Q(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperchargeSpec {
    pub ell: usize,
    pub len: usize,
    pub y: C64,
    pub j: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<AmkFault>,
}

impl SuperchargeSpec {
    /// `Q(0)` on `V^len`, the undeformed supercharge.
    pub fn new(ell: usize, len: usize) -> Self {
        SuperchargeSpec {
            ell,
            len,
            y: C64::new(0.0, 0.0),
            j: ell + 1,
            k: ell + 1,
            fault: None,
        }
    }

    pub fn with_y(mut self, y: C64) -> Self {
        self.y = y;
        self
    }

    pub fn with_labels(mut self, j: usize, k: usize) -> Self {
        self.j = j;
        self.k = k;
        self
    }

    pub fn with_len(mut self, len: usize) -> Self {
        self.len = len;
        self
    }

    #[doc(hidden)]
    pub fn with_fault(mut self, fault: Option<AmkFault>) -> Self {
        self.fault = fault;
        self
    }

    pub fn params(&self) -> SpinParams {
        let p = SpinParams::new(self.ell);
        match self.fault {
            Some(f) => p.with_fault(f),
            None => p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::LengthTooShort { len: 0, min: 1 });
        }
        for label in [self.j, self.k] {
            if label > self.ell + 1 {
                return Err(Error::LabelRange {
                    label,
                    max: self.ell + 1,
                });
            }
        }
        Ok(())
    }
}

/// Assembles `Q_{j,k}(y)ψ = ξ_j ⊗ ψ + (−1)^{L−1} ψ ⊗ ξ_k + Σ_i (−1)^i q(y)_i ψ`
/// column by column.
pub fn global_supercharge(spec: &SuperchargeSpec) -> Result<LinearMap> {
    spec.validate()?;
    let p = spec.params();
    let d = p.d();
    let len = spec.len;
    let local = columns(&local_supercharge_deformed(&p, spec.y)?);
    let xi_left = p.xi_vector(spec.y, spec.j)?.amplitudes;
    let xi_right = p.xi_vector(spec.y, spec.k)?.amplitudes;
    let right_sign = if len % 2 == 1 { 1.0 } else { -1.0 };
    let idx = BasisIndex::new(p.ell(), len);
    let dim = idx.dim();
    LinearMap::from_columns(p.ell(), len, len + 1, |col| {
        let mut out = Vec::new();
        for site in 0..len {
            // (−1)^i with 1-based i
            let sign = if site % 2 == 0 { -1.0 } else { 1.0 };
            let stride = idx.stride(site);
            let m = (col / stride) % d;
            let high = col / (stride * d);
            let low = col % stride;
            for &(pair, v) in &local[m] {
                out.push(((high * d * d + pair) * stride + low, v * sign));
            }
        }
        for (a, &v) in xi_left.iter().enumerate() {
            if v != C64::new(0.0, 0.0) {
                out.push((a * dim + col, v));
            }
        }
        for (b, &v) in xi_right.iter().enumerate() {
            if v != C64::new(0.0, 0.0) {
                out.push((col * d + b, v * right_sign));
            }
        }
        out
    })
}

/// Matrix-free `Q_{j,k}(y)` and its adjoint, for chains too long to
/// assemble. Both directions gather one output entry at a time.
#[derive(Clone, Debug)]
pub struct SuperchargeOperator {
    spec: SuperchargeSpec,
    d: usize,
    // local q(y) by output pair: (input label, value)
    by_pair: Vec<Vec<(usize, C64)>>,
    // local q(y) by input label: (output pair, value)
    by_label: Vec<Vec<(usize, C64)>>,
    xi_left: Vec<C64>,
    xi_right: Vec<C64>,
}

impl SuperchargeOperator {
    pub fn new(spec: &SuperchargeSpec) -> Result<Self> {
        spec.validate()?;
        let p = spec.params();
        let d = p.d();
        let by_label = columns(&local_supercharge_deformed(&p, spec.y)?);
        let mut by_pair = vec![Vec::new(); d * d];
        for (m, col) in by_label.iter().enumerate() {
            for &(pair, v) in col {
                by_pair[pair].push((m, v));
            }
        }
        Ok(SuperchargeOperator {
            spec: *spec,
            d,
            by_pair,
            by_label,
            xi_left: p.xi_vector(spec.y, spec.j)?.amplitudes,
            xi_right: p.xi_vector(spec.y, spec.k)?.amplitudes,
        })
    }

    pub fn spec(&self) -> &SuperchargeSpec {
        &self.spec
    }

    fn right_sign(&self) -> f64 {
        if self.spec.len % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// `Q x` for `x ∈ V^L`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let (d, len) = (self.d, self.spec.len);
        let dim_in = d.pow(len as u32);
        assert_eq!(x.len(), dim_in, "input dimension");
        let rs = self.right_sign();
        let mut out = vec![C64::new(0.0, 0.0); dim_in * d];
        maybe_par_chunks_mut!(&mut out[..], GATHER_CHUNK)
            .enumerate()
            .for_each(|(k, block)| {
                for (i, o) in block.iter_mut().enumerate() {
                    let r = k * GATHER_CHUNK + i;
                    let mut acc = C64::new(0.0, 0.0);
                    let mut stride = dim_in / d;
                    for site in 0..len {
                        let sign = if site % 2 == 0 { -1.0 } else { 1.0 };
                        let pair = (r / stride) % (d * d);
                        let (high, low) = (r / (stride * d * d), r % stride);
                        for &(m, v) in &self.by_pair[pair] {
                            acc += v * x[(high * d + m) * stride + low] * sign;
                        }
                        stride /= d;
                    }
                    acc += self.xi_left[r / dim_in] * x[r % dim_in];
                    acc += self.xi_right[r % d] * x[r / d] * rs;
                    *o = acc;
                }
            });
        out
    }

    /// `Q† y` for `y ∈ V^{L+1}`.
    pub fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let (d, len) = (self.d, self.spec.len);
        let dim_in = d.pow(len as u32);
        assert_eq!(y.len(), dim_in * d, "input dimension");
        let rs = self.right_sign();
        let mut out = vec![C64::new(0.0, 0.0); dim_in];
        maybe_par_chunks_mut!(&mut out[..], GATHER_CHUNK)
            .enumerate()
            .for_each(|(k, block)| {
                for (i, o) in block.iter_mut().enumerate() {
                    let c = k * GATHER_CHUNK + i;
                    let mut acc = C64::new(0.0, 0.0);
                    let mut stride = dim_in / d;
                    for site in 0..len {
                        let sign = if site % 2 == 0 { -1.0 } else { 1.0 };
                        let m = (c / stride) % d;
                        let (high, low) = (c / (stride * d), c % stride);
                        for &(pair, v) in &self.by_label[m] {
                            acc += v.conj() * y[(high * d * d + pair) * stride + low] * sign;
                        }
                        stride /= d;
                    }
                    for a in 0..d {
                        acc += self.xi_left[a].conj() * y[a * dim_in + c];
                        acc += self.xi_right[a].conj() * y[c * d + a] * rs;
                    }
                    *o = acc;
                }
            });
        out
    }
}

const GATHER_CHUNK: usize = 1024;

/// The supercharge at `y = ∞`, realised as `R Q(0) R` rather than a limit.
pub fn supercharge_at_infinity(ell: usize, len: usize) -> Result<LinearMap> {
    let p = SpinParams::new(ell);
    let q = global_supercharge(&SuperchargeSpec::new(ell, len))?;
    spin_reversal(&p, len + 1).compose(&q)?.compose(&spin_reversal(&p, len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::StateVector;

    #[test]
    fn single_site_kills_vacuum() {
        let q = global_supercharge(&SuperchargeSpec::new(1, 1)).unwrap();
        let v = q.apply(&StateVector::basis(1, &[0]).unwrap()).unwrap();
        assert_eq!(v.max_abs(), 0.0);
    }

    #[test]
    fn two_site_hand_expansion() {
        // Q = −q₁ + q₂ at ℓ = 1, y = 0, with q|1⟩ = |00⟩.
        let q = global_supercharge(&SuperchargeSpec::new(1, 2)).unwrap();
        let expect: [&[(usize, f64)]; 4] = [
            &[],
            &[(0b000, 1.0)],                 // |01⟩ → +|0⟩⊗|00⟩
            &[(0b000, -1.0)],                // |10⟩ → −|00⟩⊗|0⟩
            &[(0b001, -1.0), (0b100, 1.0)],  // |11⟩ → −|001⟩ + |100⟩
        ];
        for (col, e) in expect.iter().enumerate() {
            let mut want = vec![C64::new(0.0, 0.0); 8];
            for &(r, v) in e.iter() {
                want[r] += v;
            }
            for r in 0..8 {
                assert!((q.get(r, col) - want[r]).norm() < 1e-15, "col {col} row {r}");
            }
        }
    }

    #[test]
    fn nilpotent_with_boundaries() {
        let spec = SuperchargeSpec::new(1, 5)
            .with_y(C64::new(0.8, 0.0))
            .with_labels(1, 2);
        let q1 = global_supercharge(&spec).unwrap();
        let q2 = global_supercharge(&spec.with_len(6)).unwrap();
        let sq = q2.compose(&q1).unwrap();
        assert!(sq.max_abs() < 1e-12 * q1.max_abs().powi(2).max(1.0));
    }

    #[test]
    fn matrix_free_matches_assembled() {
        for &(ell, len, j, k) in &[(1, 4, 0, 2), (2, 3, 1, 3), (3, 2, 2, 0), (1, 1, 1, 1)] {
            let spec = SuperchargeSpec::new(ell, len)
                .with_y(C64::new(0.4, 0.9))
                .with_labels(j, k);
            let q = global_supercharge(&spec).unwrap();
            let op = SuperchargeOperator::new(&spec).unwrap();
            let x: Vec<C64> = (0..q.cols()).map(|i| C64::new((i as f64).cos(), 0.5 - (i % 3) as f64)).collect();
            let y: Vec<C64> = (0..q.rows()).map(|i| C64::new((i as f64 * 0.7).sin(), 0.1 * i as f64)).collect();
            let mut a = vec![C64::new(0.0, 0.0); q.rows()];
            q.apply_into(&x, &mut a);
            let b = op.apply(&x);
            let qd = q.adjoint();
            let mut c = vec![C64::new(0.0, 0.0); q.cols()];
            qd.apply_into(&y, &mut c);
            let e = op.apply_adjoint(&y);
            let err1 = a.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            let err2 = c.iter().zip(&e).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
            assert!(err1 < 1e-13 && err2 < 1e-13, "ell={ell} len={len}");
        }
    }

    #[test]
    fn rejects_bad_labels() {
        let spec = SuperchargeSpec::new(1, 3).with_labels(3, 0);
        assert!(global_supercharge(&spec).is_err());
    }
}
