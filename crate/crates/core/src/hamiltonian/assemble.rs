use serde::{Deserialize, Serialize};

use super::{boundary_term, density_explicit};
use crate::operators::{global_supercharge, BasisIndex, LinearMap, SuperchargeSpec};
#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use crate::spectra::Operator;
use crate::{Error, Result, C64};

/// `H_{j,k}(y)` on `V^L` as an assembled sparse matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub spec: SuperchargeSpec,
    pub matrix: LinearMap,
}

impl HamiltonianSpec {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `max |H − (Q Q† + Q† Q)|` against the supercharge route.
    pub fn cross_check(&self) -> Result<f64> {
        self.matrix.max_abs_diff(&from_supercharges(&self.spec)?)
    }

    /// `max |H − H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix
            .max_abs_diff(&self.matrix.adjoint())
            .expect("square map")
    }
}

/// Density-plus-boundary route: `Σ_i h_{i,i+1} + h_B^{(j)}(y)_1 + h_B^{(k)}(y)_L`.
pub fn assemble(spec: &SuperchargeSpec) -> Result<HamiltonianSpec> {
    let op = ChainHamiltonian::new(spec)?;
    Ok(HamiltonianSpec {
        spec: *spec,
        matrix: op.to_sparse()?,
    })
}

/// Supercharge route: `Q_{L−1} Q_{L−1}† + Q_L† Q_L` on `V^L`.
pub fn from_supercharges(spec: &SuperchargeSpec) -> Result<LinearMap> {
    if spec.len < 2 {
        return Err(Error::LengthTooShort {
            len: spec.len,
            min: 2,
        });
    }
    let q = global_supercharge(spec)?;
    let q_below = global_supercharge(&spec.with_len(spec.len - 1))?;
    let up = q.adjoint().compose(&q)?;
    let down = q_below.compose(&q_below.adjoint())?;
    up.add(&down)
}

type Rows = Vec<Vec<(usize, C64)>>;

fn rows_of(map: &LinearMap) -> Rows {
    (0..map.rows()).map(|r| map.row(r).collect()).collect()
}

/// Matrix-free `H_{j,k}(y)`; matvecs gather one output row at a time, so
/// they parallelise without write conflicts.
#[derive(Clone, Debug)]
pub struct ChainHamiltonian {
    spec: SuperchargeSpec,
    d: usize,
    dim: usize,
    bond: Rows,
    left: Rows,
    right: Rows,
    norm: f64,
}

impl ChainHamiltonian {
    pub fn new(spec: &SuperchargeSpec) -> Result<Self> {
        spec.validate()?;
        if spec.len < 2 {
            return Err(Error::LengthTooShort {
                len: spec.len,
                min: 2,
            });
        }
        let p = spec.params();
        let h = density_explicit(&p);
        let hl = boundary_term(&p, spec.y, spec.j)?;
        let hr = boundary_term(&p, spec.y, spec.k)?;
        let norm = (spec.len - 1) as f64 * h.max_row_sum() + hl.max_row_sum() + hr.max_row_sum();
        Ok(ChainHamiltonian {
            spec: *spec,
            d: p.d(),
            dim: BasisIndex::new(p.ell(), spec.len).dim(),
            bond: rows_of(&h),
            left: rows_of(&hl),
            right: rows_of(&hr),
            norm,
        })
    }

    pub fn spec(&self) -> &SuperchargeSpec {
        &self.spec
    }

    fn row_value(&self, r: usize, x: &[C64]) -> C64 {
        let (d, len) = (self.d, self.spec.len);
        let mut acc = C64::new(0.0, 0.0);
        let mut stride = 1;
        for _ in 0..len - 1 {
            let pair = (r / stride) % (d * d);
            let base = r - pair * stride;
            for &(c, v) in &self.bond[pair] {
                acc += v * x[base + c * stride];
            }
            stride *= d;
        }
        let top = stride; // d^{L−1}
        let m = r / top;
        for &(c, v) in &self.left[m] {
            acc += v * x[r - m * top + c * top];
        }
        let m = r % d;
        for &(c, v) in &self.right[m] {
            acc += v * x[r - m + c];
        }
        acc
    }

    pub fn to_sparse(&self) -> Result<LinearMap> {
        let (d, len, ell) = (self.d, self.spec.len, self.spec.ell);
        let mut bond_t = vec![Vec::new(); d * d];
        for (r, row) in self.bond.iter().enumerate() {
            for &(c, v) in row {
                bond_t[c].push((r, v));
            }
        }
        let transpose = |rows: &Rows| {
            let mut t = vec![Vec::new(); d];
            for (r, row) in rows.iter().enumerate() {
                for &(c, v) in row {
                    t[c].push((r, v));
                }
            }
            t
        };
        let (left_t, right_t) = (transpose(&self.left), transpose(&self.right));
        LinearMap::from_columns(ell, len, len, |col| {
            let mut out = Vec::new();
            let mut stride = 1;
            for _ in 0..len - 1 {
                let pair = (col / stride) % (d * d);
                let base = col - pair * stride;
                out.extend(bond_t[pair].iter().map(|&(r, v)| (base + r * stride, v)));
                stride *= d;
            }
            let m = col / stride;
            out.extend(left_t[m].iter().map(|&(r, v)| (col - m * stride + r * stride, v)));
            let m = col % d;
            out.extend(right_t[m].iter().map(|&(r, v)| (col - m + r, v)));
            out
        })
    }
}

impl Operator for ChainHamiltonian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(out.len(), self.dim);
        const CHUNK: usize = 1024;
        maybe_par_chunks_mut!(out, CHUNK)
            .enumerate()
            .for_each(|(k, block)| {
                for (i, o) in block.iter_mut().enumerate() {
                    *o = self.row_value(k * CHUNK + i, x);
                }
            });
    }

    fn norm_estimate(&self) -> f64 {
        self.norm
    }
}
