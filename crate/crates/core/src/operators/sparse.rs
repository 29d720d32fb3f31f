#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{BasisIndex, StateVector};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Sparse complex map `V^{L_in} → V^{L_out}` in compressed-row form.
///
/// Duplicate coordinates are merged on construction and exact zeros are never
/// stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    ell: usize,
    len_in: usize,
    len_out: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl LinearMap {
    pub fn zero(ell: usize, len_in: usize, len_out: usize) -> Self {
        let rows = BasisIndex::new(ell, len_out).dim();
        LinearMap {
            ell,
            len_in,
            len_out,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(ell: usize, len: usize) -> Self {
        let n = BasisIndex::new(ell, len).dim();
        LinearMap {
            ell,
            len_in: len,
            len_out: len,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![C64::new(1.0, 0.0); n],
        }
    }

    pub fn diagonal(ell: usize, len: usize, diag: Vec<C64>) -> Result<Self> {
        let n = BasisIndex::new(ell, len).dim();
        if diag.len() != n {
            return Err(Error::LengthMismatch {
                context: "diagonal",
                expected: n,
                got: diag.len(),
            });
        }
        let triplets = diag.into_iter().enumerate().map(|(i, v)| (i, i, v)).collect();
        Self::from_triplets(ell, len, len, triplets)
    }

    /// Builds from `(row, col, value)` triplets.
    pub fn from_triplets(
        ell: usize,
        len_in: usize,
        len_out: usize,
        mut triplets: Vec<(usize, usize, C64)>,
    ) -> Result<Self> {
        let rows = BasisIndex::new(ell, len_out).dim();
        let cols = BasisIndex::new(ell, len_in).dim();
        if let Some(&(r, c, _)) = triplets.iter().find(|t| t.0 >= rows || t.1 >= cols) {
            return Err(Error::Format(format!(
                "entry ({r}, {c}) outside a {rows}x{cols} map"
            )));
        }
        sort_triplets(&mut triplets);
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            if let Some((lr, _)) = last {
                if values.last() == Some(&ZERO) {
                    indices.pop();
                    values.pop();
                    indptr[lr + 1] -= 1;
                }
            }
            indices.push(c);
            values.push(v);
            indptr[r + 1] += 1;
            last = Some((r, c));
        }
        if let Some((lr, _)) = last {
            if values.last() == Some(&ZERO) {
                indices.pop();
                values.pop();
                indptr[lr + 1] -= 1;
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(LinearMap {
            ell,
            len_in,
            len_out,
            indptr,
            indices,
            values,
        })
    }

    /// Builds column by column; `column(c)` returns the nonzero `(row, value)`
    /// pairs of the image of basis state `c`. Columns are evaluated in
    /// parallel when the `parallel` feature is on.
    pub fn from_columns<F>(ell: usize, len_in: usize, len_out: usize, column: F) -> Result<Self>
    where
        F: Fn(usize) -> Vec<(usize, C64)> + Sync + Send,
    {
        let cols = BasisIndex::new(ell, len_in).dim();
        let per_col: Vec<Vec<(usize, usize, C64)>> = maybe_par_iter!(0..cols)
            .map(|c| column(c).into_iter().map(|(r, v)| (r, c, v)).collect())
            .collect();
        let triplets = per_col.into_iter().flatten().collect();
        Self::from_triplets(ell, len_in, len_out, triplets)
    }

    pub fn from_dense(ell: usize, len_in: usize, len_out: usize, m: &DMatrix<C64>) -> Result<Self> {
        let rows = BasisIndex::new(ell, len_out).dim();
        let cols = BasisIndex::new(ell, len_in).dim();
        if m.nrows() != rows || m.ncols() != cols {
            return Err(Error::Format(format!(
                "dense matrix is {}x{}, expected {rows}x{cols}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut t = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if m[(r, c)] != ZERO {
                    t.push((r, c, m[(r, c)]));
                }
            }
        }
        Self::from_triplets(ell, len_in, len_out, t)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len_in(&self) -> usize {
        self.len_in
    }

    pub fn len_out(&self) -> usize {
        self.len_out
    }

    pub fn rows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn cols(&self) -> usize {
        BasisIndex::new(self.ell, self.len_in).dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero entries of one row as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, C64)> {
        (0..self.rows())
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .collect()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(p) => self.values[span.start + p],
            Err(_) => ZERO,
        }
    }

    /// `out = A x` on raw amplitude slices.
    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        assert_eq!(x.len(), self.cols(), "input dimension");
        assert_eq!(out.len(), self.rows(), "output dimension");
        maybe_par_chunks_mut!(out, ROW_CHUNK)
            .enumerate()
            .for_each(|(chunk, block)| {
                let base = chunk * ROW_CHUNK;
                for (i, o) in block.iter_mut().enumerate() {
                    let r = base + i;
                    let mut acc = ZERO;
                    for p in self.indptr[r]..self.indptr[r + 1] {
                        acc += self.values[p] * x[self.indices[p]];
                    }
                    *o = acc;
                }
            });
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.check_input(v)?;
        let mut out = vec![ZERO; self.rows()];
        self.apply_into(v.amplitudes(), &mut out);
        StateVector::from_amplitudes(self.ell, self.len_out, out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LinearMap {
        let t = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        Self::from_triplets(self.ell, self.len_out, self.len_in, t).expect("adjoint shape")
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.ell != other.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: other.ell,
            });
        }
        if self.len_in != other.len_out {
            return Err(Error::LengthMismatch {
                context: "composition",
                expected: self.len_in,
                got: other.len_out,
            });
        }
        let rows: Vec<Vec<(usize, usize, C64)>> = maybe_par_iter!(0..self.rows())
            .map(|r| {
                let mut acc: Vec<(usize, C64)> = Vec::new();
                for (mid, a) in self.row(r) {
                    for (c, b) in other.row(mid) {
                        acc.push((c, a * b));
                    }
                }
                acc.into_iter().map(|(c, v)| (r, c, v)).collect()
            })
            .collect();
        Self::from_triplets(
            self.ell,
            other.len_in,
            self.len_out,
            rows.into_iter().flatten().collect(),
        )
    }

    pub fn scale(&self, s: C64) -> LinearMap {
        let t = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (r, c, v * s))
            .collect();
        Self::from_triplets(self.ell, self.len_in, self.len_out, t).expect("scale shape")
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check_shape(other)?;
        let mut t = self.triplets();
        t.extend(other.triplets());
        Self::from_triplets(self.ell, self.len_in, self.len_out, t)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `self ⊗ other`, with `self` acting on the leading sites.
    pub fn kron(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.ell != other.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: other.ell,
            });
        }
        let (ro, co) = (other.rows(), other.cols());
        let ot = other.triplets();
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for &(r2, c2, v2) in &ot {
                t.push((r1 * ro + r2, c1 * co + c2, v1 * v2));
            }
        }
        Self::from_triplets(
            self.ell,
            self.len_in + other.len_in,
            self.len_out + other.len_out,
            t,
        )
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_r Σ_c |A_rc|`, an upper bound on the spectral norm of a
    /// Hermitian map.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.rows())
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A − B|` entrywise.
    pub fn max_abs_diff(&self, other: &LinearMap) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    fn check_shape(&self, other: &LinearMap) -> Result<()> {
        if self.ell != other.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: other.ell,
            });
        }
        if self.len_in != other.len_in || self.len_out != other.len_out {
            return Err(Error::LengthMismatch {
                context: "map shapes",
                expected: self.len_in * 1000 + self.len_out,
                got: other.len_in * 1000 + other.len_out,
            });
        }
        Ok(())
    }

    fn check_input(&self, v: &StateVector) -> Result<()> {
        if v.ell() != self.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: v.ell(),
            });
        }
        if v.len() != self.len_in {
            return Err(Error::LengthMismatch {
                context: "map input",
                expected: self.len_in,
                got: v.len(),
            });
        }
        Ok(())
    }
}

const ROW_CHUNK: usize = 256;

#[cfg(feature = "parallel")]
fn sort_triplets(t: &mut [(usize, usize, C64)]) {
    use rayon::slice::ParallelSliceMut;
    t.par_sort_unstable_by_key(|e| (e.0, e.1));
}

#[cfg(not(feature = "parallel"))]
fn sort_triplets(t: &mut [(usize, usize, C64)]) {
    t.sort_unstable_by_key(|e| (e.0, e.1));
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn merges_duplicates_and_drops_zeros() {
        let t = vec![
            (0, 1, c(1.0, 0.0)),
            (0, 1, c(2.0, 0.0)),
            (1, 0, c(1.0, 1.0)),
            (1, 0, c(-1.0, -1.0)),
            (1, 1, c(0.0, 0.0)),
        ];
        let m = LinearMap::from_triplets(1, 1, 1, t).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 0.0));
        assert_eq!(m.get(1, 0), ZERO);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(LinearMap::from_triplets(1, 1, 1, vec![(2, 0, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn compose_and_kron_match_dense() {
        let a = LinearMap::from_triplets(
            1,
            1,
            2,
            vec![(0, 1, c(1.0, 2.0)), (3, 0, c(-0.5, 0.0)), (2, 1, c(0.0, 1.0))],
        )
        .unwrap();
        let b = LinearMap::from_triplets(1, 1, 1, vec![(0, 0, c(2.0, 0.0)), (1, 0, c(1.0, -1.0))])
            .unwrap();
        let ab = a.compose(&b).unwrap();
        let diff = &ab.to_dense() - a.to_dense() * b.to_dense();
        assert!(diff.iter().all(|z| z.norm() < 1e-15));
        let k = a.kron(&b).unwrap();
        assert_eq!(k.len_in(), 2);
        assert_eq!(k.len_out(), 3);
        let kd = k.to_dense();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        for r in 0..8 {
            for col in 0..4 {
                let expect = ad[(r / 2, col / 2)] * bd[(r % 2, col % 2)];
                assert!((kd[(r, col)] - expect).norm() < 1e-15);
            }
        }
        assert!(b.compose(&a).is_err());
    }

    fn arb_map() -> impl Strategy<Value = LinearMap> {
        prop::collection::vec((0usize..4, 0usize..8, -2.0..2.0f64, -2.0..2.0f64), 0..20).prop_map(
            |v| {
                let t = v.into_iter().map(|(r, col, a, b)| (r, col, c(a, b))).collect();
                LinearMap::from_triplets(1, 3, 2, t).unwrap()
            },
        )
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
    }

    proptest! {
        #[test]
        fn adjoint_is_an_involution(m in arb_map()) {
            prop_assert_eq!(m.adjoint().adjoint(), m);
        }

        #[test]
        fn adjoint_defining_property(m in arb_map(), x in arb_vec(8), y in arb_vec(4)) {
            let xv = StateVector::from_amplitudes(1, 3, x).unwrap();
            let yv = StateVector::from_amplitudes(1, 2, y).unwrap();
            let lhs = yv.inner(&m.apply(&xv).unwrap()).unwrap();
            let rhs = xv.inner(&m.adjoint().apply(&yv).unwrap()).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-13);
        }
    }
}
