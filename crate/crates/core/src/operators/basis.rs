use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Indexing of the product basis `|m_1, …, m_L⟩` of `V^L`, `V = C^{ℓ+1}`.
///
/// Site 1 is the most significant base-`(ℓ+1)` digit, so the flat index is
/// `Σ_i m_i (ℓ+1)^{L−i}`. Sites are addressed 0-based in code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisIndex {
    ell: usize,
    len: usize,
}

impl BasisIndex {
    pub fn new(ell: usize, len: usize) -> Self {
        BasisIndex { ell, len }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn d(&self) -> usize {
        self.ell + 1
    }

    pub fn dim(&self) -> usize {
        self.d().pow(self.len as u32)
    }

    /// Weight `(ℓ+1)^{L−1−site}` of a 0-based site.
    pub fn stride(&self, site: usize) -> usize {
        self.d().pow((self.len - 1 - site) as u32)
    }

    pub fn digit(&self, flat: usize, site: usize) -> usize {
        (flat / self.stride(site)) % self.d()
    }

    pub fn digits(&self, flat: usize) -> Vec<usize> {
        let d = self.d();
        let mut out = vec![0; self.len];
        let mut r = flat;
        for slot in out.iter_mut().rev() {
            *slot = r % d;
            r /= d;
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.len {
            return Err(Error::LengthMismatch {
                context: "digit sequence",
                expected: self.len,
                got: digits.len(),
            });
        }
        let d = self.d();
        digits.iter().try_fold(0usize, |acc, &m| {
            if m > self.ell {
                Err(Error::LabelRange {
                    label: m,
                    max: self.ell,
                })
            } else {
                Ok(acc * d + m)
            }
        })
    }

    /// `Σ_i m_i` of a flat index.
    pub fn digit_sum(&self, flat: usize) -> usize {
        let d = self.d();
        let mut r = flat;
        let mut s = 0;
        for _ in 0..self.len {
            s += r % d;
            r /= d;
        }
        s
    }
}

/// A vector of `V^L` in the product basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    ell: usize,
    len: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zeros(ell: usize, len: usize) -> Self {
        let dim = BasisIndex::new(ell, len).dim();
        StateVector {
            ell,
            len,
            amps: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn from_amplitudes(ell: usize, len: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = BasisIndex::new(ell, len).dim();
        if amps.len() != dim {
            return Err(Error::LengthMismatch {
                context: "amplitude array",
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(StateVector { ell, len, amps })
    }

    /// The basis state `|m_1, …, m_L⟩`.
    pub fn basis(ell: usize, digits: &[usize]) -> Result<Self> {
        let idx = BasisIndex::new(ell, digits.len());
        let flat = idx.flat(digits)?;
        let mut v = Self::zeros(ell, digits.len());
        v.amps[flat] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn index(&self) -> BasisIndex {
        BasisIndex::new(self.ell, self.len)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn component(&self, digits: &[usize]) -> Result<C64> {
        Ok(self.amps[self.index().flat(digits)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.amps.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&mut self, s: C64) {
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut v = self.clone();
        v.scale(s);
        v
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: C64, other: &StateVector) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += s * b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        let mut v = self.clone();
        v.axpy(C64::new(-1.0, 0.0), other)?;
        Ok(v)
    }

    /// Scales to unit norm and returns the previous norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.scale(C64::new(1.0 / n, 0.0));
        }
        n
    }

    /// `self ⊗ other`, with `self` on the leading sites.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if self.ell != other.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: other.ell,
            });
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector {
            ell: self.ell,
            len: self.len + other.len,
            amps,
        })
    }

    fn check_same(&self, other: &StateVector) -> Result<()> {
        if self.ell != other.ell {
            return Err(Error::EllMismatch {
                a: self.ell,
                b: other.ell,
            });
        }
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                context: "state vectors",
                expected: self.len,
                got: other.len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exhaustive() {
        for ell in 1..=3 {
            for len in 1..=8 {
                let idx = BasisIndex::new(ell, len);
                if idx.dim() > 70_000 {
                    continue;
                }
                for flat in 0..idx.dim() {
                    let d = idx.digits(flat);
                    assert_eq!(idx.flat(&d).unwrap(), flat);
                    assert_eq!(idx.digit_sum(flat), d.iter().sum::<usize>());
                    for (site, &m) in d.iter().enumerate() {
                        assert_eq!(idx.digit(flat, site), m);
                    }
                }
            }
        }
    }

    #[test]
    fn site_one_is_most_significant() {
        let idx = BasisIndex::new(2, 3);
        assert_eq!(idx.flat(&[1, 0, 0]).unwrap(), 9);
        assert_eq!(idx.flat(&[0, 0, 2]).unwrap(), 2);
        assert!(idx.flat(&[0, 3, 0]).is_err());
        assert!(idx.flat(&[0, 0]).is_err());
    }

    #[test]
    fn component_accessors_agree() {
        let amps: Vec<C64> = (0..27).map(|i| C64::new(i as f64, -(i as f64))).collect();
        let v = StateVector::from_amplitudes(2, 3, amps).unwrap();
        for flat in 0..27 {
            let d = v.index().digits(flat);
            assert_eq!(v.component(&d).unwrap(), v.amplitudes()[flat]);
        }
    }

    #[test]
    fn tensor_places_left_factor_first() {
        let a = StateVector::basis(1, &[1]).unwrap();
        let b = StateVector::basis(1, &[0, 1]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.component(&[1, 0, 1]).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(t.norm(), 1.0);
    }
}
