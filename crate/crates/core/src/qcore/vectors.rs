use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::SpinParams;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialKind {
    Chi,
    Phi,
    Xi,
}

/// One of the distinguished vectors `χ ∈ V²`, `φ(y) ∈ V` or `ξ_k(y) ∈ V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialVector {
    pub kind: SpecialKind,
    pub y: Option<C64>,
    pub k: Option<usize>,
    /// Number of sites the amplitudes live on (2 for `χ`, 1 otherwise).
    pub sites: usize,
    pub amplitudes: Vec<C64>,
}

impl SpinParams {
    /// Normaliser `x = 1/sqrt(1 + |y|^{2(ℓ+2)})` of the deformed supercharge.
    pub fn normaliser(&self, y: C64) -> f64 {
        1.0 / (1.0 + y.norm().powi(2 * (self.ell() as i32 + 2))).sqrt()
    }

    /// `χ = Σ_m |m, ℓ−m⟩ / {m+1}`.
    pub fn chi_vector(&self) -> SpecialVector {
        let d = self.d();
        let mut amplitudes = vec![C64::new(0.0, 0.0); d * d];
        for m in 0..d {
            amplitudes[m * d + (self.ell() - m)] = C64::new(1.0 / self.qnum(m as i64 + 1), 0.0);
        }
        SpecialVector {
            kind: SpecialKind::Chi,
            y: None,
            k: None,
            sites: 2,
            amplitudes,
        }
    }

    /// Gauge vector with components `φ_m(y) = −y^{m+1}/sqrt({m+1})`.
    pub fn phi_vector(&self, y: C64) -> SpecialVector {
        SpecialVector {
            kind: SpecialKind::Phi,
            y: Some(y),
            k: None,
            sites: 1,
            amplitudes: self.phi_amplitudes(y),
        }
    }

    fn phi_amplitudes(&self, y: C64) -> Vec<C64> {
        (0..self.d())
            .map(|m| -y.powu(m as u32 + 1) / self.qnum(m as i64 + 1).sqrt())
            .collect()
    }

    /// `ξ_k(y) = x(φ(y) − φ(q^{2(k+1)} y))` for `k = 0, …, ℓ+1`.
    pub fn xi_vector(&self, y: C64, k: usize) -> Result<SpecialVector> {
        if k > self.ell() + 1 {
            return Err(Error::LabelRange {
                label: k,
                max: self.ell() + 1,
            });
        }
        let x = self.normaliser(y);
        let rotated = self.q_pow(2 * (k as i64 + 1)) * y;
        let a = self.phi_amplitudes(y);
        let b = self.phi_amplitudes(rotated);
        Ok(SpecialVector {
            kind: SpecialKind::Xi,
            y: Some(y),
            k: Some(k),
            sites: 1,
            amplitudes: a.iter().zip(&b).map(|(u, v)| (u - v) * x).collect(),
        })
    }

    /// The matrix `Ξ_{mn} = ⟨m|ξ_n(y)⟩` and its closed-form inverse.
    pub fn xi_matrix(&self, y: C64) -> Result<XiMatrix> {
        if y == C64::new(0.0, 0.0) {
            return Err(Error::ZeroY);
        }
        let d = self.d();
        let mut forward = DMatrix::zeros(d, d);
        for n in 0..d {
            let xi = self.xi_vector(y, n)?;
            for m in 0..d {
                forward[(m, n)] = xi.amplitudes[m];
            }
        }
        // (Ξ⁻¹)_{mn} = sqrt({n+1}) q^{−2(m+1)(n+1)} / ((ℓ+2) x y^{n+1})
        let x = self.normaliser(y);
        let n_ell = (self.ell() + 2) as f64;
        let mut inverse = DMatrix::zeros(d, d);
        for m in 0..d {
            for n in 0..d {
                let phase = self.q_pow(-2 * (m as i64 + 1) * (n as i64 + 1));
                inverse[(m, n)] = phase * self.qnum(n as i64 + 1).sqrt()
                    / (y.powu(n as u32 + 1) * (n_ell * x));
            }
        }
        Ok(XiMatrix { forward, inverse })
    }
}

/// `Ξ` and `Ξ⁻¹` for one value of `y`.
#[derive(Clone, Debug)]
pub struct XiMatrix {
    pub forward: DMatrix<C64>,
    pub inverse: DMatrix<C64>,
}

impl XiMatrix {
    /// `max |Ξ Ξ⁻¹ − I|`.
    pub fn inverse_residual(&self) -> f64 {
        let d = self.forward.nrows();
        let prod = &self.forward * &self.inverse;
        let id = DMatrix::<C64>::identity(d, d);
        (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn chi_examples() {
        let chi = SpinParams::new(1).chi_vector();
        let expect = [0.0, 1.0, 1.0, 0.0];
        for (a, e) in chi.amplitudes.iter().zip(expect) {
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-15);
        }
        let chi2 = SpinParams::new(2).chi_vector();
        // |0,2⟩, |1,1⟩, |2,0⟩ at flat indices 2, 4, 6.
        assert_abs_diff_eq!(chi2.amplitudes[2].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chi2.amplitudes[4].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(chi2.amplitudes[6].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn chi_inverts_brackets() {
        for ell in 1..=6 {
            let p = SpinParams::new(ell);
            let chi = p.chi_vector();
            let d = p.d();
            assert_abs_diff_eq!(chi.amplitudes[ell].re, 1.0, epsilon = 1e-15);
            for m in 0..d {
                let a = chi.amplitudes[m * d + ell - m];
                assert!(a.re > 0.0);
                assert!((a.re * p.qnum(m as i64 + 1) - 1.0).abs() < 1e-14);
            }
            let support = chi.amplitudes.iter().filter(|z| z.norm() > 0.0).count();
            assert_eq!(support, d);
        }
    }

    #[test]
    fn xi_vanishes_at_zero_and_top_label() {
        for ell in 1..=4 {
            let p = SpinParams::new(ell);
            for k in 0..=ell + 1 {
                let xi = p.xi_vector(c(0.0, 0.0), k).unwrap();
                assert!(xi.amplitudes.iter().all(|z| z.norm() == 0.0));
            }
            let top = p.xi_vector(c(1.0, 0.0), ell + 1).unwrap();
            assert!(top.amplitudes.iter().all(|z| z.norm() == 0.0));
        }
        assert!(SpinParams::new(1).xi_vector(c(1.0, 0.0), 3).is_err());
    }

    #[test]
    fn xi_spin_half_direct_evaluation() {
        let p = SpinParams::new(1);
        let q = C64::from_polar(1.0, PI / 3.0);
        let x = 1.0 / 2f64.sqrt();
        let xi = p.xi_vector(c(1.0, 0.0), 0).unwrap();
        for m in 0..2 {
            let bracket = ((m as f64 + 1.0) * PI / 3.0).sin() / (PI / 3.0).sin();
            let expect = -x / bracket.sqrt() * (c(1.0, 0.0) - q.powi(2 * (m as i32 + 1)));
            assert!((xi.amplitudes[m] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn xi_matrix_inverse() {
        let r1 = SpinParams::new(1).xi_matrix(c(0.7, 0.0)).unwrap();
        assert!(r1.inverse_residual() < 1e-12);
        let r3 = SpinParams::new(3).xi_matrix(c(0.3, 0.4)).unwrap();
        assert!(r3.inverse_residual() < 1e-12);
        assert!(SpinParams::new(2).xi_matrix(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn xi_matrix_columns_match_vectors() {
        let p = SpinParams::new(2);
        let y = c(1.1, 0.0);
        let xi = p.xi_matrix(y).unwrap();
        for n in 0..3 {
            let v = p.xi_vector(y, n).unwrap();
            for m in 0..3 {
                assert!((xi.forward[(m, n)] - v.amplitudes[m]).norm() < 1e-15);
            }
        }
    }
}
