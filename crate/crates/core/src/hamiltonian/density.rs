use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::operators::{local_supercharge_deformed, LinearMap};
use crate::qcore::SpinParams;
use crate::{Result, C64};

/// Density of `q(y)`; see [`density_of`].
pub fn density_from_supercharge(p: &SpinParams, y: C64) -> Result<LinearMap> {
    density_of(&local_supercharge_deformed(p, y)?)
}

/// Two-site density of a local supercharge `q: V → V²`,
/// `h = −(1⊗q†)(q⊗1) − (q†⊗1)(1⊗q) + q q† + ½(q†q ⊗ 1 + 1 ⊗ q†q)`.
pub fn density_of(q: &LinearMap) -> Result<LinearMap> {
    let ell = q.ell();
    let qd = q.adjoint();
    let one = LinearMap::identity(ell, 1);
    let half = C64::new(0.5, 0.0);
    let hop_r = one.kron(&qd)?.compose(&q.kron(&one)?)?;
    let hop_l = qd.kron(&one)?.compose(&one.kron(q)?)?;
    let qqd = q.compose(&qd)?;
    let qdq = qd.compose(&q)?;
    let onsite = qdq.kron(&one)?.add(&one.kron(&qdq)?)?.scale(half);
    qqd.add(&onsite)?.sub(&hop_r)?.sub(&hop_l)
}

/// Coefficients of the explicit density
/// `h = Σ_{m₁,m₂} Σ_n β^n_{m₁,m₂} |m₁+n, m₂−n⟩⟨m₁, m₂|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCoeffs {
    pub ell: usize,
    /// `(m₁, m₂, n, β^n_{m₁,m₂})` for every nonzero coefficient.
    pub beta: Vec<(usize, usize, i64, f64)>,
    /// `c_0, …, c_{ℓ+1}`.
    pub c: Vec<f64>,
}

impl DensityCoeffs {
    pub fn new(p: &SpinParams) -> Self {
        let ell = p.ell();
        let c: Vec<f64> = (0..=ell + 1).map(|m| p.c_coeff(m)).collect();
        let mut beta = Vec::new();
        for m1 in 0..=ell {
            for m2 in 0..=ell {
                let (b1, b2) = bounds(ell, m1, m2);
                for n in -(b1 as i64)..=(b2 as i64) {
                    beta.push((m1, m2, n, beta_value(p, &c, m1, m2, n)));
                }
            }
        }
        DensityCoeffs { ell, beta, c }
    }

    pub fn beta(&self, m1: usize, m2: usize, n: i64) -> f64 {
        self.beta
            .iter()
            .find(|e| e.0 == m1 && e.1 == m2 && e.2 == n)
            .map_or(0.0, |e| e.3)
    }
}

// M₁ = min(m₁, ℓ−m₂), M₂ = min(m₂, ℓ−m₁)
fn bounds(ell: usize, m1: usize, m2: usize) -> (usize, usize) {
    (m1.min(ell - m2), m2.min(ell - m1))
}

fn beta_value(p: &SpinParams, c: &[f64], m1: usize, m2: usize, n: i64) -> f64 {
    if n < 0 {
        return beta_value(p, c, m2, m1, -n);
    }
    let (b1, b2) = bounds(p.ell(), m1, m2);
    let (b1, b2) = (b1 as i64, b2 as i64);
    if n == 0 {
        return c[b1 as usize + 1] + c[b2 as usize + 1];
    }
    let num = p.qnum(b1 + 1) * p.qnum(b2 - n + 1);
    let den = p.qnum(b2 + 1) * p.qnum(b1 + n + 1);
    -(num / den).sqrt() / p.qnum(n)
}

/// β coefficients for one spin, computed once and shared.
pub fn density_coeffs(ell: usize) -> Arc<DensityCoeffs> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DensityCoeffs>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(ell)
        .or_insert_with(|| Arc::new(DensityCoeffs::new(&SpinParams::new(ell))))
        .clone()
}

/// The density assembled directly from the β coefficients.
pub fn density_explicit(p: &SpinParams) -> LinearMap {
    let coeffs = density_coeffs(p.ell());
    let d = p.d();
    let t = coeffs
        .beta
        .iter()
        .map(|&(m1, m2, n, b)| {
            let r1 = (m1 as i64 + n) as usize;
            let r2 = (m2 as i64 - n) as usize;
            (r1 * d + r2, m1 * d + m2, C64::new(b, 0.0))
        })
        .collect();
    LinearMap::from_triplets(p.ell(), 2, 2, t).expect("density shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{parity, spin_reversal};

    #[test]
    fn explicit_matches_supercharge_path() {
        for ell in 1..=4 {
            let p = SpinParams::new(ell);
            let a = density_explicit(&p);
            let b = density_from_supercharge(&p, C64::new(0.0, 0.0)).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-13, "ell={ell}");
        }
    }

    #[test]
    fn independent_of_y() {
        let p = SpinParams::new(2);
        let h0 = density_from_supercharge(&p, C64::new(0.0, 0.0)).unwrap();
        for y in [C64::new(0.4, 0.3), C64::new(-1.2, 0.0), C64::new(0.0, 1.7)] {
            let hy = density_from_supercharge(&p, y).unwrap();
            assert!(hy.max_abs_diff(&h0).unwrap() < 1e-12);
        }
    }

    #[test]
    fn beta_symmetry() {
        for ell in 1..=5 {
            let c = density_coeffs(ell);
            for &(m1, m2, n, b) in &c.beta {
                assert!((b - c.beta(m2, m1, -n)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn alternating_diagonal_is_c1() {
        for ell in 1..=5 {
            let p = SpinParams::new(ell);
            let h = density_explicit(&p);
            let i = ell; // |0, ℓ⟩
            assert!((h.get(i, i).re - p.qnum(2) / 2.0).abs() < 1e-14);
            assert!((h.get(i, i).re - p.c_coeff(1)).abs() < 1e-14);
        }
    }

    #[test]
    fn parity_and_reversal_invariant() {
        for ell in 1..=3 {
            let p = SpinParams::new(ell);
            let h = density_explicit(&p);
            let (pp, rr) = (parity(&p, 2), spin_reversal(&p, 2));
            assert!(pp.compose(&h).unwrap().compose(&pp).unwrap().max_abs_diff(&h).unwrap() < 1e-14);
            assert!(rr.compose(&h).unwrap().compose(&rr).unwrap().max_abs_diff(&h).unwrap() < 1e-14);
        }
    }
}
