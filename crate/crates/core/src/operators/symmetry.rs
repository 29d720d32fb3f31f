use super::{BasisIndex, LinearMap};
use crate::qcore::SpinParams;
use crate::C64;

/// Magnetisation `M|m_1…m_L⟩ = (ℓL/2 − Σ m_i)|m_1…m_L⟩`.
pub fn magnetisation(p: &SpinParams, len: usize) -> LinearMap {
    let idx = BasisIndex::new(p.ell(), len);
    let top = (p.ell() * len) as f64 / 2.0;
    let diag = (0..idx.dim())
        .map(|f| C64::new(top - idx.digit_sum(f) as f64, 0.0))
        .collect();
    LinearMap::diagonal(p.ell(), len, diag).expect("diagonal length")
}

/// `e^{iθM}`.
pub fn charge_rotation(p: &SpinParams, len: usize, theta: f64) -> LinearMap {
    let idx = BasisIndex::new(p.ell(), len);
    let top = (p.ell() * len) as f64 / 2.0;
    let diag = (0..idx.dim())
        .map(|f| C64::from_polar(1.0, theta * (top - idx.digit_sum(f) as f64)))
        .collect();
    LinearMap::diagonal(p.ell(), len, diag).expect("diagonal length")
}

fn permutation(p: &SpinParams, len: usize, f: impl Fn(&[usize]) -> Vec<usize>) -> LinearMap {
    let idx = BasisIndex::new(p.ell(), len);
    let t = (0..idx.dim())
        .map(|c| {
            let r = idx.flat(&f(&idx.digits(c))).expect("permuted digits");
            (r, c, C64::new(1.0, 0.0))
        })
        .collect();
    LinearMap::from_triplets(p.ell(), len, len, t).expect("permutation shape")
}

/// Parity `P|m_1…m_L⟩ = |m_L…m_1⟩`.
pub fn parity(p: &SpinParams, len: usize) -> LinearMap {
    permutation(p, len, |d| d.iter().rev().copied().collect())
}

/// Spin reversal `R|m_1…m_L⟩ = |ℓ−m_1 … ℓ−m_L⟩`.
pub fn spin_reversal(p: &SpinParams, len: usize) -> LinearMap {
    let ell = p.ell();
    permutation(p, len, |d| d.iter().map(|m| ell - m).collect())
}
