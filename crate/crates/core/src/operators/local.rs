use super::LinearMap;
use crate::qcore::SpinParams;
use crate::{Result, C64};

/// The local supercharge `q: V → V²`, `q|m⟩ = Σ_{k<m} a_{m,k} |k, m−k−1⟩`.
pub fn local_supercharge(p: &SpinParams) -> Result<LinearMap> {
    let d = p.d();
    let mut t = Vec::new();
    for m in 1..d {
        for k in 0..m {
            t.push((k * d + (m - k - 1), m, C64::new(p.amk(m, k)?, 0.0)));
        }
    }
    LinearMap::from_triplets(p.ell(), 1, 2, t)
}

/// The spin-reversed supercharge `q̄ = R q R`,
/// `q̄|m⟩ = Σ_{k>m} a_{ℓ−m,ℓ−k} |k, ℓ+1+m−k⟩`.
pub fn local_supercharge_bar(p: &SpinParams) -> Result<LinearMap> {
    let ell = p.ell();
    let d = p.d();
    let mut t = Vec::new();
    for m in 0..ell {
        for k in m + 1..=ell {
            t.push((k * d + (ell + 1 + m - k), m, C64::new(p.amk(ell - m, ell - k)?, 0.0)));
        }
    }
    LinearMap::from_triplets(ell, 1, 2, t)
}

/// Gauge supercharge `q_φ ψ = φ⊗ψ + ψ⊗φ` for a single-site vector `φ`.
pub fn gauge_supercharge(p: &SpinParams, phi: &[C64]) -> Result<LinearMap> {
    let d = p.d();
    assert_eq!(phi.len(), d, "gauge vector must live on one site");
    let mut t = Vec::with_capacity(2 * d * d);
    for m in 0..d {
        for a in 0..d {
            t.push((a * d + m, m, phi[a]));
            t.push((m * d + a, m, phi[a]));
        }
    }
    LinearMap::from_triplets(p.ell(), 1, 2, t)
}

/// The deformed local supercharge `q(y) = x(q + y^{ℓ+2} q̄ + q_{φ(y)})`.
///
/// At `y = 0` this is exactly [`local_supercharge`].
pub fn local_supercharge_deformed(p: &SpinParams, y: C64) -> Result<LinearMap> {
    let q = local_supercharge(p)?;
    if y == C64::new(0.0, 0.0) {
        return Ok(q);
    }
    let x = C64::new(p.normaliser(y), 0.0);
    let bar = local_supercharge_bar(p)?.scale(y.powu(p.ell() as u32 + 2));
    let gauge = gauge_supercharge(p, &p.phi_vector(y).amplitudes)?;
    Ok(q.add(&bar)?.add(&gauge)?.scale(x))
}

/// Columns of a one-site map as `(output index, value)` lists, the form used
/// when scattering local images into a chain.
pub(crate) fn columns(map: &LinearMap) -> Vec<Vec<(usize, C64)>> {
    let mut cols = vec![Vec::new(); map.cols()];
    for (r, c, v) in map.triplets() {
        cols[c].push((r, v));
    }
    cols
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn spin_half_supercharge() {
        let p = SpinParams::new(1);
        let q = local_supercharge(&p).unwrap();
        assert_eq!(q.nnz(), 1);
        assert!((q.get(0, 1) - c(1.0)).norm() < 1e-15);
        let bar = local_supercharge_bar(&p).unwrap();
        assert_eq!(bar.nnz(), 1);
        assert!((bar.get(3, 0) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_one_supports() {
        let p = SpinParams::new(2);
        let q = local_supercharge(&p).unwrap();
        // q|2⟩ on |0,1⟩ and |1,0⟩ with equal weight
        assert!(q.get(1, 2).norm() > 0.0);
        assert!((q.get(1, 2) - q.get(3, 2)).norm() < 1e-15);
        let col2: Vec<_> = (0..9).filter(|&r| q.get(r, 2).norm() > 0.0).collect();
        assert_eq!(col2, vec![1, 3]);
        let bar = local_supercharge_bar(&p).unwrap();
        let col0: Vec<_> = (0..9).filter(|&r| bar.get(r, 0).norm() > 0.0).collect();
        // |1,2⟩ = 5, |2,1⟩ = 7
        assert_eq!(col0, vec![5, 7]);
    }

    #[test]
    fn column_weights_are_twice_c() {
        for ell in 1..=6 {
            let p = SpinParams::new(ell);
            let q = local_supercharge(&p).unwrap();
            let cols = columns(&q);
            for m in 0..=ell {
                let w: f64 = cols[m].iter().map(|(_, v)| v.norm_sqr()).sum();
                assert!((w - 2.0 * p.c_coeff(m)).abs() < 1e-13, "ell={ell} m={m}");
            }
        }
    }

    #[test]
    fn spin_half_deformed_action() {
        let p = SpinParams::new(1);
        let y: f64 = 0.7;
        let x = 1.0 / (1.0 + y.powi(6)).sqrt();
        let qy = local_supercharge_deformed(&p, c(y)).unwrap();
        // q(y)|0⟩ = x(−2y|00⟩ + y³|11⟩ − y²(|01⟩+|10⟩))
        let col0 = [-2.0 * y, -y * y, -y * y, y.powi(3)];
        // q(y)|1⟩ = x(|00⟩ − 2y²|11⟩ − y(|01⟩+|10⟩))
        let col1 = [1.0, -y, -y, -2.0 * y * y];
        for r in 0..4 {
            assert!((qy.get(r, 0) - c(x * col0[r])).norm() < 1e-15);
            assert!((qy.get(r, 1) - c(x * col1[r])).norm() < 1e-15);
        }
    }

    #[test]
    fn undeformed_at_zero() {
        let p = SpinParams::new(3);
        let a = local_supercharge_deformed(&p, C64::new(0.0, 0.0)).unwrap();
        assert_eq!(a, local_supercharge(&p).unwrap());
    }
}
