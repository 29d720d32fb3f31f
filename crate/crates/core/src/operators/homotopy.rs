use super::{BasisIndex, LinearMap};
use crate::qcore::SpinParams;
use crate::{Error, Result, C64};

/// The contracting homotopy `s_j: V^L → V^{L−1}`.
///
/// Writing `ψ = Σ_m ξ_m(y) ⊗ ψ_m` in the basis `ξ_0(y), …, ξ_ℓ(y)` of the
/// first site, `s_j ψ = ψ_j`; `s_{ℓ+1} = −Σ_{j≤ℓ} s_j`.
pub fn homotopy_s(p: &SpinParams, y: C64, j: usize, len: usize) -> Result<LinearMap> {
    if len < 2 {
        return Err(Error::LengthTooShort { len, min: 2 });
    }
    if j > p.ell() + 1 {
        return Err(Error::LabelRange {
            label: j,
            max: p.ell() + 1,
        });
    }
    let inv = p.xi_matrix(y)?.inverse;
    let d = p.d();
    let row: Vec<C64> = if j <= p.ell() {
        (0..d).map(|m| inv[(j, m)]).collect()
    } else {
        (0..d).map(|m| -(0..d).map(|n| inv[(n, m)]).sum::<C64>()).collect()
    };
    let rest = BasisIndex::new(p.ell(), len - 1).dim();
    LinearMap::from_columns(p.ell(), len, len - 1, |col| {
        let (m, r) = (col / rest, col % rest);
        if row[m] == C64::new(0.0, 0.0) {
            Vec::new()
        } else {
            vec![(r, row[m])]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{global_supercharge, StateVector, SuperchargeSpec};

    #[test]
    fn dual_basis_property() {
        let p = SpinParams::new(2);
        let y = C64::new(0.9, -0.4);
        let psi = StateVector::from_amplitudes(
            2,
            2,
            (0..9).map(|i| C64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.05)).collect(),
        )
        .unwrap();
        for m in 0..=2 {
            let xi = p.xi_vector(y, m).unwrap();
            let xi = StateVector::from_amplitudes(2, 1, xi.amplitudes).unwrap();
            let v = xi.tensor(&psi).unwrap();
            for j in 0..=2 {
                let s = homotopy_s(&p, y, j, 3).unwrap().apply(&v).unwrap();
                let want = if j == m { psi.clone() } else { StateVector::zeros(2, 2) };
                assert!(s.sub(&want).unwrap().max_abs() < 1e-12, "j={j} m={m}");
            }
        }
    }

    #[test]
    fn homotopy_identity() {
        let p = SpinParams::new(1);
        let y = C64::new(0.6, 0.0);
        let len = 4;
        let spec = SuperchargeSpec::new(1, len).with_y(y).with_labels(0, 2);
        let q_here = global_supercharge(&spec).unwrap();
        let q_below = global_supercharge(&spec.with_len(len - 1)).unwrap();
        let s_here = homotopy_s(&p, y, 0, len).unwrap();
        let s_above = homotopy_s(&p, y, 0, len + 1).unwrap();
        let lhs = s_above
            .compose(&q_here)
            .unwrap()
            .add(&q_below.compose(&s_here).unwrap())
            .unwrap();
        let err = lhs.max_abs_diff(&LinearMap::identity(1, len)).unwrap();
        assert!(err < 1e-11, "residual {err}");
    }

    #[test]
    fn rejects_zero_y() {
        let p = SpinParams::new(1);
        assert!(homotopy_s(&p, C64::new(0.0, 0.0), 0, 3).is_err());
    }
}
