use crate::operators::{local_supercharge_deformed, LinearMap};
use crate::qcore::SpinParams;
use crate::{Error, Result, C64};

/// `h_B^{(label)}(y) = ½ q(y')† q(y')` with `y' = q^{2(label+1)} y`; the label
/// `ℓ+1` gives the undecorated `h_B(y)`.
pub fn boundary_term(p: &SpinParams, y: C64, label: usize) -> Result<LinearMap> {
    if label > p.ell() + 1 {
        return Err(Error::LabelRange {
            label,
            max: p.ell() + 1,
        });
    }
    let shifted = if label == p.ell() + 1 {
        y
    } else {
        p.q_pow(2 * (label as i64 + 1)) * y
    };
    let q = local_supercharge_deformed(p, shifted)?;
    Ok(q.adjoint().compose(&q)?.scale(C64::new(0.5, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_at_zero() {
        for ell in 1..=5 {
            let p = SpinParams::new(ell);
            let hb = boundary_term(&p, C64::new(0.0, 0.0), ell + 1).unwrap();
            for m in 0..=ell {
                assert!((hb.get(m, m).re - p.c_coeff(m)).abs() < 1e-14);
                for n in 0..=ell {
                    if n != m {
                        assert_eq!(hb.get(m, n), C64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn spin_half_pauli_coefficients() {
        let p = SpinParams::new(1);
        for &(rho, theta) in &[(0.3, 0.1), (1.0, 2.0), (1.7, -0.8)] {
            let y = C64::from_polar(rho, theta);
            let hb = boundary_term(&p, y, 2).unwrap();
            let (r2, r4) = (rho * rho, rho.powi(4));
            let id = (1.0 + 5.0 * r2 + r4) / (4.0 * (1.0 - r2 + r4));
            let l1 = -rho * theta.cos() / (1.0 + r2);
            let l2 = -rho * theta.sin() / (1.0 + r2);
            let l3 = -(1.0 - r2) / (4.0 * (1.0 + r2));
            // id + λ₁σ¹ + λ₂σ² + λ₃σ³ in the basis |0⟩ = (1, 0)
            let want = [
                [C64::new(id + l3, 0.0), C64::new(l1, -l2)],
                [C64::new(l1, l2), C64::new(id - l3, 0.0)],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    assert!((hb.get(r, c) - want[r][c]).norm() < 1e-12, "rho={rho}");
                }
            }
        }
    }

    #[test]
    fn label_is_a_rotation_of_y() {
        let p = SpinParams::new(2);
        let y = C64::new(0.5, 0.8);
        for k in 0..=3 {
            let a = boundary_term(&p, y, k).unwrap();
            let b = boundary_term(&p, p.q_pow(2 * (k as i64 + 1)) * y, 3).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        }
    }
}
