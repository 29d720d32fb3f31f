use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Deliberate perturbation of one supercharge coefficient. Only used to
/// exercise the failure paths of the identity battery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmkFault {
    pub m: usize,
    pub k: usize,
    pub factor: f64,
}

/// Spin `ℓ/2` together with the root of unity `q = exp(iπ/(ℓ+2))`.
///
/// Every coefficient of the model is a function of `ℓ` alone, so this is the
/// only parameter the scalar layer needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    ell: usize,
    q: C64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fault: Option<AmkFault>,
}

impl SpinParams {
    /// # Panics
    /// If `ell == 0`.
    pub fn new(ell: usize) -> Self {
        assert!(ell >= 1, "spin must be positive (ell >= 1)");
        SpinParams {
            ell,
            q: C64::from_polar(1.0, PI / (ell + 2) as f64),
            fault: None,
        }
    }

    #[doc(hidden)]
    pub fn with_fault(mut self, fault: AmkFault) -> Self {
        self.fault = Some(fault);
        self
    }

    #[doc(hidden)]
    pub fn fault(&self) -> Option<AmkFault> {
        self.fault
    }

    #[inline]
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Local dimension `ℓ + 1`.
    #[inline]
    pub fn d(&self) -> usize {
        self.ell + 1
    }

    #[inline]
    pub fn q(&self) -> C64 {
        self.q
    }

    /// `q^n` for any integer `n`, reduced modulo the order `2(ℓ+2)`.
    pub fn q_pow(&self, n: i64) -> C64 {
        let order = 2 * (self.ell as i64 + 2);
        let r = n.rem_euclid(order);
        C64::from_polar(1.0, PI * r as f64 / (self.ell + 2) as f64)
    }

    /// The q-number `{m} = (q^m − q^{−m})/(q − q^{−1}) = sin(mπ/(ℓ+2))/sin(π/(ℓ+2))`.
    pub fn qnum(&self, m: i64) -> f64 {
        let n = (self.ell + 2) as f64;
        (m as f64 * PI / n).sin() / (PI / n).sin()
    }

    /// `a_{m,k} = sqrt({m+1}/({m−k}{k+1}))` for `0 ≤ k < m ≤ ℓ`.
    pub fn amk(&self, m: usize, k: usize) -> Result<f64> {
        if k >= m || m > self.ell {
            return Err(Error::CoefficientRange {
                ell: self.ell,
                m,
                k,
            });
        }
        let (mi, ki) = (m as i64, k as i64);
        let a = (self.qnum(mi + 1) / (self.qnum(mi - ki) * self.qnum(ki + 1))).sqrt();
        Ok(match self.fault {
            Some(f) if f.m == m && f.k == k => a * f.factor,
            _ => a,
        })
    }

    /// Diagonal boundary coefficient `c_m = Σ_{k=1}^m ({k+1} − {k−1})/(2{k})`.
    pub fn c_coeff(&self, m: usize) -> f64 {
        (1..=m as i64)
            .map(|k| (self.qnum(k + 1) - self.qnum(k - 1)) / (2.0 * self.qnum(k)))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Independent closed forms for the brackets used below.
    fn sine_bracket(ell: usize, m: i64) -> f64 {
        let n = (ell + 2) as f64;
        (m as f64 * PI / n).sin() / (PI / n).sin()
    }

    #[test]
    fn root_of_unity() {
        for ell in 1..=6 {
            let p = SpinParams::new(ell);
            let z = p.q().powi(2 * (ell as i32 + 2));
            assert!((z - C64::new(1.0, 0.0)).norm() < 1e-14);
            assert!((p.q() - C64::from_polar(1.0, PI / (ell + 2) as f64)).norm() < 1e-15);
            assert!((p.q_pow(-3) - p.q().powi(-3)).norm() < 1e-14);
        }
    }

    #[test]
    fn qnum_examples() {
        assert_eq!(SpinParams::new(1).qnum(0), 0.0);
        assert_abs_diff_eq!(SpinParams::new(1).qnum(1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(SpinParams::new(1).qnum(2), sine_bracket(1, 2), epsilon = 1e-15);
        assert_abs_diff_eq!(SpinParams::new(1).qnum(2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(SpinParams::new(2).qnum(2), 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn qnum_matches_complex_definition_and_is_odd() {
        for ell in 1..=5 {
            let p = SpinParams::new(ell);
            let q = p.q();
            for m in -12i64..=12 {
                let direct = (q.powi(m as i32) - q.powi(-m as i32)) / (q - q.inv());
                assert!((direct.re - p.qnum(m)).abs() < 1e-13);
                assert!(direct.im.abs() < 1e-13);
                assert_abs_diff_eq!(p.qnum(-m), -p.qnum(m), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn amk_examples() {
        assert_abs_diff_eq!(SpinParams::new(1).amk(1, 0).unwrap(), 1.0, epsilon = 1e-15);
        // {2} = √2, {1} = 1 at ℓ = 2.
        let l2 = SpinParams::new(2);
        assert_abs_diff_eq!(l2.amk(1, 0).unwrap(), 2f64.powf(0.25), epsilon = 1e-14);
        let expect = (sine_bracket(2, 3) / (sine_bracket(2, 1) * sine_bracket(2, 2))).sqrt();
        assert_abs_diff_eq!(l2.amk(2, 1).unwrap(), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(l2.amk(2, 1).unwrap(), 0.840_896_415_253_714_6, epsilon = 1e-12);
    }

    #[test]
    fn amk_rejects_out_of_range() {
        let p = SpinParams::new(2);
        assert!(p.amk(1, 1).is_err());
        assert!(p.amk(3, 0).is_err());
        assert!(p.amk(0, 0).is_err());
    }

    #[test]
    fn amk_positive_and_symmetric() {
        for ell in 1..=6 {
            let p = SpinParams::new(ell);
            for m in 1..=ell {
                for k in 0..m {
                    let a = p.amk(m, k).unwrap();
                    assert!(a > 0.0);
                    assert_abs_diff_eq!(a, p.amk(m, m - 1 - k).unwrap(), epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn c_coeff_matches_squared_columns() {
        for ell in 1..=6 {
            let p = SpinParams::new(ell);
            for m in 1..=ell {
                let col: f64 = (0..m).map(|k| p.amk(m, k).unwrap().powi(2)).sum();
                assert_abs_diff_eq!(col, 2.0 * p.c_coeff(m), epsilon = 1e-12);
            }
            assert_abs_diff_eq!(p.c_coeff(ell + 1), 0.0, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(SpinParams::new(1).c_coeff(1), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fault_scales_one_coefficient() {
        let p = SpinParams::new(2).with_fault(AmkFault { m: 2, k: 0, factor: 2.0 });
        let clean = SpinParams::new(2);
        assert_abs_diff_eq!(p.amk(2, 0).unwrap(), 2.0 * clean.amk(2, 0).unwrap());
        assert_abs_diff_eq!(p.amk(2, 1).unwrap(), clean.amk(2, 1).unwrap());
    }
}
