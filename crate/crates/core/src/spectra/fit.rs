use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Fermi velocity of the spin-1/2 chain at `Δ = −1/2`.
pub const FERMI_VELOCITY: f64 = 2.598_076_211_353_316; // 3√3/2

/// Which terms of `E(L) = L E_bulk + E_bdr + (π v_F / L)(h − c/24) + b/L²`
/// are fitted. The default is the plain three-parameter form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitModel {
    /// Fix `E_bulk = E_bdr = 0`, as forced by an exact zero-energy ground
    /// state at every length.
    pub pin_nonuniversal: bool,
    /// Add the `b/L²` correction.
    pub quadratic_correction: bool,
}

/// Least-squares estimate of the conformal weight `h` of one level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: FitModel,
    pub e_bulk: f64,
    pub e_bdr: f64,
    pub h: f64,
    /// Coefficient of `L⁻²`, zero unless fitted.
    pub correction: f64,
    /// Standard error of `h` from the fit residuals (zero for an exact fit
    /// or with exactly three points).
    pub h_err: f64,
    pub residual_norm: f64,
    pub condition: f64,
    pub v_f: f64,
    pub c: f64,
    pub points: usize,
}

const MAX_CONDITION: f64 = 1e12;

/// Three-parameter fit in `(L, 1, 1/L)`.
pub fn conformal_fit(series: &[(usize, f64)], v_f: f64, c: f64) -> Result<ScalingFit> {
    conformal_fit_with(series, v_f, c, FitModel::default())
}

pub fn conformal_fit_with(
    series: &[(usize, f64)],
    v_f: f64,
    c: f64,
    model: FitModel,
) -> Result<ScalingFit> {
    if series.len() < 4 {
        return Err(Error::TooFewPoints {
            need: 4,
            got: series.len(),
        });
    }
    let mut design: Vec<fn(f64, f64) -> f64> = Vec::new();
    if !model.pin_nonuniversal {
        design.push(|l, _| l);
        design.push(|_, _| 1.0);
    }
    let h_col = design.len();
    design.push(|l, v| PI * v / l);
    if model.quadratic_correction {
        design.push(|l, _| 1.0 / (l * l));
    }
    let (n, p) = (series.len(), design.len());
    let a = DMatrix::from_fn(n, p, |i, j| design[j](series[i].0 as f64, v_f));
    let b = DVector::from_iterator(n, series.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned { cond: condition });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|_| Error::IllConditioned { cond: condition })?;
    let r = &a * &x - &b;
    let rss = r.norm_squared();
    let h_err = if n > p {
        let sigma2 = rss / (n - p) as f64;
        let cov = (a.transpose() * &a)
            .try_inverse()
            .ok_or(Error::IllConditioned { cond: condition })?;
        (sigma2 * cov[(h_col, h_col)]).max(0.0).sqrt()
    } else {
        0.0
    };
    let (e_bulk, e_bdr) = if model.pin_nonuniversal {
        (0.0, 0.0)
    } else {
        (x[0], x[1])
    };
    Ok(ScalingFit {
        model,
        e_bulk,
        e_bdr,
        h: x[h_col] + c / 24.0,
        correction: if model.quadratic_correction { x[p - 1] } else { 0.0 },
        h_err,
        residual_norm: rss.sqrt(),
        condition,
        v_f,
        c,
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_constant() {
        assert!((FERMI_VELOCITY - 1.5 * 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_series_gives_c_over_24() {
        let s: Vec<_> = [3, 5, 7, 9, 11].iter().map(|&l| (l, 0.0)).collect();
        let f = conformal_fit(&s, FERMI_VELOCITY, 1.0).unwrap();
        assert_eq!(f.h, 1.0 / 24.0);
        assert_eq!(f.e_bulk, 0.0);
        assert_eq!(f.e_bdr, 0.0);
    }

    #[test]
    fn recovers_synthetic_parameters() {
        let (eb, ed, h) = (0.3, -0.1, 0.375);
        let s: Vec<_> = (4..10)
            .map(|l| {
                let lf = l as f64;
                (l, lf * eb + ed + PI * FERMI_VELOCITY / lf * (h - 1.0 / 24.0))
            })
            .collect();
        let f = conformal_fit(&s, FERMI_VELOCITY, 1.0).unwrap();
        assert!((f.e_bulk - eb).abs() < 1e-10);
        assert!((f.e_bdr - ed).abs() < 1e-10);
        assert!((f.h - h).abs() < 1e-10);
    }

    #[test]
    fn pinned_model_with_correction() {
        let model = FitModel {
            pin_nonuniversal: true,
            quadratic_correction: true,
        };
        let s: Vec<_> = (2..8)
            .map(|k| {
                let l = (2 * k + 1) as f64;
                (2 * k + 1, PI * FERMI_VELOCITY / l * (0.375 - 1.0 / 24.0) - 3.4 / (l * l))
            })
            .collect();
        let f = conformal_fit_with(&s, FERMI_VELOCITY, 1.0, model).unwrap();
        assert!((f.h - 0.375).abs() < 1e-12);
        assert!((f.correction + 3.4).abs() < 1e-10);
        assert_eq!((f.e_bulk, f.e_bdr), (0.0, 0.0));
    }

    #[test]
    fn needs_four_points() {
        assert!(conformal_fit(&[(1, 0.0), (2, 0.0), (3, 0.0)], 1.0, 1.0).is_err());
        let same = vec![(5, 1.0); 5];
        assert!(matches!(conformal_fit(&same, 1.0, 1.0), Err(Error::IllConditioned { .. })));
    }
}
