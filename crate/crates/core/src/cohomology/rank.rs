use serde::{Deserialize, Serialize};

use crate::operators::LinearMap;

/// Singular-value thresholds, relative to `σ_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTolerance {
    pub cutoff: f64,
    pub band_low: f64,
    pub band_high: f64,
}

impl Default for RankTolerance {
    fn default() -> Self {
        RankTolerance {
            cutoff: 1e-9,
            band_low: 1e-11,
            band_high: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankInfo {
    pub rank: usize,
    pub sigma_max: f64,
    /// Smallest singular value counted in the rank.
    pub sigma_min_kept: f64,
    /// Largest singular value discarded.
    pub sigma_max_dropped: f64,
    /// First singular value found inside the ambiguity band, if any.
    pub indeterminate: Option<f64>,
}

/// Numerical rank by dense SVD.
pub fn numerical_rank(map: &LinearMap, tol: &RankTolerance) -> RankInfo {
    if map.nnz() == 0 {
        return RankInfo {
            rank: 0,
            sigma_max: 0.0,
            sigma_min_kept: 0.0,
            sigma_max_dropped: 0.0,
            indeterminate: None,
        };
    }
    let dense = map.to_dense();
    // singular values of the smaller side are enough
    let sv = if dense.nrows() >= dense.ncols() {
        dense.singular_values()
    } else {
        dense.adjoint().singular_values()
    };
    let sigma_max = sv.max();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut indeterminate = None;
    for &s in sv.iter() {
        let r = s / sigma_max;
        if r > tol.cutoff {
            kept.push(s);
        } else {
            dropped.push(s);
        }
        if indeterminate.is_none() && r >= tol.band_low && r <= tol.band_high {
            indeterminate = Some(s);
        }
    }
    RankInfo {
        rank: kept.len(),
        sigma_max,
        sigma_min_kept: kept.iter().copied().fold(f64::INFINITY, f64::min),
        sigma_max_dropped: dropped.iter().copied().fold(0.0, f64::max),
        indeterminate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn diagonal_ranks() {
        let diag = |v: &[f64]| {
            LinearMap::diagonal(1, 2, v.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
        };
        let tol = RankTolerance::default();
        assert_eq!(numerical_rank(&diag(&[1.0, 2.0, 0.0, 3.0]), &tol).rank, 3);
        let r = numerical_rank(&diag(&[1.0, 1e-8, 0.0, 3.0]), &tol);
        assert!(r.indeterminate.is_some());
        let r = numerical_rank(&diag(&[1.0, 1e-14, 0.0, 3.0]), &tol);
        assert_eq!(r.rank, 2);
        assert!(r.indeterminate.is_none());
        assert_eq!(numerical_rank(&LinearMap::zero(1, 1, 2), &tol).rank, 0);
    }
}
