use serde::{Deserialize, Serialize};

use super::rank::{numerical_rank, RankInfo, RankTolerance};
use crate::operators::{global_supercharge, BasisIndex, SuperchargeSpec};
use crate::{Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BettiRow {
    pub len: usize,
    pub dim: usize,
    /// `dim ker{Q: V^L → V^{L+1}}`.
    pub dim_kernel: usize,
    /// `rank{Q: V^{L−1} → V^L}`. For `L = 1` the complex is augmented by
    /// `V^0 = ℂ → V`, `1 ↦ ξ_j − ξ_k`, whose image always lies in the kernel
    /// of `Q: V → V²`; it vanishes for `j = k` and at `y = 0`.
    pub incoming_rank: usize,
    pub betti: i64,
    /// Set when a singular value of either map fell in the ambiguity band.
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub ell: usize,
    pub y: C64,
    pub j: usize,
    pub k: usize,
    pub tolerance: RankTolerance,
    pub rows: Vec<BettiRow>,
    /// `Σ_L (−1)^L betti(L)` over the computed range.
    pub euler_betti: i64,
    /// `Σ_L (−1)^L dim V^L` over the same range.
    pub euler_dims: i64,
}

impl CohomologyReport {
    pub fn any_indeterminate(&self) -> bool {
        self.rows.iter().any(|r| r.indeterminate)
    }

    pub fn betti(&self, len: usize) -> Option<i64> {
        self.rows.iter().find(|r| r.len == len).map(|r| r.betti)
    }
}

/// Betti numbers of the complex `V → V² → V³ → …` for `L = 1..=l_max`
/// with the supercharges of `spec` (its length field is ignored).
pub fn betti_numbers(spec: &SuperchargeSpec, l_max: usize) -> Result<CohomologyReport> {
    betti_numbers_with(spec, l_max, &RankTolerance::default())
}

pub fn betti_numbers_with(
    spec: &SuperchargeSpec,
    l_max: usize,
    tol: &RankTolerance,
) -> Result<CohomologyReport> {
    let ranks: Vec<RankInfo> = (1..=l_max)
        .map(|len| Ok(numerical_rank(&global_supercharge(&spec.with_len(len))?, tol)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(l_max);
    let (mut euler_betti, mut euler_dims) = (0i64, 0i64);
    for len in 1..=l_max {
        let dim = BasisIndex::new(spec.ell, len).dim();
        let out = &ranks[len - 1];
        let dim_kernel = dim - out.rank;
        let (incoming_rank, inc_flag) = if len == 1 {
            augmentation_rank(spec, out.sigma_max.max(1.0), tol)?
        } else {
            let r = &ranks[len - 2];
            (r.rank, r.indeterminate.is_some())
        };
        let betti = dim_kernel as i64 - incoming_rank as i64;
        let sign = if len % 2 == 0 { 1 } else { -1 };
        euler_betti += sign * betti;
        euler_dims += sign * dim as i64;
        rows.push(BettiRow {
            len,
            dim,
            dim_kernel,
            incoming_rank,
            betti,
            indeterminate: inc_flag || out.indeterminate.is_some(),
        });
    }
    Ok(CohomologyReport {
        ell: spec.ell,
        y: spec.y,
        j: spec.j,
        k: spec.k,
        tolerance: *tol,
        rows,
        euler_betti,
        euler_dims,
    })
}

fn augmentation_rank(
    spec: &SuperchargeSpec,
    scale: f64,
    tol: &RankTolerance,
) -> Result<(usize, bool)> {
    let p = spec.params();
    let a = p.xi_vector(spec.y, spec.j)?.amplitudes;
    let b = p.xi_vector(spec.y, spec.k)?.amplitudes;
    let n = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let rel = n / scale;
    Ok((
        (rel > tol.cutoff) as usize,
        rel > tol.band_low && rel < tol.band_high,
    ))
}
