use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::cft::{cft_prediction, CftCharges, CftPrediction};
use super::conjecture::ln_conjectured_component;
use super::overlap::{overlap_direct, OverlapKind};
use super::GroundStateCache;
#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use crate::qcore::{asymptotic_constants, LogSequences};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LbfMode {
    /// Overlap contracted from computed zero-energy states.
    Measured,
    /// Overlap from the sum rule with the conjectured closed-form components.
    Conjectured,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LbfResult {
    pub l1: usize,
    pub l2: usize,
    pub len: usize,
    pub x: f64,
    pub mode: LbfMode,
    /// `−ln |Z(L₁, L₂)|²`.
    pub fidelity: f64,
    pub prediction: CftPrediction,
    /// The non-universal constant used, `−2 ln C₂`.
    pub constant: f64,
    /// `fidelity − prediction.total`.
    pub deviation: f64,
}

/// The constant `C = −2 ln C₂` that aligns the CFT form with the lattice.
pub fn lattice_constant() -> f64 {
    -2.0 * asymptotic_constants().1.ln()
}

fn check_parts(l1: usize, l2: usize) -> Result<()> {
    if l1 == 0 || l2 == 0 {
        return Err(Error::Partition("both parts must be non-empty".into()));
    }
    if l1 % 2 == 1 && l2 % 2 == 1 {
        return Err(Error::VanishingOverlap);
    }
    Ok(())
}

fn finish(l1: usize, l2: usize, mode: LbfMode, fidelity: f64) -> Result<LbfResult> {
    let len = l1 + l2;
    let x = l1 as f64 / len as f64;
    let constant = lattice_constant();
    // g vanishes for these charges, so the extrapolation length is immaterial
    let prediction = cft_prediction(&CftCharges::for_lengths(l1, l2), x, len as f64, constant, 1.0)?;
    Ok(LbfResult {
        l1,
        l2,
        len,
        x,
        mode,
        fidelity,
        prediction,
        constant,
        deviation: fidelity - prediction.total,
    })
}

/// Fidelity from the `ℓ = 1` zero-energy states themselves.
pub fn lbf_measured(l1: usize, l2: usize, cache: &GroundStateCache) -> Result<LbfResult> {
    check_parts(l1, l2)?;
    let z = overlap_direct(OverlapKind::Z, 1, &[l1, l2], cache)?;
    finish(l1, l2, LbfMode::Measured, -z.norm_sqr().ln())
}

/// Fidelity from the conjectured components; `seqs` must reach
/// `n = ⌊(L₁+L₂)/2⌋ + 1`.
pub fn lbf_conjectured(l1: usize, l2: usize, seqs: &LogSequences) -> Result<LbfResult> {
    check_parts(l1, l2)?;
    let ln_z = ln_conjectured_component(l1, seqs) + ln_conjectured_component(l2, seqs)
        - ln_conjectured_component(l1 + l2, seqs);
    finish(l1, l2, LbfMode::Conjectured, -2.0 * ln_z)
}

pub fn lbf(l1: usize, l2: usize, mode: LbfMode) -> Result<LbfResult> {
    match mode {
        LbfMode::Measured => lbf_measured(l1, l2, &GroundStateCache::new()),
        LbfMode::Conjectured => {
            lbf_conjectured(l1, l2, &LogSequences::new(((l1 + l2) / 2 + 1) as u64))
        }
    }
}

/// Fidelity over cuts `L₁ = 1, …, L−1` of one chain, thinned to about
/// `steps` evenly spaced cuts. Cuts with two odd parts are skipped.
pub fn fidelity_scan(len: usize, steps: usize, mode: LbfMode) -> Result<Vec<LbfResult>> {
    if len < 2 {
        return Err(Error::LengthTooShort { len, min: 2 });
    }
    let stride = ((len - 1) / steps.max(1)).max(1);
    let cuts: Vec<usize> = (1..len)
        .step_by(stride)
        .filter(|l1| l1 % 2 == 0 || (len - l1) % 2 == 0)
        .collect();
    match mode {
        LbfMode::Conjectured => {
            let seqs = LogSequences::new((len / 2 + 1) as u64);
            maybe_par_iter!(cuts)
                .map(|l1| lbf_conjectured(l1, len - l1, &seqs))
                .collect()
        }
        LbfMode::Measured => {
            let cache = GroundStateCache::new();
            cuts.iter().map(|&l1| lbf_measured(l1, len - l1, &cache)).collect()
        }
    }
}

/// Least-squares fit of `F(L/2, L/2) − prediction` to
/// `g ln L/L + b/L + c/L²` in conjectured mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubleadingFit {
    pub lens: Vec<usize>,
    pub log_coefficient: f64,
    pub inverse_coefficient: f64,
    pub inverse_square_coefficient: f64,
    pub residual_norm: f64,
}

/// `lens` must be multiples of 4, so that both halves are even.
pub fn subleading_fit(lens: &[usize]) -> Result<SubleadingFit> {
    if lens.len() < 4 {
        return Err(Error::TooFewPoints { need: 4, got: lens.len() });
    }
    if let Some(&bad) = lens.iter().find(|&&l| l % 4 != 0) {
        return Err(Error::Partition(format!("L = {bad} is not a multiple of 4")));
    }
    let top = *lens.iter().max().expect("non-empty");
    let seqs = LogSequences::new((top / 2 + 1) as u64);
    let devs: Vec<f64> = lens
        .iter()
        .map(|&l| lbf_conjectured(l / 2, l / 2, &seqs).map(|r| r.deviation))
        .collect::<Result<_>>()?;
    let a = DMatrix::from_fn(lens.len(), 3, |i, j| {
        let l = lens[i] as f64;
        match j {
            0 => l.ln() / l,
            1 => 1.0 / l,
            _ => 1.0 / (l * l),
        }
    });
    let b = DVector::from_vec(devs);
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Format(e.to_string()))?;
    let residual_norm = (&a * &sol - &b).norm();
    Ok(SubleadingFit {
        lens: lens.to_vec(),
        log_coefficient: sol[0],
        inverse_coefficient: sol[1],
        inverse_square_coefficient: sol[2],
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measured_equals_conjectured_small() {
        let cache = GroundStateCache::new();
        let seqs = LogSequences::new(8);
        for (l1, l2) in [(2, 2), (2, 3), (3, 2), (4, 4), (1, 6)] {
            let m = lbf_measured(l1, l2, &cache).unwrap();
            let c = lbf_conjectured(l1, l2, &seqs).unwrap();
            assert!((m.fidelity - c.fidelity).abs() < 1e-10, "{m:?} {c:?}");
        }
        assert!(matches!(lbf_measured(1, 3, &cache), Err(Error::VanishingOverlap)));
    }

    #[test]
    fn symmetric_cut_converges() {
        let r = lbf(1000, 1000, LbfMode::Conjectured).unwrap();
        assert!(r.deviation.abs() < 1e-3, "{r:?}");
        let r = lbf(1000, 1001, LbfMode::Conjectured).unwrap();
        assert!(r.deviation.abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn scan_rows() {
        let rows = fidelity_scan(41, 10, LbfMode::Conjectured).unwrap();
        assert!(rows.len() >= 8 && rows.iter().all(|r| r.len == 41));
    }
}
