use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `1/(2√3)`, the magnitude of the U(1) charge of every `ℓ = 1` zero-energy state.
pub fn ground_charge() -> f64 {
    1.0 / (2.0 * 3f64.sqrt())
}

/// U(1) charge `J₀ = (1 − 4M)/(2√3)` of an `ℓ = 1` state of magnetisation `M`.
pub fn u1_charge(magnetisation: f64) -> f64 {
    (1.0 - 4.0 * magnetisation) * ground_charge()
}

/// Charges of the two subsystem states, the full state and the cut.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CftCharges {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// `α₃ − α₁ − α₂`.
    pub alpha_c: f64,
    /// `α_c²/2`.
    pub h_c: f64,
    pub central_charge: f64,
}

impl CftCharges {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Self {
        let alpha_c = alpha3 - alpha1 - alpha2;
        CftCharges {
            alpha1,
            alpha2,
            alpha3,
            alpha_c,
            h_c: alpha_c * alpha_c / 2.0,
            central_charge: 1.0,
        }
    }

    /// Zero-energy states of lengths `L₁`, `L₂` and `L₁ + L₂`: magnetisation 0
    /// for even and 1/2 for odd length.
    pub fn for_lengths(l1: usize, l2: usize) -> Self {
        let a = |len: usize| u1_charge(if len % 2 == 0 { 0.0 } else { 0.5 });
        CftCharges::new(a(l1), a(l2), a(l1 + l2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CftPrediction {
    /// `c/8 + h_c`.
    pub leading_coefficient: f64,
    pub f: f64,
    pub g: f64,
    /// `(c/8 + h_c) ln L + f(x) + g(x) ln L / L`.
    pub total: f64,
}

fn f_half(x: f64, a1: f64, a2: f64, a3: f64, ac: f64) -> f64 {
    ((2.0 * x - 1.0 + 2.0 / x) / 24.0 + (1.0 - 1.0 / x) * a1 * a1 + (1.0 - x) * a3 * a3
        - ac * ac / 2.0
        - a2 * a2
        - 2.0 * ac * a2)
        * (1.0 - x).ln()
}

/// Free-boson `f(x)` including the mirrored term `{x → 1−x, α₁ ↔ α₂}`.
pub fn lbf_f(ch: &CftCharges, x: f64, constant: f64) -> f64 {
    f_half(x, ch.alpha1, ch.alpha2, ch.alpha3, ch.alpha_c)
        + f_half(1.0 - x, ch.alpha2, ch.alpha1, ch.alpha3, ch.alpha_c)
        + constant
}

/// `g(x) = ξ/2 (α₃² − 1/12 + (1/12 − α₁²)/x + (1/12 − α₂²)/(1−x))`.
pub fn lbf_g(ch: &CftCharges, x: f64, xi: f64) -> f64 {
    let t = 1.0 / 12.0;
    xi * 0.5
        * (ch.alpha3 * ch.alpha3 - t
            + (t - ch.alpha1 * ch.alpha1) / x
            + (t - ch.alpha2 * ch.alpha2) / (1.0 - x))
}

pub fn cft_prediction(
    ch: &CftCharges,
    x: f64,
    len: f64,
    constant: f64,
    xi: f64,
) -> Result<CftPrediction> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::ScalingVariable(x));
    }
    let leading_coefficient = ch.central_charge / 8.0 + ch.h_c;
    let f = lbf_f(ch, x, constant);
    let g = lbf_g(ch, x, xi);
    Ok(CftPrediction {
        leading_coefficient,
        f,
        g,
        total: leading_coefficient * len.ln() + f + g * len.ln() / len,
    })
}
