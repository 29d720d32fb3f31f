use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::GroundStateCache;
use crate::qcore::{asymptotic_constants, seq_av, seq_n8, LogSequences};
use crate::{Error, Result};

/// `ln(3^{3/4}/2)`, the per-site decay rate of the normalized components.
pub fn ln_decay_rate() -> f64 {
    0.75 * 3f64.ln() - std::f64::consts::LN_2
}

/// Conjectured `(ψ_L)_{0101…}/‖ψ_L‖` for `ℓ = 1`, from the exact integers:
/// `sqrt(N_8(2n)/A_V(2n+1))` for `L = 2n−1`, `sqrt(A_V(2n+1)/N_8(2n+2))` for
/// `L = 2n`.
pub fn conjectured_component(len: usize) -> Result<f64> {
    if len == 0 {
        return Err(Error::LengthTooShort { len, min: 1 });
    }
    let n = len.div_ceil(2) as u64;
    let (num, den) = if len % 2 == 1 {
        (seq_n8(n).value, seq_av(n).value)
    } else {
        (seq_av(n).value, seq_n8(n + 1).value)
    };
    let ratio = BigRational::new(num, den).to_f64().expect("finite ratio");
    Ok(ratio.sqrt())
}

/// Logarithm of [`conjectured_component`] from tabulated logarithms, for
/// sizes far beyond exact integers. `seqs` must reach `n = ⌊L/2⌋ + 1`.
pub fn ln_conjectured_component(len: usize, seqs: &LogSequences) -> f64 {
    assert!(len >= 1, "length must be positive");
    let n = len.div_ceil(2) as u64;
    if len % 2 == 1 {
        0.5 * (seqs.ln_n8(n) - seqs.ln_av(n))
    } else {
        0.5 * (seqs.ln_av(n) - seqs.ln_n8(n + 1))
    }
}

/// Leading large-size form `C₁(2n)^{1/12}(3^{3/4}/2)^{−2n}` (`L = 2n−1`) or
/// `C₂(2n)^{−1/12}(3^{3/4}/2)^{−2n}` (`L = 2n`), in logarithms.
pub fn ln_component_asymptotics(len: usize) -> f64 {
    assert!(len >= 1, "length must be positive");
    let (c1, c2) = asymptotic_constants();
    let two_n = (2 * len.div_ceil(2)) as f64;
    let (c, power) = if len % 2 == 1 {
        (c1, 1.0 / 12.0)
    } else {
        (c2, -1.0 / 12.0)
    };
    c.ln() + power * two_n.ln() - two_n * ln_decay_rate()
}

pub fn component_asymptotics(len: usize) -> f64 {
    ln_component_asymptotics(len).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub len: usize,
    pub predicted: f64,
    pub measured: f64,
    pub residual: f64,
}

/// Compares the measured normalized component of the `ℓ = 1` zero-energy
/// state with the conjectured closed form.
pub fn component_conjecture(len: usize, cache: &GroundStateCache) -> Result<ComponentCheck> {
    let predicted = conjectured_component(len)?;
    let measured = cache.normalized_component(1, len)?;
    Ok(ComponentCheck {
        len,
        predicted,
        measured,
        residual: (predicted - measured).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCheck {
    pub len: usize,
    pub ln_exact: f64,
    pub ln_asymptotic: f64,
    /// exact / asymptotic.
    pub ratio: f64,
}

pub fn asymptotic_ratio(len: usize, seqs: &LogSequences) -> AsymptoticCheck {
    let ln_exact = ln_conjectured_component(len, seqs);
    let ln_asymptotic = ln_component_asymptotics(len);
    AsymptoticCheck {
        len,
        ln_exact,
        ln_asymptotic,
        ratio: (ln_exact - ln_asymptotic).exp(),
    }
}
