#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceName {
    /// Vertically-symmetric alternating sign matrices, `A_V(2n+1)`.
    AV,
    /// Cyclically-symmetric self-complementary plane partitions, `N_8(2n)`.
    N8,
}

/// An exact sequence value. The integer is serialised as a decimal string so
/// that JSON consumers never truncate it to 64 bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceValue {
    pub name: SequenceName,
    /// The sequence argument (`2n+1` for `A_V`, `2n` for `N_8`).
    pub argument: u64,
    #[serde(serialize_with = "as_decimal")]
    pub value: BigInt,
    pub ln_value: f64,
}

fn as_decimal<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn range_product(lo: u64, hi: u64) -> BigUint {
    (lo..=hi).fold(BigUint::one(), |acc, i| acc * i)
}

fn ln_range(lo: u64, hi: u64) -> f64 {
    (lo..=hi).map(|i| (i as f64).ln()).sum()
}

// k-th factor of A_V: (6k−2)!(2k−1)!/((4k−1)!(4k−2)!), k ≥ 1.
fn av_factor(k: u64) -> BigRational {
    BigRational::new(
        range_product(4 * k, 6 * k - 2).into(),
        range_product(2 * k, 4 * k - 2).into(),
    )
}

fn ln_av_factor(k: u64) -> f64 {
    ln_range(4 * k, 6 * k - 2) - ln_range(2 * k, 4 * k - 2)
}

// k-th factor of N_8: (3k+1)(6k)!(2k)!/((4k)!(4k+1)!), k ≥ 0.
fn n8_factor(k: u64) -> BigRational {
    let num = range_product(4 * k + 2, 6 * k) * (3 * k + 1);
    BigRational::new(num.into(), range_product(2 * k + 1, 4 * k).into())
}

fn ln_n8_factor(k: u64) -> f64 {
    ((3 * k + 1) as f64).ln() + ln_range(4 * k + 2, 6 * k) - ln_range(2 * k + 1, 4 * k)
}

fn exact(name: SequenceName, argument: u64, r: BigRational) -> SequenceValue {
    assert!(r.is_integer(), "{name:?}({argument}) is not an integer: {r}");
    let value = r.to_integer();
    let ln_value = ln_bigint(&value);
    SequenceValue {
        name,
        argument,
        value,
        ln_value,
    }
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        v.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = v >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `A_V(2n+1) = 2^{−n} Π_{k=1}^n (6k−2)!(2k−1)!/((4k−1)!(4k−2)!)`, exactly.
///
/// # Panics
/// If `n == 0`.
pub fn seq_av(n: u64) -> SequenceValue {
    assert!(n >= 1, "A_V(2n+1) needs n >= 1");
    let mut acc = BigRational::one();
    for k in 1..=n {
        acc *= av_factor(k);
    }
    acc /= BigRational::from_integer(BigInt::from(1u8) << n);
    exact(SequenceName::AV, 2 * n + 1, acc)
}

/// `N_8(2n) = Π_{k=0}^{n−1} (3k+1)(6k)!(2k)!/((4k)!(4k+1)!)`, exactly.
///
/// # Panics
/// If `n == 0`.
pub fn seq_n8(n: u64) -> SequenceValue {
    assert!(n >= 1, "N_8(2n) needs n >= 1");
    let mut acc = BigRational::one();
    for k in 0..n {
        acc *= n8_factor(k);
    }
    exact(SequenceName::N8, 2 * n, acc)
}

/// `ln A_V(2n+1)` in floating point.
pub fn ln_seq_av(n: u64) -> f64 {
    let s: f64 = maybe_par_iter!(1..=n).map(ln_av_factor).sum();
    s - n as f64 * std::f64::consts::LN_2
}

/// `ln N_8(2n)` in floating point.
pub fn ln_seq_n8(n: u64) -> f64 {
    maybe_par_iter!(0..n).map(ln_n8_factor).sum()
}

/// Tabulated `ln A_V(2n+1)` and `ln N_8(2n)` for `1 ≤ n ≤ n_max`, used by the
/// large-size fidelity scans.
#[derive(Clone, Debug)]
pub struct LogSequences {
    ln_av: Vec<f64>,
    ln_n8: Vec<f64>,
}

impl LogSequences {
    pub fn new(n_max: u64) -> Self {
        let av_terms: Vec<f64> = maybe_par_iter!(1..=n_max).map(ln_av_factor).collect();
        let n8_terms: Vec<f64> = maybe_par_iter!(0..n_max).map(ln_n8_factor).collect();
        let mut ln_av = vec![0.0; n_max as usize + 1];
        let mut ln_n8 = vec![0.0; n_max as usize + 1];
        let (mut a, mut b) = (0.0, 0.0);
        for n in 1..=n_max as usize {
            a += av_terms[n - 1] - std::f64::consts::LN_2;
            b += n8_terms[n - 1];
            ln_av[n] = a;
            ln_n8[n] = b;
        }
        LogSequences { ln_av, ln_n8 }
    }

    pub fn n_max(&self) -> u64 {
        (self.ln_av.len() - 1) as u64
    }

    /// `ln A_V(2n+1)`.
    pub fn ln_av(&self, n: u64) -> f64 {
        assert!(n >= 1 && n <= self.n_max(), "n = {n} outside table");
        self.ln_av[n as usize]
    }

    /// `ln N_8(2n)`.
    pub fn ln_n8(&self, n: u64) -> f64 {
        assert!(n >= 1 && n <= self.n_max(), "n = {n} outside table");
        self.ln_n8[n as usize]
    }
}

/// `(C₁, C₂)` with `C₁ = sqrt(Γ(1/3))/π^{1/4}` and
/// `C₂ = (2/√3)^{3/2} π^{1/4}/sqrt(Γ(1/3))`.
pub fn asymptotic_constants() -> (f64, f64) {
    let g = statrs::function::gamma::gamma(1.0 / 3.0);
    let c1 = g.sqrt() / PI.powf(0.25);
    let c2 = (2.0 / 3f64.sqrt()).powf(1.5) * PI.powf(0.25) / g.sqrt();
    (c1, c2)
}
