use serde::{Deserialize, Serialize};

use super::GroundStateCache;
use crate::operators::StateVector;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OverlapKind {
    /// `⟨ψ_L| ψ_{L_1} ⊗ ⋯ ⊗ ψ_{L_m}⟩`, `L = Σ L_j`.
    Z,
    /// `⟨ψ_L| ψ_{L_1} ⊗ |ℓ⟩ ⊗ ψ_{L_2} ⊗ ⋯ ⊗ |ℓ⟩ ⊗ ψ_{L_m}⟩`, `L = Σ L_j + m − 1`.
    /// One part may be empty.
    ZTilde,
}

/// Which closed form applies to a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityCase {
    /// Every part even (`Z`) or every part odd (`Z̃`).
    Principal,
    /// Exactly one part of the other parity, at `index`.
    Mixed { index: usize },
    /// `Z̃` with the part at `index` empty and all others odd.
    EmptyPart { index: usize },
    /// Magnetisations cannot match, the overlap is zero.
    Vanishing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverlapReport {
    pub ell: usize,
    pub kind: OverlapKind,
    pub partition: Vec<usize>,
    pub len: usize,
    pub direct: C64,
    pub sum_rule: C64,
    pub residual: f64,
    pub parity_case: ParityCase,
}

/// Total chain length of a partition.
pub fn total_length(kind: OverlapKind, parts: &[usize]) -> Result<usize> {
    if parts.is_empty() {
        return Err(Error::Partition("no parts".into()));
    }
    let zeros = parts.iter().filter(|&&p| p == 0).count();
    match kind {
        OverlapKind::Z if zeros > 0 => Err(Error::Partition("Z needs non-empty parts".into())),
        OverlapKind::ZTilde if zeros > 1 || (zeros == 1 && parts.len() < 2) => Err(
            Error::Partition("Z̃ allows one empty part among at least two".into()),
        ),
        OverlapKind::Z => Ok(parts.iter().sum()),
        OverlapKind::ZTilde => Ok(parts.iter().sum::<usize>() + parts.len() - 1),
    }
}

pub fn parity_case(kind: OverlapKind, parts: &[usize]) -> ParityCase {
    if let Some(index) = parts.iter().position(|&p| p == 0) {
        return if kind == OverlapKind::ZTilde && parts.iter().all(|&p| p == 0 || p % 2 == 1) {
            ParityCase::EmptyPart { index }
        } else {
            ParityCase::Vanishing
        };
    }
    let principal = match kind {
        OverlapKind::Z => 0,
        OverlapKind::ZTilde => 1,
    };
    let odd_ones: Vec<usize> = (0..parts.len())
        .filter(|&i| parts[i] % 2 != principal)
        .collect();
    match odd_ones.as_slice() {
        [] => ParityCase::Principal,
        [index] => ParityCase::Mixed { index: *index },
        _ => ParityCase::Vanishing,
    }
}

/// Full contraction of `ψ_L` against the product state, divided by the norms.
pub fn overlap_direct(
    kind: OverlapKind,
    ell: usize,
    parts: &[usize],
    cache: &GroundStateCache,
) -> Result<C64> {
    let len = total_length(kind, parts)?;
    let mut product: Option<StateVector> = None;
    let mut norms = 1.0;
    let push = |acc: Option<StateVector>, v: &StateVector| -> Result<Option<StateVector>> {
        Ok(Some(match acc {
            None => v.clone(),
            Some(a) => a.tensor(v)?,
        }))
    };
    let insertion = StateVector::basis(ell, &[ell])?;
    for (i, &part) in parts.iter().enumerate() {
        if kind == OverlapKind::ZTilde && i > 0 {
            product = push(product, &insertion)?;
        }
        if part > 0 {
            let g = cache.get(ell, part)?;
            norms *= g.vector.norm();
            product = push(product, &g.vector)?;
        }
    }
    let product = product.expect("at least one factor");
    debug_assert_eq!(product.len(), len);
    let full = cache.get(ell, len)?;
    Ok(full.vector.inner(&product)? / (norms * full.vector.norm()))
}

/// The closed form in normalized distinguished components.
pub fn overlap_sum_rule(
    kind: OverlapKind,
    ell: usize,
    parts: &[usize],
    cache: &GroundStateCache,
) -> Result<C64> {
    let len = total_length(kind, parts)?;
    if parity_case(kind, parts) == ParityCase::Vanishing {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut prod = 1.0;
    for &part in parts.iter().filter(|&&p| p > 0) {
        prod *= cache.normalized_component(ell, part)?;
    }
    let whole = cache.normalized_component(ell, len)?;
    Ok(C64::new(
        match kind {
            OverlapKind::Z => prod / whole,
            OverlapKind::ZTilde => whole / prod,
        },
        0.0,
    ))
}

pub fn overlap_report(
    kind: OverlapKind,
    ell: usize,
    parts: &[usize],
    cache: &GroundStateCache,
) -> Result<OverlapReport> {
    let direct = overlap_direct(kind, ell, parts, cache)?;
    let sum_rule = overlap_sum_rule(kind, ell, parts, cache)?;
    Ok(OverlapReport {
        ell,
        kind,
        partition: parts.to_vec(),
        len: total_length(kind, parts)?,
        direct,
        sum_rule,
        residual: (direct - sum_rule).norm(),
        parity_case: parity_case(kind, parts),
    })
}

fn compositions(total: usize, parts: usize, min_part: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let mut p = min_part;
    while p <= total {
        cur.push(p);
        compositions(total - p, parts - 1, min_part, out, cur);
        cur.pop();
        p += 1;
    }
}

/// Every ordered partition with `m ≤ m_max` parts and total chain length
/// `len`: positive parts for `Z`, and for `Z̃` also those with one empty part.
pub fn admissible_partitions(kind: OverlapKind, len: usize, m_max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        let mut cur = Vec::with_capacity(m);
        match kind {
            OverlapKind::Z => compositions(len, m, 1, &mut out, &mut cur),
            OverlapKind::ZTilde => {
                if len + 1 < m {
                    continue;
                }
                let mut all = Vec::new();
                compositions(len + 1 - m, m, 0, &mut all, &mut cur);
                out.extend(
                    all.into_iter()
                        .filter(|p| total_length(kind, p).is_ok() && p.iter().any(|&x| x > 0)),
                );
            }
        }
    }
    out
}
