use crate::operators::LinearMap;
use crate::{Error, Result, C64};

fn pauli(which: usize) -> LinearMap {
    let (o, i) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let t = match which {
        1 => vec![(0, 1, o), (1, 0, o)],
        2 => vec![(0, 1, -i), (1, 0, i)],
        _ => vec![(0, 0, o), (1, 1, -o)],
    };
    LinearMap::from_triplets(1, 1, 1, t).expect("2x2")
}

fn on_sites(len: usize, ops: &[(usize, &LinearMap)]) -> Result<LinearMap> {
    let mut acc: Option<LinearMap> = None;
    for site in 0..len {
        let factor = ops
            .iter()
            .find(|(s, _)| *s == site)
            .map_or_else(|| LinearMap::identity(1, 1), |(_, m)| (*m).clone());
        acc = Some(match acc {
            None => factor,
            Some(a) => a.kron(&factor)?,
        });
    }
    Ok(acc.expect("len >= 1"))
}

/// Spin-1/2 chain written with Pauli matrices,
/// `−½ Σ (σ¹σ¹ + σ²σ² − ½σ³σ³) − (σ³_1 + σ³_L)/4 + (3L−1)/4`, with
/// `|0⟩ = (1, 0)`. Built independently of the supercharges.
pub fn pauli_reference(len: usize) -> Result<LinearMap> {
    if len < 2 {
        return Err(Error::LengthTooShort { len, min: 2 });
    }
    let s: Vec<LinearMap> = (1..=3).map(pauli).collect();
    let mut h = LinearMap::identity(1, len).scale(C64::new((3 * len - 1) as f64 / 4.0, 0.0));
    for i in 0..len - 1 {
        for (a, w) in [(0, -0.5), (1, -0.5), (2, 0.25)] {
            let term = on_sites(len, &[(i, &s[a]), (i + 1, &s[a])])?;
            h = h.add(&term.scale(C64::new(w, 0.0)))?;
        }
    }
    for site in [0, len - 1] {
        h = h.add(&on_sites(len, &[(site, &s[2])])?.scale(C64::new(-0.25, 0.0)))?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::assemble;
    use crate::operators::SuperchargeSpec;

    #[test]
    fn two_sites_by_hand() {
        let h = pauli_reference(2).unwrap();
        // |00⟩ → 1, |11⟩ → 2, {|01⟩,|10⟩} block [[1, −1], [−1, 1]]
        let want = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, -1.0, 0.0], [0.0, -1.0, 1.0, 0.0], [0.0, 0.0, 0.0, 2.0]];
        for r in 0..4 {
            for c in 0..4 {
                assert!((h.get(r, c) - C64::new(want[r][c], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn equals_supercharge_hamiltonian() {
        for len in 2..=6 {
            let a = assemble(&SuperchargeSpec::new(1, len)).unwrap().matrix;
            let b = pauli_reference(len).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12, "L={len}");
        }
    }
}
