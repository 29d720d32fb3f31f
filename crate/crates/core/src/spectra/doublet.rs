use serde::{Deserialize, Serialize};

use super::SpectrumReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubletMatch {
    pub energy: f64,
    pub partner: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubletTable {
    pub tol: f64,
    pub matches: Vec<DoubletMatch>,
    /// Positive eigenvalues of the shorter chain without a partner.
    pub unmatched: Vec<f64>,
}

impl DoubletTable {
    pub fn all_matched(&self) -> bool {
        self.unmatched.is_empty()
    }
}

/// Pairs every positive eigenvalue of `short` with a distinct eigenvalue of
/// `long` within `tol`. Each eigenvalue of `long` is used at most once, so
/// multiplicities are respected.
pub fn doublet_match(short: &SpectrumReport, long: &SpectrumReport, tol: f64) -> DoubletTable {
    let mut used = vec![false; long.eigenvalues.len()];
    let mut matches = Vec::new();
    let mut unmatched = Vec::new();
    for e in short.positive() {
        let best = long
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &f)| (i, (f - e).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, dist)) if dist <= tol => {
                used[i] = true;
                matches.push(DoubletMatch {
                    energy: e,
                    partner: long.eigenvalues[i],
                });
            }
            _ => unmatched.push(e),
        }
    }
    DoubletTable {
        tol,
        matches,
        unmatched,
    }
}
