use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::operators::LinearMap;
#[cfg(feature = "parallel")]
use crate::par::prelude::*;
use crate::{Error, Result, C64};

/// A Hermitian operator known only through its action.
pub trait Operator: Sync {
    fn dim(&self) -> usize;
    fn apply_into(&self, x: &[C64], out: &mut [C64]);
    /// Any upper bound on the spectral radius; scales tolerances.
    fn norm_estimate(&self) -> f64;
}

impl Operator for LinearMap {
    fn dim(&self) -> usize {
        assert_eq!(self.rows(), self.cols(), "operator must be square");
        self.rows()
    }

    fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        LinearMap::apply_into(self, x, out)
    }

    fn norm_estimate(&self) -> f64 {
        self.max_row_sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    /// Krylov basis size between restarts.
    pub basis: usize,
    /// Residual tolerance relative to `max(1, ‖A‖)`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            basis: 32,
            tol: 1e-13,
            max_restarts: 800,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<C64>,
    /// `‖A v − θ v‖`, recomputed explicitly.
    pub residual: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    maybe_par_iter!(a).zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    maybe_par_iter!(a).map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    maybe_par_iter!(y).zip(x).for_each(|(u, v)| *u += alpha * v);
}

fn scale(y: &mut [C64], s: f64) {
    maybe_par_iter!(y).for_each(|u| *u *= s);
}

/// Removes the components along `basis` (assumed orthonormal), twice.
fn orthogonalize(w: &mut [C64], basis: &[&[C64]], coeffs: Option<&mut [C64]>) {
    let mut total = vec![C64::new(0.0, 0.0); basis.len()];
    for _ in 0..2 {
        for (i, b) in basis.iter().enumerate() {
            let h = dot(b, w);
            axpy(w, -h, b);
            total[i] += h;
        }
    }
    if let Some(c) = coeffs {
        c.copy_from_slice(&total);
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, against: &[&[C64]]) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        orthogonalize(&mut v, against, None);
        let nv = norm(&v);
        if nv > 1e-8 {
            scale(&mut v, 1.0 / nv);
            return v;
        }
    }
}

fn sorted_eigh(h: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// The `nev` lowest eigenpairs of `op` restricted to the orthogonal
/// complement of `deflate`, by restarted Lanczos with full
/// reorthogonalisation. Restarts keep the lowest Ritz vectors plus the
/// residual direction, so the projected matrix stays Hermitian.
pub fn lowest_eigenpairs(
    op: &dyn Operator,
    nev: usize,
    deflate: &[Vec<C64>],
    opts: &LanczosOptions,
) -> Result<Vec<EigenPair>> {
    let n = op.dim();
    let room = n.saturating_sub(deflate.len());
    if nev == 0 || room == 0 {
        return Ok(Vec::new());
    }
    let nev = nev.min(room);
    let m = opts.basis.max(nev + 8).min(room);
    let tol = opts.tol * op.norm_estimate().max(1.0);
    let defl: Vec<&[C64]> = deflate.iter().map(|v| v.as_slice()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis: Vec<Vec<C64>> = vec![random_unit(n, &mut rng, &defl)];
    let mut h = DMatrix::<C64>::zeros(m, m);
    let mut kept = 0usize;
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut last_res = f64::INFINITY;

    for _cycle in 0..opts.max_restarts {
        let mut beta = 0.0;
        for j in kept..m {
            // the deflated operator is P A P with P projecting out `deflate`;
            // projecting on both sides keeps rounding from reintroducing the
            // deflated directions, which restarts would otherwise amplify
            if !defl.is_empty() {
                orthogonalize(&mut basis[j], &defl, None);
            }
            op.apply_into(&basis[j], &mut w);
            orthogonalize(&mut w, &defl, None);
            let mut coeffs = vec![C64::new(0.0, 0.0); j + 1];
            {
                let refs: Vec<&[C64]> = basis.iter().map(|v| v.as_slice()).collect();
                orthogonalize(&mut w, &refs, Some(&mut coeffs));
            }
            orthogonalize(&mut w, &defl, None);
            for (i, c) in coeffs.iter().enumerate() {
                h[(i, j)] = *c;
                h[(j, i)] = c.conj();
            }
            beta = norm(&w);
            if j + 1 == m {
                break;
            }
            let next = if beta > f64::EPSILON * op.norm_estimate().max(1.0) {
                let mut v = w.clone();
                scale(&mut v, 1.0 / beta);
                v
            } else {
                // invariant subspace: continue from a fresh direction
                beta = 0.0;
                let refs: Vec<&[C64]> = defl.iter().copied().chain(basis.iter().map(|v| v.as_slice())).collect();
                random_unit(n, &mut rng, &refs)
            };
            h[(j + 1, j)] = C64::new(beta, 0.0);
            h[(j, j + 1)] = C64::new(beta, 0.0);
            basis.push(next);
        }
        let (theta, y) = sorted_eigh(&h);
        let est: Vec<f64> = (0..m).map(|i| beta * y[(m - 1, i)].norm()).collect();
        last_res = est[..nev].iter().copied().fold(0.0, f64::max);
        let done = last_res < tol || (beta == 0.0 && m == room);

        let keep = if done {
            nev
        } else {
            (nev + (m - nev) / 2).min(m - 2).max(nev.min(m - 1))
        };
        let ritz: Vec<Vec<C64>> = maybe_par_iter!(0..keep)
            .map(|i| {
                let mut u = vec![C64::new(0.0, 0.0); n];
                for (l, v) in basis.iter().enumerate() {
                    axpy(&mut u, y[(l, i)], v);
                }
                u
            })
            .collect();

        if done {
            let mut out = Vec::with_capacity(nev);
            for (i, mut v) in ritz.into_iter().enumerate() {
                let nv = norm(&v);
                scale(&mut v, 1.0 / nv);
                op.apply_into(&v, &mut w);
                axpy(&mut w, C64::new(-theta[i], 0.0), &v);
                out.push(EigenPair {
                    value: theta[i],
                    residual: norm(&w),
                    vector: v,
                });
            }
            return Ok(out);
        }

        let mut f = w.clone();
        if beta > 0.0 {
            scale(&mut f, 1.0 / beta);
        }
        h.fill(C64::new(0.0, 0.0));
        for i in 0..keep {
            h[(i, i)] = C64::new(theta[i], 0.0);
            let b = y[(m - 1, i)] * beta;
            h[(keep, i)] = b;
            h[(i, keep)] = b.conj();
        }
        basis = ritz;
        if beta > 0.0 {
            basis.push(f);
        } else {
            let refs: Vec<&[C64]> = defl.iter().copied().chain(basis.iter().map(|v| v.as_slice())).collect();
            let fresh = random_unit(n, &mut rng, &refs);
            basis.push(fresh);
            for i in 0..keep {
                h[(keep, i)] = C64::new(0.0, 0.0);
                h[(i, keep)] = C64::new(0.0, 0.0);
            }
        }
        kept = keep;
    }
    Err(Error::NotConverged {
        cycles: opts.max_restarts,
        residual: last_res,
    })
}
