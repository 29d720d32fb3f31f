use crate::C64;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// CGLS for `min ‖A x − b‖`, starting from zero. Returns `x` and the final
/// residual norm. Stops when the normal-equation residual falls below
/// `tol · ‖b‖` or after `max_iter` steps.
pub(crate) fn cgls(
    apply: impl Fn(&[C64]) -> Vec<C64>,
    apply_adjoint: impl Fn(&[C64]) -> Vec<C64>,
    b: &[C64],
    n: usize,
    tol: f64,
    max_iter: usize,
) -> (Vec<C64>, f64) {
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut r = b.to_vec();
    let mut s = apply_adjoint(&r);
    let mut p = s.clone();
    let mut gamma = dot(&s, &s).re;
    let stop = tol * norm(b).max(f64::MIN_POSITIVE);
    for _ in 0..max_iter {
        if gamma.sqrt() <= stop {
            break;
        }
        let q = apply(&p);
        let qq = dot(&q, &q).re;
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += pi * alpha;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= qi * alpha;
        }
        s = apply_adjoint(&r);
        let gamma_new = dot(&s, &s).re;
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + *pi * beta;
        }
    }
    let res = norm(&r);
    (x, res)
}
