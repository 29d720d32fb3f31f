//! Residual battery for the algebraic identities of the model.
//!
//! Every check reduces to a residual divided by `max(1, scale)`, where the
//! scale is a norm bound of the operators involved. Local identities compare
//! assembled maps entrywise; chain-level identities are probed matrix-free on
//! seeded random vectors so that the battery stays cheap up to `L = 6`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::s_map;
use crate::hamiltonian::{
    boundary_term, density_explicit, density_from_supercharge, density_of, pauli_reference,
    ChainHamiltonian,
};
use crate::operators::{
    charge_rotation, gauge_supercharge, global_supercharge, homotopy_s, local_supercharge,
    local_supercharge_bar, local_supercharge_deformed, parity, spin_reversal, LinearMap,
    StateVector, SuperchargeOperator, SuperchargeSpec,
};
use crate::qcore::{AmkFault, SpinParams};
use crate::spectra::Operator;
use crate::{Result, C64};

/// Tolerance class of an identity, overridable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityClass {
    /// One- and two-site operator identities.
    Local,
    /// Identities of the chain supercharges.
    Supercharge,
    /// Identities of the chain Hamiltonian.
    Hamiltonian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub local: f64,
    pub supercharge: f64,
    pub hamiltonian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            local: 1e-11,
            supercharge: 1e-11,
            hamiltonian: 1e-11,
        }
    }
}

impl Tolerances {
    pub fn get(&self, class: IdentityClass) -> f64 {
        match class {
            IdentityClass::Local => self.local,
            IdentityClass::Supercharge => self.supercharge,
            IdentityClass::Hamiltonian => self.hamiltonian,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub ells: Vec<usize>,
    pub l_max: usize,
    /// Explicit `y` values; when empty, `samples` values are drawn: `0`, a
    /// point on the unit circle, and the rest uniformly in `|y| ≤ 2`.
    pub ys: Vec<C64>,
    pub samples: usize,
    /// Boundary labels; `None` runs every pair `0 ≤ j, k ≤ ℓ+1`.
    pub labels: Option<(usize, usize)>,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Corrupts one `a_{m,k}` in every operator built by the battery.
    pub fault: Option<AmkFault>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            ells: vec![1, 2, 3],
            l_max: 6,
            ys: Vec::new(),
            samples: 20,
            labels: None,
            seed: 7,
            tolerances: Tolerances::default(),
            fault: None,
        }
    }
}

/// Worst case of one identity over every `(ℓ, y, L, j, k)` it was run on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub class: IdentityClass,
    pub cases: usize,
    pub residual: f64,
    pub worst_ell: usize,
    pub worst_y: C64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub config: BatteryConfig,
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

struct Tally {
    results: Vec<IdentityResult>,
    tolerances: Tolerances,
}

impl Tally {
    fn record(&mut self, name: &str, class: IdentityClass, ell: usize, y: C64, residual: f64) {
        // NaN must count as a failure
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        let tolerance = self.tolerances.get(class);
        match self.results.iter_mut().find(|r| r.name == name) {
            Some(r) => {
                r.cases += 1;
                if residual > r.residual {
                    r.residual = residual;
                    r.worst_ell = ell;
                    r.worst_y = y;
                }
                r.passed = r.residual < r.tolerance;
            }
            None => self.results.push(IdentityResult {
                name: name.to_string(),
                class,
                cases: 1,
                residual,
                worst_ell: ell,
                worst_y: y,
                tolerance,
                passed: residual < tolerance,
            }),
        }
    }
}

fn relative(abs: f64, scale: f64) -> f64 {
    abs / scale.max(1.0)
}

fn diff(a: &LinearMap, b: &LinearMap) -> Result<f64> {
    Ok(relative(a.max_abs_diff(b)?, a.max_abs().max(b.max_abs())))
}

fn random_vector(rng: &mut ChaCha8Rng, ell: usize, len: usize) -> StateVector {
    let n = (ell + 1).pow(len as u32);
    let mut v = StateVector::from_amplitudes(
        ell,
        len,
        (0..n)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect(),
    )
    .expect("length matches");
    v.normalize();
    v
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `ψ ↦ v ⊗ ψ` (`left`) or `ψ ↦ ψ ⊗ v` on `V^{len_in}`.
fn juxtapose(v: &StateVector, len_in: usize, left: bool) -> Result<LinearMap> {
    let ell = v.ell();
    let dim_v = v.dim();
    let amps = v.amplitudes().to_vec();
    let dim_in = (ell + 1).pow(len_in as u32);
    LinearMap::from_columns(ell, len_in, len_in + v.len(), move |col| {
        amps.iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, &a)| (if left { i * dim_in + col } else { col * dim_v + i }, a))
            .collect()
    })
}

/// `(A ⊗ 1 − 1 ⊗ A) B` for local maps `A: V → V²`, `B: V → V²`.
fn cobracket(a: &LinearMap, b: &LinearMap) -> Result<LinearMap> {
    let one = LinearMap::identity(a.ell(), 1);
    a.kron(&one)?.sub(&one.kron(a)?)?.compose(b)
}

fn sample_ys(cfg: &BatteryConfig, rng: &mut ChaCha8Rng) -> Vec<C64> {
    if !cfg.ys.is_empty() {
        return cfg.ys.clone();
    }
    let mut ys = Vec::with_capacity(cfg.samples);
    for i in 0..cfg.samples {
        ys.push(match i {
            0 => C64::new(0.0, 0.0),
            1 => C64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.random::<f64>()),
            _ => C64::from_polar(
                2.0 * rng.random::<f64>().sqrt(),
                2.0 * std::f64::consts::PI * rng.random::<f64>(),
            ),
        });
    }
    ys
}

fn label_pairs(cfg: &BatteryConfig, ell: usize) -> Vec<(usize, usize)> {
    match cfg.labels {
        Some(jk) => vec![jk],
        None => (0..=ell + 1)
            .flat_map(|j| (0..=ell + 1).map(move |k| (j, k)))
            .collect(),
    }
}

/// Runs every identity for every configured `(ℓ, y)`.
pub fn run_battery(cfg: &BatteryConfig) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ys = sample_ys(cfg, &mut rng);
    let mut tally = Tally {
        results: Vec::new(),
        tolerances: cfg.tolerances,
    };
    for &ell in &cfg.ells {
        let p = match cfg.fault {
            Some(f) => SpinParams::new(ell).with_fault(f),
            None => SpinParams::new(ell),
        };
        local_identities(&p, &mut tally, &mut rng)?;
        for &y in &ys {
            deformed_identities(&p, y, &mut tally, &mut rng)?;
            chain_identities(cfg, &p, y, &mut tally, &mut rng)?;
        }
    }
    Ok(IdentityReport {
        config: cfg.clone(),
        results: tally.results,
    })
}

fn local_identities(p: &SpinParams, t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    use IdentityClass::Local;
    let ell = p.ell();
    let zero = C64::new(0.0, 0.0);
    let q = local_supercharge(p)?;
    let qb = local_supercharge_bar(p)?;
    let one = LinearMap::identity(ell, 1);

    let r = cobracket(&q, &q)?;
    t.record("coassociativity", Local, ell, zero, relative(r.max_abs(), q.max_abs().powi(2)));
    let r = cobracket(&qb, &qb)?;
    t.record("coassociativity (spin-reversed)", Local, ell, zero, relative(r.max_abs(), qb.max_abs().powi(2)));

    let chi = StateVector::from_amplitudes(ell, 2, p.chi_vector().amplitudes)?;
    let rhs = juxtapose(&chi, 1, true)?.sub(&juxtapose(&chi, 1, false)?)?;
    let lhs = cobracket(&q, &qb)?.add(&cobracket(&qb, &q)?)?.scale(C64::new(-1.0, 0.0));
    t.record("anticommutation with chi", Local, ell, zero, diff(&lhs, &rhs)?);

    let phi = random_vector(rng, ell, 1);
    let qphi = gauge_supercharge(p, phi.amplitudes())?;
    let phiphi = phi.tensor(&phi)?;
    let rhs = juxtapose(&phiphi, 1, true)?.sub(&juxtapose(&phiphi, 1, false)?)?;
    t.record("gauge quasi-coassociativity", Local, ell, zero, diff(&cobracket(&qphi, &qphi)?, &rhs)?);

    let (qd, qbd) = (q.adjoint(), qb.adjoint());
    let mixed = |ad: &LinearMap, b: &LinearMap| -> Result<f64> {
        // b a† = (1⊗a†)(b⊗1) + (a†⊗1)(1⊗b)
        let lhs = b.compose(ad)?;
        let rhs = one
            .kron(ad)?
            .compose(&b.kron(&one)?)?
            .add(&ad.kron(&one)?.compose(&one.kron(b)?)?)?;
        diff(&lhs, &rhs)
    };
    t.record("mixed relation qbar q-dagger", Local, ell, zero, mixed(&qd, &qb)?);
    t.record("mixed relation q qbar-dagger", Local, ell, zero, mixed(&qbd, &q)?);
    t.record("mixed relation qbar-dagger q", Local, ell, zero, relative(qbd.compose(&q)?.max_abs(), 1.0));
    t.record("mixed relation q-dagger qbar", Local, ell, zero, relative(qd.compose(&qb)?.max_abs(), 1.0));

    let p2 = parity(p, 2);
    t.record("parity invariance", Local, ell, zero, diff(&p2.compose(&q)?, &q)?.max(diff(&p2.compose(&qb)?, &qb)?));

    t.record("density equality h = h-bar", Local, ell, zero, diff(&density_of(&q)?, &density_of(&qb)?)?);
    t.record("explicit density", Local, ell, zero, diff(&density_of(&q)?, &density_explicit(p))?);
    Ok(())
}

fn deformed_identities(p: &SpinParams, y: C64, t: &mut Tally, rng: &mut ChaCha8Rng) -> Result<()> {
    use IdentityClass::Local;
    let ell = p.ell();
    let d = p.d() as i32;
    let qy = local_supercharge_deformed(p, y)?;
    let yl = y.powi(d + 1);

    let r = cobracket(&qy, &qy)?;
    t.record("coassociativity (deformed)", Local, ell, y, relative(r.max_abs(), qy.max_abs().powi(2)));

    // (q + y^{ℓ+2} q̄)φ + φ⊗φ = y^{ℓ+2} χ
    let phi = StateVector::from_amplitudes(ell, 1, p.phi_vector(y).amplitudes)?;
    let chi = StateVector::from_amplitudes(ell, 2, p.chi_vector().amplitudes)?;
    let base = local_supercharge(p)?.add(&local_supercharge_bar(p)?.scale(yl))?;
    let mut lhs = base.apply(&phi)?;
    lhs.axpy(C64::new(1.0, 0.0), &phi.tensor(&phi)?)?;
    lhs.axpy(-yl, &chi)?;
    t.record("gauge vector equation", Local, ell, y, relative(lhs.max_abs(), 1.0 + yl.norm()));

    let mut worst: f64 = 0.0;
    for k in 0..=ell + 1 {
        let xi = StateVector::from_amplitudes(ell, 1, p.xi_vector(y, k)?.amplitudes)?;
        let r = qy.apply(&xi)?.sub(&xi.tensor(&xi)?)?;
        worst = worst.max(r.max_abs());
    }
    t.record("xi fixed point", Local, ell, y, worst);

    let p2 = parity(p, 2);
    t.record("parity invariance (deformed)", Local, ell, y, diff(&p2.compose(&qy)?, &qy)?);

    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let lhs = charge_rotation(p, 2, theta)
        .compose(&qy)?
        .compose(&charge_rotation(p, 1, -theta))?;
    let rhs = local_supercharge_deformed(p, C64::from_polar(1.0, -theta) * y)?
        .scale(C64::from_polar(1.0, theta * (ell as f64 + 2.0) / 2.0));
    t.record("charge covariance", Local, ell, y, diff(&lhs, &rhs)?);

    let h0 = density_from_supercharge(p, C64::new(0.0, 0.0))?;
    t.record("density y-independence", Local, ell, y, diff(&density_from_supercharge(p, y)?, &h0)?);

    let hb = boundary_term(p, y, ell + 1)?;
    let lhs = charge_rotation(p, 1, theta)
        .compose(&hb)?
        .compose(&charge_rotation(p, 1, -theta))?;
    let rhs = boundary_term(p, C64::from_polar(1.0, -theta) * y, ell + 1)?;
    t.record("boundary charge covariance", Local, ell, y, diff(&lhs, &rhs)?);

    if y.norm() > 0.0 {
        let lhs = spin_reversal(p, 2).compose(&qy)?.compose(&spin_reversal(p, 1))?;
        let rhs = local_supercharge_deformed(p, y.inv())?.scale((y / y.norm()).powi(d + 1));
        t.record("spin-reversal covariance", Local, ell, y, diff(&lhs, &rhs)?);
        t.record("xi inverse", Local, ell, y, p.xi_matrix(y)?.inverse_residual());
    }
    Ok(())
}

fn chain_identities(
    cfg: &BatteryConfig,
    p: &SpinParams,
    y: C64,
    t: &mut Tally,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    use IdentityClass::{Hamiltonian, Supercharge};
    let ell = p.ell();
    let fault = cfg.fault;
    let q_local = local_supercharge_deformed(p, y)?.max_row_sum();
    let bound = |len: usize| (len as f64) * q_local + 2.0;

    for (j, k) in label_pairs(cfg, ell) {
        let spec = SuperchargeSpec::new(ell, 1)
            .with_y(y)
            .with_labels(j, k)
            .with_fault(fault);
        let mut nil: f64 = 0.0;
        let mut hom: f64 = 0.0;
        for len in 1..=cfg.l_max {
            let q = SuperchargeOperator::new(&spec.with_len(len))?;
            let q_up = SuperchargeOperator::new(&spec.with_len(len + 1))?;
            let v = random_vector(rng, ell, len);
            let qqv = q_up.apply(&q.apply(v.amplitudes()));
            nil = nil.max(relative(l2(&qqv), bound(len) * bound(len + 1)));

            if y.norm() > 0.0 && len >= 2 {
                let q_below = SuperchargeOperator::new(&spec.with_len(len - 1))?;
                let s_here = homotopy_s(p, y, j, len)?;
                let s_up = homotopy_s(p, y, j, len + 1)?;
                let mut w = vec![C64::new(0.0, 0.0); v.dim()];
                s_up.apply_into(&q.apply(v.amplitudes()), &mut w);
                let mut sv = vec![C64::new(0.0, 0.0); s_here.rows()];
                s_here.apply_into(v.amplitudes(), &mut sv);
                let qsv = q_below.apply(&sv);
                let r: Vec<C64> = (0..v.dim())
                    .map(|i| w[i] + qsv[i] - v.amplitudes()[i])
                    .collect();
                let s_norm = s_up.max_row_sum().max(s_here.max_row_sum());
                hom = hom.max(relative(l2(&r), bound(len) * s_norm));
            }
        }
        t.record("nilpotency", Supercharge, ell, y, nil);
        if y.norm() > 0.0 && cfg.l_max >= 2 {
            t.record("contracting homotopy", Supercharge, ell, y, hom);
        }

        let mut routes: f64 = 0.0;
        let mut herm: f64 = 0.0;
        let mut par: f64 = 0.0;
        for len in 2..=cfg.l_max {
            let sp = spec.with_len(len);
            let h = ChainHamiltonian::new(&sp)?;
            let q = SuperchargeOperator::new(&sp)?;
            let q_below = SuperchargeOperator::new(&sp.with_len(len - 1))?;
            let scale = h.norm_estimate();
            let u = random_vector(rng, ell, len);
            let v = random_vector(rng, ell, len);
            let mut hv = vec![C64::new(0.0, 0.0); v.dim()];
            h.apply_into(v.amplitudes(), &mut hv);
            let up = q.apply_adjoint(&q.apply(v.amplitudes()));
            let down = q_below.apply(&q_below.apply_adjoint(v.amplitudes()));
            let r: Vec<C64> = (0..v.dim()).map(|i| hv[i] - up[i] - down[i]).collect();
            routes = routes.max(relative(l2(&r), scale));

            let mut hu = vec![C64::new(0.0, 0.0); u.dim()];
            h.apply_into(u.amplitudes(), &mut hu);
            let lhs: C64 = u.amplitudes().iter().zip(&hv).map(|(x, z)| x.conj() * z).sum();
            let rhs: C64 = hu.iter().zip(v.amplitudes()).map(|(x, z)| x.conj() * z).sum();
            herm = herm.max(relative((lhs - rhs).norm(), scale));

            if j == k {
                let pm = parity(p, len);
                let pv = pm.apply(&v)?;
                let mut hpv = vec![C64::new(0.0, 0.0); v.dim()];
                h.apply_into(pv.amplitudes(), &mut hpv);
                let mut phpv = vec![C64::new(0.0, 0.0); v.dim()];
                pm.apply_into(&hpv, &mut phpv);
                let r: Vec<C64> = (0..v.dim()).map(|i| phpv[i] - hv[i]).collect();
                par = par.max(relative(l2(&r), scale));
            }
        }
        if cfg.l_max >= 2 {
            t.record("hamiltonian from supercharges", Hamiltonian, ell, y, routes);
            t.record("hermiticity", Hamiltonian, ell, y, herm);
            if j == k {
                t.record("parity symmetry", Hamiltonian, ell, y, par);
            }
        }
    }

    if y.norm() == 0.0 {
        let mut worst: f64 = 0.0;
        for len in 1..=cfg.l_max.saturating_sub(2).max(1) {
            let spec = SuperchargeSpec::new(ell, len).with_fault(fault);
            let a = global_supercharge(&spec.with_len(len + 2))?.compose(&s_map(p, len)?)?;
            let b = s_map(p, len + 1)?.compose(&global_supercharge(&spec)?)?;
            worst = worst.max(diff(&a, &b)?);
        }
        t.record("S commutes with Q", Supercharge, ell, y, worst);
        if ell == 1 {
            let mut worst: f64 = 0.0;
            for len in 2..=cfg.l_max {
                let h = ChainHamiltonian::new(&SuperchargeSpec::new(1, len).with_fault(fault))?
                    .to_sparse()?;
                worst = worst.max(diff(&h, &pauli_reference(len)?)?);
            }
            if cfg.l_max >= 2 {
                t.record("spin-1/2 Pauli form", Hamiltonian, ell, y, worst);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BatteryConfig {
        BatteryConfig {
            ells: vec![1, 2],
            l_max: 4,
            samples: 4,
            ..Default::default()
        }
    }

    #[test]
    fn battery_passes() {
        let r = run_battery(&small()).unwrap();
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(r.results.len() >= 20, "only {} identities", r.results.len());
    }

    #[test]
    fn spin_two_local_identities() {
        let cfg = BatteryConfig {
            ells: vec![4],
            l_max: 2,
            samples: 3,
            labels: Some((5, 5)),
            ..Default::default()
        };
        let r = run_battery(&cfg).unwrap();
        assert!(r.all_passed(), "{:#?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn fault_breaks_coassociativity() {
        let cfg = BatteryConfig {
            // coassociativity leaves a_{1,0} unconstrained, a_{2,0} is not
            fault: Some(AmkFault { m: 2, k: 0, factor: 1.01 }),
            ..small()
        };
        let r = run_battery(&cfg).unwrap();
        assert!(!r.get("coassociativity").unwrap().passed);
    }
}
