use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};

use susyxxz::cohomology::{betti_numbers_with, RankTolerance};
use susyxxz::hamiltonian::assemble;
use susyxxz::identities::{run_battery, BatteryConfig, Tolerances};
use susyxxz::observables::{
    admissible_partitions, component_conjecture, conjectured_component, fidelity_scan, lbf,
    overlap_report, GroundStateCache, LbfMode, OverlapKind,
};
use susyxxz::operators::{magnetisation, parity, BasisIndex, SuperchargeSpec};
use susyxxz::qcore::{AmkFault, SpinParams};
use susyxxz::spectra::{doublet_match, full_spectrum, zero_energy_state, SpectrumReport};
use susyxxz::Error;

use crate::args::*;
use crate::output::{num, Outcome, Table};

/// Failure of a subcommand, with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CoefficientRange { .. }
            | Error::LabelRange { .. }
            | Error::ZeroY
            | Error::LengthTooShort { .. }
            | Error::DimensionCap { .. }
            | Error::Partition(_)
            | Error::VanishingOverlap
            | Error::SpinHalfOnly(_)
            | Error::ScalingVariable(_)
            | Error::TooFewPoints { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Res = Result<Outcome, Failure>;

/// Tolerance on `|H − (QQ† + Q†Q)|` reported with every assembled spectrum.
const CROSS_CHECK_TOL: f64 = 1e-11;
const MIN_EIGENVALUE_TOL: f64 = -1e-10;
const GROUND_RESIDUAL_TOL: f64 = 1e-8;
const SUM_RULE_TOL: f64 = 1e-9;
const MAX_ELL: usize = 8;

fn check_ell(ell: usize) -> Result<(), Failure> {
    if ell == 0 || ell > MAX_ELL {
        return Err(Failure::Usage(format!("ell must lie in 1..={MAX_ELL}, got {ell}")));
    }
    Ok(())
}

fn chain_spec(c: &ChainArgs, len: usize) -> Result<SuperchargeSpec, Failure> {
    check_ell(c.ell)?;
    let (j, k) = c.labels();
    let spec = SuperchargeSpec::new(c.ell, len).with_y(c.y.0).with_labels(j, k);
    spec.validate()?;
    Ok(spec)
}

pub fn run(cmd: &Command) -> Res {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Scan(a) => scan(a),
        Command::Ground(a) => ground(a),
        Command::Cohomology(a) => cohomology(a),
        Command::Overlap(a) => overlap(a),
        Command::Fidelity(a) => fidelity(a),
        Command::FidelityScan(a) => fidelity_scan_cmd(a),
        Command::Report(a) => report(a),
    }
}

fn verify(a: &VerifyArgs) -> Res {
    if a.ell.is_empty() {
        return Err(Failure::Usage("no ell given".into()));
    }
    for &ell in &a.ell {
        check_ell(ell)?;
    }
    let min_ell = *a.ell.iter().min().expect("non-empty");
    let labels = match (a.j, a.k) {
        (None, None) => None,
        (j, k) => {
            let (j, k) = (j.unwrap_or(min_ell + 1), k.unwrap_or(min_ell + 1));
            if j.max(k) > min_ell + 1 {
                return Err(Failure::Usage(format!(
                    "labels must lie in 0..={} for ell = {min_ell}",
                    min_ell + 1
                )));
            }
            Some((j, k))
        }
    };
    let fault = if a.inject_fault {
        if min_ell < 2 {
            return Err(Failure::Usage("--inject-fault needs ell >= 2".into()));
        }
        Some(AmkFault { m: 2, k: 0, factor: 1.01 })
    } else {
        None
    };
    let defaults = Tolerances::default();
    for t in [a.tol_local, a.tol_supercharge, a.tol_hamiltonian].into_iter().flatten() {
        if !(t > 0.0) {
            return Err(Failure::Usage(format!("tolerances must be positive, got {t}")));
        }
    }
    let cfg = BatteryConfig {
        ells: a.ell.clone(),
        l_max: a.l_max,
        ys: a.y.map(|y| vec![y.0]).unwrap_or_default(),
        samples: a.samples,
        labels,
        seed: a.seed,
        tolerances: Tolerances {
            local: a.tol_local.unwrap_or(defaults.local),
            supercharge: a.tol_supercharge.unwrap_or(defaults.supercharge),
            hamiltonian: a.tol_hamiltonian.unwrap_or(defaults.hamiltonian),
        },
        fault,
    };
    let report = run_battery(&cfg)?;
    let mut table = Table::new([
        "identity", "class", "cases", "residual", "tolerance", "worst_ell", "worst_y_re",
        "worst_y_im", "passed",
    ]);
    for r in &report.results {
        table.push(vec![
            r.name.clone(),
            format!("{:?}", r.class).to_lowercase(),
            r.cases.to_string(),
            num(r.residual),
            num(r.tolerance),
            r.worst_ell.to_string(),
            num(r.worst_y.re),
            num(r.worst_y.im),
            r.passed.to_string(),
        ]);
    }
    let failed: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
    let body = json!({
        "metadata": { "tolerances": cfg.tolerances, "seed": cfg.seed },
        "identities": report.results,
        "failed": failed,
    });
    Ok(Outcome::json(report.all_passed(), body).with_table(table))
}

#[derive(Serialize)]
struct SpectrumBody {
    metadata: Value,
    spec: SuperchargeSpec,
    dim: usize,
    eigenvalues: Vec<f64>,
    zero_multiplicity: usize,
    min_eigenvalue: f64,
    cross_check: f64,
    hermiticity_defect: f64,
}

fn spectrum(a: &SpectrumArgs) -> Res {
    let spec = chain_spec(&a.chain, a.len)?;
    let h = assemble(&spec)?;
    let s = full_spectrum(&h, a.cap)?;
    let cross_check = h.cross_check()?;
    let herm = h.hermiticity_defect();
    let ok = cross_check < CROSS_CHECK_TOL && s.min() >= MIN_EIGENVALUE_TOL;
    let mut table = Table::new(["index", "eigenvalue"]);
    for (i, e) in s.eigenvalues.iter().enumerate() {
        table.push(vec![i.to_string(), num(*e)]);
    }
    let body = SpectrumBody {
        metadata: json!({
            "solver": "dense",
            "zero_threshold": s.threshold,
            "cross_check_tolerance": CROSS_CHECK_TOL,
            "min_eigenvalue_tolerance": MIN_EIGENVALUE_TOL,
        }),
        spec,
        dim: h.dim(),
        min_eigenvalue: s.min(),
        eigenvalues: s.eigenvalues.clone(),
        zero_multiplicity: s.zero_multiplicity,
        cross_check,
        hermiticity_defect: herm,
    };
    Ok(Outcome::json(ok, body).with_table(table))
}

#[derive(Serialize)]
struct ScanRow {
    rho: f64,
    short: SpectrumReport,
    long: SpectrumReport,
    unpaired: usize,
}

/// Doublet partner tolerance used in the scan table.
const DOUBLET_TOL: f64 = 1e-9;

fn scan_point(spec: &SuperchargeSpec, rho: f64, theta: f64, cap: usize) -> Result<ScanRow, Failure> {
    let sp = spec.with_y(C64::from_polar(rho, theta));
    let short = full_spectrum(&assemble(&sp)?, cap)?;
    let long = full_spectrum(&assemble(&sp.with_len(sp.len + 1))?, cap)?;
    let unpaired = doublet_match(&short, &long, DOUBLET_TOL).unmatched.len();
    Ok(ScanRow {
        rho,
        short,
        long,
        unpaired,
    })
}

fn scan(a: &ScanArgs) -> Res {
    let ScanParam::Rho = a.param;
    check_ell(a.ell)?;
    if a.steps == 0 || !(a.from >= 0.0) || !(a.to >= a.from) {
        return Err(Failure::Usage("need steps >= 1 and 0 <= from <= to".into()));
    }
    let (j, k) = (a.j.unwrap_or(a.ell + 1), a.k.unwrap_or(a.ell + 1));
    let spec = SuperchargeSpec::new(a.ell, a.len).with_labels(j, k);
    spec.validate()?;
    let grid: Vec<f64> = (0..a.steps)
        .map(|i| {
            if a.steps == 1 {
                a.from
            } else {
                a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64
            }
        })
        .collect();
    #[cfg(feature = "parallel")]
    let rows: Vec<Result<ScanRow, Failure>> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&r| scan_point(&spec, r, a.theta, a.cap)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<ScanRow, Failure>> =
        grid.iter().map(|&r| scan_point(&spec, r, a.theta, a.cap)).collect();
    let rows: Vec<ScanRow> = rows.into_iter().collect::<Result<_, _>>()?;

    let (n_short, n_long) = (rows[0].short.eigenvalues.len(), rows[0].long.eigenvalues.len());
    let mut columns = vec!["rho".to_string()];
    columns.extend((0..n_short).map(|i| format!("E{}_{i}", a.len)));
    columns.extend((0..n_long).map(|i| format!("E{}_{i}", a.len + 1)));
    columns.extend([
        format!("zeros_{}", a.len),
        format!("zeros_{}", a.len + 1),
        "unpaired".to_string(),
    ]);
    let mut table = Table::new(columns);
    for r in &rows {
        let mut line = vec![num(r.rho)];
        line.extend(r.short.eigenvalues.iter().map(|&e| num(e)));
        line.extend(r.long.eigenvalues.iter().map(|&e| num(e)));
        line.extend([
            r.short.zero_multiplicity.to_string(),
            r.long.zero_multiplicity.to_string(),
            r.unpaired.to_string(),
        ]);
        table.push(line);
    }
    let body = json!({
        "metadata": { "solver": "dense", "doublet_tolerance": DOUBLET_TOL, "theta": a.theta },
        "rows": rows,
    });
    Ok(Outcome::json(true, body).with_table(table).csv_by_default())
}

fn ground(a: &GroundArgs) -> Res {
    check_ell(a.ell)?;
    let p = SpinParams::new(a.ell);
    let g = zero_energy_state(&p, a.len)?;
    let psi = &g.vector;
    let scale = psi.norm();
    let parity_residual = parity(&p, a.len).apply(psi)?.sub(psi)?.norm() / scale;
    let m = if a.len % 2 == 0 { 0.0 } else { a.ell as f64 / 2.0 };
    let mag_residual = magnetisation(&p, a.len)
        .apply(psi)?
        .sub(&psi.scaled(C64::new(m, 0.0)))?
        .norm()
        / scale;
    let normalized = g.distinguished().re / scale;
    let conjecture = if a.ell == 1 {
        let c = conjectured_component(a.len)?;
        json!({ "predicted": c, "residual": (c - normalized).abs() })
    } else {
        json!("not applicable")
    };
    let ok = g.residual_q < GROUND_RESIDUAL_TOL && g.residual_qdag < GROUND_RESIDUAL_TOL;

    let basis = BasisIndex::new(a.ell, a.len);
    let mut components = Vec::new();
    let mut table = Table::new(["digits", "re", "im"]);
    if let Some(cut) = a.components {
        for (i, z) in psi.amplitudes().iter().enumerate() {
            if z.norm() >= cut {
                let digits: String = basis.digits(i).iter().map(|d| d.to_string()).collect();
                table.push(vec![digits.clone(), num(z.re), num(z.im)]);
                components.push(json!({ "digits": digits, "re": z.re, "im": z.im }));
            }
        }
    }
    let body = json!({
        "metadata": { "solver": g.method, "residual_tolerance": GROUND_RESIDUAL_TOL },
        "ell": a.ell,
        "len": a.len,
        "energy": g.energy,
        "residual_q": g.residual_q,
        "residual_qdag": g.residual_qdag,
        "distinguished_component": normalized,
        "magnetisation": m,
        "parity_residual": parity_residual,
        "magnetisation_residual": mag_residual,
        "conjecture": conjecture,
        "components": components,
    });
    let mut out = Outcome::json(ok, body);
    if a.components.is_some() {
        out = out.with_table(table);
    }
    Ok(out)
}

fn rank_tolerance(cutoff: Option<f64>) -> Result<RankTolerance, Failure> {
    let mut tol = RankTolerance::default();
    if let Some(c) = cutoff {
        if !(c > 0.0 && c < 1.0) {
            return Err(Failure::Usage(format!("rank cutoff must lie in (0, 1), got {c}")));
        }
        tol.cutoff = c;
        tol.band_low = tol.band_low.min(c / 10.0);
        tol.band_high = tol.band_high.max(c * 10.0);
    }
    Ok(tol)
}

fn betti_table(r: &susyxxz::cohomology::CohomologyReport) -> Table {
    let mut table = Table::new(["L", "dim", "dim_kernel", "incoming_rank", "betti", "indeterminate"]);
    for row in &r.rows {
        table.push(vec![
            row.len.to_string(),
            row.dim.to_string(),
            row.dim_kernel.to_string(),
            row.incoming_rank.to_string(),
            row.betti.to_string(),
            row.indeterminate.to_string(),
        ]);
    }
    table
}

fn cohomology(a: &CohomologyArgs) -> Res {
    let spec = chain_spec(&a.chain, 1)?;
    let tol = rank_tolerance(a.tol_rank)?;
    let r = betti_numbers_with(&spec, a.l_max, &tol)?;
    let table = betti_table(&r);
    let ok = !r.any_indeterminate();
    Ok(Outcome::json(ok, json!({ "metadata": { "rank_tolerance": tol }, "cohomology": r }))
        .with_table(table))
}

fn kind_of(k: KindArg) -> OverlapKind {
    match k {
        KindArg::Z => OverlapKind::Z,
        KindArg::Ztilde => OverlapKind::ZTilde,
    }
}

fn overlap(a: &OverlapArgs) -> Res {
    check_ell(a.ell)?;
    let tol = a.tol_sum_rule.unwrap_or(SUM_RULE_TOL);
    let r = overlap_report(kind_of(a.kind), a.ell, &a.parts, &GroundStateCache::new())?;
    let ok = r.residual < tol;
    Ok(Outcome::json(ok, json!({ "metadata": { "sum_rule_tolerance": tol }, "overlap": r })))
}

fn mode_of(m: ModeArg) -> LbfMode {
    match m {
        ModeArg::Measured => LbfMode::Measured,
        ModeArg::Conjectured => LbfMode::Conjectured,
    }
}

fn fidelity(a: &FidelityArgs) -> Res {
    let r = lbf(a.l1, a.l2, mode_of(a.mode))?;
    Ok(Outcome::json(true, json!({ "metadata": { "mode": r.mode }, "fidelity": r })))
}

fn fidelity_scan_cmd(a: &FidelityScanArgs) -> Res {
    let rows = fidelity_scan(a.len, a.x_steps, mode_of(a.mode))?;
    let mut table = Table::new(["L1", "x", "F", "prediction", "deviation"]);
    for r in &rows {
        table.push(vec![
            r.l1.to_string(),
            num(r.x),
            num(r.fidelity),
            num(r.prediction.total),
            num(r.deviation),
        ]);
    }
    let body = json!({ "metadata": { "mode": mode_of(a.mode), "len": a.len }, "rows": rows });
    Ok(Outcome::json(true, body).with_table(table).csv_by_default())
}

fn section<T: Serialize>(r: Result<T, Failure>) -> (bool, Value) {
    match r {
        Ok(v) => (true, json!({ "status": "ok", "data": v })),
        Err(Failure::Usage(e)) | Err(Failure::Runtime(e)) => {
            (false, json!({ "status": "error", "error": e }))
        }
    }
}

fn not_applicable() -> (bool, Value) {
    (true, json!({ "status": "not applicable" }))
}

fn report(a: &ReportArgs) -> Res {
    check_ell(a.ell)?;
    if a.l_max < 2 {
        return Err(Failure::Usage("--Lmax must be at least 2".into()));
    }
    let ell = a.ell;
    let cache = GroundStateCache::new();
    let tol = RankTolerance::default();

    let betti = section((|| -> Result<Value, Failure> {
        let zero = betti_numbers_with(&SuperchargeSpec::new(ell, 1), a.l_max, &tol)?;
        let generic = betti_numbers_with(&SuperchargeSpec::new(ell, 1).with_y(a.y.0), a.l_max, &tol)?;
        Ok(json!({ "y_zero": zero, "y_generic": generic }))
    })());

    let ground = section((|| -> Result<Value, Failure> {
        let mut rows = Vec::new();
        for len in 1..=a.l_max {
            let g = cache.get(ell, len)?;
            rows.push(json!({
                "len": len,
                "method": g.method,
                "distinguished_component": g.distinguished().re / g.vector.norm(),
                "residual_q": g.residual_q,
                "residual_qdag": g.residual_qdag,
            }));
        }
        Ok(Value::Array(rows))
    })());

    let conjecture = if ell == 1 {
        section((|| -> Result<Value, Failure> {
            let checks = (1..=a.l_max)
                .map(|len| component_conjecture(len, &cache))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(serde_json::to_value(checks).expect("serialisable"))
        })())
    } else {
        not_applicable()
    };

    let overlaps = section((|| -> Result<Value, Failure> {
        let mut rows = Vec::new();
        for kind in [OverlapKind::Z, OverlapKind::ZTilde] {
            for len in 1..=a.l_max {
                for parts in admissible_partitions(kind, len, 4) {
                    rows.push(overlap_report(kind, ell, &parts, &cache)?);
                }
            }
        }
        Ok(serde_json::to_value(rows).expect("serialisable"))
    })());

    let fidelity = if ell == 1 {
        section(fidelity_scan(a.scan_len, 50, LbfMode::Conjectured).map_err(Failure::from))
    } else {
        not_applicable()
    };

    let sections = [
        ("betti", betti),
        ("ground_states", ground),
        ("conjecture", conjecture),
        ("overlaps", overlaps),
        ("fidelity_scan", fidelity),
    ];
    let ok = sections.iter().all(|(_, (ok, _))| *ok);
    let mut body = serde_json::Map::new();
    body.insert("metadata".into(), json!({ "rank_tolerance": tol }));
    for (name, (_, v)) in sections {
        body.insert(name.into(), v);
    }
    Ok(Outcome::json(ok, Value::Object(body)))
}
