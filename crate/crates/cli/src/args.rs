use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "susyxxz", version, about = "Supersymmetric open spin-l/2 XXZ chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Run the identity battery and print the residual table.
    Verify(VerifyArgs),
    /// Full spectrum of one Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Spectra at L and L+1 over a grid of |y|.
    Scan(ScanArgs),
    /// The zero-energy state at y = 0.
    Ground(GroundArgs),
    /// Betti numbers of the supercharge complex.
    Cohomology(CohomologyArgs),
    /// Overlap of zero-energy states, direct and from the sum rule.
    Overlap(OverlapArgs),
    /// Logarithmic bipartite fidelity of one cut (spin 1/2).
    Fidelity(FidelityArgs),
    /// Fidelity over the cuts of one chain.
    FidelityScan(FidelityScanArgs),
    /// Everything at once, as one JSON bundle.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Complex `y`, given as `a+bi` or in polar form `rho:theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YArg(pub Complex64);

impl FromStr for YArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((rho, theta)) = s.split_once(':') {
            let rho: f64 = rho.trim().parse().map_err(|e| format!("bad modulus: {e}"))?;
            let theta: f64 = theta.trim().parse().map_err(|e| format!("bad angle: {e}"))?;
            if rho < 0.0 {
                return Err("modulus must be non-negative".into());
            }
            return Ok(YArg(Complex64::from_polar(rho, theta)));
        }
        let z = Complex64::from_str(s).map_err(|_| format!("cannot read {s:?} as a+bi or rho:theta"))?;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err("y must be finite".into());
        }
        Ok(YArg(z))
    }
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long, default_value = "0")]
    pub y: YArg,
    /// Left boundary label, 0..=ell+1 (default ell+1).
    #[arg(long)]
    pub j: Option<usize>,
    /// Right boundary label, 0..=ell+1 (default ell+1).
    #[arg(long)]
    pub k: Option<usize>,
}

impl ChainArgs {
    pub fn labels(&self) -> (usize, usize) {
        (self.j.unwrap_or(self.ell + 1), self.k.unwrap_or(self.ell + 1))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Spin labels to test; repeat or comma-separate (default 1).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub ell: Vec<usize>,
    /// Test only this y; otherwise `--samples` values are drawn.
    #[arg(long)]
    pub y: Option<YArg>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "lmax", default_value_t = 6)]
    pub l_max: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub tol_local: Option<f64>,
    #[arg(long)]
    pub tol_supercharge: Option<f64>,
    #[arg(long)]
    pub tol_hamiltonian: Option<f64>,
    /// Test hook: scale a_{2,0} by 1.01 in every operator (needs ell >= 2).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long = "L")]
    pub len: usize,
    /// Largest dimension diagonalised densely.
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanParam {
    Rho,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long = "L", default_value_t = 3)]
    pub len: usize,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "rho")]
    pub param: ScanParam,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long, default_value_t = 2.0)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Fixed argument of y along the scan.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GroundArgs {
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long = "L")]
    pub len: usize,
    /// Also emit every amplitude above this magnitude.
    #[arg(long)]
    pub components: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct CohomologyArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long = "Lmax", alias = "lmax", default_value_t = 6)]
    pub l_max: usize,
    #[arg(long)]
    pub tol_rank: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum KindArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "Ztilde", alias = "ztilde")]
    Ztilde,
}

#[derive(Args, Debug, Serialize)]
pub struct OverlapArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, value_delimiter = ',', required = true)]
    pub parts: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long)]
    pub tol_sum_rule: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Measured,
    Conjectured,
}

#[derive(Args, Debug, Serialize)]
pub struct FidelityArgs {
    #[arg(long = "L1")]
    pub l1: usize,
    #[arg(long = "L2")]
    pub l2: usize,
    #[arg(long, value_enum, default_value = "conjectured")]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct FidelityScanArgs {
    #[arg(long = "L")]
    pub len: usize,
    #[arg(long, default_value_t = 50)]
    pub x_steps: usize,
    #[arg(long, value_enum, default_value = "conjectured")]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long = "Lmax", alias = "lmax", default_value_t = 8)]
    pub l_max: usize,
    /// Generic y for the trivial-cohomology table.
    #[arg(long, default_value = "0.7:0.4")]
    pub y: YArg,
    /// Chain length for the fidelity scan.
    #[arg(long, default_value_t = 200)]
    pub scan_len: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rectangular_and_polar() {
        assert_eq!("0.5+0.5i".parse::<YArg>().unwrap().0, Complex64::new(0.5, 0.5));
        assert_eq!("-2i".parse::<YArg>().unwrap().0, Complex64::new(0.0, -2.0));
        assert_eq!("1.5".parse::<YArg>().unwrap().0, Complex64::new(1.5, 0.0));
        let z = "2:1.5707963267948966".parse::<YArg>().unwrap().0;
        assert!((z - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!("1+".parse::<YArg>().is_err());
        assert!("-1:0".parse::<YArg>().is_err());
        assert!("x".parse::<YArg>().is_err());
    }
}
