//! Command implementations behind the `gp-perturb` binary. Each command
//! returns its rows; rendering to CSV or JSON is separate so tests can check
//! raw values.

pub mod config;
pub mod format;

use std::f64::consts::PI;
use std::fmt::Write as _;

use gp_perturb::bounds::{
    appendix_j_scan, constant_chain, constant_chain_from, empirical_radius, f_bound_holds,
    triple_sum_i_scan, ChainInputs, ChainOptions, ConstantMode, ConvergenceReport, RadiusEstimate,
};
use gp_perturb::elliptic::{solve_defocusing, solve_focusing, Branch};
use gp_perturb::series::SeriesState;
use gp_perturb::spectral::{Backend, Lp};
use serde::Serialize;
use thiserror::Error;

pub use config::{ConfigFile, Format, RunConfig};

pub const APPENDIX_J_RANGE: usize = 10_000;
pub const APPENDIX_I_RANGE: usize = 1_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] gp_perturb::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub nu: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub energy: f64,
    pub psi_norm: f64,
    pub residual: f64,
}

/// `E_N`, `||psi_N||` and `||r_N||` for `N = 0 ..= order` at each `nu`.
pub fn table(cfg: &RunConfig) -> CliResult<Vec<TableRow>> {
    let spec = cfg.spectrum()?;
    let state = SeriesState::<f64>::with_order(&spec, cfg.order)?;
    let mut rows = Vec::new();
    for &nu in &cfg.nu {
        for n in 0..=cfg.order {
            let sol = state.partial_sums(nu, n)?;
            rows.push(TableRow {
                nu,
                order: n,
                energy: sol.energy,
                psi_norm: sol.psi_norm,
                residual: state.residual(nu, n)?,
            });
        }
    }
    Ok(rows)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("nu,N,E_N,psi_norm,residual\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.nu,
            r.order,
            format::significant(r.energy, 10),
            format::significant(r.psi_norm, 10),
            format::residual(r.residual)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub nu: f64,
    pub branch: Branch,
    /// `k` (defocusing) or `kappa` (focusing).
    pub modulus: f64,
    pub psi_norm: f64,
    pub energy_exact: f64,
    pub energy_series: f64,
    pub abs_diff: f64,
}

/// Feeds `||psi_N||` from the series into the exact ground-state branch.
pub fn compare(cfg: &RunConfig) -> CliResult<Vec<CompareRow>> {
    if cfg.backend != Backend::Well {
        return Err(CliError::Config("compare needs the well backend".into()));
    }
    if cfg.nu.iter().any(|&nu| nu == 0.0) {
        return Err(CliError::Config("compare needs nonzero nu".into()));
    }
    let spec = cfg.spectrum()?;
    let state = SeriesState::<f64>::with_order(&spec, cfg.order)?;
    let mut rows = Vec::new();
    for &nu in &cfg.nu {
        let sol = state.partial_sums(nu, cfg.order)?;
        let norm2 = sol.psi_norm * sol.psi_norm;
        let exact =
            if nu > 0.0 { solve_defocusing(nu, norm2, 1)? } else { solve_focusing(nu, norm2, 1)? };
        rows.push(CompareRow {
            nu,
            branch: exact.branch,
            modulus: exact.modulus,
            psi_norm: sol.psi_norm,
            energy_exact: exact.energy,
            energy_series: sol.energy,
            abs_diff: (exact.energy - sol.energy).abs(),
        });
    }
    Ok(rows)
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("nu,branch,modulus,psi_norm,E_exact,E_series,abs_diff\n");
    for r in rows {
        let branch = match r.branch {
            Branch::Defocusing => "defocusing",
            Branch::Focusing => "focusing",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.2e}",
            r.nu,
            branch,
            format::significant(r.modulus, 10),
            format::significant(r.psi_norm, 10),
            format::significant(r.energy_exact, 10),
            format::significant(r.energy_series, 10),
            r.abs_diff
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: usize,
    pub e_n: f64,
    pub abs_e_n: f64,
    pub phi_l2: f64,
    pub phi_l6: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffReport {
    pub rows: Vec<CoeffRow>,
    pub radius: Option<RadiusEstimate>,
    /// Well only: the exact radius is known to be at least `2 pi`.
    pub radius_at_least_2pi: Option<bool>,
}

pub fn coeffs(cfg: &RunConfig) -> CliResult<CoeffReport> {
    let spec = cfg.spectrum()?;
    let state = SeriesState::<f64>::with_order(&spec, cfg.order)?;
    let rows = (0..=cfg.order)
        .map(|n| CoeffRow {
            n,
            e_n: state.e()[n],
            abs_e_n: state.b()[n],
            phi_l2: state.c()[n],
            phi_l6: spec.lp_norm(state.phi(n), Lp::L6),
        })
        .collect();
    let radius = empirical_radius(state.e()).ok();
    let radius_at_least_2pi = match cfg.backend {
        Backend::Well => radius.as_ref().map(|r| r.radius >= 2.0 * PI),
        Backend::Oscillator => None,
    };
    Ok(CoeffReport { rows, radius, radius_at_least_2pi })
}

pub fn coeffs_csv(rep: &CoeffReport) -> String {
    let mut out = String::from("n,e_n,abs_e_n,phi_l2,phi_l6\n");
    for r in &rep.rows {
        let _ = writeln!(
            out,
            "{},{:.10e},{:.10e},{:.10e},{:.10e}",
            r.n, r.e_n, r.abs_e_n, r.phi_l2, r.phi_l6
        );
    }
    match &rep.radius {
        Some(est) => {
            let _ = write!(
                out,
                "# growth={:.6} radius={:.6} root_radius={:.6} alternating={}",
                est.growth_constant, est.radius, est.root_radius, est.alternating
            );
            if let Some(flag) = rep.radius_at_least_2pi {
                let _ = write!(out, " radius_at_least_2pi={flag}");
            }
            out.push('\n');
        }
        None => out.push_str("# radius unavailable: too few orders\n"),
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub backend: Backend,
    pub order: usize,
    pub lemma: ConvergenceReport,
    pub sharp: ConvergenceReport,
}

/// Constant chain with lemma-level and sharp constants. A `gap` in the config
/// replaces the spectral gap of the backend.
pub fn bounds(cfg: &RunConfig) -> CliResult<BoundsReport> {
    let spec = cfg.spectrum()?;
    let state = SeriesState::<f64>::with_order(&spec, cfg.order.max(1))?;
    let run = |mode: ConstantMode| -> CliResult<ConvergenceReport> {
        let mut opts = ChainOptions::new(mode, mode);
        opts.c6d = cfg.c6d;
        opts.conservative_gamma = cfg.conservative_gamma;
        let mut rep = constant_chain(&state, &opts)?;
        if let Some(gap) = cfg.gap {
            let inputs = ChainInputs { gap, ..ChainInputs::from_state(&state)? };
            let empirical = (rep.empirical_radius, rep.empirical_growth_constant);
            rep = constant_chain_from(&inputs, &opts)?;
            (rep.empirical_radius, rep.empirical_growth_constant) = empirical;
        }
        Ok(rep)
    };
    Ok(BoundsReport {
        backend: cfg.backend,
        order: state.order(),
        lemma: run(ConstantMode::Lemma)?,
        sharp: run(ConstantMode::Sharp)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixReport {
    #[serde(rename = "J_max")]
    pub j_max: f64,
    #[serde(rename = "J_argmax")]
    pub j_argmax: usize,
    #[serde(rename = "I_max")]
    pub i_max: f64,
    #[serde(rename = "I_argmax")]
    pub i_argmax: usize,
    pub f_bound_ok: bool,
    pub j_range: usize,
    pub i_range: usize,
}

pub fn appendix() -> AppendixReport {
    let j = appendix_j_scan(APPENDIX_J_RANGE);
    let i = triple_sum_i_scan(APPENDIX_I_RANGE);
    AppendixReport {
        j_max: j.max,
        j_argmax: j.argmax,
        i_max: i.max,
        i_argmax: i.argmax,
        f_bound_ok: f_bound_holds(APPENDIX_J_RANGE),
        j_range: APPENDIX_J_RANGE,
        i_range: APPENDIX_I_RANGE,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    s.push('\n');
    Ok(s)
}
