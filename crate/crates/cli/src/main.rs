use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gp_perturb::spectral::Backend;
use gp_perturb_cli::config::DEFAULT_TABLE_ORDER;
use gp_perturb_cli::{
    appendix, bounds, coeffs, coeffs_csv, compare, compare_csv, table, table_csv, to_json,
    CliError, CliResult, ConfigFile, Format, RunConfig,
};

#[derive(Parser)]
#[command(name = "gp-perturb", version, about = "Perturbative stationary states of the cubic NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// E_N, ||psi_N|| and ||r_N|| for N = 0..order at each nu
    Table(Common),
    /// Series energy against the exact elliptic solution (well only)
    Compare(Common),
    /// Coefficient decay data and the empirical radius
    Coeffs(Common),
    /// Convergence-radius constant chain (JSON)
    Bounds(BoundsArgs),
    /// Appendix sums J and I (JSON)
    Appendix {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    /// Comma-separated coupling values
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
    /// Highest perturbative order
    #[arg(long)]
    order: Option<usize>,
    /// Number of basis modes
    #[arg(long)]
    n2: Option<usize>,
    /// Oscillator box half-width
    #[arg(long)]
    length: Option<f64>,
    /// Oscillator quadrature nodes (multiple of 16)
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    common: Common,
    /// Replace the spectral gap
    #[arg(long)]
    gap: Option<f64>,
    /// Gagliardo-Nirenberg constant
    #[arg(long)]
    c6d: Option<f64>,
    /// gamma = max(16 ||phi_1||, 1)
    #[arg(long)]
    conservative_gamma: bool,
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    match s {
        "well" => Ok(Backend::Well),
        "oscillator" => Ok(Backend::Oscillator),
        _ => Err(format!("unknown backend '{s}' (well, oscillator)")),
    }
}

impl Common {
    fn resolve(self, extra: ConfigFile, default_order: usize) -> CliResult<RunConfig> {
        let base = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            backend: self.backend,
            nu: self.nu,
            order: self.order,
            n2: self.n2,
            length: self.length,
            nodes: self.nodes,
            format: self.format,
            out: self.out,
            ..extra
        };
        RunConfig::resolve(base.overlay(flags), default_order)
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let max = gp_perturb::series::DEFAULT_MAX_ORDER;
    match cli.command {
        Command::Table(c) => {
            let cfg = c.resolve(ConfigFile::default(), DEFAULT_TABLE_ORDER)?;
            let rows = table(&cfg)?;
            let text = match cfg.format {
                Format::Csv => table_csv(&rows),
                Format::Json => to_json(&rows)?,
            };
            emit(&text, cfg.out.as_ref())
        }
        Command::Compare(c) => {
            let cfg = c.resolve(ConfigFile::default(), DEFAULT_TABLE_ORDER)?;
            let rows = compare(&cfg)?;
            let text = match cfg.format {
                Format::Csv => compare_csv(&rows),
                Format::Json => to_json(&rows)?,
            };
            emit(&text, cfg.out.as_ref())
        }
        Command::Coeffs(c) => {
            let cfg = c.resolve(ConfigFile::default(), max)?;
            let rep = coeffs(&cfg)?;
            let text = match cfg.format {
                Format::Csv => coeffs_csv(&rep),
                Format::Json => to_json(&rep)?,
            };
            emit(&text, cfg.out.as_ref())
        }
        Command::Bounds(b) => {
            let extra = ConfigFile {
                gap: b.gap,
                c6d: b.c6d,
                conservative_gamma: b.conservative_gamma.then_some(true),
                ..ConfigFile::default()
            };
            if b.common.format == Some(Format::Csv) {
                return Err(CliError::Config("bounds output is JSON only".into()));
            }
            let cfg = b.common.resolve(extra, max)?;
            emit(&to_json(&bounds(&cfg)?)?, cfg.out.as_ref())
        }
        Command::Appendix { out } => emit(&to_json(&appendix())?, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gp-perturb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
