use std::path::{Path, PathBuf};

use gp_perturb::spectral::{
    hermite_spectrum, well_spectrum, Backend, LinearSpectrum, DEFAULT_OSCILLATOR_HALF_WIDTH,
    DEFAULT_OSCILLATOR_N2, DEFAULT_OSCILLATOR_NODES, DEFAULT_WELL_N2,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// The coupling values of the published tables.
pub const DEFAULT_NU: [f64; 4] = [0.1, 1.0, -0.1, -1.0];
pub const DEFAULT_TABLE_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Contents of a `--config` file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub backend: Option<Backend>,
    pub nu: Option<Vec<f64>>,
    pub order: Option<usize>,
    pub n2: Option<usize>,
    pub length: Option<f64>,
    pub nodes: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub gap: Option<f64>,
    pub c6d: Option<f64>,
    pub conservative_gamma: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            backend: other.backend.or(self.backend),
            nu: other.nu.or(self.nu),
            order: other.order.or(self.order),
            n2: other.n2.or(self.n2),
            length: other.length.or(self.length),
            nodes: other.nodes.or(self.nodes),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
            gap: other.gap.or(self.gap),
            c6d: other.c6d.or(self.c6d),
            conservative_gamma: other.conservative_gamma.or(self.conservative_gamma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub backend: Backend,
    pub nu: Vec<f64>,
    pub order: usize,
    pub n2: usize,
    pub length: f64,
    pub nodes: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub gap: Option<f64>,
    pub c6d: f64,
    pub conservative_gamma: bool,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, default_order: usize) -> Result<Self, CliError> {
        let backend = file.backend.unwrap_or(Backend::Well);
        if backend == Backend::Well && (file.length.is_some() || file.nodes.is_some()) {
            return Err(CliError::Config("--length and --nodes apply to the oscillator only".into()));
        }
        let nu = file.nu.unwrap_or_else(|| DEFAULT_NU.to_vec());
        if nu.is_empty() || nu.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config("nu list must be non-empty and finite".into()));
        }
        let n2 = file.n2.unwrap_or(match backend {
            Backend::Well => DEFAULT_WELL_N2,
            Backend::Oscillator => DEFAULT_OSCILLATOR_N2,
        });
        let c6d = file.c6d.unwrap_or(gp_perturb::bounds::DEFAULT_C6D);
        if !(c6d > 0.0) {
            return Err(CliError::Config(format!("C6d must be positive, got {c6d}")));
        }
        if let Some(g) = file.gap {
            if !(g > 0.0) {
                return Err(CliError::Config(format!("gap must be positive, got {g}")));
            }
        }
        Ok(Self {
            backend,
            nu,
            order: file.order.unwrap_or(default_order),
            n2,
            length: file.length.unwrap_or(DEFAULT_OSCILLATOR_HALF_WIDTH),
            nodes: file.nodes.unwrap_or(DEFAULT_OSCILLATOR_NODES),
            format: file.format.unwrap_or_default(),
            out: file.out,
            gap: file.gap,
            c6d,
            conservative_gamma: file.conservative_gamma.unwrap_or(false),
        })
    }

    pub fn spectrum(&self) -> Result<LinearSpectrum, CliError> {
        let spec = match self.backend {
            Backend::Well => well_spectrum(self.n2),
            Backend::Oscillator => hermite_spectrum(self.n2, self.length, self.nodes),
        };
        spec.map_err(|e| match e {
            gp_perturb::Error::InvalidArgument(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        })
    }
}
