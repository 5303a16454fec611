use std::f64::consts::PI;

use super::{Backend, LinearSpectrum};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

pub const DEFAULT_WELL_N2: usize = 80;
pub const DEFAULT_OSCILLATOR_N2: usize = 60;
pub const DEFAULT_OSCILLATOR_HALF_WIDTH: f64 = 16.0;
pub const DEFAULT_OSCILLATOR_NODES: usize = 2048;

const MIN_N2: usize = 8;
const PANEL_ORDER: usize = 16;
const WELL_PANELS: usize = 128;
const WELL_ORTHO_TOL: f64 = 1e-10;
const HERMITE_ORTHO_TOL: f64 = 1e-8;
const HERMITE_EDGE_TOL: f64 = 1e-14;

pub(crate) fn well_modes(n2: usize, x: f64) -> Vec<f64> {
    let norm = 1.0 / PI.sqrt();
    (1..=n2)
        .map(|j| {
            let arg = j as f64 * x / 2.0;
            norm * if j % 2 == 1 { arg.cos() } else { arg.sin() }
        })
        .collect()
}

/// Normalized Hermite functions `q_1 .. q_n2` at `x` by the stable
/// recurrence `h_{j+1} = x sqrt(2/(j+1)) h_j - sqrt(j/(j+1)) h_{j-1}`.
pub(crate) fn hermite_modes(n2: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n2);
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if n2 > 1 {
        out.push(2f64.sqrt() * x * h0);
    }
    for j in 1..n2.saturating_sub(1) {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

fn tabulate(n2: usize, nodes: &[f64], modes: impl Fn(usize, f64) -> Vec<f64>) -> Vec<f64> {
    let m = nodes.len();
    let mut table = vec![0.0; n2 * m];
    for (i, &x) in nodes.iter().enumerate() {
        for (j, v) in modes(n2, x).into_iter().enumerate() {
            table[j * m + i] = v;
        }
    }
    table
}

/// Dirichlet Laplacian on (-pi, pi): `lambda_j = j^2/4`.
pub fn well_spectrum(n2: usize) -> Result<LinearSpectrum> {
    if n2 < MIN_N2 {
        return Err(Error::InvalidArgument(format!("n2 = {n2} is below the minimum {MIN_N2}")));
    }
    let quad = QuadratureRule::composite_gauss_legendre(-PI, PI, WELL_PANELS, PANEL_ORDER)?;
    let basis = tabulate(n2, quad.nodes(), well_modes);
    let eigenvalues = (1..=n2).map(|j| (j * j) as f64 / 4.0).collect();
    let spec = LinearSpectrum::from_parts(Backend::Well, eigenvalues, 0.0, quad, basis, PI);
    let err = spec.orthonormality_error();
    if err > WELL_ORTHO_TOL {
        return Err(Error::QuadratureUnderResolved { max_error: err });
    }
    Ok(spec)
}

/// Harmonic oscillator `-d^2/dx^2 + x^2` on the box [-half_width, half_width]
/// with `nodes` composite Gauss-Legendre points: `lambda_j = 2j - 1`.
pub fn hermite_spectrum(n2: usize, half_width: f64, nodes: usize) -> Result<LinearSpectrum> {
    if n2 < MIN_N2 {
        return Err(Error::InvalidArgument(format!("n2 = {n2} is below the minimum {MIN_N2}")));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidArgument(format!("half width {half_width} must be positive")));
    }
    if nodes == 0 || nodes % PANEL_ORDER != 0 {
        return Err(Error::InvalidArgument(format!(
            "node count {nodes} must be a positive multiple of {PANEL_ORDER}"
        )));
    }
    let edge = hermite_modes(n2, half_width)[n2 - 1];
    if edge * edge >= HERMITE_EDGE_TOL {
        return Err(Error::BoxTooSmall { mode: n2, value_sq: edge * edge });
    }
    let quad = QuadratureRule::composite_gauss_legendre(
        -half_width,
        half_width,
        nodes / PANEL_ORDER,
        PANEL_ORDER,
    )?;
    let basis = tabulate(n2, quad.nodes(), hermite_modes);
    let eigenvalues = (1..=n2).map(|j| 2.0 * j as f64 - 1.0).collect();
    let spec =
        LinearSpectrum::from_parts(Backend::Oscillator, eigenvalues, 0.0, quad, basis, half_width);
    let err = spec.orthonormality_error();
    if err > HERMITE_ORTHO_TOL {
        return Err(Error::QuadratureUnderResolved { max_error: err });
    }
    Ok(spec)
}
