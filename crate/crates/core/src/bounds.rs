//! Explicit constants bounding the convergence radius of the series, the
//! combinatorial sums behind them, and an empirical radius read off the
//! computed coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::SeriesState;

/// `C1 <= 4 * 4.7^2`
pub const C1_LEMMA: f64 = 88.36;
pub const C1_SHARP: f64 = 10.45;
pub const C2_LEMMA: f64 = 2.70;
pub const C2_SHARP: f64 = 1.52;

/// Gagliardo-Nirenberg constant for `d = 1`, `p = 6`.
pub const DEFAULT_C6D: f64 = 1.0;

/// Slack allowed when re-checking the two conditions at the returned `alpha`.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

pub const MIN_EMPIRICAL_ORDERS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantMode {
    Lemma,
    Sharp,
}

impl ConstantMode {
    pub fn c1(self) -> f64 {
        match self {
            ConstantMode::Lemma => C1_LEMMA,
            ConstantMode::Sharp => C1_SHARP,
        }
    }

    pub fn c2(self) -> f64 {
        match self {
            ConstantMode::Lemma => C2_LEMMA,
            ConstantMode::Sharp => C2_SHARP,
        }
    }
}

/// `rho = d/2 - d/p`
pub fn gn_exponent(d: u32, p: f64) -> f64 {
    d as f64 / 2.0 - d as f64 / p
}

/// `(mu1, mu2)` for `p = 6`.
pub fn mu_constants(gamma: f64, lambda: f64, e0: f64, d: u32, c6d: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("gap must be positive, got {lambda}")));
    }
    if gamma > e0 {
        return Err(Error::InvalidArgument(format!("potential bound {gamma} exceeds e0 = {e0}")));
    }
    let rho = gn_exponent(d, 6.0);
    let shift = (e0 - gamma) / (lambda * lambda);
    let mu1 = (1.0 / (lambda * lambda) + 1.0 / lambda + shift).sqrt();
    let mu2 = c6d * lambda.powf(-(1.0 - rho)) * (1.0 / lambda + shift).powf(rho / 2.0);
    Ok((mu1, mu2))
}

/// `J(n) = sum_{m=1}^{n-1} 1 / ((m+1)^2 (n-m+1)^2)`
pub fn appendix_j(n: usize) -> f64 {
    (1..n)
        .map(|m| {
            let a = (m + 1) as f64;
            let b = (n - m + 1) as f64;
            1.0 / (a * a * b * b)
        })
        .sum()
}

/// `f(n) = 2 (n^2 - 1 + 2 n ln n) / ((n + 1) n)`, the closed-form majorant of
/// `J(n) (n+1)^2`.
pub fn f_bound(n: usize) -> f64 {
    let x = n as f64;
    2.0 * (x * x - 1.0 + 2.0 * x * x.ln()) / ((x + 1.0) * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanMax {
    pub argmax: usize,
    pub max: f64,
}

fn scan(range: impl Iterator<Item = usize>, g: impl Fn(usize) -> f64) -> ScanMax {
    let mut best = ScanMax { argmax: 0, max: f64::NEG_INFINITY };
    for n in range {
        let v = g(n);
        if v > best.max {
            best = ScanMax { argmax: n, max: v };
        }
    }
    best
}

/// Max of `J(n) (n+1)^2` over `3 <= n <= n_max`.
pub fn appendix_j_scan(n_max: usize) -> ScanMax {
    scan(3..=n_max, |n| appendix_j(n) * ((n + 1) * (n + 1)) as f64)
}

/// Whether `J(n)(n+1)^2 <= f(n) <= 2.70` for all `3 <= n <= n_max`.
pub fn f_bound_holds(n_max: usize) -> bool {
    (3..=n_max).all(|n| {
        let g = appendix_j(n) * ((n + 1) * (n + 1)) as f64;
        let f = f_bound(n);
        g <= f && f <= C2_LEMMA
    })
}

fn inner_s(k: usize) -> f64 {
    (0..=k)
        .map(|l| {
            let a = (l + 1) as f64;
            let b = (k + 1 - l) as f64;
            1.0 / (a * a * b * b)
        })
        .sum()
}

/// `I(n) = sum_{m=0}^{n-1} (m+1)^{-2} sum_{l=0}^{n-1-m} (l+1)^{-2} (n-m-l)^{-2}`
pub fn triple_sum_i(n: usize) -> f64 {
    (0..n)
        .map(|m| {
            let a = (m + 1) as f64;
            inner_s(n - 1 - m) / (a * a)
        })
        .sum()
}

/// Max of `I(n) (n+1)^2` over `1 <= n <= n_max`, in `O(n_max^2)`.
pub fn triple_sum_i_scan(n_max: usize) -> ScanMax {
    let s: Vec<f64> = (0..n_max).map(inner_s).collect();
    scan(1..=n_max, |n| {
        let i: f64 = (0..n)
            .map(|m| {
                let a = (m + 1) as f64;
                s[n - 1 - m] / (a * a)
            })
            .sum();
        i * ((n + 1) * (n + 1)) as f64
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainOptions {
    pub c1_mode: ConstantMode,
    pub c2_mode: ConstantMode,
    pub dim: u32,
    pub c6d: f64,
    /// Use `gamma = max(16 c1, 1)` instead of `max(4 c1, 1)`.
    pub conservative_gamma: bool,
}

impl ChainOptions {
    pub fn new(c1_mode: ConstantMode, c2_mode: ConstantMode) -> Self {
        Self { c1_mode, c2_mode, dim: 1, c6d: DEFAULT_C6D, conservative_gamma: false }
    }
}

/// Scalars the chain needs from a spectrum and the first order of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainInputs {
    /// Lower bound of the potential.
    pub potential_bound: f64,
    pub gap: f64,
    pub e0: f64,
    /// `|e_1|`
    pub b1: f64,
    /// `||phi_1||_2`
    pub c1: f64,
    /// `||phi_0||_6`
    pub d0: f64,
}

impl ChainInputs {
    pub fn from_state<T: Real>(state: &SeriesState<'_, T>) -> Result<Self> {
        if state.order() < 1 {
            return Err(Error::OrderOutOfRange { requested: 1, available: state.order() });
        }
        let spec = state.spectrum();
        Ok(Self {
            potential_bound: spec.gamma(),
            gap: spec.gap(),
            e0: spec.e0(),
            b1: state.b()[1],
            c1: state.c()[1],
            d0: state.d()[0],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    #[serde(rename = "Gamma")]
    pub potential_bound: f64,
    #[serde(rename = "Lambda")]
    pub gap: f64,
    pub d: u32,
    pub rho: f64,
    #[serde(rename = "C6d")]
    pub c6d: f64,
    pub mu1: f64,
    pub mu2: f64,
    #[serde(rename = "C1")]
    pub big_c1: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub nu_star: f64,
    /// The two bracketed expressions evaluated at `alpha`; both are `<= 1`.
    pub brackets: [f64; 2],
    pub empirical_radius: Option<f64>,
    pub empirical_growth_constant: Option<f64>,
}

/// Smallest `alpha >= 0` with
///
/// ```text
/// e^{-alpha} / Lambda * (2 C1 delta^3 / gamma + C2 beta)        <= 1
/// e^{-alpha} mu2 * (2 C1 delta^2 + C2 beta gamma / delta)       <= 1
/// ```
pub fn constant_chain_from(inputs: &ChainInputs, opts: &ChainOptions) -> Result<ConvergenceReport> {
    let (mu1, mu2) =
        mu_constants(inputs.potential_bound, inputs.gap, inputs.e0, opts.dim, opts.c6d)?;
    let c1 = opts.c1_mode.c1();
    let c2 = opts.c2_mode.c2();
    let delta = inputs.d0.max(1.0);
    let gamma_factor = if opts.conservative_gamma { 16.0 } else { 4.0 };
    let gamma = (gamma_factor * inputs.c1).max(1.0);
    let beta = (4.0 * inputs.b1).max(c1 * delta.powi(3));

    let first = (2.0 * c1 * delta.powi(3) / gamma + c2 * beta) / inputs.gap;
    let second = mu2 * (2.0 * c1 * delta * delta + c2 * beta * gamma / delta);
    let alpha = first.ln().max(second.ln()).max(0.0);
    let nu_star = (-alpha).exp();

    for (name, v) in [("mu1", mu1), ("mu2", mu2), ("beta", beta), ("gamma", gamma), ("alpha", alpha)] {
        if !v.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }

    Ok(ConvergenceReport {
        potential_bound: inputs.potential_bound,
        gap: inputs.gap,
        d: opts.dim,
        rho: gn_exponent(opts.dim, 6.0),
        c6d: opts.c6d,
        mu1,
        mu2,
        big_c1: c1,
        big_c2: c2,
        beta,
        gamma,
        delta,
        alpha,
        nu_star,
        brackets: [nu_star * first, nu_star * second],
        empirical_radius: None,
        empirical_growth_constant: None,
    })
}

/// Full chain for a computed series, with the empirical estimate attached
/// when enough orders are available.
pub fn constant_chain<T: Real>(
    state: &SeriesState<'_, T>,
    opts: &ChainOptions,
) -> Result<ConvergenceReport> {
    let mut report = constant_chain_from(&ChainInputs::from_state(state)?, opts)?;
    if let Ok(est) = empirical_radius(&state.e_f64()) {
        report.empirical_radius = Some(est.radius);
        report.empirical_growth_constant = Some(est.growth_constant);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub growth_constant: f64,
    pub radius: f64,
    /// `|e_n|^{-1/n}` at the largest `n`.
    pub root_radius: f64,
    /// Whether the signs of `e_1, e_2, ...` alternate.
    pub alternating: bool,
}

/// Ratio-test estimate from `e[n] = e_n`, `n = 0, 1, ...`. Uses the median
/// of `|e_{n+1} / e_n|` over the last half of the ratios with `n >= 1`.
pub fn empirical_radius(e: &[f64]) -> Result<RadiusEstimate> {
    let tail = e.get(1..).unwrap_or(&[]);
    let nonzero = tail.iter().filter(|x| **x != 0.0).count();
    if nonzero < MIN_EMPIRICAL_ORDERS {
        return Err(Error::InvalidArgument(format!(
            "need {MIN_EMPIRICAL_ORDERS} nonzero coefficients beyond e_0, got {nonzero}"
        )));
    }
    let mut ratios: Vec<f64> = tail
        .windows(2)
        .filter(|w| w[0] != 0.0)
        .map(|w| (w[1] / w[0]).abs())
        .collect();
    let half = ratios.len() / 2;
    let mut last: Vec<f64> = ratios.split_off(half);
    last.sort_by(f64::total_cmp);
    let k = last.len();
    let growth_constant =
        if k % 2 == 1 { last[k / 2] } else { 0.5 * (last[k / 2 - 1] + last[k / 2]) };

    let n = e.len() - 1;
    let root_radius = e[n].abs().powf(-1.0 / n as f64);
    let alternating = tail.windows(2).all(|w| w[0] * w[1] < 0.0);
    Ok(RadiusEstimate { growth_constant, radius: 1.0 / growth_constant, root_radius, alternating })
}

/// `a_n = |e_n| (8 pi)^n / 4`
pub fn scaled_coefficients(e: &[f64]) -> Vec<f64> {
    let s = 8.0 * std::f64::consts::PI;
    e.iter().enumerate().map(|(n, x)| x.abs() * s.powi(n as i32) / 4.0).collect()
}

/// Outcome of testing the computed `b_n, c_n, d_n` against the inequalities
/// the chain is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCheck {
    /// `b_n <= S_n` and `c_n <= (2 S_n + T_n) / Lambda`, with `S_n` the
    /// triple convolution of `d` and `T_n` the convolution of `b` and `c`.
    pub recursive: bool,
    /// `b_n <= beta e^{alpha(n-1)} / (n+1)^2`, `c_n <= gamma e^{alpha n} / (n+1)^2`,
    /// `d_n <= delta e^{alpha n} / (n+1)^2`.
    pub exponential: bool,
    pub orders: usize,
}

pub fn growth_check<T: Real>(state: &SeriesState<'_, T>, report: &ConvergenceReport) -> GrowthCheck {
    let (b, c, d) = (state.b(), state.c(), state.d());
    let tol = 1e-12;
    let mut recursive = true;
    let mut exponential = true;
    for n in 1..=state.order() {
        let mut s = 0.0;
        for m in 0..n {
            for l in 0..n - m {
                s += d[m] * d[l] * d[n - 1 - m - l];
            }
        }
        let t: f64 = (1..n).map(|m| b[m] * c[n - m]).sum();
        recursive &= b[n] <= s * (1.0 + tol) && c[n] <= (2.0 * s + t) / report.gap * (1.0 + tol);

        let w = 1.0 / ((n + 1) * (n + 1)) as f64;
        let a = report.alpha;
        exponential &= b[n] <= report.beta * (a * (n as f64 - 1.0)).exp() * w
            && c[n] <= report.gamma * (a * n as f64).exp() * w
            && d[n] <= report.delta * (a * n as f64).exp() * w;
    }
    GrowthCheck { recursive, exponential, orders: state.order() }
}
