//! Exact stationary states of `-psi'' + nu psi^3 = E psi` on `(-pi, pi)` with
//! Dirichlet walls, `psi(x) = chi sn(zeta (x + pi), k)`.
//!
//! The focusing branch has a purely imaginary modulus `k = i kappa`; it is
//! handled through the real transformation
//! `sn(x, i kappa) = k1' sd(x / k1', k1)` with `k1 = kappa / sqrt(1 + kappa^2)`,
//! `k1' = 1 / sqrt(1 + kappa^2)`, so no complex arithmetic is needed.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_STEPS: usize = 64;
const ROOT_TOL: f64 = 1e-13;
const NORM_TOL: f64 = 1e-8;
const ODE_TOL: f64 = 1e-6;
const DIRICHLET_TOL: f64 = 1e-10;
const FD_POINTS: usize = 4000;

/// `(K(k), sum)` with `E(k) = K(k) (1 - sum)`; keeping `sum` separate gives
/// `K - E = K sum` without cancellation for small `k`. The complementary
/// modulus `kp` is passed in so it keeps full precision as `k -> 1`.
fn agm(k: f64, kp: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&k.abs()) || !(kp > 0.0) {
        return Err(Error::InvalidArgument(format!("modulus {k} outside [0, 1)")));
    }
    let mut a = 1.0;
    let mut b = kp;
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() < AGM_TOL {
            break;
        }
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    Ok((PI / (2.0 * a), sum))
}

/// Complete elliptic integrals `(K(k), E(k))` by the arithmetic-geometric mean.
pub fn elliptic_ke(k: f64) -> Result<(f64, f64)> {
    let (kk, sum) = agm(k, (1.0 - k * k).sqrt())?;
    Ok((kk, kk * (1.0 - sum)))
}

/// `(K(i kappa), E(i kappa))`
pub fn elliptic_ke_imag(kappa: f64) -> Result<(f64, f64)> {
    let s = kappa.hypot(1.0);
    let (kk, sum) = agm(kappa / s, 1.0 / s)?;
    Ok((kk / s, kk * (1.0 - sum) * s))
}

/// `(K, K - E)` at real modulus.
fn k_and_gap(k: f64) -> Result<(f64, f64)> {
    let (kk, sum) = agm(k, (1.0 - k * k).sqrt())?;
    Ok((kk, kk * sum))
}

/// `(K, K - E)` at modulus `i kappa`.
fn k_and_gap_imag(kappa: f64) -> Result<(f64, f64)> {
    let s = kappa.hypot(1.0);
    let k1 = kappa / s;
    let (kk, sum) = agm(k1, 1.0 / s)?;
    // K(i kappa) - E(i kappa) = K(k1) (sum - k1^2) / k1'
    Ok((kk / s, kk * (sum - k1 * k1) * s))
}

/// `(sn, cn, dn)(u, k)` by the descending AGM scheme.
pub fn jacobi_sncndn(u: f64, k: f64) -> (f64, f64, f64) {
    sncndn(u, k, (1.0 - k * k).sqrt())
}

fn sncndn(u: f64, k: f64, kp: f64) -> (f64, f64, f64) {
    if k == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = vec![1.0];
    let mut c = vec![k];
    let mut b = kp;
    while c.last().unwrap().abs() > AGM_TOL && a.len() < AGM_MAX_STEPS {
        let ai = *a.last().unwrap();
        c.push(0.5 * (ai - b));
        a.push(0.5 * (ai + b));
        b = (ai * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (s, co) = phi.sin_cos();
    // dn^2 = k'^2 + k^2 cn^2 has no cancellation
    (s, co, (kp * kp + k * k * co * co).sqrt())
}

pub fn jacobi_sn(u: f64, k: f64) -> f64 {
    jacobi_sncndn(u, k).0
}

pub fn jacobi_cn(u: f64, k: f64) -> f64 {
    jacobi_sncndn(u, k).1
}

pub fn jacobi_dn(u: f64, k: f64) -> f64 {
    jacobi_sncndn(u, k).2
}

pub fn jacobi_sd(u: f64, k: f64) -> f64 {
    let (s, _, d) = jacobi_sncndn(u, k);
    s / d
}

/// `sn(u, i kappa)`
pub fn sn_imag(u: f64, kappa: f64) -> f64 {
    let s = kappa.hypot(1.0);
    let (sn, _, dn) = sncndn(u * s, kappa / s, 1.0 / s);
    sn / dn / s
}

/// `K (K - E)` at real modulus `k`; strictly increasing from 0 to infinity.
pub fn defocusing_map(k: f64) -> Result<f64> {
    let (kk, gap) = k_and_gap(k)?;
    Ok(kk * gap)
}

/// `K(i kappa) (K(i kappa) - E(i kappa))`; strictly decreasing from 0.
pub fn focusing_map(kappa: f64) -> Result<f64> {
    let (kk, gap) = k_and_gap_imag(kappa)?;
    Ok(kk * gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Defocusing,
    Focusing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticSolution {
    pub branch: Branch,
    /// Number of half-periods across the well.
    pub m: u32,
    /// `k` on the defocusing branch, `kappa` on the focusing one.
    pub modulus: f64,
    pub zeta: f64,
    pub chi: f64,
    pub x0: f64,
    pub energy: f64,
    pub target_norm2: f64,
}

impl EllipticSolution {
    /// Signed `k^2` (`-kappa^2` when focusing).
    pub fn k_sq(&self) -> f64 {
        match self.branch {
            Branch::Defocusing => self.modulus * self.modulus,
            Branch::Focusing => -self.modulus * self.modulus,
        }
    }

    fn complete(&self) -> Result<(f64, f64)> {
        match self.branch {
            Branch::Defocusing => elliptic_ke(self.modulus),
            Branch::Focusing => elliptic_ke_imag(self.modulus),
        }
    }

    /// `(K m / pi)^2 (1 + k^2)` from the stored modulus.
    pub fn energy_from_modulus(&self) -> Result<f64> {
        let (kk, _) = self.complete()?;
        let z = kk * self.m as f64 / PI;
        Ok(z * z * (1.0 + self.k_sq()))
    }

    pub fn psi(&self, x: f64) -> f64 {
        let u = self.zeta * (x - self.x0);
        self.chi
            * match self.branch {
                Branch::Defocusing => jacobi_sn(u, self.modulus),
                Branch::Focusing => sn_imag(u, self.modulus),
            }
    }
}

fn check_inputs(norm2: f64, m: u32) -> Result<()> {
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::InvalidArgument(format!("norm^2 must be positive, got {norm2}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("mode count must be positive".into()));
    }
    Ok(())
}

/// Bisection on an increasing `f` over `[lo, hi]`, down to adjacent floats.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let score = |x: f64| f(x).map(f64::abs).unwrap_or(f64::INFINITY);
    Ok(if score(lo) <= score(hi) { lo } else { hi })
}

fn assemble(branch: Branch, m: u32, modulus: f64, kk: f64, gap: f64, k_sq: f64, norm2: f64) -> EllipticSolution {
    let zeta = kk * m as f64 / PI;
    let chi = (kk * k_sq * norm2 / (2.0 * PI * gap)).sqrt();
    EllipticSolution {
        branch,
        m,
        modulus,
        zeta,
        chi,
        x0: -PI,
        energy: zeta * zeta * (1.0 + k_sq),
        target_norm2: norm2,
    }
}

/// Solves `K(k) (K(k) - E(k)) = nu pi norm2 / (4 m^2)` for `k` in `(0, 1)`.
pub fn solve_defocusing(nu: f64, norm2: f64, m: u32) -> Result<EllipticSolution> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("defocusing branch needs nu > 0, got {nu}")));
    }
    check_inputs(norm2, m)?;
    let target = nu * PI * norm2 / (4.0 * (m * m) as f64);
    let k = bisect(0.0, 1.0, |k| Ok(defocusing_map(k)? - target))?;
    if (defocusing_map(k)? - target).abs() >= ROOT_TOL * target.abs().max(1.0) {
        return Err(Error::NotBracketed { target });
    }
    let (kk, gap) = k_and_gap(k)?;
    Ok(assemble(Branch::Defocusing, m, k, kk, gap, k * k, norm2))
}

/// Solves `K(i kappa) (K(i kappa) - E(i kappa)) = nu pi norm2 / (4 m^2)` for
/// `kappa > 0`.
pub fn solve_focusing(nu: f64, norm2: f64, m: u32) -> Result<EllipticSolution> {
    if !(nu < 0.0) || !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("focusing branch needs nu < 0, got {nu}")));
    }
    check_inputs(norm2, m)?;
    let target = nu * PI * norm2 / (4.0 * (m * m) as f64);
    let mut lo = 1e-6;
    if focusing_map(lo)? < target {
        lo = 0.0;
    }
    let mut hi = 1.0;
    while focusing_map(hi)? > target {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e150 {
            return Err(Error::NotBracketed { target });
        }
    }
    // the map decreases, so bisect on its negative
    let kappa = bisect(lo, hi, |x| Ok(target - focusing_map(x)?))?;
    if (focusing_map(kappa)? - target).abs() >= ROOT_TOL * target.abs().max(1.0) {
        return Err(Error::NotBracketed { target });
    }
    let (kk, gap) = k_and_gap_imag(kappa)?;
    Ok(assemble(Branch::Focusing, m, kappa, kk, gap, -kappa * kappa, norm2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionCheck {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// `||psi||^2` by Gauss-Legendre quadrature.
    pub norm2: f64,
    /// L2 norm of `-psi'' + nu psi^3 - E psi` from fourth-order differences.
    pub residual_norm: f64,
    pub boundary: [f64; 2],
}

/// Samples the solution and verifies norm, equation and boundary values.
pub fn reconstruct_and_check(sol: &EllipticSolution, nu: f64) -> Result<ReconstructionCheck> {
    let quad = QuadratureRule::composite_gauss_legendre(-PI, PI, 128, 16)?;
    let values: Vec<f64> = quad.nodes().iter().map(|&x| sol.psi(x)).collect();
    let norm2: f64 = values.iter().zip(quad.weights()).map(|(v, w)| w * v * v).sum();
    let rel = (norm2 - sol.target_norm2).abs() / sol.target_norm2;
    if rel > NORM_TOL {
        return Err(Error::EllipticCheck(format!(
            "norm^2 {norm2} differs from target {} by {rel:e}",
            sol.target_norm2
        )));
    }

    let h = 2.0 * PI / FD_POINTS as f64;
    let grid: Vec<f64> = (0..=FD_POINTS).map(|i| sol.psi(-PI + i as f64 * h)).collect();
    let mut acc = 0.0;
    for i in 2..FD_POINTS - 1 {
        let d2 = (-grid[i - 2] + 16.0 * grid[i - 1] - 30.0 * grid[i] + 16.0 * grid[i + 1]
            - grid[i + 2])
            / (12.0 * h * h);
        let r = -d2 + nu * grid[i].powi(3) - sol.energy * grid[i];
        acc += r * r * h;
    }
    let residual_norm = acc.sqrt();
    if residual_norm > ODE_TOL {
        return Err(Error::EllipticCheck(format!("equation residual {residual_norm:e}")));
    }

    let boundary = [sol.psi(-PI), sol.psi(PI)];
    if boundary.iter().any(|b| b.abs() > DIRICHLET_TOL) {
        return Err(Error::EllipticCheck(format!("boundary values {boundary:?}")));
    }
    Ok(ReconstructionCheck {
        nodes: quad.nodes().to_vec(),
        values,
        norm2,
        residual_norm,
        boundary,
    })
}
