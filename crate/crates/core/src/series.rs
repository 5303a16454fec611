//! Rayleigh-Schrödinger recursion for `H psi + nu psi^3 = E psi`.
//!
//! Starting from the seed eigenpair `(e0, phi0)`, order `n` is built from
//!
//! ```text
//! v_{n-1}    = sum_{m + l + k = n - 1} phi_m phi_l phi_k
//! u_n        = sum_{m=1}^{n-1} e_m phi_{n-m}
//! e_n        = <phi0, v_{n-1}> / <phi0, phi0>
//! varphi_n   = e_n phi0 + u_n - v_{n-1}
//! phi_n      = [H - e0]^{-1} varphi_n
//! ```
//!
//! All coefficients are real. A complex `nu` is only allowed when summing.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectral::{FieldFunction, LinearSpectrum, Lp};

pub const DEFAULT_MAX_ORDER: usize = 12;

/// Relative tolerance for `<varphi_n, phi0>` before the resolvent.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Relative tolerance between the tail formula and the direct residual.
pub const CANCELLATION_TOL: f64 = 1e-9;

const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SeriesState<'a, T: Real = f64> {
    spec: &'a LinearSpectrum,
    e: Vec<T>,
    phi: Vec<FieldFunction<T>>,
    /// `v[k]` is `v_k`.
    v: Vec<FieldFunction<T>>,
    /// `u[k]` is `u_{k+1}`.
    u: Vec<FieldFunction<T>>,
    /// `varphi[k]` is the source of order `k + 1`.
    varphi: Vec<FieldFunction<T>>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

/// Partial sums `E_N`, `psi_N` at a given `nu`.
#[derive(Debug, Clone)]
pub struct PerturbativeSolution<T: Real = f64> {
    pub nu: T,
    pub order: usize,
    pub energy: T,
    pub psi: FieldFunction<T>,
    pub psi_norm: f64,
}

/// Partial sums at complex `nu`; `psi` is given by its basis coefficients.
#[derive(Debug, Clone)]
pub struct ComplexSolution {
    pub nu: Complex64,
    pub order: usize,
    pub energy: Complex64,
    pub psi: Vec<Complex64>,
    pub psi_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CancellationSample {
    pub nu: f64,
    pub direct: f64,
    pub tail: f64,
    /// `||r_direct - r_tail|| / ||r_direct||`
    pub mismatch: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CancellationReport {
    pub order: usize,
    pub samples: Vec<CancellationSample>,
    /// Least-squares slope of `log ||r_N||` against `log |nu|`.
    pub slope: Option<f64>,
}

impl<'a, T: Real> SeriesState<'a, T> {
    pub fn new(spec: &'a LinearSpectrum) -> Result<Self> {
        let phi0 = spec.phi0::<T>();
        let norm = spec.lp_norm(&phi0, Lp::L2);
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let d0 = spec.lp_norm(&phi0, Lp::L6);
        Ok(Self {
            spec,
            e: vec![T::from_f64(spec.e0())],
            phi: vec![phi0],
            v: Vec::new(),
            u: Vec::new(),
            varphi: Vec::new(),
            b: vec![spec.e0().abs()],
            c: vec![norm],
            d: vec![d0],
        })
    }

    /// Runs the recursion through order `n`.
    pub fn with_order(spec: &'a LinearSpectrum, n: usize) -> Result<Self> {
        let mut state = Self::new(spec)?;
        state.extend_to(n)?;
        Ok(state)
    }

    pub fn spectrum(&self) -> &'a LinearSpectrum {
        self.spec
    }

    /// Highest order computed.
    pub fn order(&self) -> usize {
        self.e.len() - 1
    }

    pub fn e(&self) -> &[T] {
        &self.e
    }

    pub fn e_f64(&self) -> Vec<f64> {
        self.e.iter().map(|x| x.to_f64()).collect()
    }

    pub fn phi(&self, n: usize) -> &FieldFunction<T> {
        &self.phi[n]
    }

    pub fn v(&self, k: usize) -> &FieldFunction<T> {
        &self.v[k]
    }

    pub fn u(&self, n: usize) -> &FieldFunction<T> {
        &self.u[n - 1]
    }

    pub fn varphi(&self, n: usize) -> &FieldFunction<T> {
        &self.varphi[n - 1]
    }

    /// `b_n = |e_n|`
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `c_n = ||phi_n||_2`
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// `d_n = ||phi_n||_6`
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn next_order(&mut self) -> Result<()> {
        let n = self.e.len();
        let spec = self.spec;

        let mut terms = Vec::with_capacity(n * (n + 1) / 2);
        for m in 0..n {
            for l in 0..n - m {
                terms.push((&self.phi[m], &self.phi[l], &self.phi[n - 1 - m - l]));
            }
        }
        let v = spec.triple_sum(&terms)?;

        let mut u = spec.zero::<T>();
        for m in 1..n {
            u.axpy(self.e[m], &self.phi[n - m])?;
        }

        let phi0 = &self.phi[0];
        let en = phi0.dot(&v)?.quot(phi0.dot(phi0)?);
        if !en.to_f64().is_finite() {
            return Err(Error::NonFinite("e_n"));
        }

        let mut varphi = u.sub(&v)?;
        varphi.axpy(en, phi0)?;
        let overlap = varphi.dot(phi0)?.to_f64();
        let norm = varphi.norm().to_f64();
        if overlap.abs() > ORTHOGONALITY_TOL * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::NotOrthogonal { overlap, norm });
        }
        let phin = spec.resolvent(&varphi)?;

        self.b.push(en.to_f64().abs());
        self.c.push(phin.norm().to_f64());
        self.d.push(spec.lp_norm(&phin, Lp::L6));
        self.e.push(en);
        self.phi.push(phin);
        self.v.push(v);
        self.u.push(u);
        self.varphi.push(varphi);
        Ok(())
    }

    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.order() < n {
            self.next_order()?;
        }
        Ok(())
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n > self.order() {
            Err(Error::OrderOutOfRange { requested: n, available: self.order() })
        } else {
            Ok(())
        }
    }

    pub fn partial_sums(&self, nu: T, n: usize) -> Result<PerturbativeSolution<T>> {
        self.check_order(n)?;
        let mut energy = self.e[n];
        let mut psi = self.phi[n].clone();
        for k in (0..n).rev() {
            energy = energy * nu + self.e[k];
            psi = psi.scaled(nu);
            psi.axpy(T::one(), &self.phi[k])?;
        }
        let psi_norm = psi.norm().to_f64();
        Ok(PerturbativeSolution { nu, order: n, energy, psi, psi_norm })
    }

    pub fn partial_sums_complex(&self, nu: Complex64, n: usize) -> Result<ComplexSolution> {
        self.check_order(n)?;
        let to_c = |f: &FieldFunction<T>| -> Vec<Complex64> {
            f.coeffs().iter().map(|c| Complex64::new(c.to_f64(), 0.0)).collect()
        };
        let mut energy = Complex64::new(self.e[n].to_f64(), 0.0);
        let mut psi = to_c(&self.phi[n]);
        for k in (0..n).rev() {
            energy = energy * nu + self.e[k].to_f64();
            for (p, q) in psi.iter_mut().zip(to_c(&self.phi[k])) {
                *p = *p * nu + q;
            }
        }
        let psi_norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(ComplexSolution { nu, order: n, energy, psi, psi_norm })
    }

    /// `r_N = H psi_N + nu psi_N^3 - E_N psi_N`, projected on the basis.
    pub fn residual_vector(&self, nu: T, n: usize) -> Result<FieldFunction<T>> {
        let sol = self.partial_sums(nu, n)?;
        let spec = self.spec;
        let psi = &sol.psi;
        let mut r = spec.apply_h(psi)?;
        r.axpy(-sol.energy, psi)?;
        if nu != T::zero() {
            r.axpy(nu, &spec.triple_product(psi, psi, psi)?)?;
        }
        Ok(r)
    }

    pub fn residual(&self, nu: T, n: usize) -> Result<f64> {
        Ok(self.residual_vector(nu, n)?.norm().to_f64())
    }

    /// The residual assembled from its surviving powers of `nu`:
    ///
    /// ```text
    /// r_N = sum_{n=N+1}^{3N+1} nu^n v^(N)_{n-1} - sum_{n=N+1}^{2N} nu^n u^(N)_n
    /// ```
    ///
    /// where `v^(N)` and `u^(N)` only use `phi_0 .. phi_N` and `e_1 .. e_N`.
    pub fn tail_residual_vector(&self, nu: T, n: usize) -> Result<FieldFunction<T>> {
        self.check_order(n)?;
        let spec = self.spec;
        let mut r = spec.zero::<T>();
        for p in n + 1..=3 * n + 1 {
            let total = p - 1;
            let mut terms = Vec::new();
            for m in 0..=n.min(total) {
                for l in 0..=n.min(total - m) {
                    let k = total - m - l;
                    if k <= n {
                        terms.push((&self.phi[m], &self.phi[l], &self.phi[k]));
                    }
                }
            }
            let vp = spec.triple_sum(&terms)?;
            r.axpy(nu.powi(p as u32), &vp)?;
        }
        for p in n + 1..=2 * n {
            let mut up = spec.zero::<T>();
            for m in p - n..=n {
                up.axpy(self.e[m], &self.phi[p - m])?;
            }
            r.axpy(-nu.powi(p as u32), &up)?;
        }
        Ok(r)
    }

    /// Compares the tail formula against the direct residual at each sample
    /// and fits the log-log slope of `||r_N||` in `nu`.
    pub fn cancellation_check(&self, n: usize, nu_samples: &[f64]) -> Result<CancellationReport> {
        let mut samples = Vec::with_capacity(nu_samples.len());
        for &x in nu_samples {
            let nu = T::from_f64(x);
            let direct = self.residual_vector(nu, n)?;
            let tail = self.tail_residual_vector(nu, n)?;
            let dn = direct.norm().to_f64();
            let diff = direct.sub(&tail)?.norm().to_f64();
            let mismatch = if dn > 0.0 { diff / dn } else { diff };
            if !(mismatch <= CANCELLATION_TOL) {
                return Err(Error::CancellationMismatch { nu: x, mismatch });
            }
            samples.push(CancellationSample { nu: x, direct: dn, tail: tail.norm().to_f64(), mismatch });
        }
        let points: Vec<(f64, f64)> = samples
            .iter()
            .filter(|s| s.nu != 0.0 && s.direct > 0.0)
            .map(|s| (s.nu.abs().ln(), s.direct.ln()))
            .collect();
        Ok(CancellationReport { order: n, samples, slope: fit_slope(&points) })
    }
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}
