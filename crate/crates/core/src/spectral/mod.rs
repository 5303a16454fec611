//! Function representation, quadrature-backed operations and the two linear
//! backends (infinite well, harmonic oscillator).
//!
//! Every [`FieldFunction`] lives in the span of the first `n2` eigenfunctions
//! of a [`LinearSpectrum`]: the coefficient vector is authoritative and the
//! grid samples are regenerated from it after every operation.

mod backends;
mod trig;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::real::{norm2, Real};

pub use backends::{
    hermite_spectrum, well_spectrum, DEFAULT_OSCILLATOR_HALF_WIDTH, DEFAULT_OSCILLATOR_N2,
    DEFAULT_OSCILLATOR_NODES, DEFAULT_WELL_N2,
};
use trig::HalfTrig;

/// Absolute/relative tolerance for the exact-vs-quadrature product check on
/// the well backend.
pub const PRODUCT_PATH_TOL: f64 = 1e-10;

/// Relative tolerance on the ground-mode overlap accepted by the resolvent.
pub const RESOLVENT_OVERLAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Well,
    Oscillator,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Well => f.write_str("well"),
            Backend::Oscillator => f.write_str("oscillator"),
        }
    }
}

/// Identifies the basis a function is expanded in; mixing is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisId {
    pub backend: Backend,
    pub n2: usize,
    pub nodes: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lp {
    L2,
    L3,
    L6,
    Inf,
}

/// A real function stored as basis coefficients plus cached grid samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFunction<T = f64> {
    coeffs: Vec<T>,
    grid: Vec<T>,
    basis: BasisId,
}

impl<T: Real> FieldFunction<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn grid_values(&self) -> &[T] {
        &self.grid
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// Coefficient-space inner product (Parseval).
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.check_same(other)?;
        let mut acc = T::zero();
        for (&a, &b) in self.coeffs.iter().zip(&other.coeffs) {
            acc += a * b;
        }
        Ok(acc)
    }

    /// L2 norm from the coefficients.
    pub fn norm(&self) -> T {
        norm2(&self.coeffs)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
            grid: self.grid.iter().map(|&g| g * factor).collect(),
            basis: self.basis,
        }
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: T, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (c, &o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += factor * o;
        }
        for (g, &o) in self.grid.iter_mut().zip(&other.grid) {
            *g += factor * o;
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(T::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-T::one(), other)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == T::zero())
    }

    pub fn to_f64(&self) -> FieldFunction<f64> {
        FieldFunction {
            coeffs: self.coeffs.iter().map(|c| c.to_f64()).collect(),
            grid: self.grid.iter().map(|g| g.to_f64()).collect(),
            basis: self.basis,
        }
    }
}

/// A self-adjoint linear operator with purely discrete spectrum, truncated
/// to its first `n2` eigenpairs and sampled on a quadrature grid.
#[derive(Debug, Clone)]
pub struct LinearSpectrum {
    backend: Backend,
    eigenvalues: Vec<f64>,
    seed: usize,
    gamma: f64,
    quad: QuadratureRule,
    /// Row `j` holds `q_{j+1}` at the quadrature nodes.
    basis: Vec<f64>,
    /// Row `j` holds `w_i q_{j+1}(x_i)`.
    weighted: Vec<f64>,
    half_width: f64,
}

impl LinearSpectrum {
    pub(crate) fn from_parts(
        backend: Backend,
        eigenvalues: Vec<f64>,
        gamma: f64,
        quad: QuadratureRule,
        basis: Vec<f64>,
        half_width: f64,
    ) -> Self {
        let m = quad.len();
        let mut weighted = basis.clone();
        for row in weighted.chunks_mut(m) {
            for (v, w) in row.iter_mut().zip(quad.weights()) {
                *v *= w;
            }
        }
        Self { backend, eigenvalues, seed: 0, gamma, quad, basis, weighted, half_width }
    }

    /// Same operator, perturbing around eigenvalue `mode` (1-based) instead
    /// of the ground state.
    pub fn with_seed(mut self, mode: usize) -> Result<Self> {
        if mode == 0 || mode > self.n2() {
            return Err(Error::InvalidArgument(format!("seed mode {mode} outside 1..={}", self.n2())));
        }
        self.seed = mode - 1;
        Ok(self)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn n2(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn basis_id(&self) -> BasisId {
        BasisId {
            backend: self.backend,
            n2: self.n2(),
            nodes: self.quad.len(),
            half_width: self.half_width,
        }
    }

    /// `lambda_j`, 1-based.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        self.eigenvalues[j - 1]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// 1-based index of the seed eigenpair.
    pub fn seed_mode(&self) -> usize {
        self.seed + 1
    }

    pub fn e0(&self) -> f64 {
        self.eigenvalues[self.seed]
    }

    /// Distance from `e0` to the rest of the (truncated) spectrum.
    pub fn gap(&self) -> f64 {
        let e0 = self.e0();
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != self.seed)
            .map(|(_, &l)| (l - e0).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Lower bound of the potential.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn domain(&self) -> (f64, f64) {
        self.quad.interval()
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    fn row<'a>(&self, table: &'a [f64], j: usize) -> &'a [f64] {
        let m = self.quad.len();
        &table[j * m..(j + 1) * m]
    }

    /// Grid samples of the expansion with the given coefficients.
    pub fn synthesize<T: Real>(&self, coeffs: &[T]) -> Vec<T> {
        let mut grid = vec![T::zero(); self.quad.len()];
        for (j, &c) in coeffs.iter().enumerate() {
            if c == T::zero() {
                continue;
            }
            for (g, &q) in grid.iter_mut().zip(self.row(&self.basis, j)) {
                *g += c * T::from_f64(q);
            }
        }
        grid
    }

    /// Quadrature projection of grid samples onto the first `n2` modes.
    pub fn project<T: Real>(&self, grid: &[T]) -> Vec<T> {
        (0..self.n2())
            .map(|j| {
                let mut acc = T::zero();
                for (&g, &wq) in grid.iter().zip(self.row(&self.weighted, j)) {
                    acc += g * T::from_f64(wq);
                }
                acc
            })
            .collect()
    }

    pub fn from_coeffs<T: Real>(&self, coeffs: Vec<T>) -> Result<FieldFunction<T>> {
        if coeffs.len() != self.n2() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.n2(),
                coeffs.len()
            )));
        }
        let grid = self.synthesize(&coeffs);
        Ok(FieldFunction { coeffs, grid, basis: self.basis_id() })
    }

    /// Projects arbitrary grid samples into the truncated span.
    pub fn from_grid<T: Real>(&self, grid: &[T]) -> Result<FieldFunction<T>> {
        if grid.len() != self.quad.len() {
            return Err(Error::InvalidArgument("grid length does not match quadrature".into()));
        }
        self.from_coeffs(self.project(grid))
    }

    pub fn zero<T: Real>(&self) -> FieldFunction<T> {
        FieldFunction {
            coeffs: vec![T::zero(); self.n2()],
            grid: vec![T::zero(); self.quad.len()],
            basis: self.basis_id(),
        }
    }

    /// `q_j`, 1-based.
    pub fn eigenfunction<T: Real>(&self, j: usize) -> FieldFunction<T> {
        let mut coeffs = vec![T::zero(); self.n2()];
        coeffs[j - 1] = T::one();
        FieldFunction {
            coeffs,
            grid: self.row(&self.basis, j - 1).iter().map(|&q| T::from_f64(q)).collect(),
            basis: self.basis_id(),
        }
    }

    pub fn phi0<T: Real>(&self) -> FieldFunction<T> {
        self.eigenfunction(self.seed + 1)
    }

    fn check_basis<T: Real>(&self, f: &FieldFunction<T>) -> Result<()> {
        if f.basis == self.basis_id() {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// Values of `q_1 .. q_n2` at an arbitrary point.
    pub fn mode_values(&self, x: f64) -> Vec<f64> {
        match self.backend {
            Backend::Well => backends::well_modes(self.n2(), x),
            Backend::Oscillator => backends::hermite_modes(self.n2(), x),
        }
    }

    /// Point evaluation of an expansion.
    pub fn eval<T: Real>(&self, f: &FieldFunction<T>, x: f64) -> f64 {
        self.mode_values(x).iter().zip(&f.coeffs).map(|(q, c)| q * c.to_f64()).sum()
    }

    /// Quadrature inner product of the grid samples.
    pub fn inner_grid<T: Real>(&self, f: &FieldFunction<T>, g: &FieldFunction<T>) -> Result<T> {
        self.check_basis(f)?;
        self.check_basis(g)?;
        let mut acc = T::zero();
        for ((&a, &b), &w) in f.grid.iter().zip(&g.grid).zip(self.quad.weights()) {
            acc += a * b * T::from_f64(w);
        }
        Ok(acc)
    }

    pub fn lp_norm<T: Real>(&self, f: &FieldFunction<T>, p: Lp) -> f64 {
        let w = self.quad.weights();
        let grid = f.grid.iter().map(|g| g.to_f64());
        match p {
            Lp::Inf => grid.fold(0.0, |m, g| m.max(g.abs())),
            Lp::L2 => grid.zip(w).map(|(g, w)| w * g * g).sum::<f64>().sqrt(),
            Lp::L3 => grid.zip(w).map(|(g, w)| w * g.abs().powi(3)).sum::<f64>().cbrt(),
            Lp::L6 => grid.zip(w).map(|(g, w)| w * g.powi(6)).sum::<f64>().powf(1.0 / 6.0),
        }
    }

    /// Largest deviation of the quadrature Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n2 = self.n2();
        let mut worst = 0.0f64;
        for i in 0..n2 {
            let wi = self.row(&self.weighted, i);
            for j in i..n2 {
                let qj = self.row(&self.basis, j);
                let g: f64 = wi.iter().zip(qj).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// `H f`, by eigenvalue multiplication.
    pub fn apply_h<T: Real>(&self, f: &FieldFunction<T>) -> Result<FieldFunction<T>> {
        self.check_basis(f)?;
        let coeffs =
            f.coeffs.iter().zip(&self.eigenvalues).map(|(&c, &l)| c * T::from_f64(l)).collect();
        self.from_coeffs(coeffs)
    }

    /// Pointwise product `f g h` projected onto the truncated basis.
    pub fn triple_product<T: Real>(
        &self,
        f: &FieldFunction<T>,
        g: &FieldFunction<T>,
        h: &FieldFunction<T>,
    ) -> Result<FieldFunction<T>> {
        self.triple_sum(&[(f, g, h)])
    }

    /// Projection of `sum f g h` over the listed triples. Terms are summed
    /// on the grid in list order, then projected once.
    ///
    /// On the well backend the same sum is also formed with exact cosine
    /// algebra; the two results must agree to [`PRODUCT_PATH_TOL`] and the
    /// exact coefficients are returned.
    pub fn triple_sum<T: Real>(
        &self,
        terms: &[(&FieldFunction<T>, &FieldFunction<T>, &FieldFunction<T>)],
    ) -> Result<FieldFunction<T>> {
        let mut grid = vec![T::zero(); self.quad.len()];
        for (f, g, h) in terms {
            self.check_basis(f)?;
            self.check_basis(g)?;
            self.check_basis(h)?;
            for (i, acc) in grid.iter_mut().enumerate() {
                *acc += f.grid[i] * g.grid[i] * h.grid[i];
            }
        }
        let out = self.from_grid(&grid)?;
        if self.backend == Backend::Well {
            let exact = self.well_exact_triple_sum(terms)?;
            let scale = out.norm().to_f64().max(1.0);
            let deviation = out
                .coeffs
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
                .fold(0.0, f64::max);
            if deviation > PRODUCT_PATH_TOL * scale {
                return Err(Error::PathMismatch { deviation });
            }
            return self.from_coeffs(exact);
        }
        Ok(out)
    }

    /// Exact coefficients of `sum f g h` for the well basis, via
    /// product-to-sum identities (no quadrature).
    pub fn well_exact_triple_sum<T: Real>(
        &self,
        terms: &[(&FieldFunction<T>, &FieldFunction<T>, &FieldFunction<T>)],
    ) -> Result<Vec<T>> {
        if self.backend != Backend::Well {
            return Err(Error::InvalidArgument("exact products need the well backend".into()));
        }
        let mut acc = HalfTrig::from_well_coeffs(&[]);
        for (f, g, h) in terms {
            self.check_basis(f)?;
            self.check_basis(g)?;
            self.check_basis(h)?;
            let prod = HalfTrig::from_well_coeffs(&f.coeffs)
                .mul(&HalfTrig::from_well_coeffs(&g.coeffs))
                .mul(&HalfTrig::from_well_coeffs(&h.coeffs));
            acc.accumulate(&prod);
        }
        // q_a q_b q_c carries pi^{-3/2}; projecting back onto q_k multiplies by sqrt(pi)
        let (coeffs, stray) = acc.to_well_coeffs(self.n2(), T::one().quot(T::pi()));
        debug_assert!(stray <= 1e-12 * (1.0 + stray), "non-Dirichlet residue {stray}");
        Ok(coeffs)
    }

    /// `[H - e0]^{-1}` on the orthogonal complement of the seed mode,
    /// truncated to `n2` modes.
    pub fn resolvent<T: Real>(&self, phi: &FieldFunction<T>) -> Result<FieldFunction<T>> {
        self.check_basis(phi)?;
        let norm = phi.norm().to_f64();
        let overlap = phi.coeffs[self.seed].to_f64();
        if overlap.abs() > RESOLVENT_OVERLAP_TOL * norm {
            return Err(Error::NotOrthogonal { overlap, norm });
        }
        let e0 = self.e0();
        let coeffs = phi
            .coeffs
            .iter()
            .zip(&self.eigenvalues)
            .enumerate()
            .map(|(j, (&c, &l))| if j == self.seed { T::zero() } else { c.quot(T::from_f64(l - e0)) })
            .collect();
        self.from_coeffs(coeffs)
    }
}
