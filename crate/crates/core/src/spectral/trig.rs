//! Exact product algebra for the infinite-well basis.
//!
//! Well eigenfunctions are `cos(j x / 2)` (odd `j`) and `sin(j x / 2)` (even
//! `j`), up to the `1/sqrt(pi)` normalization. Products are expanded with the
//! product-to-sum identities, so frequencies stay on the half-integer lattice.
//! A product of three Dirichlet modes lands back in the Dirichlet family.

use crate::real::Real;

/// `sum_k cos[k] cos(k x / 2) + sin[k] sin(k x / 2)`.
#[derive(Debug, Clone)]
pub(crate) struct HalfTrig<T> {
    cos: Vec<T>,
    sin: Vec<T>,
}

impl<T: Real> HalfTrig<T> {
    fn zeros(len: usize) -> Self {
        Self { cos: vec![T::zero(); len], sin: vec![T::zero(); len] }
    }

    /// Raw (unnormalized) trig form of a coefficient vector over modes 1..=n2.
    pub(crate) fn from_well_coeffs(coeffs: &[T]) -> Self {
        let mut out = Self::zeros(coeffs.len() + 1);
        for (i, &c) in coeffs.iter().enumerate() {
            let j = i + 1;
            if j % 2 == 1 {
                out.cos[j] = c;
            } else {
                out.sin[j] = c;
            }
        }
        out
    }

    fn nonzero(v: &[T]) -> Vec<(usize, T)> {
        v.iter().enumerate().filter(|(_, &c)| c != T::zero()).map(|(k, &c)| (k, c)).collect()
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let half = T::from_f64(0.5);
        let mut out = Self::zeros(self.cos.len() + other.cos.len());
        let (ac, as_) = (Self::nonzero(&self.cos), Self::nonzero(&self.sin));
        let (bc, bs) = (Self::nonzero(&other.cos), Self::nonzero(&other.sin));

        for &(a, x) in &ac {
            for &(b, y) in &bc {
                let p = half * x * y;
                out.cos[a + b] += p;
                out.cos[a.abs_diff(b)] += p;
            }
            for &(b, y) in &bs {
                // cos a sin b = [sin(a + b) + sin(b - a)] / 2
                let p = half * x * y;
                out.sin[a + b] += p;
                out.add_signed_sin(b as isize - a as isize, p);
            }
        }
        for &(a, x) in &as_ {
            for &(b, y) in &bc {
                let p = half * x * y;
                out.sin[a + b] += p;
                out.add_signed_sin(a as isize - b as isize, p);
            }
            for &(b, y) in &bs {
                let p = half * x * y;
                out.cos[a.abs_diff(b)] += p;
                out.cos[a + b] -= p;
            }
        }
        out
    }

    fn add_signed_sin(&mut self, freq: isize, value: T) {
        if freq > 0 {
            self.sin[freq as usize] += value;
        } else if freq < 0 {
            self.sin[(-freq) as usize] -= value;
        }
    }

    pub(crate) fn accumulate(&mut self, other: &Self) {
        if other.cos.len() > self.cos.len() {
            self.cos.resize(other.cos.len(), T::zero());
            self.sin.resize(other.sin.len(), T::zero());
        }
        for (k, &c) in other.cos.iter().enumerate() {
            self.cos[k] += c;
        }
        for (k, &s) in other.sin.iter().enumerate() {
            self.sin[k] += s;
        }
    }

    /// Back to well coefficients (modes 1..=n2), scaled by `factor`.
    ///
    /// Also returns the largest magnitude found outside the Dirichlet family
    /// (`cos` of even or `sin` of odd half-frequency); it is zero for any
    /// product of an odd number of Dirichlet modes.
    pub(crate) fn to_well_coeffs(&self, n2: usize, factor: T) -> (Vec<T>, f64) {
        let mut out = vec![T::zero(); n2];
        let mut stray = 0.0f64;
        for (k, &c) in self.cos.iter().enumerate() {
            if k % 2 == 1 {
                if k <= n2 {
                    out[k - 1] = c * factor;
                }
            } else {
                stray = stray.max(c.to_f64().abs());
            }
        }
        for (k, &s) in self.sin.iter().enumerate() {
            if k % 2 == 0 {
                if k >= 2 && k <= n2 {
                    out[k - 1] = s * factor;
                }
            } else {
                stray = stray.max(s.to_f64().abs());
            }
        }
        (out, stray)
    }
}
