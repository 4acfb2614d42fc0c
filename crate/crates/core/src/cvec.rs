//! Vectors in C³ with the standard Hermitian inner product.
//!
//! The inner product is conjugate-linear in its first argument and linear in
//! its second: `inner(v, w) = Σ conj(v_k) w_k`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A vector of three complex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVec3(pub [Complex64; 3]);

impl CVec3 {
    pub const fn new(c0: Complex64, c1: Complex64, c2: Complex64) -> Self {
        CVec3([c0, c1, c2])
    }

    pub const fn real(x0: f64, x1: f64, x2: f64) -> Self {
        CVec3([
            Complex64::new(x0, 0.0),
            Complex64::new(x1, 0.0),
            Complex64::new(x2, 0.0),
        ])
    }

    /// The k-th standard basis vector (`k` in 0..3).
    pub fn basis(k: usize) -> Self {
        let mut c = [ZERO; 3];
        c[k] = ONE;
        CVec3(c)
    }

    pub fn zero() -> Self {
        CVec3([ZERO; 3])
    }

    pub fn coords(&self) -> &[Complex64; 3] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(*self * (1.0 / n))
    }

    pub fn conj(&self) -> Self {
        CVec3(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CVec3(self.0.map(|z| z * s))
    }

    /// Bilinear cross product (no conjugation).
    ///
    /// `Σ_k (v × w)_k v_k = 0`, so `conj(v × w)` is Hermitian-orthogonal to
    /// both factors, and `|v × w|² = |v|²|w|² − |<v, w>|²`.
    pub fn cross(&self, w: &CVec3) -> CVec3 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = w.0;
        CVec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    /// The component of `self` Hermitian-orthogonal to the unit vector `u`.
    pub fn reject(&self, u: &CVec3) -> CVec3 {
        *self - u.scale(inner(u, self))
    }

    pub fn max_abs_diff(&self, other: &CVec3) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Hermitian inner product, conjugate-linear in `v`.
pub fn inner(v: &CVec3, w: &CVec3) -> Complex64 {
    v.0.iter()
        .zip(w.0.iter())
        .fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

impl Index<usize> for CVec3 {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, rhs: CVec3) -> CVec3 {
        CVec3([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, rhs: CVec3) -> CVec3 {
        CVec3([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3(self.0.map(|z| -z))
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3(self.0.map(|z| z * s))
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        self.scale(s)
    }
}

impl fmt::Display for CVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}
