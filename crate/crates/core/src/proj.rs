//! Points of the complex projective line.

use num::complex::Complex64;
use serde::{Serialize, Serializer};

/// `[c0 : c1]` with the larger coordinate scaled to exactly 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl ProjPoint {
    /// `None` when both coordinates vanish or are not finite.
    pub fn new(c0: Complex64, c1: Complex64) -> Option<Self> {
        if !(c0.is_finite() && c1.is_finite()) {
            return None;
        }
        let (n0, n1) = (c0.norm(), c1.norm());
        if n0 == 0.0 && n1 == 0.0 {
            return None;
        }
        Some(if n0 >= n1 {
            ProjPoint { c0: Complex64::new(1.0, 0.0), c1: c1 / c0 }
        } else {
            ProjPoint { c0: c0 / c1, c1: Complex64::new(1.0, 0.0) }
        })
    }

    pub fn finite(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0)).unwrap_or_else(Self::infinity)
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        ProjPoint { c0: Complex64::new(1.0, 0.0), c1: Complex64::new(0.0, 0.0) }
    }

    pub fn is_infinity(&self) -> bool {
        self.c1 == Complex64::new(0.0, 0.0)
    }

    /// Affine value `c0/c1`, `None` at infinity.
    pub fn value(&self) -> Option<Complex64> {
        (!self.is_infinity()).then(|| self.c0 / self.c1)
    }

    /// `|c0/c1|`, with infinity above every finite modulus.
    pub fn modulus(&self) -> f64 {
        if self.is_infinity() {
            f64::INFINITY
        } else {
            self.c0.norm() / self.c1.norm()
        }
    }

    /// Chordal distance, bounded by 1 and symmetric in `z ↔ 1/z`.
    pub fn chordal(&self, other: &ProjPoint) -> f64 {
        let cross = (self.c0 * other.c1 - self.c1 * other.c0).norm();
        let na = (self.c0.norm_sqr() + self.c1.norm_sqr()).sqrt();
        let nb = (other.c0.norm_sqr() + other.c1.norm_sqr()).sqrt();
        cross / (na * nb)
    }

    pub fn conj(&self) -> Self {
        ProjPoint { c0: self.c0.conj(), c1: self.c1.conj() }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.value() {
            Some(z) => [z.re, z.im].serialize(s),
            None => "inf".serialize(s),
        }
    }
}
