//! Weierstrass ℘ on a rectangular lattice `ℤω₁ + ℤω₂` (ω₁ imaginary, ω₂ real).
//!
//! The lattice sum is taken one row at a time: along the shorter period the
//! inner sum has the closed form `Σₙ (z + nP)⁻² = (π/P)² csc²(πz/P)`, and the
//! remaining sum over rows decays like `exp(−2π|m|·|Q/P|)`.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};

/// Beyond this the row terms are below `1e−17` relative.
const ROW_DECAY: f64 = 40.0;

#[derive(Clone, Debug)]
pub struct Lattice {
    omega1: f64,
    omega2: f64,
    short: Complex64,
    long: Complex64,
    rows: i32,
    k: Complex64,
    constant: Complex64,
}

/// `(csc²u, cot u)` without overflow for large `|Im u|`.
fn csc2_cot(u: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    if u.im.abs() < 20.0 {
        let s = u.sin();
        (1.0 / (s * s), u.cos() / s)
    } else if u.im > 0.0 {
        let q = (2.0 * i * u).exp();
        let d = 1.0 - q;
        (-4.0 * q / (d * d), i * (q + 1.0) / (q - 1.0))
    } else {
        let q = (-2.0 * i * u).exp();
        let d = 1.0 - q;
        (-4.0 * q / (d * d), -i * (q + 1.0) / (q - 1.0))
    }
}

impl Lattice {
    /// `omega1` is the imaginary part of the imaginary period.
    pub fn new(omega1: f64, omega2: f64) -> Self {
        let w1 = Complex64::new(0.0, omega1);
        let w2 = Complex64::new(omega2, 0.0);
        let (short, long) = if omega2 <= omega1 { (w2, w1) } else { (w1, w2) };
        let ratio = long.norm() / short.norm();
        let rows = (ROW_DECAY / (2.0 * PI * ratio)).ceil() as i32 + 1;
        let k = PI / short;
        let constant = (1..=rows).map(|m| 2.0 * csc2_cot(k * long * m as f64).0).sum::<Complex64>();
        Lattice { omega1, omega2, short, long, rows, k, constant }
    }

    pub fn omega1(&self) -> Complex64 {
        Complex64::new(0.0, self.omega1)
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    /// Representative of `z` in the period cell centred at 0.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        let re = z.re - (z.re / self.omega2).round() * self.omega2;
        let im = z.im - (z.im / self.omega1).round() * self.omega1;
        Complex64::new(re, im)
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        if z.norm() <= 1e-13 * self.short.norm() {
            Err(Error::PoleAtLattice)
        } else {
            Ok(())
        }
    }

    /// `(℘(z), ℘′(z))`.
    pub fn wp_both(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let z = self.reduce(z);
        self.check_pole(z)?;
        let mut sum = Complex64::zero();
        let mut dsum = Complex64::zero();
        for m in -self.rows..=self.rows {
            let (c2, cot) = csc2_cot(self.k * (z + self.long * m as f64));
            sum += c2;
            dsum += c2 * cot;
        }
        let k2 = self.k * self.k;
        Ok((k2 * (sum - self.constant - 1.0 / 3.0), -2.0 * k2 * self.k * dsum))
    }

    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        self.wp_both(z).map(|p| p.0)
    }

    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        self.wp_both(z).map(|p| p.1)
    }
}
