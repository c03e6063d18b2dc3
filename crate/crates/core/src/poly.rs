//! Univariate polynomials: exact over ℚ, and floating-point root finding.
//!
//! Coefficients are stored lowest degree first.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Zero};

use crate::rational::{to_f64, Q};

pub type QPoly = Vec<Q>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Q], b: &[Q]) -> QPoly {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[Q], k: &Q) -> QPoly {
    let mut out: QPoly = a.iter().map(|c| c * k).collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[Q], b: &[Q]) -> QPoly {
    add(a, &scale(b, &-Q::one()))
}

pub fn mul(a: &[Q], b: &[Q]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn eval(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn to_f64s(p: &[Q]) -> Vec<f64> {
    p.iter().map(to_f64).collect()
}

pub fn evalf(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

pub fn evalc(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
}

pub fn derivf(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

/// `n`-th derivative evaluated at `x`.
pub fn nth_derivf(p: &[f64], n: usize, x: f64) -> f64 {
    let mut d = p.to_vec();
    for _ in 0..n {
        d = derivf(&d);
    }
    evalf(&d, x)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Exact rational coefficients split as `hi + lo` pairs of doubles.
#[derive(Clone, Debug)]
pub struct DdPoly {
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl DdPoly {
    pub fn new(p: &[Q]) -> Self {
        let mut hi = Vec::with_capacity(p.len());
        let mut lo = Vec::with_capacity(p.len());
        for c in p {
            let h = to_f64(c);
            let rest = Q::from_float(h).map(|hq| c - hq).unwrap_or_else(Q::zero);
            hi.push(h);
            lo.push(to_f64(&rest));
        }
        DdPoly { hi, lo }
    }

    /// Compensated Horner evaluation, roughly twice the working precision.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.hi.len();
        if n == 0 {
            return 0.0;
        }
        let mut s = self.hi[n - 1];
        let mut err = self.lo[n - 1];
        for i in (0..n - 1).rev() {
            let (p, pe) = two_prod(s, x);
            let (s2, se) = two_sum(p, self.hi[i]);
            s = s2;
            err = err * x + (pe + se + self.lo[i]);
        }
        s + err
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
}

/// All complex roots of a nonzero polynomial, from the eigenvalues of a
/// companion matrix built after rescaling the variable.
pub fn complex_roots(p: &[f64]) -> Vec<Complex64> {
    let n = match p.iter().rposition(|&c| c != 0.0) {
        Some(n) => n,
        None => return Vec::new(),
    };
    let zeros = p.iter().take_while(|&&c| c == 0.0).count();
    let p = &p[zeros..=n];
    let n = n - zeros;
    let mut out = vec![Complex64::zero(); zeros];
    if n == 0 {
        return out;
    }
    // x = s·z with s chosen so the constant and leading terms balance
    let s = (p[0].abs() / p[n].abs()).powf(1.0 / n as f64);
    let scaled: Vec<f64> =
        p.iter().enumerate().map(|(i, c)| c * s.powi(i as i32) / (p[n] * s.powi(n as i32))).collect();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -scaled[i];
    }
    out.extend(m.complex_eigenvalues().iter().map(|z| z * s));
    out
}

/// Newton refinement of a real root using compensated evaluation.
pub fn polish_real(p: &DdPoly, mut x: f64, steps: usize) -> f64 {
    let d = derivf(p.hi());
    for _ in 0..steps {
        let fx = p.eval(x);
        let dx = evalf(&d, x);
        if dx == 0.0 || !fx.is_finite() {
            break;
        }
        let next = x - fx / dx;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// Real roots (with multiplicity, ascending) of an exact polynomial; complex
/// eigenvalues whose imaginary part exceeds `imag_tol` relative are dropped.
pub fn real_roots(p: &[Q], imag_tol: f64) -> Vec<f64> {
    let dd = DdPoly::new(p);
    let mut roots: Vec<f64> = complex_roots(dd.hi())
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| polish_real(&dd, z.re, 3))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}
