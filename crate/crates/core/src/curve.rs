//! Discriminants of the kernel, their real roots (the branch points), and
//! sampled paths over the unit circle.

use std::cmp::Ordering;

use num::complex::Complex64;
use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{roots_in_x, roots_in_y, KernelContext};
use crate::poly::{self, QPoly};
use crate::proj::ProjPoint;
use crate::rational::{to_f64, Q};

/// Exact coefficients (lowest first) of the two discriminant quartics.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminants {
    /// `D(x)`, discriminant of the kernel as a quadratic in `y`.
    pub alpha: [Q; 5],
    /// `E(y)`, discriminant of the kernel as a quadratic in `x`.
    pub beta: [Q; 5],
}

/// `D(x) = (t·x·A_0(x) − x)² − 4·t²·x·A_1(x)·x·A_{−1}(x)`.
pub fn discriminant_x(ctx: &KernelContext) -> [Q; 5] {
    let t = ctx.t();
    let row = |j: i8| -> QPoly { ctx.a_tilde(j).iter().map(|c| c * t).collect() };
    let mut b = row(0);
    b[1] -= Q::one();
    let d = poly::sub(&poly::mul(&b, &b), &poly::scale(&poly::mul(&row(1), &row(-1)), &Q::from_integer(4.into())));
    let mut out: [Q; 5] = Default::default();
    for (i, c) in d.into_iter().enumerate() {
        out[i] = c;
    }
    out
}

pub fn discriminants(ctx: &KernelContext) -> Discriminants {
    Discriminants { alpha: discriminant_x(ctx), beta: discriminant_x(&ctx.transposed()) }
}

/// The factors `Δ±(y) = t·𝐁₀(y) ± 2t·√(B̃₁(y)·B̃₋₁(y))` whose product is `E(y)`.
pub fn delta_factors(ctx: &KernelContext, y: f64) -> Result<(f64, f64)> {
    let t = ctx.tf();
    let col = |i: i8| -> f64 { (-1..=1).map(|j| ctx.d(i, j) * y.powi((j + 1) as i32)).sum() };
    let radicand = col(1) * col(-1);
    if radicand < 0.0 {
        return Err(Error::NonRealRegion(y));
    }
    let centre = t * col(0) - y;
    let root = 2.0 * t * radicand.sqrt();
    Ok((centre + root, centre - root))
}

/// A point of the real projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    pub fn to_proj(self) -> ProjPoint {
        match self {
            ExtReal::Finite(v) => ProjPoint::real(v),
            ExtReal::Infinity => ProjPoint::infinity(),
        }
    }

    /// Position along the cycle that starts at −1, runs up through +∞ and
    /// comes back from −∞.
    fn cycle_key(self) -> (u8, f64) {
        match self {
            ExtReal::Finite(v) if v >= -1.0 => (0, v),
            ExtReal::Infinity => (1, 0.0),
            ExtReal::Finite(v) => (2, v),
        }
    }

    pub fn cycle_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.cycle_key(), other.cycle_key());
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinity => s.serialize_str("inf"),
        }
    }
}

/// The four roots of each discriminant, in cyclic order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchPoints {
    pub a: [ExtReal; 4],
    pub b: [ExtReal; 4],
}

pub const DEFAULT_SEPARATION: f64 = 1e-7;

pub fn branch_points(ctx: &KernelContext) -> Result<BranchPoints> {
    branch_points_with_tol(ctx, DEFAULT_SEPARATION)
}

pub fn branch_points_with_tol(ctx: &KernelContext, separation: f64) -> Result<BranchPoints> {
    let disc = discriminants(ctx);
    Ok(BranchPoints { a: quartic_roots(&disc.alpha, separation)?, b: quartic_roots(&disc.beta, separation)? })
}

/// Real roots of a quartic whose roots are known to be real and distinct,
/// with an exactly vanishing leading coefficient meaning a root at ∞.
pub fn quartic_roots(coeffs: &[Q; 5], separation: f64) -> Result<[ExtReal; 4]> {
    let infinite = coeffs[4].is_zero();
    if infinite && coeffs[3].is_zero() {
        return Err(Error::RootsNotSeparated);
    }
    let finite = poly::real_roots(coeffs, 1e-6);
    let expected = if infinite { 3 } else { 4 };
    if finite.len() != expected {
        return Err(Error::RootsNotSeparated);
    }
    for pair in finite.windows(2) {
        let scale = pair[0].abs().max(pair[1].abs()).max(1.0);
        if (pair[1] - pair[0]).abs() <= separation * scale {
            return Err(Error::RootsNotSeparated);
        }
    }
    let mut roots: Vec<ExtReal> = finite.into_iter().map(ExtReal::Finite).collect();
    if infinite {
        roots.push(ExtReal::Infinity);
    }
    roots.sort_by(ExtReal::cycle_cmp);
    Ok([roots[0], roots[1], roots[2], roots[3]])
}

/// Scale-free residual `|P(r)| / ‖P‖∞` of a finite root.
pub fn root_residual(coeffs: &[Q; 5], r: f64) -> f64 {
    let dd = poly::DdPoly::new(coeffs);
    let norm = coeffs.iter().map(|c| to_f64(c).abs()).fold(0.0, f64::max);
    let scale = r.abs().max(1.0).powi(4);
    dd.eval(r).abs() / (norm * scale)
}

/// Sign of the leading coefficient of `D`, as −1, 0 or 1.
pub fn leading_sign(coeffs: &[Q; 5]) -> i8 {
    if coeffs[4].is_positive() {
        1
    } else if coeffs[4].is_negative() {
        -1
    } else {
        0
    }
}

/// Samples of one coordinate on the unit circle and the two roots above it.
#[derive(Clone, Debug)]
pub struct PathSample {
    pub base: Vec<Complex64>,
    pub minus: Vec<ProjPoint>,
    pub plus: Vec<ProjPoint>,
}

fn circle(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
}

/// `x = e^{2πik/n}` with `Y−(x)` and `Y+(x)`.
pub fn unit_circle_paths(ctx: &KernelContext, n: usize) -> Result<PathSample> {
    let mut out = PathSample { base: Vec::new(), minus: Vec::new(), plus: Vec::new() };
    for x in circle(n) {
        let (lo, hi) = roots_in_y(ctx, &ProjPoint::finite(x))?;
        out.base.push(x);
        out.minus.push(lo);
        out.plus.push(hi);
    }
    Ok(out)
}

/// `y = e^{2πik/n}` with `X−(y)` and `X+(y)`.
pub fn unit_circle_paths_y(ctx: &KernelContext, n: usize) -> Result<PathSample> {
    let mut out = PathSample { base: Vec::new(), minus: Vec::new(), plus: Vec::new() };
    for y in circle(n) {
        let (lo, hi) = roots_in_x(ctx, &ProjPoint::finite(y))?;
        out.base.push(y);
        out.minus.push(lo);
        out.plus.push(hi);
    }
    Ok(out)
}
