//! Weierstrass uniformization of the kernel curve.
//!
//! `x(ω)` is a Möbius function of `℘(ω)` centred at the branch point `a₄`,
//! `y(ω)` the analogous function of `℘(ω − ω₃/2)` centred at `b₄`, and the
//! group generated by the two involutions acts on the ω-plane by
//! `ω ↦ −ω`, `ω ↦ −ω + ω₃`.

pub mod elliptic;
pub mod quad;
pub mod wp;

use num::complex::Complex64;
use serde::Serialize;

use crate::curve::{discriminants, BranchPoints, ExtReal};
use crate::error::{Error, Result};
use crate::kernel::{double_root_in_y, KernelContext};
use crate::poly;
use crate::proj::ProjPoint;
use crate::rational::{convergents, to_f64, Q};

use elliptic::{carlson_rf, cubic_roots, periods_from_roots, polish_cubic_root};
use wp::Lattice;

/// How one coordinate is recovered from the value of ℘.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CoordinateMap {
    /// `v = a₄ + D′(a₄)/(℘ − D″(a₄)/6)`.
    A4Finite { a4: f64, dp_a4: f64, dpp_a4: f64 },
    /// `v = (℘ − α₂/3)/α₃` when the quartic has a root at ∞.
    A4Infinite { alpha2: f64, alpha3: f64 },
    /// The Möbius map with `e_k ↦ v_k` for `k = 1, 2, 3`.
    ThreePoint { e: [f64; 3], v: [f64; 3] },
}

/// Solves the cross-ratio equation for the image, given the source cross
/// ratio as `num/den`. Kept homogeneous so no image point is lost to
/// cancellation.
fn three_point(v: [f64; 3], num: Complex64, den: Complex64) -> Option<ProjPoint> {
    let p = den * (v[1] - v[2]);
    let q = num * (v[1] - v[0]);
    ProjPoint::new(p * v[0] - q * v[2], p - q)
}

impl CoordinateMap {
    fn new(coeffs: &[Q; 5], a4: ExtReal) -> Self {
        match a4 {
            ExtReal::Finite(a4) => {
                let p = poly::to_f64s(coeffs);
                CoordinateMap::A4Finite { a4, dp_a4: poly::nth_derivf(&p, 1, a4), dpp_a4: poly::nth_derivf(&p, 2, a4) }
            }
            ExtReal::Infinity => CoordinateMap::A4Infinite { alpha2: to_f64(&coeffs[2]), alpha3: to_f64(&coeffs[3]) },
        }
    }

    /// The coordinate for a given `℘` value; `None` stands for the pole of ℘.
    pub fn coordinate(&self, wp: Option<Complex64>) -> ProjPoint {
        let one = Complex64::new(1.0, 0.0);
        match (*self, wp) {
            (CoordinateMap::A4Finite { a4, .. }, None) => ProjPoint::real(a4),
            (CoordinateMap::A4Finite { a4, dp_a4, dpp_a4 }, Some(u)) => {
                let den = u - dpp_a4 / 6.0;
                ProjPoint::new(den * a4 + dp_a4, den).unwrap_or_else(|| ProjPoint::real(a4))
            }
            (CoordinateMap::A4Infinite { .. }, None) => ProjPoint::infinity(),
            (CoordinateMap::A4Infinite { alpha2, alpha3 }, Some(u)) => {
                ProjPoint::new(u - alpha2 / 3.0, one * alpha3).unwrap_or_else(ProjPoint::infinity)
            }
            (CoordinateMap::ThreePoint { e, v }, u) => {
                let (num, den) = match u {
                    Some(u) => ((u - e[0]) * (e[1] - e[2]), (u - e[2]) * (e[1] - e[0])),
                    None => (one * (e[1] - e[2]), one * (e[1] - e[0])),
                };
                three_point(v, num, den).unwrap_or_else(ProjPoint::infinity)
            }
        }
    }

    /// The ℘-value of a real point, `None` at the pole.
    pub fn to_u(&self, v: ExtReal) -> Option<f64> {
        match (*self, v) {
            (CoordinateMap::A4Finite { dpp_a4, .. }, ExtReal::Infinity) => Some(dpp_a4 / 6.0),
            (CoordinateMap::A4Finite { a4, dp_a4, dpp_a4 }, ExtReal::Finite(x)) => {
                (x != a4).then(|| dpp_a4 / 6.0 + dp_a4 / (x - a4))
            }
            (CoordinateMap::A4Infinite { .. }, ExtReal::Infinity) => None,
            (CoordinateMap::A4Infinite { alpha2, alpha3 }, ExtReal::Finite(x)) => Some(alpha3 * x + alpha2 / 3.0),
            (CoordinateMap::ThreePoint { .. }, ExtReal::Infinity) => {
                self.inverse().coordinate(None).value().map(|z| z.re)
            }
            (CoordinateMap::ThreePoint { .. }, ExtReal::Finite(x)) => {
                let u = self.inverse().coordinate(Some(Complex64::new(x, 0.0)));
                u.value().map(|z| z.re)
            }
        }
    }

    /// `dv/d℘`, `None` at a pole of the map.
    pub fn derivative(&self, u: Complex64) -> Option<Complex64> {
        let d = match *self {
            CoordinateMap::A4Finite { dp_a4, dpp_a4, .. } => {
                let den = u - dpp_a4 / 6.0;
                -dp_a4 / (den * den)
            }
            CoordinateMap::A4Infinite { alpha3, .. } => Complex64::new(1.0 / alpha3, 0.0),
            CoordinateMap::ThreePoint { e, v } => {
                // image = (A·u + B)/(C·u + D) with the coefficients of three_point
                let (s, r) = ((e[1] - e[0]) * (v[1] - v[2]), (e[1] - e[2]) * (v[1] - v[0]));
                let a = s * v[0] - r * v[2];
                let b = -s * e[2] * v[0] + r * e[0] * v[2];
                let c = s - r;
                let dd = -s * e[2] + r * e[0];
                let den = c * u + dd;
                (a * dd - b * c) / (den * den)
            }
        };
        d.is_finite().then_some(d)
    }

    fn inverse(&self) -> Self {
        match *self {
            CoordinateMap::ThreePoint { e, v } => CoordinateMap::ThreePoint { e: v, v: e },
            other => other,
        }
    }
}

/// `(e1−e2)/(e2−e3)` read off the branch points through the cross ratio,
/// which stays accurate when `e1` and `e2` nearly coincide and the cubic
/// does not.
fn cross_ratio_gap(a: &[ExtReal; 4]) -> Option<f64> {
    let [a1, a2, a3] = [a[0], a[1], a[2]].map(ExtReal::finite);
    let (a1, a2, a3) = (a1?, a2?, a3?);
    Some(match a[3] {
        ExtReal::Infinity => (a2 - a1) / (a3 - a2),
        ExtReal::Finite(a4) => (a1 - a2) * (a3 - a4) / ((a1 - a4) * (a2 - a3)),
    })
}

/// Roots summing to zero with `e1 − e3 = span` and the given gap ratio.
fn recentred_roots(span: f64, rho: f64) -> [f64; 3] {
    let low = span / (1.0 + rho);
    let e3 = -(span + low) / 3.0;
    [e3 + span, e3 + low, e3]
}

/// Weierstrass invariants `(g₂, g₃)` of a discriminant quartic, together with
/// the coordinate map built on its last branch point.
pub fn invariants(coeffs: &[Q; 5], a4: ExtReal) -> (f64, f64, CoordinateMap) {
    let map = CoordinateMap::new(coeffs, a4);
    match a4 {
        ExtReal::Infinity => {
            let a = |k: usize| coeffs[k].clone();
            let q = |n: i64, d: i64| crate::rational::q(n, d);
            let g2 = q(4, 3) * a(2) * a(2) - q(4, 1) * a(1) * a(3);
            let g3 = q(-8, 27) * a(2) * a(2) * a(2) + q(4, 3) * a(1) * a(2) * a(3) - q(4, 1) * a(0) * a(3) * a(3);
            (to_f64(&g2), to_f64(&g3), map)
        }
        ExtReal::Finite(a4) => {
            let p = poly::to_f64s(coeffs);
            let d = |n: usize| poly::nth_derivf(&p, n, a4);
            let (d1, d2, d3, d4) = (d(1), d(2), d(3), d(4));
            let g2 = d2 * d2 / 3.0 - 2.0 * d1 * d3 / 3.0;
            let g3 = -d2 * d2 * d2 / 27.0 + d1 * d2 * d3 / 9.0 - d1 * d1 * d4 / 6.0;
            (g2, g3, map)
        }
    }
}

/// Real period and imaginary part of the imaginary period from the invariants.
pub fn periods(g2: f64, g3: f64) -> Result<(f64, f64)> {
    Ok(periods_from_roots(cubic_roots(g2, g3)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct Uniformization {
    pub g2: f64,
    pub g3: f64,
    /// `e1 > e2 > e3`.
    pub e: [f64; 3],
    /// Imaginary part of the imaginary period.
    pub omega1: f64,
    pub omega2: f64,
    /// The shift of `τ = ι₂∘ι₁` on the ω-plane, in `(0, ω₂)`.
    pub omega3: f64,
    pub x_map: CoordinateMap,
    pub y_map: CoordinateMap,
    #[serde(skip)]
    lattice: Lattice,
}

impl Uniformization {
    pub fn new(ctx: &KernelContext, bp: &BranchPoints) -> Result<Self> {
        let disc = discriminants(ctx);
        let (g2, g3, x_poly) = invariants(&disc.alpha, bp.a[3]);
        // e_i from the branch points; they line up with a₁, a₂, a₃
        let mut e = [0.0; 3];
        for (k, ek) in e.iter_mut().enumerate() {
            let u = x_poly.to_u(bp.a[k]).ok_or(Error::RootsNotSeparated)?;
            *ek = polish_cubic_root(g2, g3, u);
        }
        // e3 is isolated and well conditioned; the other two come from the
        // zero sum and the gap ratio
        let e = match cross_ratio_gap(&bp.a) {
            Some(rho) => recentred_roots(-3.0 * e[2] * (1.0 + rho) / (2.0 + rho), rho),
            None => e,
        };
        if !(e[0] > e[1] && e[1] > e[2]) {
            return Err(Error::RootsNotSeparated);
        }
        // both coordinates are pinned to the lattice roots, which keeps them
        // consistent with ℘ when two roots nearly coincide
        let pinned = |v: &[ExtReal; 4], fallback: CoordinateMap| match [v[0], v[1], v[2]].map(ExtReal::finite) {
            [Some(v1), Some(v2), Some(v3)] => CoordinateMap::ThreePoint { e, v: [v1, v2, v3] },
            _ => fallback,
        };
        let x_map = pinned(&bp.a, x_poly);
        let y_map = pinned(&bp.b, invariants(&disc.beta, bp.b[3]).2);
        let (omega1, omega2) = periods_from_roots(e);
        let lattice = Lattice::new(omega1, omega2);
        let mut unif = Uniformization { g2, g3, e, omega1, omega2, omega3: 0.0, x_map, y_map, lattice };
        unif.omega3 = unif.compute_omega3(ctx, bp)?;
        Ok(unif)
    }

    fn compute_omega3(&self, ctx: &KernelContext, bp: &BranchPoints) -> Result<f64> {
        let x = self.shift_anchor(ctx, bp);
        let x = match x.value() {
            Some(z) => ExtReal::Finite(z.re),
            None => ExtReal::Infinity,
        };
        let u = self.x_map.to_u(x).ok_or(Error::RootsNotSeparated)?;
        Ok(2.0 * self.wp_inverse(u)?)
    }

    /// `X±(b₄)`, the double `x`-root over the last `y` branch point.
    pub fn shift_anchor(&self, ctx: &KernelContext, bp: &BranchPoints) -> ProjPoint {
        double_root_in_y(&ctx.transposed(), &bp.b[3].to_proj())
    }

    pub fn omega1_c(&self) -> Complex64 {
        Complex64::new(0.0, self.omega1)
    }

    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        self.lattice.wp(z)
    }

    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        self.lattice.wp_prime(z)
    }

    pub fn wp_both(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.lattice.wp_both(z)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The `ω ∈ (0, ω₂/2]` with `℘(ω) = u`, for `u ≥ e1`.
    pub fn wp_inverse(&self, u: f64) -> Result<f64> {
        let e1 = self.e[0];
        let slack = 1e-10 * e1.abs().max(1.0);
        if u < e1 - slack {
            return Err(Error::OutOfBranch { u, e1 });
        }
        let half = 0.5 * self.omega2;
        if u.is_infinite() {
            return Ok(0.0);
        }
        let u = u.max(e1);
        let mut w = carlson_rf(u - e1, u - self.e[1], u - self.e[2]).min(half);
        let accept = |w: f64| -> bool {
            self.wp(Complex64::new(w, 0.0)).map(|p| (p.re - u).abs() <= 1e-9 * u.abs().max(1.0)).unwrap_or(false)
        };
        for _ in 0..3 {
            let Ok((p, dp)) = self.wp_both(Complex64::new(w, 0.0)) else { break };
            if dp.re == 0.0 {
                break;
            }
            let next = w - (p.re - u) / dp.re;
            if !(next > 0.0 && next <= half) {
                break;
            }
            w = next;
        }
        if accept(w) {
            return Ok(w);
        }
        // ℘ decreases from +∞ to e1 on (0, ω₂/2]
        let (mut lo, mut hi) = (0.0, half);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            match self.wp(Complex64::new(mid, 0.0)) {
                Ok(p) if p.re > u => lo = mid,
                Ok(_) => hi = mid,
                Err(_) => lo = mid,
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn wp_value(&self, z: Complex64) -> Option<Complex64> {
        self.wp(z).ok()
    }

    pub fn x(&self, omega: Complex64) -> ProjPoint {
        self.x_map.coordinate(self.wp_value(omega))
    }

    pub fn y(&self, omega: Complex64) -> ProjPoint {
        self.y_map.coordinate(self.wp_value(omega - 0.5 * self.omega3))
    }

    /// `Λ(ω) = (x(ω), y(ω))`.
    pub fn lambda(&self, omega: Complex64) -> (ProjPoint, ProjPoint) {
        (self.x(omega), self.y(omega))
    }

    /// `z` with `z² = D(x(ω))`, signed like `℘′`. `None` at the pole.
    pub fn z(&self, omega: Complex64) -> Option<Complex64> {
        let (p, dp) = self.wp_both(omega).ok()?;
        Some(-0.5 * self.x_map.derivative(p)? * dp)
    }

    /// Parallelogram point `s·ω₂ + r·ω₁`.
    pub fn point(&self, s: f64, r: f64) -> Complex64 {
        Complex64::new(s * self.omega2, r * self.omega1)
    }
}

/// Smallest `ℓ ≤ cap` with `ω₃/ω₂ ≈ k/ℓ`, confirmed on the curve.
pub fn tau_order_on_curve(unif: &Uniformization, cap: usize, tol: f64, confirm_tol: f64) -> Option<usize> {
    let ratio = unif.omega3 / unif.omega2;
    for (k, l) in convergents(ratio, cap as u64) {
        if l == 0 || (ratio - k as f64 / l as f64).abs() >= tol {
            continue;
        }
        let l = l as usize;
        let shift = Complex64::new(l as f64 * unif.omega3, 0.0);
        let confirmed = (0..8).all(|i| {
            let w = unif.point(0.113 + 0.117 * i as f64, 0.071 + 0.109 * i as f64);
            let (x0, y0) = unif.lambda(w);
            let (x1, y1) = unif.lambda(w + shift);
            x0.chordal(&x1) < confirm_tol && y0.chordal(&y1) < confirm_tol
        });
        return confirmed.then_some(l);
    }
    None
}
