//! Direct quadrature of `∫ dx/√|P(x)|` along arcs of the real projective line,
//! used to cross-check periods and the shift.

use std::f64::consts::PI;

use crate::curve::ExtReal;
use crate::poly;

use super::elliptic::{gauss_legendre, integrate};

fn angle(v: ExtReal) -> f64 {
    match v {
        ExtReal::Finite(x) => 2.0 * x.atan(),
        ExtReal::Infinity => PI,
    }
}

/// `w⁴·P(c + 1/w)` for a quartic `P` given lowest coefficient first.
fn moebius_quartic(p: &[f64], c: f64) -> Vec<f64> {
    let mut out = vec![0.0; 5];
    let line = [1.0, c]; // 1 + c·w
    let mut pow_line = vec![1.0];
    for (j, &coef) in p.iter().enumerate().take(5) {
        // coef · (1 + c w)^j · w^(4−j)
        for (k, &lc) in pow_line.iter().enumerate() {
            out[k + 4 - j] += coef * lc;
        }
        let mut next = vec![0.0; pow_line.len() + 1];
        for (k, &lc) in pow_line.iter().enumerate() {
            next[k] += lc * line[0];
            next[k + 1] += lc * line[1];
        }
        pow_line = next;
    }
    out
}

/// `∫ dx/√|P(x)|` along the arc that leaves `from` in the increasing
/// direction and stops at `to` (possibly passing through ∞). Both ends may be
/// simple roots of `P`.
pub fn arc_integral(p: &[f64], from: ExtReal, to: ExtReal) -> f64 {
    let (a0, a1) = (angle(from), angle(to));
    let span = (a1 - a0).rem_euclid(2.0 * PI);
    // a point in the middle of the complementary arc
    let mut mid = a1 + 0.5 * (2.0 * PI - span);
    if (mid / 2.0).cos().abs() < 1e-3 {
        mid += 0.01 * (2.0 * PI - span);
    }
    let c = (mid / 2.0).tan();
    let q = moebius_quartic(p, c);
    let w = |v: ExtReal| match v {
        ExtReal::Finite(x) => 1.0 / (x - c),
        ExtReal::Infinity => 0.0,
    };
    let (lo, hi) = {
        let (u, v) = (w(from), w(to));
        if u <= v {
            (u, v)
        } else {
            (v, u)
        }
    };
    let centre = 0.5 * (lo + hi);
    let rule = gauss_legendre(20);
    let f = |x: f64| 1.0 / poly::evalf(&q, x).abs().sqrt();
    // x = end ± s² removes the inverse square-root singularities
    let left = integrate(|s| 2.0 * s * f(lo + s * s), 0.0, (centre - lo).sqrt(), 8, &rule);
    let right = integrate(|s| 2.0 * s * f(hi - s * s), 0.0, (hi - centre).sqrt(), 8, &rule);
    left + right
}

/// `∫_u^∞ dm/√(4m³ − g₂m − g₃)` for `u ≥ e1`, by quadrature after `m = u + s²`
/// and `s = r/(1−r)`.
pub fn wp_tail_integral(g2: f64, g3: f64, e1: f64, u: f64) -> f64 {
    let rule = gauss_legendre(20);
    let f = |m: f64| 1.0 / (4.0 * m * m * m - g2 * m - g3).abs().sqrt();
    let start = u.max(e1);
    let g = |r: f64| {
        let s = r / (1.0 - r);
        2.0 * s * f(start + s * s) / ((1.0 - r) * (1.0 - r))
    };
    integrate(g, 0.0, 1.0, 32, &rule)
}
