//! Real elliptic-integral helpers: AGM, Carlson's R_F, the Weierstrass cubic,
//! and Gauss–Legendre quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;

/// Arithmetic–geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    0.5 * (a + b)
}

/// Carlson's symmetric integral `R_F(x, y, z) = ½∫₀^∞ ds/√((s+x)(s+y)(s+z))`
/// for non-negative arguments, at most one of them zero.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let spread = (mean - x).abs().max((mean - y).abs()).max((mean - z).abs());
        if spread < 1e-4 * mean {
            break;
        }
    }
    let mean = (x + y + z) / 3.0;
    let dx = (mean - x) / mean;
    let dy = (mean - y) / mean;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mean.sqrt()
}

/// Newton refinement of a root of `4u³ − g₂u − g₃`.
pub fn polish_cubic_root(g2: f64, g3: f64, mut u: f64) -> f64 {
    for _ in 0..4 {
        let f = 4.0 * u * u * u - g2 * u - g3;
        let df = 12.0 * u * u - g2;
        if df == 0.0 {
            break;
        }
        let next = u - f / df;
        if !next.is_finite() || (next - u).abs() <= 1e-17 * u.abs() {
            break;
        }
        u = next;
    }
    u
}

/// Roots `e1 > e2 > e3` of `4u³ − g₂u − g₃` when all three are real.
pub fn cubic_roots(g2: f64, g3: f64) -> Result<[f64; 3]> {
    if g2 <= 0.0 || g2.powi(3) - 27.0 * g3 * g3 <= 0.0 {
        return Err(Error::RootsNotSeparated);
    }
    // u³ + p·u + q with p = −g₂/4, q = −g₃/4
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let r = 2.0 * (-p / 3.0).sqrt();
    let phi = ((3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0).acos();
    let mut e = [0, 1, 2].map(|k| polish_cubic_root(g2, g3, r * (phi / 3.0 - 2.0 * PI * k as f64 / 3.0).cos()));
    e.sort_by(|a, b| b.total_cmp(a));
    Ok(e)
}

/// Real period `ω₂` and the imaginary part of `ω₁` from `e1 > e2 > e3`.
pub fn periods_from_roots(e: [f64; 3]) -> (f64, f64) {
    let top = (e[0] - e[2]).sqrt();
    let omega2 = PI / agm(top, (e[0] - e[1]).sqrt());
    let omega1 = PI / agm(top, (e[1] - e[2]).sqrt());
    (omega1, omega2)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        total += rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_known_value() {
        // AGM(1, √2) = 1.19814023473559220744 (Gauss's constant relation)
        assert!((agm(1.0, 2f64.sqrt()) - 1.198_140_234_735_592_2).abs() < 1e-15);
    }

    #[test]
    fn carlson_special_values() {
        // R_F(0,1,1) = π/2, R_F(x,x,x) = 1/√x
        assert!((carlson_rf(0.0, 1.0, 1.0) - PI / 2.0).abs() < 1e-14);
        assert!((carlson_rf(4.0, 4.0, 4.0) - 0.5).abs() < 1e-15);
        // R_F(0,1,2) = K(1/√2)/√2·... = Γ(1/4)²/(4√(2π))
        assert!((carlson_rf(0.0, 1.0, 2.0) - 1.311_028_777_146_059_9).abs() < 1e-14);
    }

    #[test]
    fn cubic_roots_reproduce_invariants() {
        let e = [2.0, 0.5, -2.5];
        let g2 = -4.0 * (e[0] * e[1] + e[0] * e[2] + e[1] * e[2]);
        let g3 = 4.0 * e[0] * e[1] * e[2];
        let got = cubic_roots(g2, g3).unwrap();
        for (a, b) in got.iter().zip(e) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(cubic_roots(-1.0, 0.0).is_err());
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = gauss_legendre(10);
        let v = integrate(|x| x.powi(19) + 3.0 * x.powi(6), -1.0, 2.0, 1, &rule);
        let exact = (2f64.powi(20) - 1.0) / 20.0 + 3.0 * (2f64.powi(7) + 1.0) / 7.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }
}
