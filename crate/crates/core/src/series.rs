//! Exact enumeration of quadrant walks, truncated generating functions, and
//! checks of the functional equation and its continuation on the curve.

use num::complex::Complex64;
use num::{BigInt, Integer, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::b2;
use crate::kernel::KernelContext;
use crate::model::{pattern_class, PatternClass, WeightTable, STEPS};
use crate::rational::Q;
use crate::uniformization::Uniformization;

/// Exact counts `q(i, j, k)`: probability that a `k`-step walk from the
/// origin stays in the quadrant and ends at `(i, j)`.
///
/// Stored as integer numerators over the common denominator `L^k`, where `L`
/// is the least common denominator of the weights.
#[derive(Clone, Debug)]
pub struct SeriesTruncation {
    order: usize,
    base: BigInt,
    /// `numer[k][i][j]`, `0 ≤ i, j ≤ k`.
    numer: Vec<Vec<Vec<BigInt>>>,
}

impl SeriesTruncation {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn q(&self, i: usize, j: usize, k: usize) -> Q {
        if k > self.order || i > k || j > k {
            return Q::zero();
        }
        Q::new(self.numer[k][i][j].clone(), num::pow(self.base.clone(), k))
    }

    /// Probability of staying in the quadrant for `k` steps.
    pub fn mass(&self, k: usize) -> Q {
        let total: BigInt = self.numer[k].iter().flatten().sum();
        Q::new(total, num::pow(self.base.clone(), k))
    }
}

fn integer_weights(w: &WeightTable) -> (BigInt, [[BigInt; 3]; 3]) {
    let base = STEPS.iter().fold(BigInt::one(), |acc, &(i, j)| acc.lcm(w.get(i, j).denom()));
    let mut out: [[BigInt; 3]; 3] = Default::default();
    for (i, j) in STEPS {
        let scaled = w.get(i, j) * Q::from_integer(base.clone());
        out[(i + 1) as usize][(j + 1) as usize] = scaled.to_integer();
    }
    (base, out)
}

/// `q(i, j, k) = Σ d(i′, j′)·q(i − i′, j − j′, k − 1)`, exactly.
pub fn walk_dp(w: &WeightTable, order: usize) -> SeriesTruncation {
    let (base, dint) = integer_weights(w);
    let mut numer = vec![vec![vec![BigInt::one()]]];
    for k in 1..=order {
        let prev = &numer[k - 1];
        let mut cur = vec![vec![BigInt::zero(); k + 1]; k + 1];
        for (i, row) in prev.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (di, dj) in STEPS {
                    let d = &dint[(di + 1) as usize][(dj + 1) as usize];
                    if d.is_zero() {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di as i64, j as i64 + dj as i64);
                    if ni < 0 || nj < 0 {
                        continue;
                    }
                    cur[ni as usize][nj as usize] += d * v;
                }
            }
        }
        numer.push(cur);
    }
    SeriesTruncation { order, base, numer }
}

/// Checks, with `t` kept formal, that every coefficient of
/// `K·Q − F¹ − F² + K(0,0)·Q(0,0) − xy` of `t`-degree below `order` vanishes.
/// Returns the highest degree checked.
pub fn verify_functional_equation(w: &WeightTable, order: usize) -> Result<usize> {
    if order < 2 {
        return Err(Error::Document(format!("order {order} is below 2")));
    }
    let s = walk_dp(w, order);
    let top = order - 1;
    let size = order + 3;
    // residual[k][a][b]: coefficient of x^a y^b t^k
    let mut residual = vec![vec![vec![Q::zero(); size]; size]; order + 1];
    for k in 0..=top {
        for i in 0..=k {
            for j in 0..=k {
                let v = s.q(i, j, k);
                if v.is_zero() {
                    continue;
                }
                residual[k][i + 1][j + 1] += &v;
                if k < top {
                    for (di, dj) in STEPS {
                        let d = w.get(di, dj);
                        if d.is_zero() {
                            continue;
                        }
                        let a = (i as i64 + di as i64 + 1) as usize;
                        let b = (j as i64 + dj as i64 + 1) as usize;
                        residual[k + 1][a][b] -= d * &v;
                    }
                }
            }
        }
        if k == top {
            break;
        }
        // −F¹ = t·Σ_i d(i,−1)·x^(i+1)·Q(x,0), −F² likewise, K(0,0)Q(0,0)
        for a in 0..=k {
            let v = s.q(a, 0, k);
            for di in -1..=1i8 {
                residual[k + 1][(a as i64 + di as i64 + 1) as usize][0] += w.get(di, -1) * &v;
            }
            let v = s.q(0, a, k);
            for dj in -1..=1i8 {
                residual[k + 1][0][(a as i64 + dj as i64 + 1) as usize] += w.get(-1, dj) * &v;
            }
        }
        residual[k + 1][0][0] -= w.get(-1, -1) * s.q(0, 0, k);
    }
    residual[0][1][1] -= Q::one();
    for (k, plane) in residual.iter().enumerate().take(top + 1) {
        for (i, row) in plane.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    return Err(Error::FunctionalEquationMismatch { i, j, k });
                }
            }
        }
    }
    Ok(top)
}

/// A truncated value together with a bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Truncated {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
    /// The argument lies outside the closed unit disk, where the bound is
    /// meaningless.
    pub outside_disk: bool,
}

impl Truncated {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Floating-point truncations of `Q(x,0)`, `Q(0,y)` and `Q(0,0)`.
#[derive(Clone, Debug)]
pub struct SeriesEvaluator {
    t: f64,
    d: [[f64; 3]; 3],
    /// `q(i,0,k)·t^k` summed over `k`, indexed by `i`.
    x_axis: Vec<f64>,
    y_axis: Vec<f64>,
    /// `Σ_{k>K} t^k·(mass beyond K)` bound.
    tail: f64,
}

impl SeriesEvaluator {
    pub fn new(ctx: &KernelContext, order: usize) -> Self {
        let t = ctx.tf();
        let mut d = [[0.0; 3]; 3];
        for (i, j) in STEPS {
            d[(i + 1) as usize][(j + 1) as usize] = ctx.d(i, j);
        }
        let mut x_axis = vec![0.0; order + 1];
        let mut y_axis = vec![0.0; order + 1];
        let mut cur = vec![vec![0.0; 1]; 1];
        cur[0][0] = 1.0;
        let mut tk = 1.0;
        let mut mass = 1.0;
        for k in 0..=order {
            for (i, v) in x_axis.iter_mut().enumerate().take(k + 1) {
                *v += cur[i][0] * tk;
            }
            for (j, v) in y_axis.iter_mut().enumerate().take(k + 1) {
                *v += cur[0][j] * tk;
            }
            mass = cur.iter().flatten().sum::<f64>();
            if k == order {
                break;
            }
            let mut next = vec![vec![0.0; k + 2]; k + 2];
            for (i, row) in cur.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    for (di, dj) in STEPS {
                        let dv = d[(di + 1) as usize][(dj + 1) as usize];
                        let (ni, nj) = (i as i64 + di as i64, j as i64 + dj as i64);
                        if dv != 0.0 && ni >= 0 && nj >= 0 {
                            next[ni as usize][nj as usize] += dv * v;
                        }
                    }
                }
            }
            cur = next;
            tk *= t;
        }
        let tail = mass * t.powi(order as i32 + 1) / (1.0 - t);
        SeriesEvaluator { t, d, x_axis, y_axis, tail }
    }

    fn dd(&self, i: i8, j: i8) -> f64 {
        self.d[(i + 1) as usize][(j + 1) as usize]
    }

    fn axis(coeffs: &[f64], z: Complex64) -> Complex64 {
        coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// `F¹(x) = K(x,0)·Q(x,0)`.
    pub fn f1(&self, x: Complex64) -> Truncated {
        let k = -self.t * (self.dd(-1, -1) + self.dd(0, -1) * x + self.dd(1, -1) * x * x);
        let v = k * Self::axis(&self.x_axis, x);
        Truncated { re: v.re, im: v.im, tail_bound: k.norm() * self.tail, outside_disk: x.norm() > 1.0 }
    }

    /// `F²(y) = K(0,y)·Q(0,y)`.
    pub fn f2(&self, y: Complex64) -> Truncated {
        let k = -self.t * (self.dd(-1, -1) + self.dd(-1, 0) * y + self.dd(-1, 1) * y * y);
        let v = k * Self::axis(&self.y_axis, y);
        Truncated { re: v.re, im: v.im, tail_bound: k.norm() * self.tail, outside_disk: y.norm() > 1.0 }
    }

    /// `K(0,0)·Q(0,0)`.
    pub fn k00_q00(&self) -> Truncated {
        let k = -self.t * self.dd(-1, -1);
        let v = k * self.x_axis[0];
        Truncated { re: v, im: 0.0, tail_bound: k.abs() * self.tail, outside_disk: false }
    }

    /// Bound on `Σ_{k>K} t^k·Σ_{i,j} q(i,j,k)`.
    pub fn tail(&self) -> f64 {
        self.tail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationResidual {
    /// Largest `|F¹(x) + F²(y) − K(0,0)Q(0,0) + xy|` over the domain samples.
    pub domain_max: f64,
    pub domain_samples: usize,
    /// Largest `|r_y(ω+ω₃) − r_y(ω) − b₂(ω)|`.
    pub shift_max: f64,
    pub shift_samples: usize,
    /// Sum of the series tail bounds entering one residual.
    pub tail_bound: f64,
}

const ROWS: usize = 24;
const ROW_STEPS: usize = 400;

/// Along the horizontal line through `ω₂/2 + i·im`, the interval of real
/// parts around `ω₂/2` on which `|x| < 1` or `|y| < 1`.
fn row_segment(u: &Uniformization, im: f64) -> Option<(f64, f64)> {
    let h = u.omega2 / ROW_STEPS as f64;
    let inside = |re: f64| {
        let (x, y) = u.lambda(Complex64::new(re, im));
        x.modulus() < 1.0 || y.modulus() < 1.0
    };
    let mid = 0.5 * u.omega2;
    if !inside(mid) {
        return None;
    }
    let (mut lo, mut hi) = (mid, mid);
    for _ in 0..2 * ROW_STEPS {
        if !inside(lo - h) {
            break;
        }
        lo -= h;
    }
    for _ in 0..2 * ROW_STEPS {
        if !inside(hi + h) {
            break;
        }
        hi += h;
    }
    Some((lo, hi))
}

fn spread<T: Clone>(v: &[T], n: usize) -> Vec<T> {
    if v.len() <= n {
        return v.to_vec();
    }
    (0..n).map(|k| v[k * v.len() / n].clone()).collect()
}

/// Residuals of the functional equation restricted to the curve and of the
/// `ω₃`-shift relation for `r_y`, at up to `samples` points each.
pub fn continuation_residual(
    u: &Uniformization,
    eval: &SeriesEvaluator,
    samples: usize,
) -> Result<ContinuationResidual> {
    let c = eval.k00_q00().value();
    let r_y = |omega: Complex64| -> Option<Complex64> {
        let (x, y) = u.lambda(omega);
        let (x, y) = (x.value()?, y.value()?);
        if y.norm() < 1.0 {
            Some(eval.f2(y).value())
        } else if x.norm() < 1.0 {
            Some(-eval.f1(x).value() + c - x * y)
        } else {
            None
        }
    };
    let mut domain = Vec::new();
    let mut shift = Vec::new();
    let h = u.omega2 / ROW_STEPS as f64;
    for r in 0..ROWS {
        let im = ((r as f64 + 0.5) / ROWS as f64 - 0.5) * u.omega1;
        let Some((lo, hi)) = row_segment(u, im) else { continue };
        let n = ((hi - lo) / h).round() as usize;
        for s in 0..=n {
            let re = lo + (s as f64 + 0.37) * h;
            if re > hi {
                break;
            }
            let omega = Complex64::new(re, im);
            let (x, y) = u.lambda(omega);
            if x.modulus() < 1.0 && y.modulus() < 1.0 {
                domain.push(omega);
            }
            if re + u.omega3 <= hi {
                shift.push(omega);
            }
        }
    }
    if domain.is_empty() {
        return Err(Error::NoSampleInDomain);
    }
    let mut out =
        ContinuationResidual { domain_max: 0.0, domain_samples: 0, shift_max: 0.0, shift_samples: 0, tail_bound: 0.0 };
    for omega in spread(&domain, samples) {
        let (x, y) = u.lambda(omega);
        let (Some(x), Some(y)) = (x.value(), y.value()) else { continue };
        let (f1, f2) = (eval.f1(x), eval.f2(y));
        let r = f1.value() + f2.value() - c + x * y;
        out.domain_max = out.domain_max.max(r.norm());
        out.tail_bound = out.tail_bound.max(f1.tail_bound + f2.tail_bound + eval.k00_q00().tail_bound);
        out.domain_samples += 1;
    }
    for omega in spread(&shift, samples) {
        let (Some(a), Some(b), Some(b2v)) = (r_y(omega + u.omega3), r_y(omega), b2(u, omega)) else { continue };
        out.shift_max = out.shift_max.max((a - b - b2v).norm());
        out.shift_samples += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x0: f64,
    pub y0: f64,
    pub t0: f64,
}

/// The minimum of `S` on the open positive quadrant, by Newton's method in
/// `(log x, log y)` with backtracking.
pub fn critical_t(w: &WeightTable) -> Result<CriticalPoint> {
    if pattern_class(w) != PatternClass::NonSingular {
        return Err(Error::NotElliptic("critical point needs a nonsingular step set".into()));
    }
    let terms: Vec<(f64, f64, f64)> =
        STEPS.iter().filter(|&&(i, j)| !w.is_zero(i, j)).map(|&(i, j)| (i as f64, j as f64, w.getf(i, j))).collect();
    let s_at = |u: f64, v: f64| terms.iter().map(|&(i, j, d)| d * (i * u + j * v).exp()).sum::<f64>();
    let (mut u, mut v) = (0.0, 0.0);
    for _ in 0..100 {
        let (mut g, mut h) = ([0.0; 2], [[0.0; 2]; 2]);
        for &(i, j, d) in &terms {
            let e = d * (i * u + j * v).exp();
            g[0] += i * e;
            g[1] += j * e;
            h[0][0] += i * i * e;
            h[0][1] += i * j * e;
            h[1][1] += j * j * e;
        }
        h[1][0] = h[0][1];
        if g[0].abs().max(g[1].abs()) < 1e-15 {
            let s = s_at(u, v);
            return Ok(CriticalPoint { x0: u.exp(), y0: v.exp(), t0: 1.0 / s });
        }
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det <= 0.0 {
            return Err(Error::NonConvergence);
        }
        let du = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let dv = -(h[0][0] * g[1] - h[1][0] * g[0]) / det;
        let s0 = s_at(u, v);
        let slope = g[0] * du + g[1] * dv;
        let mut step = 1.0;
        while s_at(u + step * du, v + step * dv) > s0 + 1e-4 * step * slope && step > 1e-12 {
            step *= 0.5;
        }
        u += step * du;
        v += step * dv;
    }
    Err(Error::NonConvergence)
}
