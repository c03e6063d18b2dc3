//! The kernel `K(x,y;t) = xy(1 − t·S(x,y))`, its fibers and its genus.

use num::complex::Complex64;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pattern_class, PatternClass, WeightTable, STEPS};
use crate::proj::ProjPoint;
use crate::rational::{format_rational, to_f64, Q};

/// A weight table together with a rational `t` in `(0, 1)`.
#[derive(Clone, Debug)]
pub struct KernelContext {
    w: WeightTable,
    t: Q,
    tf: f64,
    df: [[f64; 3]; 3],
}

impl KernelContext {
    pub fn new(w: WeightTable, t: Q) -> Result<Self> {
        if !t.is_positive() || t >= Q::one() {
            return Err(Error::InvalidT(format_rational(&t)));
        }
        let mut df = [[0.0; 3]; 3];
        for (i, j) in STEPS {
            df[(i + 1) as usize][(j + 1) as usize] = w.getf(i, j);
        }
        let tf = to_f64(&t);
        Ok(KernelContext { w, t, tf, df })
    }

    pub fn weights(&self) -> &WeightTable {
        &self.w
    }

    pub fn t(&self) -> &Q {
        &self.t
    }

    pub fn tf(&self) -> f64 {
        self.tf
    }

    pub fn d(&self, i: i8, j: i8) -> f64 {
        self.df[(i + 1) as usize][(j + 1) as usize]
    }

    /// Same `t`, coordinates exchanged; turns statements about `x` into
    /// statements about `y`.
    pub fn transposed(&self) -> Self {
        KernelContext::new(self.w.transposed(), self.t.clone()).expect("t already validated")
    }

    /// Coefficients (in `x`, lowest first) of `x·A_j(x)`, the part of
    /// `xy·S` multiplying `y^(j+1)`.
    pub fn a_tilde(&self, j: i8) -> [Q; 3] {
        [-1, 0, 1].map(|i| self.w.get(i, j).clone())
    }

    /// Coefficients (in `y`) of `y·B_i(y)`.
    pub fn b_tilde(&self, i: i8) -> [Q; 3] {
        [-1, 0, 1].map(|j| self.w.get(i, j).clone())
    }

    /// The step polynomial `S(x, y)` at nonzero `x, y`.
    pub fn step_poly(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut s = Complex64::zero();
        for (i, j) in STEPS {
            let d = self.d(i, j);
            if d != 0.0 {
                s += d * x.powi(i as i32) * y.powi(j as i32);
            }
        }
        s
    }
}

/// `K(x, y; t)` at finite complex arguments.
pub fn kernel_eval(ctx: &KernelContext, x: Complex64, y: Complex64) -> Complex64 {
    let mut acc = x * y;
    for (i, j) in STEPS {
        let d = ctx.d(i, j);
        if d != 0.0 {
            acc -= ctx.tf * d * x.powu((i + 1) as u32) * y.powu((j + 1) as u32);
        }
    }
    acc
}

/// `K(x, y; t)` in exact arithmetic.
pub fn kernel_eval_exact(ctx: &KernelContext, x: &Q, y: &Q) -> Q {
    let mut sum = Q::zero();
    for (i, j) in STEPS {
        let d = ctx.weights().get(i, j);
        if !d.is_zero() {
            sum += d * num::pow(x.clone(), (i + 1) as usize) * num::pow(y.clone(), (j + 1) as usize);
        }
    }
    x * y - ctx.t() * sum
}

/// The bihomogeneous kernel at projective arguments.
pub fn kernel_eval_proj(ctx: &KernelContext, x: &ProjPoint, y: &ProjPoint) -> Complex64 {
    let [a, b, c] = fiber_coefficients(ctx, x);
    a * y.c0 * y.c0 + b * y.c0 * y.c1 + c * y.c1 * y.c1
}

/// Coefficients of `y0², y0·y1, y1²` in the kernel over a fixed `x`.
fn fiber_coefficients(ctx: &KernelContext, x: &ProjPoint) -> [Complex64; 3] {
    let mono = [x.c1 * x.c1, x.c0 * x.c1, x.c0 * x.c0];
    let row =
        |j: i8| -> Complex64 { (-1..=1).map(|i| ctx.d(i, j) * mono[(i + 1) as usize]).sum::<Complex64>() * -ctx.tf };
    [row(1), row(0) + mono[1], row(-1)]
}

/// Roots of `a·y0² + b·y0·y1 + c·y1²`, unlabelled.
fn fiber_roots(ctx: &KernelContext, x: &ProjPoint) -> Result<(ProjPoint, ProjPoint)> {
    let [a, b, c] = fiber_coefficients(ctx, x);
    let size = a.norm().max(b.norm()).max(c.norm());
    if size < 1e-14 {
        return Err(Error::DegenerateFiber(format!("{:?}", x.value())));
    }
    let (a, b, c) = (a / size, b / size, c / size);
    let s = (b * b - 4.0 * a * c).sqrt();
    let plus = b + s;
    let minus = b - s;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    let zero = Complex64::zero();
    if q == zero {
        let p = if a == zero { ProjPoint::infinity() } else { ProjPoint::real(0.0) };
        return Ok((p, p));
    }
    let r1 = ProjPoint::new(q, a).expect("q is nonzero");
    let r2 = ProjPoint::new(c, q).expect("q is nonzero");
    Ok((r1, r2))
}

fn by_modulus((r1, r2): (ProjPoint, ProjPoint)) -> (ProjPoint, ProjPoint) {
    // compare |r1| < |r2| without dividing
    if r1.c0.norm() * r2.c1.norm() <= r2.c0.norm() * r1.c1.norm() {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

const RAY_STEPS: usize = 48;

/// The two `y`-roots of `K(x, ·) = 0`, labelled `(Y−, Y+)`.
///
/// On the unit circle the labels follow modulus. Elsewhere the pair is
/// carried by continuity along the ray from `x/|x|` to `x`.
pub fn roots_in_y(ctx: &KernelContext, x: &ProjPoint) -> Result<(ProjPoint, ProjPoint)> {
    let target = fiber_roots(ctx, x)?;
    let m = x.modulus();
    if (m - 1.0).abs() < 1e-12 {
        return Ok(by_modulus(target));
    }
    let dir = match x.value() {
        Some(z) if z.norm() > 0.0 => z / z.norm(),
        _ => Complex64::one(),
    };
    let mut prev = by_modulus(fiber_roots(ctx, &ProjPoint::finite(dir))?);
    let inv_m = if m.is_infinite() { 0.0 } else { 1.0 / m };
    for k in 1..=RAY_STEPS {
        let s = k as f64 / RAY_STEPS as f64;
        let roots = if k == RAY_STEPS {
            target
        } else {
            let radius = if m < 1.0 { 1.0 + (m - 1.0) * s } else { 1.0 / (1.0 + (inv_m - 1.0) * s) };
            match fiber_roots(ctx, &ProjPoint::finite(dir * radius)) {
                Ok(r) => r,
                Err(_) => continue,
            }
        };
        let keep = prev.0.chordal(&roots.0) + prev.1.chordal(&roots.1);
        let swap = prev.0.chordal(&roots.1) + prev.1.chordal(&roots.0);
        prev = if keep <= swap { roots } else { (roots.1, roots.0) };
    }
    Ok(prev)
}

/// The two `x`-roots of `K(·, y) = 0`, labelled `(X−, X+)`.
pub fn roots_in_x(ctx: &KernelContext, y: &ProjPoint) -> Result<(ProjPoint, ProjPoint)> {
    roots_in_y(&ctx.transposed(), y)
}

/// The double root over a branch point, computed as `−b/2a` directly.
pub fn double_root_in_y(ctx: &KernelContext, x: &ProjPoint) -> ProjPoint {
    let [a, b, c] = fiber_coefficients(ctx, x);
    let p = if a.norm() >= c.norm() { ProjPoint::new(-b, 2.0 * a) } else { ProjPoint::new(2.0 * c, -b) };
    p.unwrap_or_else(ProjPoint::infinity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenusTag {
    Elliptic,
    GenusZero,
    Degenerate,
}

/// Genus of the kernel curve; the same for every `t` in `(0, 1)`.
pub fn genus(w: &WeightTable) -> GenusTag {
    match pattern_class(w) {
        PatternClass::NonSingular => GenusTag::Elliptic,
        PatternClass::GenusZeroConfig(_) => GenusTag::GenusZero,
        PatternClass::Degenerate(_) => GenusTag::Degenerate,
    }
}

pub type CurvePoint = (ProjPoint, ProjPoint);

/// Points of the curve where `x` or `y` is infinite.
#[derive(Clone, Debug, Serialize)]
pub struct KernelPoles {
    /// `x = ∞`.
    pub p: [CurvePoint; 2],
    /// `y = ∞`.
    pub q: [CurvePoint; 2],
    /// The images of `q` under the first involution.
    pub iota1_q: [CurvePoint; 2],
}

pub fn poles_of_xy(ctx: &KernelContext) -> Result<KernelPoles> {
    let inf = ProjPoint::infinity();
    let (y1, y2) = roots_in_y(ctx, &inf)?;
    let (x1, x2) = roots_in_x(ctx, &inf)?;
    let conjugate = |x: ProjPoint| -> Result<CurvePoint> {
        let (r1, r2) = fiber_roots(ctx, &x)?;
        let other = if r1.chordal(&inf) >= r2.chordal(&inf) { r1 } else { r2 };
        Ok((x, other))
    };
    Ok(KernelPoles { p: [(inf, y1), (inf, y2)], q: [(x1, inf), (x2, inf)], iota1_q: [conjugate(x1)?, conjugate(x2)?] })
}
