//! The group generated by the two involutions of `P¹×P¹` that swap the
//! kernel roots in one variable, its orbit sums, the same sums on the curve,
//! and the rationality test for fixed points.
//!
//! Group elements are compared by their exact images on a handful of random
//! rational probe points rather than as rational functions.

use num::complex::Complex64;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::WeightTable;
use crate::poly::{self, QPoly};
use crate::rational::{convergents, format_rational, q, Q};
use crate::uniformization::Uniformization;

pub const DEFAULT_CAP: usize = 24;
pub const PROBE_COUNT: usize = 5;
const PROBE_SEED: u64 = 0x5eed_0001;
const RESAMPLE_LIMIT: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Involution {
    #[serde(rename = "iota1")]
    First,
    #[serde(rename = "iota2")]
    Second,
}

impl Involution {
    pub fn other(self) -> Self {
        match self {
            Involution::First => Involution::Second,
            Involution::Second => Involution::First,
        }
    }
}

pub type Pair = (Q, Q);

fn eval3(c: &[Q; 3], v: &Q) -> Q {
    &c[0] + v * (&c[1] + v * &c[2])
}

/// `[d(−1,j), d(0,j), d(1,j)]`: coefficients of `x·A_j(x)`.
fn row(w: &WeightTable, j: i8) -> [Q; 3] {
    [-1, 0, 1].map(|i| w.get(i, j).clone())
}

/// `(x, y) ↦ (x, A₋₁(x) / (A₁(x)·y))`.
pub fn iota1(w: &WeightTable, (x, y): &Pair) -> Result<Pair> {
    let den = eval3(&row(w, 1), x) * y;
    if den.is_zero() {
        return Err(Error::IndeterminateAtProbe);
    }
    Ok((x.clone(), eval3(&row(w, -1), x) / den))
}

/// `(x, y) ↦ (B₋₁(y) / (B₁(y)·x), y)`.
pub fn iota2(w: &WeightTable, (x, y): &Pair) -> Result<Pair> {
    let (nx, ny) = iota1(&w.transposed(), &(y.clone(), x.clone()))?;
    Ok((ny, nx))
}

pub fn apply(w: &WeightTable, g: Involution, p: &Pair) -> Result<Pair> {
    match g {
        Involution::First => iota1(w, p),
        Involution::Second => iota2(w, p),
    }
}

fn eval3c(c: [f64; 3], v: Complex64) -> Complex64 {
    c[0] + v * (c[1] + v * c[2])
}

/// Floating-point `ι₁` on a finite point of the curve.
pub fn iota1_c(w: &WeightTable, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let r = |j: i8| [-1, 0, 1].map(|i| w.getf(i, j));
    (x, eval3c(r(-1), x) / (eval3c(r(1), x) * y))
}

pub fn iota2_c(w: &WeightTable, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (ny, nx) = iota1_c(&w.transposed(), y, x);
    (nx, ny)
}

/// An element of the group, stored as the word that produced it and its
/// images on the probe set. The first letter of `word` is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct BirationalPair {
    pub word: Vec<Involution>,
    pub images: Vec<Pair>,
}

impl BirationalPair {
    pub fn identity(probes: &[Pair]) -> Self {
        BirationalPair { word: Vec::new(), images: probes.to_vec() }
    }

    /// `(−1)^(word length)`.
    pub fn sign(&self) -> i32 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn then(&self, w: &WeightTable, g: Involution) -> Result<Self> {
        let images = self.images.iter().map(|p| apply(w, g, p)).collect::<Result<Vec<_>>>()?;
        let mut word = self.word.clone();
        word.push(g);
        Ok(BirationalPair { word, images })
    }
}

/// Random rational points with small numerators and denominators.
pub fn random_probes(seed: u64, n: usize) -> Vec<Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coord = || loop {
        let num: i64 = rng.random_range(-40..=40);
        let den: i64 = rng.random_range(1..=29);
        if num != 0 {
            return q(num, den);
        }
    };
    (0..n).map(|_| (coord(), coord())).collect()
}

/// Elements reached by alternating words, in order of word length.
#[derive(Clone, Debug)]
pub struct GroupSearch {
    pub probes: Vec<Pair>,
    pub elements: Vec<BirationalPair>,
    /// False when more than `cap` distinct elements turned up first.
    pub closed: bool,
}

impl GroupSearch {
    pub fn order(&self) -> Option<usize> {
        self.closed.then_some(self.elements.len())
    }
}

/// Grows the two alternating chains `ι₁, ι₂ι₁, …` and `ι₂, ι₁ι₂, …` until
/// both produce known elements at the same length.
pub fn enumerate_group(w: &WeightTable, probes: &[Pair], cap: usize) -> Result<GroupSearch> {
    let id = BirationalPair::identity(probes);
    let mut elements = vec![id.clone()];
    let mut chains = [id.clone(), id];
    let starts = [Involution::First, Involution::Second];
    loop {
        let mut fresh = 0;
        for (chain, start) in chains.iter_mut().zip(starts) {
            let next = match chain.word.last() {
                None => start,
                Some(g) => g.other(),
            };
            *chain = chain.then(w, next)?;
            if !elements.iter().any(|e| e.images == chain.images) {
                elements.push(chain.clone());
                fresh += 1;
            }
        }
        if fresh == 0 {
            return Ok(GroupSearch { probes: probes.to_vec(), elements, closed: true });
        }
        if elements.len() > cap {
            return Ok(GroupSearch { probes: probes.to_vec(), elements, closed: false });
        }
    }
}

/// Runs `enumerate_group` on fresh probe sets until none is indeterminate.
pub fn search_with_resampling(w: &WeightTable, cap: usize, seed: u64) -> Result<GroupSearch> {
    for attempt in 0..RESAMPLE_LIMIT {
        let probes = random_probes(seed.wrapping_add(attempt), PROBE_COUNT);
        match enumerate_group(w, &probes, cap) {
            Err(Error::IndeterminateAtProbe) => continue,
            other => return other,
        }
    }
    Err(Error::IndeterminateAtProbe)
}

/// Cardinality of `⟨ι₁, ι₂⟩`, or `None` when it exceeds `cap`.
pub fn group_order_p1p1(w: &WeightTable, cap: usize) -> Option<usize> {
    search_with_resampling(w, cap, PROBE_SEED).ok()?.order()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TriState {
    Zero,
    NonZero,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitWitness {
    pub x: String,
    pub y: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalOrbitSum {
    pub state: TriState,
    pub witnesses: Vec<OrbitWitness>,
}

/// `Σ sign(θ)·θ(xy)` at every probe of a closed search.
pub fn orbit_sum_formal(search: &GroupSearch) -> FormalOrbitSum {
    if !search.closed {
        return FormalOrbitSum { state: TriState::Unknown, witnesses: Vec::new() };
    }
    let mut witnesses = Vec::new();
    let mut zero = true;
    for (k, (x, y)) in search.probes.iter().enumerate() {
        let mut total = Q::zero();
        for e in &search.elements {
            let (ex, ey) = &e.images[k];
            let term = ex * ey;
            if e.sign() > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        zero &= total.is_zero();
        witnesses.push(OrbitWitness { x: format_rational(x), y: format_rational(y), value: format_rational(&total) });
    }
    FormalOrbitSum { state: if zero { TriState::Zero } else { TriState::NonZero }, witnesses }
}

/// `b₁(ω) = y(ω+ω₃)·(x(ω) − x(ω+ω₃))`; `None` at a pole.
pub fn b1(u: &Uniformization, omega: Complex64) -> Option<Complex64> {
    let shifted = omega + u.omega3;
    let y1 = u.y(shifted).value()?;
    Some(y1 * (u.x(omega).value()? - u.x(shifted).value()?))
}

/// `b₂(ω) = x(ω)·(y(ω) − y(−ω))`; `None` at a pole.
pub fn b2(u: &Uniformization, omega: Complex64) -> Option<Complex64> {
    Some(u.x(omega).value()? * (u.y(omega).value()? - u.y(-omega).value()?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveOrbitSum {
    pub max_abs_o2: f64,
    /// Largest `|O₁ + O₂|` seen.
    pub identity_gap: f64,
    pub is_zero: bool,
    pub samples: usize,
}

/// Coordinates beyond this modulus count as too close to a pole.
const POLE_GUARD: f64 = 1e3;

fn orbit_terms(u: &Uniformization, omega: Complex64, ell: usize) -> Option<(Complex64, Complex64)> {
    let mut o1 = Complex64::zero();
    let mut o2 = Complex64::zero();
    for k in 0..ell {
        let w = omega + k as f64 * u.omega3;
        for v in [w, -w, w + u.omega3] {
            let (x, y) = u.lambda(v);
            if x.modulus() > POLE_GUARD || y.modulus() > POLE_GUARD {
                return None;
            }
        }
        o1 += b1(u, w)?;
        o2 += b2(u, w)?;
    }
    Some((o1, o2))
}

/// `O₂(ω) = Σ_{k<ℓ} b₂(ω + kω₃)` at random points of the period cell.
pub fn orbit_sum_on_curve(
    u: &Uniformization,
    ell: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<CurveOrbitSum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CurveOrbitSum { max_abs_o2: 0.0, identity_gap: 0.0, is_zero: true, samples: 0 };
    for _ in 0..samples * 20 {
        if out.samples == samples {
            break;
        }
        let omega = u.point(rng.random_range(0.0..1.0), rng.random_range(-0.5..0.5));
        let Some((o1, o2)) = orbit_terms(u, omega, ell) else { continue };
        out.samples += 1;
        out.max_abs_o2 = out.max_abs_o2.max(o2.norm());
        out.identity_gap = out.identity_gap.max((o1 + o2).norm());
    }
    if out.samples == 0 {
        return Err(Error::AllSamplesNearPoles);
    }
    out.is_zero = out.max_abs_o2 < tol;
    Ok(out)
}

/// Coefficients of `D(x)` as polynomials in `t`.
pub fn discriminant_in_t(w: &WeightTable) -> [QPoly; 5] {
    let centre = row(w, 0);
    let cross = poly::sub(
        &poly::mul(&centre, &centre),
        &poly::scale(&poly::mul(&row(w, 1), &row(w, -1)), &Q::from_integer(4.into())),
    );
    let mut out: [QPoly; 5] = Default::default();
    for (k, c) in out.iter_mut().enumerate() {
        let constant = if k == 2 { Q::one() } else { Q::zero() };
        let linear = if (1..=3).contains(&k) { -Q::from_integer(2.into()) * &centre[k - 1] } else { Q::zero() };
        let quadratic = cross.get(k).cloned().unwrap_or_else(Q::zero);
        let mut p = vec![constant, linear, quadratic];
        poly::trim(&mut p);
        *c = p;
    }
    out
}

/// Rational values of `t` at which root families are sampled.
const SPECIALIZATIONS: [(i64, i64); 16] = [
    (1, 2),
    (1, 3),
    (2, 3),
    (1, 4),
    (3, 4),
    (1, 5),
    (2, 5),
    (3, 5),
    (4, 5),
    (1, 6),
    (5, 6),
    (1, 7),
    (2, 7),
    (3, 7),
    (4, 7),
    (5, 7),
];

/// Exact rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let mut p = p.to_vec();
    poly::trim(&mut p);
    let Some(n) = poly::degree(&p) else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n].abs();
    // a root p/q in lowest terms has q dividing the leading coefficient of
    // the integer-scaled polynomial
    let den_lcm = p.iter().fold(num::BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().clone()));
    let lead_int = (lead * Q::from_integer(den_lcm)).to_integer();
    let max_den = num::ToPrimitive::to_u64(&lead_int).unwrap_or(u64::MAX).min(1 << 40);
    let mut out: Vec<Q> = Vec::new();
    for r in poly::real_roots(&p, 1e-6) {
        for (a, b) in convergents(r, max_den) {
            let cand = q(a, b as i64);
            if poly::eval(&p, &cand).is_zero() && !out.contains(&cand) {
                out.push(cand);
                break;
            }
        }
    }
    out.sort();
    out
}

/// Basis of the null space of an exact matrix.
fn nullspace(mut m: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (v, p) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

fn poly_pow(p: &[Q], k: usize) -> QPoly {
    (0..k).fold(vec![Q::one()], |acc, _| poly::mul(&acc, p))
}

/// `Σ_k c_k(t)·N^k·M^(4−k)`, identically zero iff `N/M` is a root.
fn substitute(coeffs: &[QPoly; 5], n: &[Q], m: &[Q]) -> QPoly {
    let mut total = QPoly::new();
    for (k, c) in coeffs.iter().enumerate() {
        let term = poly::mul(c, &poly::mul(&poly_pow(n, k), &poly_pow(m, 4 - k)));
        total = poly::add(&total, &term);
    }
    poly::trim(&mut total);
    total
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().fold(vec![Vec::new()], |acc, &n| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect()
    })
}

/// A root `N(t)/M(t)` of the quartic (in `x`) with coefficients in `ℚ[t]`,
/// with `deg N, deg M ≤ max_deg`, found by specialization and interpolation
/// and confirmed by exact substitution. Roots at `x = ∞` are not reported.
pub fn rational_root_family(coeffs: &[QPoly; 5], max_deg: usize) -> Result<Option<(QPoly, QPoly)>> {
    let generic = (0..5).rev().find(|&k| !coeffs[k].is_empty());
    let Some(generic) = generic else { return Ok(None) };
    let mut ambiguous = false;
    for count in [8, 16] {
        let mut samples: Vec<(Q, Vec<Q>)> = Vec::new();
        for &(a, b) in &SPECIALIZATIONS {
            if samples.len() == count {
                break;
            }
            let t = q(a, b);
            let p: QPoly = coeffs.iter().map(|c| poly::eval(c, &t)).collect();
            if poly::degree(&p) != Some(generic) {
                continue;
            }
            let roots = rational_roots(&p);
            if roots.is_empty() {
                return Ok(None);
            }
            samples.push((t, roots));
        }
        ambiguous = false;
        let mut pairs: Vec<(usize, usize)> =
            (0..=max_deg).flat_map(|dn| (0..=max_deg).map(move |dm| (dn, dm))).collect();
        pairs.sort_by_key(|&(dn, dm)| (dn + dm, dm));
        for (dn, dm) in pairs {
            let unknowns = dn + dm + 2;
            let fit = unknowns - 1;
            if fit > samples.len() {
                continue;
            }
            let sizes: Vec<usize> = samples[..fit].iter().map(|s| s.1.len()).collect();
            for choice in cartesian(&sizes) {
                let rows: Vec<Vec<Q>> = choice
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| {
                        let (t, roots) = &samples[i];
                        let r = &roots[k];
                        let mut row: Vec<Q> = (0..=dn).map(|e| num::pow(t.clone(), e)).collect();
                        row.extend((0..=dm).map(|e| -(r * num::pow(t.clone(), e))));
                        row
                    })
                    .collect();
                let basis = nullspace(rows, unknowns);
                if basis.len() != 1 {
                    continue;
                }
                let mut n: QPoly = basis[0][..=dn].to_vec();
                let mut m: QPoly = basis[0][dn + 1..].to_vec();
                poly::trim(&mut n);
                poly::trim(&mut m);
                if m.is_empty() {
                    continue;
                }
                let holds = samples[fit..].iter().all(|(t, roots)| {
                    let den = poly::eval(&m, t);
                    !den.is_zero() && roots.contains(&(poly::eval(&n, t) / den))
                });
                if !holds {
                    continue;
                }
                if substitute(coeffs, &n, &m).is_empty() {
                    return Ok(Some((n, m)));
                }
                ambiguous = true;
            }
        }
        if !ambiguous {
            return Ok(None);
        }
    }
    if ambiguous {
        Err(Error::InterpolationAmbiguous)
    } else {
        Ok(None)
    }
}

/// Whether a fixed point of `ι₁` or `ι₂` is defined over `ℚ(t)`, that is,
/// whether `D(x)` or `E(y)` has a root in `P¹(ℚ(t))`.
pub fn fixed_point_rationality(w: &WeightTable) -> Result<bool> {
    for table in [w.clone(), w.transposed()] {
        let c = discriminant_in_t(&table);
        if c[4].is_empty() || c[0].is_empty() {
            return Ok(true);
        }
        if rational_root_family(&c, 2)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Group data collected for a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub order_p1p1: Option<usize>,
    /// `2ℓ` when `τ` has order `ℓ` on the curve.
    pub order_on_curve: Option<usize>,
    pub orbit_sum_zero_p1p1: TriState,
    pub orbit_sum_witnesses: Vec<OrbitWitness>,
    pub orbit_sum_on_curve_max: Option<f64>,
    pub orbit_identity_gap: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::branch_points;
    use crate::kernel::{kernel_eval, KernelContext};
    use crate::model::named;
    use crate::rational::qi;
    use crate::uniformization::tau_order_on_curve;

    fn pair(a: Q, b: Q) -> Pair {
        (a, b)
    }

    #[test]
    fn closed_forms_of_the_involutions() {
        let p = pair(q(2, 3), q(-5, 7));
        let s = named::simple_walk();
        assert_eq!(iota1(&s, &p).unwrap(), pair(q(2, 3), q(-7, 5)));
        assert_eq!(iota2(&s, &p).unwrap(), pair(q(3, 2), q(-5, 7)));
        // Kreweras: ι₁(x, y) = (x, 1/(xy))
        let k = named::kreweras();
        assert_eq!(iota1(&k, &p).unwrap(), pair(q(2, 3), Q::one() / (q(2, 3) * q(-5, 7))));
        assert_eq!(iota2(&k, &p).unwrap(), pair(Q::one() / (q(2, 3) * q(-5, 7)), q(-5, 7)));
    }

    #[test]
    fn involutions_square_to_identity() {
        for w in [named::gessel(), named::nw_heavy(), named::order_ten()[2].clone()] {
            for p in random_probes(7, 6) {
                assert_eq!(iota1(&w, &iota1(&w, &p).unwrap()).unwrap(), p);
                assert_eq!(iota2(&w, &iota2(&w, &p).unwrap()).unwrap(), p);
            }
        }
    }

    #[test]
    fn zero_denominator_is_indeterminate() {
        let w = named::simple_walk();
        assert_eq!(iota1(&w, &pair(qi(0), qi(1))), Err(Error::IndeterminateAtProbe));
    }

    #[test]
    fn known_orders() {
        assert_eq!(group_order_p1p1(&named::simple_walk(), DEFAULT_CAP), Some(4));
        assert_eq!(group_order_p1p1(&named::kreweras(), DEFAULT_CAP), Some(6));
        assert_eq!(group_order_p1p1(&named::gessel(), DEFAULT_CAP), Some(8));
        for w in named::order_ten() {
            assert_eq!(group_order_p1p1(&w, DEFAULT_CAP), Some(10));
        }
        assert_eq!(group_order_p1p1(&named::nw_heavy(), DEFAULT_CAP), None);
    }

    #[test]
    fn orbit_sums() {
        let s = search_with_resampling(&named::kreweras(), DEFAULT_CAP, 3).unwrap();
        assert_eq!(orbit_sum_formal(&s).state, TriState::Zero);
        // simple walk: (x − 1/x)(y − 1/y), equal to 4 at (2, 3)
        let w = named::simple_walk();
        let s = enumerate_group(&w, &[pair(qi(2), qi(3))], DEFAULT_CAP).unwrap();
        let o = orbit_sum_formal(&s);
        assert_eq!(o.state, TriState::NonZero);
        assert_eq!(o.witnesses[0].value, "4");
        let far = enumerate_group(&named::nw_heavy(), &random_probes(1, 5), DEFAULT_CAP).unwrap();
        assert_eq!(orbit_sum_formal(&far).state, TriState::Unknown);
    }

    #[test]
    fn parity_is_constant_on_each_element() {
        for w in [named::simple_walk(), named::kreweras(), named::gessel(), named::order_ten()[0].clone()] {
            let probes = random_probes(11, PROBE_COUNT);
            let order = enumerate_group(&w, &probes, DEFAULT_CAP).unwrap().order().unwrap();
            let mut seen: Vec<(Vec<Pair>, usize)> = Vec::new();
            for start in [Involution::First, Involution::Second] {
                let mut e = BirationalPair::identity(&probes);
                let mut g = start;
                for _ in 0..2 * order {
                    e = e.then(&w, g).unwrap();
                    g = g.other();
                    match seen.iter().find(|(im, _)| *im == e.images) {
                        Some((_, parity)) => assert_eq!(*parity, e.word.len() % 2),
                        None => seen.push((e.images.clone(), e.word.len() % 2)),
                    }
                }
            }
            assert_eq!(seen.len(), order);
        }
    }

    fn unif(w: WeightTable, t: Q) -> Uniformization {
        let ctx = KernelContext::new(w, t).unwrap();
        let bp = branch_points(&ctx).unwrap();
        Uniformization::new(&ctx, &bp).unwrap()
    }

    #[test]
    fn qrt_map_is_the_shift() {
        let w = named::nw_heavy();
        let u = unif(w.clone(), q(24, 25));
        let omega = u.point(0.31, 0.17);
        let (x, y) = u.lambda(omega);
        let (x, y) = (x.value().unwrap(), y.value().unwrap());
        let (x1, y1) = iota1_c(&w, x, y);
        let (x2, y2) = iota2_c(&w, x1, y1);
        let (sx, sy) = u.lambda(omega + u.omega3);
        assert!((sx.value().unwrap() - x2).norm() < 1e-8 * x2.norm().max(1.0));
        assert!((sy.value().unwrap() - y2).norm() < 1e-8 * y2.norm().max(1.0));
        let ctx = KernelContext::new(w, q(24, 25)).unwrap();
        assert!(kernel_eval(&ctx, x2, y2).norm() < 1e-9);
    }

    #[test]
    fn b_terms_telescope() {
        let u = unif(named::gessel(), q(1, 3));
        for k in 0..32 {
            let omega = u.point(0.03 * k as f64 + 0.011, 0.37 - 0.021 * k as f64);
            let (Some(v1), Some(v2)) = (b1(&u, omega), b2(&u, omega)) else { continue };
            let xy = |w: Complex64| u.x(w).value().unwrap() * u.y(w).value().unwrap();
            let diff = xy(omega) - xy(omega + u.omega3);
            assert!((v1 + v2 - diff).norm() < 1e-8 * diff.norm().max(1.0), "{k}");
            let period = omega + u.omega1_c();
            assert!((b2(&u, period).unwrap() - v2).norm() < 1e-8 * v2.norm().max(1.0));
        }
        // ω = 0 is fixed by ω ↦ −ω
        assert_eq!(b2(&u, Complex64::zero()), Some(Complex64::zero()));
    }

    #[test]
    fn orbit_sum_on_the_curve() {
        let u = unif(named::kreweras(), q(1, 2));
        let ell = tau_order_on_curve(&u, DEFAULT_CAP, 1e-9, 1e-6).unwrap();
        let r = orbit_sum_on_curve(&u, ell, 16, 1e-7, 5).unwrap();
        assert!(r.is_zero && r.identity_gap < 1e-7, "{r:?}");
        let u = unif(named::simple_walk(), q(1, 2));
        let r = orbit_sum_on_curve(&u, 2, 16, 1e-7, 5).unwrap();
        assert!(!r.is_zero && r.max_abs_o2 > 1e-2 && r.identity_gap < 1e-7, "{r:?}");
    }

    #[test]
    fn discriminant_in_t_matches_specialization() {
        let w = named::north_heavy();
        let c = discriminant_in_t(&w);
        let t = q(3, 8);
        let ctx = KernelContext::new(w, t.clone()).unwrap();
        let direct = crate::curve::discriminant_x(&ctx);
        for k in 0..5 {
            assert_eq!(poly::eval(&c[k], &t), direct[k]);
        }
    }

    #[test]
    fn rational_roots_are_exact() {
        let mut p = vec![qi(1)];
        for r in [q(-3, 7), q(5, 2), q(11, 13)] {
            p = poly::mul(&p, &[-r, qi(1)]);
        }
        p = poly::mul(&p, &[qi(-2), qi(0), qi(1)]);
        assert_eq!(rational_roots(&p), vec![q(-3, 7), q(11, 13), q(5, 2)]);
    }

    #[test]
    fn fixed_point_rationality_cases() {
        // the quartics of the north-heavy model have no root over ℚ(t)
        assert!(!fixed_point_rationality(&named::north_heavy()).unwrap());
        assert!(!fixed_point_rationality(&named::simple_walk()).unwrap());
        // Kreweras: D has a root at ∞
        assert!(fixed_point_rationality(&named::kreweras()).unwrap());
    }

    #[test]
    fn finds_a_moving_root() {
        // NW, SW, SE, NE weight 1/11, N, S, E weight 2/11, W weight 1/11;
        // D(x) = −(4tx + t + 11x)(4tx² + 4tx + 3t − 11x)/121
        let w = WeightTable::from_int_steps(&[
            (-1, 1, 1),
            (0, 1, 2),
            (1, 1, 1),
            (-1, -1, 1),
            (0, -1, 2),
            (1, -1, 1),
            (1, 0, 2),
            (-1, 0, 1),
        ])
        .unwrap();
        let c = discriminant_in_t(&w);
        assert!(c[4].is_empty());
        let (n, m) = rational_root_family(&c, 2).unwrap().unwrap();
        for t in [q(1, 9), q(7, 10)] {
            let root = poly::eval(&n, &t) / poly::eval(&m, &t);
            assert_eq!(root, -&t / (qi(4) * &t + qi(11)));
        }
        assert!(rational_root_family(&discriminant_in_t(&named::north_heavy()), 2).unwrap().is_none());
    }
}
