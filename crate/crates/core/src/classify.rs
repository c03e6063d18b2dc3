//! The decision pipeline: pattern, genus, group, uniformization, shift order,
//! then either the orbit sum or the transcendence criteria.

use serde::Serialize;

use crate::curve::{branch_points, BranchPoints};
use crate::error::Result;
use crate::group::{
    fixed_point_rationality, orbit_sum_formal, orbit_sum_on_curve, search_with_resampling, GroupReport, TriState,
    DEFAULT_CAP,
};
use crate::kernel::{genus, kernel_eval_proj, GenusTag, KernelContext};
use crate::model::{pattern_class, PatternClass, WeightTable};
use crate::rational::{format_rational, is_rational_square, qi, Q};
use crate::uniformization::{tau_order_on_curve, Uniformization};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// `|K(Λ(ω))|` on sampled points.
    pub curve: f64,
    pub period: f64,
    /// Chordal distance accepted when confirming `Λ(ω + ℓω₃) = Λ(ω)`.
    pub tau_confirm: f64,
    /// Distance of `ω₃/ω₂` from a candidate fraction.
    pub ratio: f64,
    /// Threshold below which the orbit sum on the curve counts as zero.
    pub orbit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { curve: 1e-8, period: 1e-7, tau_confirm: 1e-6, ratio: 1e-9, orbit: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Options {
    /// Largest group cardinality searched for.
    pub cap: usize,
    pub tol: Tolerances,
    /// Points used for the orbit sum on the curve.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, tol: Tolerances::default(), samples: 32, seed: 0x5eed_0001 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    DegenerateModel,
    GenusZeroOutOfScope,
    Algebraic,
    HolonomicNotAlgebraic,
    DifferentiallyTranscendental(u8),
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::DegenerateModel => write!(f, "degenerate model"),
            Verdict::GenusZeroOutOfScope => write!(f, "genus zero (out of scope)"),
            Verdict::Algebraic => write!(f, "algebraic"),
            Verdict::HolonomicNotAlgebraic => write!(f, "holonomic, not algebraic"),
            Verdict::DifferentiallyTranscendental(c) => write!(f, "differentially transcendental (criterion {c})"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One checked statement: what was claimed, on what grounds, and the value
/// that lets a reader re-check it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub claim: String,
    pub basis: String,
    pub witness: String,
}

fn evidence(claim: impl Into<String>, basis: &str, witness: impl Into<String>) -> Evidence {
    Evidence { claim: claim.into(), basis: basis.into(), witness: witness.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionCheck {
    pub criterion: u8,
    pub fires: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformSummary {
    pub branch_points: BranchPoints,
    pub g2: f64,
    pub g3: f64,
    pub e: [f64; 3],
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub ratio: f64,
    /// Largest `|K(Λ(ω))|` over the sampled points.
    pub curve_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub weights: Vec<(String, String)>,
    pub t: String,
    pub pattern: PatternClass,
    pub genus: GenusTag,
    pub stationary_weight: bool,
    pub group: Option<GroupReport>,
    pub uniform: Option<UniformSummary>,
    pub criteria: Vec<CriterionCheck>,
    pub verdict: Verdict,
    /// The verdict was reached for this `t` only.
    pub t_specific: bool,
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
    /// A numerical step that failed, if any.
    pub failure: Option<String>,
}

fn summarize(ctx: &KernelContext, bp: &BranchPoints, u: &Uniformization) -> UniformSummary {
    let residual = curve_residual(ctx, u, 16);
    UniformSummary {
        branch_points: bp.clone(),
        g2: u.g2,
        g3: u.g3,
        e: u.e,
        omega1: u.omega1,
        omega2: u.omega2,
        omega3: u.omega3,
        ratio: u.omega3 / u.omega2,
        curve_residual: residual,
    }
}

/// The two quantities whose squareness decides criterion 1.
pub fn criterion1_quantities(w: &WeightTable) -> [Q; 2] {
    let d = |i, j| w.get(i, j).clone();
    [d(1, 0) * d(1, 0) - qi(4) * d(1, -1) * d(1, 1), d(0, 1) * d(0, 1) - qi(4) * d(-1, 1) * d(1, 1)]
}

fn criterion3(w: &WeightTable) -> bool {
    let z = |i, j| w.is_zero(i, j);
    z(1, 1) && ((z(1, 0) && !z(0, 1)) || (z(0, 1) && !z(1, 0)))
}

/// Runs criteria 1, 2 and 3 in order and returns the first that fires.
fn criteria(w: &WeightTable, report: &mut ClassificationReport) -> Option<u8> {
    let quantities = criterion1_quantities(w);
    let non_square: Vec<&Q> = quantities.iter().filter(|v| !is_rational_square(v)).collect();
    let fires1 = !non_square.is_empty();
    report.criteria.push(CriterionCheck {
        criterion: 1,
        fires: fires1,
        detail: format!(
            "d10²−4d1,-1·d11 = {}, d01²−4d-1,1·d11 = {}",
            format_rational(&quantities[0]),
            format_rational(&quantities[1])
        ),
    });
    if let Some(v) = non_square.first() {
        report.evidence.push(evidence(
            "a discriminant leading quantity is not a rational square",
            "generic case, rational weights and transcendental t",
            format_rational(v),
        ));
        return Some(1);
    }

    let shape2 = w.is_zero(1, 1) && !w.is_zero(1, 0) && !w.is_zero(0, 1);
    let mut fires2 = false;
    let detail = if !shape2 {
        "needs d11 = 0 and d10·d01 ≠ 0".to_string()
    } else {
        match fixed_point_rationality(w) {
            Ok(rational) => {
                fires2 = !rational;
                if rational {
                    "a fixed point of ι₁ or ι₂ is defined over ℚ(t)".to_string()
                } else {
                    "neither discriminant has a root in ℚ(t)".to_string()
                }
            }
            Err(e) => format!("root search failed: {e}"),
        }
    };
    report.criteria.push(CriterionCheck { criterion: 2, fires: fires2, detail: detail.clone() });
    if fires2 {
        report.evidence.push(evidence(
            "no fixed point of ι₁ or ι₂ over ℚ(t)",
            "double pole case, transcendental t",
            detail,
        ));
        return Some(2);
    }

    let fires3 = criterion3(w);
    report.criteria.push(CriterionCheck {
        criterion: 3,
        fires: fires3,
        detail: "needs d11 = d10 = 0 ≠ d01 or d11 = d01 = 0 ≠ d10".to_string(),
    });
    if fires3 {
        report.evidence.push(evidence("b₂ has a single triple pole", "triple pole case", "d11 = 0"));
        return Some(3);
    }
    None
}

pub fn classify(w: &WeightTable, t: &Q, opts: &Options) -> Result<ClassificationReport> {
    let ctx = KernelContext::new(w.clone(), t.clone())?;
    let pattern = pattern_class(w);
    let mut report = ClassificationReport {
        weights: w.entries(),
        t: format_rational(t),
        pattern,
        genus: genus(w),
        stationary_weight: w.has_stationary_weight(),
        group: None,
        uniform: None,
        criteria: Vec::new(),
        verdict: Verdict::Inconclusive,
        t_specific: false,
        evidence: Vec::new(),
        notes: Vec::new(),
        failure: None,
    };
    match pattern {
        PatternClass::Degenerate(case) => {
            report.verdict = Verdict::DegenerateModel;
            report.evidence.push(evidence(
                "the kernel is reducible or of bidegree below (2,2)",
                "degenerate step sets; half-plane models are systematically algebraic",
                format!("{case:?}"),
            ));
            return Ok(report);
        }
        PatternClass::GenusZeroConfig(dir) => {
            report.verdict = Verdict::GenusZeroOutOfScope;
            report.evidence.push(evidence(
                "three consecutive directions around an empty corner carry no weight",
                "discriminant with a double root",
                format!("{dir:?}"),
            ));
            return Ok(report);
        }
        PatternClass::NonSingular => {}
    }

    let mut group = GroupReport {
        order_p1p1: None,
        order_on_curve: None,
        orbit_sum_zero_p1p1: TriState::Unknown,
        orbit_sum_witnesses: Vec::new(),
        orbit_sum_on_curve_max: None,
        orbit_identity_gap: None,
    };
    match search_with_resampling(w, opts.cap, opts.seed) {
        Ok(search) => {
            group.order_p1p1 = search.order();
            let formal = orbit_sum_formal(&search);
            group.orbit_sum_zero_p1p1 = formal.state;
            group.orbit_sum_witnesses = formal.witnesses;
        }
        Err(e) => report.notes.push(format!("group search: {e}")),
    }

    let analytic = branch_points(&ctx).and_then(|bp| Uniformization::new(&ctx, &bp).map(|u| (bp, u)));
    let (bp, unif) = match analytic {
        Ok(v) => v,
        Err(e) => {
            report.failure = Some(format!("uniformization: {e}"));
            report.group = Some(group);
            return Ok(report);
        }
    };
    let summary = summarize(&ctx, &bp, &unif);
    report.evidence.push(evidence(
        "Λ(ω) lies on the kernel curve",
        "Weierstrass uniformization",
        format!("{:.3e}", summary.curve_residual),
    ));
    if summary.curve_residual >= opts.tol.curve {
        report.notes.push(format!("curve residual {:.3e} above tolerance", summary.curve_residual));
    }
    report.uniform = Some(summary);

    let ell = tau_order_on_curve(&unif, opts.cap / 2, opts.tol.ratio, opts.tol.tau_confirm);
    if let Some(ell) = ell {
        group.order_on_curve = Some(2 * ell);
        report.evidence.push(evidence(
            format!("τ has order {ell} on the curve"),
            "ω₃/ω₂ rational",
            format!("{:.15}", unif.omega3 / unif.omega2),
        ));
        let on_curve = orbit_sum_on_curve(&unif, ell, opts.samples, opts.tol.orbit, opts.seed);
        let numeric_zero = match &on_curve {
            Ok(c) => {
                group.orbit_sum_on_curve_max = Some(c.max_abs_o2);
                group.orbit_identity_gap = Some(c.identity_gap);
                Some(c.is_zero)
            }
            Err(e) => {
                report.notes.push(format!("orbit sum on the curve: {e}"));
                None
            }
        };
        let zero = match group.orbit_sum_zero_p1p1 {
            TriState::Zero => Some(true),
            TriState::NonZero => Some(false),
            TriState::Unknown => {
                report.t_specific = true;
                report.notes.push(
                    "group infinite on P¹×P¹ within the cap; the orbit sum was decided numerically for this t"
                        .to_string(),
                );
                numeric_zero
            }
        };
        if let (Some(exact), Some(numeric)) = (zero, numeric_zero) {
            if exact != numeric {
                report.notes.push("exact and numerical orbit sums disagree".to_string());
            }
        }
        report.verdict = match zero {
            Some(true) => Verdict::Algebraic,
            Some(false) => Verdict::HolonomicNotAlgebraic,
            None => Verdict::Inconclusive,
        };
        if let Some(z) = zero {
            let witness = match group.orbit_sum_on_curve_max {
                Some(m) => format!("max |O₂| = {m:.3e}"),
                None => "exact probes".to_string(),
            };
            report.evidence.push(evidence(
                if z { "the orbit sum vanishes" } else { "the orbit sum does not vanish" },
                "finite group: algebraic iff the orbit sum is zero",
                witness,
            ));
        }
        report.group = Some(group);
        return Ok(report);
    }

    if let Some(order) = group.order_p1p1 {
        report.notes.push(format!("group of order {order} on P¹×P¹ but no matching shift ratio on the curve"));
        report.group = Some(group);
        return Ok(report);
    }
    report.group = Some(group);
    if let Some(c) = criteria(w, &mut report) {
        report.verdict = Verdict::DifferentiallyTranscendental(c);
        report.notes.push(format!(
            "criteria assume t transcendental over ℚ; the analytic checks used t = {}",
            format_rational(t)
        ));
    }
    Ok(report)
}

/// Largest `|K(Λ(ω))|` over `n` points spread through the period cell.
pub fn curve_residual(ctx: &KernelContext, u: &Uniformization, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let s = (k as f64 + 0.5) / n as f64;
        let omega = u.point(s, ((k * 7) % n) as f64 / n as f64 - 0.5);
        let (x, y) = u.lambda(omega);
        worst = worst.max(kernel_eval_proj(ctx, &x, &y).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::named;
    use crate::rational::q;

    fn verdict(w: WeightTable, t: Q) -> ClassificationReport {
        classify(&w, &t, &Options::default()).unwrap()
    }

    #[test]
    fn finite_group_verdicts() {
        let r = verdict(named::simple_walk(), q(1, 2));
        assert_eq!(r.verdict, Verdict::HolonomicNotAlgebraic);
        let g = r.group.unwrap();
        assert_eq!((g.order_p1p1, g.order_on_curve), (Some(4), Some(4)));
        let r = verdict(named::kreweras(), q(1, 3));
        assert_eq!(r.verdict, Verdict::Algebraic);
        for w in named::order_ten() {
            assert_eq!(verdict(w, q(1, 2)).verdict, Verdict::Algebraic);
        }
    }

    #[test]
    fn criteria_verdicts() {
        let r = verdict(named::nw_heavy(), q(24, 25));
        assert_eq!(r.verdict, Verdict::DifferentiallyTranscendental(1));
        assert!(r.evidence.iter().any(|e| e.witness == "-1/3"));
        assert_eq!(verdict(named::north_heavy(), q(1, 2)).verdict, Verdict::DifferentiallyTranscendental(2));
        assert_eq!(verdict(named::no_north(), q(1, 2)).verdict, Verdict::DifferentiallyTranscendental(3));
    }

    #[test]
    fn short_circuits() {
        let diag = WeightTable::from_int_steps(&[(1, 1, 1), (-1, -1, 1)]).unwrap();
        assert_eq!(verdict(diag, q(1, 2)).verdict, Verdict::DegenerateModel);
        let corner = WeightTable::from_int_steps(&[(-1, 1, 1), (0, 1, 1), (1, 1, 1), (1, 0, 1), (1, -1, 1)]).unwrap();
        assert_eq!(verdict(corner, q(1, 2)).verdict, Verdict::GenusZeroOutOfScope);
        assert!(classify(&named::simple_walk(), &q(3, 2), &Options::default()).is_err());
    }

    #[test]
    fn criterion_one_quantities() {
        assert_eq!(criterion1_quantities(&named::nw_heavy())[1], q(-1, 3));
        assert!(criterion3(&named::no_north()));
        assert!(!criterion3(&named::north_heavy()));
    }
}
