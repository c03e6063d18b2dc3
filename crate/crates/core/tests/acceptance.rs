//! One PASS/FAIL line per acceptance criterion.

use std::collections::HashMap;
use std::time::Instant;

use num::complex::Complex64;
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use walkclass::classify::{classify, Options, Verdict};
use walkclass::curve::{branch_points, discriminants, ExtReal};
use walkclass::group::{
    enumerate_group, fixed_point_rationality, group_order_p1p1, orbit_sum_formal, random_probes, TriState, PROBE_COUNT,
};
use walkclass::kernel::kernel_eval_proj;
use walkclass::model::{named, pattern_class, PatternClass, STEPS};
use walkclass::poly;
use walkclass::rational::{q, Q};
use walkclass::series::{continuation_residual, critical_t, verify_functional_equation, walk_dp, SeriesEvaluator};
use walkclass::uniformization::quad::arc_integral;
use walkclass::uniformization::Uniformization;
use walkclass::{KernelContext, WeightTable};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random integer weights on an elliptic step set of at most `max_steps` steps.
fn random_raw(rng: &mut ChaCha8Rng, max_steps: usize) -> Vec<(i8, i8, i64)> {
    loop {
        let mut raw = Vec::new();
        for (i, j) in STEPS {
            if rng.random_bool(0.55) {
                raw.push((i, j, rng.random_range(1..=4)));
            }
        }
        if raw.len() > max_steps || raw.is_empty() {
            continue;
        }
        if raw.iter().all(|&(i, j, _)| (i, j) == (0, 0)) {
            continue;
        }
        let w = WeightTable::from_int_steps(&raw).unwrap();
        if pattern_class(&w) == PatternClass::NonSingular {
            return raw;
        }
    }
}

fn random_t(rng: &mut ChaCha8Rng) -> Q {
    let den: i64 = rng.random_range(3..=40);
    q(rng.random_range(1..den), den)
}

fn unif(w: WeightTable, t: Q) -> (KernelContext, walkclass::curve::BranchPoints, Uniformization) {
    let ctx = KernelContext::new(w, t).unwrap();
    let bp = branch_points(&ctx).unwrap();
    let u = Uniformization::new(&ctx, &bp).unwrap();
    (ctx, bp, u)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for _ in 0..25 {
        let raw = random_raw(&mut rng, 9);
        for _ in 0..3 {
            // the check runs with t formal; the sampled t only rescales
            let t = random_t(&mut rng);
            let w = WeightTable::from_int_steps(&raw).unwrap();
            KernelContext::new(w.clone(), t).map_err(|e| e.to_string())?;
            let got = verify_functional_equation(&w, 12);
            ensure(got == Ok(11), || format!("{raw:?}: {got:?}"))?;
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{checked} runs through degree 11 in {secs:.2} s"))
}

/// Integer-weighted path counts by depth-first enumeration, keyed by
/// `(i, j, k)`.
fn enumerate_paths(raw: &[(i8, i8, i64)], max_len: usize) -> HashMap<(usize, usize, usize), BigInt> {
    fn go(
        raw: &[(i8, i8, i64)],
        pos: (i64, i64),
        len: usize,
        weight: &BigInt,
        max_len: usize,
        out: &mut HashMap<(usize, usize, usize), BigInt>,
    ) {
        *out.entry((pos.0 as usize, pos.1 as usize, len)).or_insert_with(BigInt::zero) += weight;
        if len == max_len {
            return;
        }
        for &(i, j, c) in raw {
            let next = (pos.0 + i as i64, pos.1 + j as i64);
            if next.0 >= 0 && next.1 >= 0 {
                go(raw, next, len + 1, &(weight * c), max_len, out);
            }
        }
    }
    let mut out = HashMap::new();
    go(raw, (0, 0), 0, &BigInt::one(), max_len, &mut out);
    out
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let order = 8;
    for _ in 0..20 {
        let raw = random_raw(&mut rng, 5);
        let total: i64 = raw.iter().map(|s| s.2).sum();
        let counts = enumerate_paths(&raw, order);
        let s = walk_dp(&WeightTable::from_int_steps(&raw).unwrap(), order);
        for k in 0..=order {
            let scale = Q::from_integer(BigInt::from(total).pow(k as u32));
            for i in 0..=k {
                for j in 0..=k {
                    let brute = counts.get(&(i, j, k)).cloned().unwrap_or_default();
                    let dp = s.q(i, j, k) * &scale;
                    ensure(dp == Q::from_integer(brute.clone()), || {
                        format!("{raw:?} at ({i},{j},{k}): dp {dp} vs {brute}")
                    })?;
                }
            }
        }
    }
    Ok("20 models agree exactly up to 8 steps".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut models = vec![
        (named::nw_heavy(), q(24, 25)),
        (named::simple_walk(), q(1, 2)),
        (named::kreweras(), q(1, 3)),
        (named::gessel(), q(2, 5)),
        (named::north_heavy(), q(3, 4)),
        (named::no_north(), q(1, 2)),
    ];
    while models.len() < 10 {
        let raw = random_raw(&mut rng, 9);
        models.push((WeightTable::from_int_steps(&raw).unwrap(), random_t(&mut rng)));
    }
    let mut worst_k: f64 = 0.0;
    let mut worst_bp: f64 = 0.0;
    for (w, t) in models {
        let (ctx, bp, u) = unif(w, t);
        for _ in 0..64 {
            let omega = u.point(rng.random::<f64>(), rng.random::<f64>() - 0.5);
            let (x, y) = u.lambda(omega);
            let r = kernel_eval_proj(&ctx, &x, &y).norm();
            worst_k = worst_k.max(r);
        }
        let half1 = Complex64::new(0.0, 0.5 * u.omega1);
        let half2 = Complex64::new(0.5 * u.omega2, 0.0);
        let at = [(Complex64::zero(), bp.a[3]), (half1, bp.a[2]), (half1 + half2, bp.a[1]), (half2, bp.a[0])];
        for (omega, a) in at {
            worst_bp = worst_bp.max(u.x(omega).chordal(&a.to_proj()));
        }
    }
    ensure(worst_k < 1e-8, || format!("max |K(Λ(ω))| = {worst_k:.2e}"))?;
    ensure(worst_bp < 1e-7, || format!("branch point gap {worst_bp:.2e}"))?;
    Ok(format!("max |K| {worst_k:.1e}, branch point gap {worst_bp:.1e}"))
}

fn check_structure(roots: &[ExtReal; 4], lead: &Q) -> Result<(), String> {
    let f = |k: usize| roots[k].finite();
    let (a1, a2) = (f(0).ok_or("a1 infinite")?, f(1).ok_or("a2 infinite")?);
    ensure(-1.0 < a1 && a1 < a2 && a2 < 1.0, || format!("inner roots {a1}, {a2}"))?;
    let outer = [roots[2], roots[3]];
    for r in outer {
        if let Some(v) = r.finite() {
            ensure(v.abs() > 1.0, || format!("outer root {v}"))?;
        }
    }
    let positive = outer.iter().filter(|r| r.finite().is_some_and(|v| v > 0.0)).count();
    let negative = outer.iter().filter(|r| r.finite().is_some_and(|v| v < 0.0)).count();
    let infinite = outer.iter().filter(|r| r.finite().is_none()).count();
    let expected = if lead.is_positive() {
        (2, 0, 0)
    } else if lead.is_zero() {
        (1, 0, 1)
    } else {
        (1, 1, 0)
    };
    ensure((positive, negative, infinite) == expected, || format!("outer sign pattern {roots:?} with lead {lead}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let raw = random_raw(&mut rng, 9);
        let t = random_t(&mut rng);
        let ctx = KernelContext::new(WeightTable::from_int_steps(&raw).unwrap(), t.clone()).unwrap();
        let bp = branch_points(&ctx).map_err(|e| format!("{raw:?} t={t}: {e}"))?;
        let disc = discriminants(&ctx);
        check_structure(&bp.a, &disc.alpha[4]).map_err(|e| format!("{raw:?} t={t} x: {e}"))?;
        check_structure(&bp.b, &disc.beta[4]).map_err(|e| format!("{raw:?} t={t} y: {e}"))?;
    }
    let ctx = KernelContext::new(named::simple_walk(), q(1, 2)).unwrap();
    let bp = branch_points(&ctx).unwrap();
    let (s6, s2) = (2.0 * 6f64.sqrt(), 2.0 * 2f64.sqrt());
    let expected = [5.0 - s6, 3.0 - s2, 3.0 + s2, 5.0 + s6];
    for (got, want) in bp.a.iter().zip(expected) {
        let got = got.finite().ok_or("simple walk root at infinity")?;
        ensure((got - want).abs() < 1e-10, || format!("simple walk root {got} vs {want}"))?;
    }
    Ok("500 random pairs, simple walk roots within 1e-10".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut models = vec![
        (named::nw_heavy(), q(24, 25)),
        (named::simple_walk(), q(1, 2)),
        (named::gessel(), q(1, 7)),
        (named::no_north(), q(9, 10)),
    ];
    while models.len() < 10 {
        let raw = random_raw(&mut rng, 9);
        models.push((WeightTable::from_int_steps(&raw).unwrap(), random_t(&mut rng)));
    }
    let mut worst: f64 = 0.0;
    let mut worst_e1: f64 = 0.0;
    for (w, t) in models {
        let (ctx, bp, u) = unif(w, t);
        let d = poly::to_f64s(&discriminants(&ctx).alpha);
        let omega1 = arc_integral(&d, bp.a[2], bp.a[3]);
        let omega2 = arc_integral(&d, bp.a[3], bp.a[0]);
        worst = worst.max((omega1 - u.omega1).abs() / u.omega1).max((omega2 - u.omega2).abs() / u.omega2);
        let e1 = u.wp(Complex64::new(0.5 * u.omega2, 0.0)).map_err(|e| e.to_string())?;
        worst_e1 = worst_e1.max((e1 - u.e[0]).norm());
    }
    ensure(worst < 1e-7, || format!("relative period gap {worst:.2e}"))?;
    ensure(worst_e1 < 1e-8, || format!("℘(ω₂/2) − e1 = {worst_e1:.2e}"))?;
    Ok(format!("period gap {worst:.1e}, ℘(ω₂/2) gap {worst_e1:.1e}"))
}

fn criterion_6() -> Outcome {
    let gessel = WeightTable::from_steps(&[(1, 0, q(1, 4)), (1, 1, q(1, 4)), (-1, 0, q(1, 4)), (-1, -1, q(1, 4))])
        .map_err(|e| e.to_string())?;
    let mut rows = vec![
        ("simple", named::simple_walk(), 4, Some(TriState::NonZero)),
        ("kreweras", named::kreweras(), 6, Some(TriState::Zero)),
        ("gessel", gessel, 8, None),
    ];
    for (k, w) in named::order_ten().into_iter().enumerate() {
        rows.push((["ten-a", "ten-b", "ten-c"][k], w, 10, Some(TriState::Zero)));
    }
    for (name, w, order, orbit) in &rows {
        for seed in [11u64, 22, 33] {
            let search = enumerate_group(w, &random_probes(seed, PROBE_COUNT), 24).map_err(|e| e.to_string())?;
            ensure(search.order() == Some(*order), || format!("{name} seed {seed}: order {:?}", search.order()))?;
            if let Some(state) = orbit {
                let got = orbit_sum_formal(&search).state;
                ensure(got == *state, || format!("{name} seed {seed}: orbit sum {got:?}"))?;
            }
        }
        ensure(group_order_p1p1(w, 24) == Some(*order), || format!("{name}: default search"))?;
    }
    let (_, _, u) = unif(named::simple_walk(), q(1, 2));
    let ratio = u.omega3 / u.omega2;
    ensure((ratio - 0.5).abs() < 1e-9, || format!("simple ratio {ratio}"))?;
    let (_, _, u) = unif(named::kreweras(), q(1, 2));
    let ratio = u.omega3 / u.omega2;
    // τ and τ⁻¹ give 1/3 and 2/3
    ensure((ratio - 1.0 / 3.0).abs() < 1e-9 || (ratio - 2.0 / 3.0).abs() < 1e-9, || format!("kreweras ratio {ratio}"))?;
    Ok(format!("{} models, 3 probe sets each", rows.len()))
}

fn criterion_7() -> Outcome {
    let t = q(1, 2);
    let opts = Options::default();
    let cases = [(named::nw_heavy(), 1u8), (named::north_heavy(), 2), (named::no_north(), 3)];
    for (w, c) in cases {
        let report = classify(&w, &t, &opts).map_err(|e| e.to_string())?;
        ensure(report.verdict == Verdict::DifferentiallyTranscendental(c), || {
            format!("criterion {c}: {}", report.verdict)
        })?;
        let fired = report.criteria.iter().find(|k| k.fires).map(|k| k.criterion);
        ensure(fired == Some(c), || format!("criterion {c}: first firing {fired:?}"))?;
        if c == 1 {
            let witness = report.evidence.iter().any(|e| e.witness == "-1/3");
            ensure(witness, || format!("witness {:?}", report.evidence))?;
        }
        if c == 2 {
            ensure(fixed_point_rationality(&w) == Ok(false), || "root search found a root".into())?;
        }
    }
    Ok("criteria 1, 2, 3 fire on their models".into())
}

fn criterion_8() -> Outcome {
    let t = q(1, 2);
    let opts = Options::default();
    let mut cases: Vec<(String, WeightTable, Verdict)> = named::order_ten()
        .into_iter()
        .enumerate()
        .map(|(k, w)| (format!("order ten {k}"), w, Verdict::Algebraic))
        .collect();
    cases.push(("simple".into(), named::simple_walk(), Verdict::HolonomicNotAlgebraic));
    cases.push(("kreweras".into(), named::kreweras(), Verdict::Algebraic));
    let diagonal = WeightTable::from_int_steps(&[(1, 1, 1), (-1, -1, 1)]).unwrap();
    cases.push(("diagonal".into(), diagonal, Verdict::DegenerateModel));
    // N, NE, E empty
    let window = WeightTable::from_int_steps(&[(-1, 1, 1), (-1, 0, 1), (-1, -1, 1), (0, -1, 1), (1, -1, 1)]).unwrap();
    cases.push(("empty window".into(), window, Verdict::GenusZeroOutOfScope));
    for (name, w, want) in &cases {
        let got = classify(w, &t, &opts).map_err(|e| e.to_string())?.verdict;
        ensure(got == *want, || format!("{name}: {got}"))?;
    }
    Ok(format!("{} verdicts", cases.len()))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (w, t, order) in [(named::simple_walk(), q(1, 2), 40), (named::nw_heavy(), q(24, 25), 60)] {
        let (ctx, _, u) = unif(w, t);
        let eval = SeriesEvaluator::new(&ctx, order);
        let r = continuation_residual(&u, &eval, 16).map_err(|e| e.to_string())?;
        ensure(r.domain_samples >= 16 && r.shift_samples >= 16, || format!("too few samples {r:?}"))?;
        ensure(r.domain_max < 1e-6 && r.shift_max < 1e-6, || format!("residual {r:?}"))?;
        summary.push(format!("{:.1e}/{:.1e}", r.domain_max, r.shift_max));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("residuals {} in {secs:.2} s", summary.join(", ")))
}

fn criterion_10() -> Outcome {
    for w in [named::simple_walk(), named::kreweras(), named::gessel()] {
        let c = critical_t(&w).map_err(|e| e.to_string())?;
        ensure((c.t0 - 1.0).abs() < 1e-10, || format!("zero drift t0 = {}", c.t0))?;
    }
    // S = x/2 + y/4 + 1/(8x) + 1/(8y): each pair minimised separately
    let min_s = 0.5 + 2f64.sqrt() / 4.0;
    let c = critical_t(&named::biased()).map_err(|e| e.to_string())?;
    ensure((c.t0 - 1.0 / min_s).abs() < 1e-9, || format!("biased t0 = {} vs {}", c.t0, 1.0 / min_s))?;
    ensure((c.x0 - 0.5).abs() < 1e-8 && (c.y0 - 0.5f64.sqrt()).abs() < 1e-8, || format!("minimiser {c:?}"))?;
    Ok(format!("biased t0 = {:.12}", c.t0))
}

fn main() {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(msg) => println!("criterion {:>2}: PASS  {msg}", k + 1),
            Err(msg) => {
                println!("criterion {:>2}: FAIL  {msg}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
