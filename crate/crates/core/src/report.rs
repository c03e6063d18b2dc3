//! JSON and text renderings of a classification report, and CSV files of the
//! root paths over the unit circles.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::classify::ClassificationReport;
use crate::curve::{unit_circle_paths, unit_circle_paths_y, PathSample};
use crate::error::{Error, Result};
use crate::kernel::KernelContext;
use crate::proj::ProjPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Pretty JSON; field order follows the struct definitions, so equal reports
/// give identical bytes.
pub fn to_json(report: &ClassificationReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

pub fn to_text(r: &ClassificationReport) -> String {
    let mut s = String::new();
    let weights: Vec<String> = r.weights.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(s, "model     {}", weights.join(" "));
    let _ = writeln!(s, "t         {}", r.t);
    let _ = writeln!(s, "pattern   {:?}", r.pattern);
    let _ = writeln!(s, "genus     {:?}", r.genus);
    if let Some(g) = &r.group {
        let show = |o: Option<usize>| o.map_or("none within cap".to_string(), |n| n.to_string());
        let _ = writeln!(s, "group     P1xP1 order {}, curve order {}", show(g.order_p1p1), show(g.order_on_curve));
        let _ = writeln!(s, "orbit sum {:?} (exact)", g.orbit_sum_zero_p1p1);
        if let Some(m) = g.orbit_sum_on_curve_max {
            let _ = writeln!(s, "          max |O2| on curve {m:.3e}");
        }
    }
    if let Some(u) = &r.uniform {
        let _ = writeln!(s, "periods   w1 = {:.12}i  w2 = {:.12}  w3 = {:.12}", u.omega1, u.omega2, u.omega3);
        let _ = writeln!(s, "          w3/w2 = {:.12}", u.ratio);
        let _ = writeln!(s, "invariant g2 = {:.12}  g3 = {:.12}", u.g2, u.g3);
    }
    for c in &r.criteria {
        let _ = writeln!(s, "criterion {} {}: {}", c.criterion, if c.fires { "fires" } else { "no" }, c.detail);
    }
    let _ = writeln!(s, "verdict   {}{}", r.verdict, if r.t_specific { " (this t only)" } else { "" });
    for e in &r.evidence {
        let _ = writeln!(s, "  - {} [{}]: {}", e.claim, e.basis, e.witness);
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(s, "  failure: {f}");
    }
    s
}

pub fn emit(report: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report),
    }
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{v:.17e}"),
        _ => "inf".to_string(),
    }
}

fn parts(p: &ProjPoint) -> [String; 2] {
    match p.value() {
        Some(z) => [cell(Some(z.re)), cell(Some(z.im))],
        None => [cell(None), cell(None)],
    }
}

fn write_one(path: &Path, rows: impl Iterator<Item = [String; 5]>) -> Result<()> {
    let io = |e: csv::Error| Error::Document(format!("{}: {e}", path.display()));
    let mut out = csv::Writer::from_path(path).map_err(io)?;
    out.write_record(["re_x", "im_x", "re_y", "im_y", "branch"]).map_err(io)?;
    for r in rows {
        out.write_record(&r).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

/// Writes `gamma_x_minus.csv`, `gamma_x_plus.csv` (x on the unit circle with
/// each y root) and `gamma_y_minus.csv`, `gamma_y_plus.csv`.
pub fn write_path_csvs(ctx: &KernelContext, dir: &Path, n: usize) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Document(format!("{}: {e}", dir.display())))?;
    let over_x = unit_circle_paths(ctx, n)?;
    let over_y = unit_circle_paths_y(ctx, n)?;
    let mut written = Vec::new();
    let base = |v: &num::complex::Complex64| [cell(Some(v.re)), cell(Some(v.im))];
    let jobs: [(&str, &PathSample, bool, bool); 4] = [
        ("gamma_x_minus.csv", &over_x, false, true),
        ("gamma_x_plus.csv", &over_x, true, true),
        ("gamma_y_minus.csv", &over_y, false, false),
        ("gamma_y_plus.csv", &over_y, true, false),
    ];
    for (name, paths, plus, base_is_x) in jobs {
        let label = if plus { "plus" } else { "minus" };
        let roots = if plus { &paths.plus } else { &paths.minus };
        let rows = paths.base.iter().zip(roots).map(|(b, r)| {
            let [bre, bim] = base(b);
            let [rre, rim] = parts(r);
            if base_is_x {
                [bre, bim, rre, rim, label.to_string()]
            } else {
                [rre, rim, bre, bim, label.to_string()]
            }
        });
        let path = dir.join(name);
        write_one(&path, rows)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, Options};
    use crate::model::named;
    use crate::rational::q;

    #[test]
    fn json_is_deterministic_and_parses() {
        let w = named::kreweras();
        let report = classify(&w, &q(1, 2), &Options::default()).unwrap();
        let a = to_json(&report);
        let b = to_json(&classify(&w, &q(1, 2), &Options::default()).unwrap());
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["verdict"], "Algebraic");
        assert_eq!(v, serde_json::to_value(&report).unwrap());
    }

    #[test]
    fn text_names_the_verdict() {
        let r = classify(&named::simple_walk(), &q(1, 2), &Options::default()).unwrap();
        assert!(to_text(&r).contains("verdict   holonomic, not algebraic"));
    }
}
