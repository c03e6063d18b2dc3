use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use walkclass::classify::{classify, Options};
use walkclass::curve::branch_points;
use walkclass::group::{orbit_sum_formal, orbit_sum_on_curve, search_with_resampling, DEFAULT_CAP};
use walkclass::model::parse_model;
use walkclass::rational::{format_rational, parse_rational, Q};
use walkclass::report::{emit, write_path_csvs, Format};
use walkclass::series::{critical_t, verify_functional_equation, walk_dp};
use walkclass::uniformization::{tau_order_on_curve, Uniformization};
use walkclass::{KernelContext, WeightTable};

#[derive(Parser)]
#[command(name = "walkclass", version, about = "Classify weighted small-step walks in the quarter plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// JSON object with keys "d-1,-1" … "d1,1".
    model: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full decision pipeline.
    Classify {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Threshold for a numerically vanishing orbit sum.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// Also write the four root paths over the unit circles here.
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Branch points, invariants and periods.
    Uniformize {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Exact walk counts and the functional-equation check.
    Series {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Group orders and orbit sums.
    OrbitSum {
        #[command(flatten)]
        model: ModelArg,
        /// Also look at the group on the curve for this t.
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// The minimum of the step polynomial on the positive quadrant.
    CriticalT {
        #[command(flatten)]
        model: ModelArg,
    },
}

fn load(arg: &ModelArg) -> Result<WeightTable> {
    let text = std::fs::read_to_string(&arg.model).with_context(|| format!("reading {}", arg.model.display()))?;
    Ok(parse_model(&text)?)
}

fn parse_t(s: &str) -> Result<Q> {
    parse_rational(s).with_context(|| format!("--t {s}"))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { model, t, cap, tol, json: _, text, emit_csv } => {
            let w = load(&model)?;
            let t = parse_t(&t)?;
            let mut opts = Options { cap, ..Options::default() };
            if let Some(tol) = tol {
                opts.tol.orbit = tol;
            }
            let report = classify(&w, &t, &opts)?;
            print!("{}", emit(&report, if text { Format::Text } else { Format::Json }));
            if !text {
                println!();
            }
            if let Some(dir) = emit_csv {
                let ctx = KernelContext::new(w, t)?;
                for p in write_path_csvs(&ctx, &dir, 256)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            if report.failure.is_some() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Uniformize { model, t, cap } => {
            let ctx = KernelContext::new(load(&model)?, parse_t(&t)?)?;
            let bp = branch_points(&ctx)?;
            let u = Uniformization::new(&ctx, &bp)?;
            let ell = tau_order_on_curve(&u, cap / 2, 1e-9, 1e-6);
            print_json(&json!({
                "t": format_rational(ctx.t()),
                "branch_points": bp,
                "uniformization": u,
                "ratio": u.omega3 / u.omega2,
                "tau_order_on_curve": ell,
            }));
        }
        Command::Series { model, order } => {
            let w = load(&model)?;
            let verified = verify_functional_equation(&w, order);
            let s = walk_dp(&w, order);
            let excursions: Vec<String> = (0..=order).map(|k| format_rational(&s.q(0, 0, k))).collect();
            let mass: Vec<String> = (0..=order).map(|k| format_rational(&s.mass(k))).collect();
            let top: Vec<Vec<String>> =
                (0..=order).map(|i| (0..=order).map(|j| format_rational(&s.q(i, j, order))).collect()).collect();
            print_json(&json!({
                "order": order,
                "functional_equation": match &verified {
                    Ok(k) => json!({"verified_through_degree": k}),
                    Err(e) => json!({"error": e.to_string()}),
                },
                "excursions": excursions,
                "mass": mass,
                "q_at_order": top,
            }));
            if verified.is_err() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::OrbitSum { model, t, cap } => {
            let w = load(&model)?;
            let search = search_with_resampling(&w, cap, 0x5eed_0001)?;
            let formal = orbit_sum_formal(&search);
            let mut out = json!({
                "order_p1p1": search.order(),
                "orbit_sum_p1p1": formal.state,
                "witnesses": formal.witnesses,
            });
            if let Some(t) = t {
                let ctx = KernelContext::new(w, parse_t(&t)?)?;
                let u = Uniformization::new(&ctx, &branch_points(&ctx)?)?;
                let ell = tau_order_on_curve(&u, cap / 2, 1e-9, 1e-6);
                out["order_on_curve"] = json!(ell.map(|l| 2 * l));
                if let Some(ell) = ell {
                    out["orbit_sum_on_curve"] = json!(orbit_sum_on_curve(&u, ell, 32, 1e-7, 0x5eed_0001)?);
                }
            }
            print_json(&out);
        }
        Command::CriticalT { model } => {
            let c = critical_t(&load(&model)?)?;
            print_json(&json!(c));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
