use std::io::{Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torus_zp::atypical::{scan_with_workers, zp_report};
use torus_zp::axiom_lab::{
    defect_negative_control, pink_negative_control, pythagorean_lines, scan_model, DefectVerdict,
    FlatModel, PinkVerdict, MAX_EXPORT_FLATS,
};
use torus_zp::fuzz::{defect_chains, DEFAULT_SEED};
use torus_zp::torus::{intersect_cosets, point_closures, special_closure_of_coset};
use torus_zp::{wire, Error};

#[derive(Parser)]
#[command(
    name = "torus-zp",
    version,
    about = "Unlikely intersections of curves with torsion cosets in G_m^n"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Special and weakly special closures of a curve or coset
    Closure(Input),
    /// Components of the intersection of two cosets
    Intersect(Input),
    /// Closure and defect of a point
    Point(Input),
    /// Atypical points of a curve within the bounds
    Scan {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Scan report with optimal records and stability counts
    Zp {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long = "d", default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
    },
    /// Random chains checked against the defect inequality
    DefectFuzz {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        timing: bool,
    },
    /// Primitive Pythagorean lines on x^2 + y^2 = z^2
    A5Demo {
        #[arg(long, default_value_t = 100)]
        k: usize,
    },
    /// Checks on a flat model, or on the model exported from a curve scan
    ModelCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long = "d", default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
    },
}

#[derive(Args)]
struct Input {
    /// JSON document path, or - for standard input
    #[arg(long, conflicts_with = "doc")]
    input: Option<String>,
    /// Inline JSON document
    #[arg(long)]
    doc: Option<String>,
    /// Add wall-clock time to the report
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct Bounds {
    #[arg(long = "B", default_value_t = 2)]
    b: u32,
    #[arg(long = "N", default_value_t = 12)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_malformed_input() { 2 } else { 1 },
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn malformed(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: kind.into(),
        message: message.into(),
    }
}

impl Input {
    fn load(&self) -> Result<Value, Failure> {
        let text = match (&self.input, &self.doc) {
            (_, Some(doc)) => doc.clone(),
            (Some(p), None) if p == "-" => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| malformed("io", e.to_string()))?;
                s
            }
            (Some(p), None) => {
                std::fs::read_to_string(p).map_err(|e| malformed("io", format!("{p}: {e}")))?
            }
            (None, None) => {
                return Err(malformed(
                    "usage",
                    "an input document is required (--input or --doc)",
                ))
            }
        };
        serde_json::from_str(&text).map_err(|e| malformed("json", e.to_string()))
    }
}

fn report(verb: &str, input: Option<&Value>, options: Value, result: Value) -> Value {
    let mut doc = json!({
        "tool": {"name": "torus-zp", "version": env!("CARGO_PKG_VERSION")},
        "verb": verb,
        "options": options,
        "result": result,
    });
    if let Some(i) = input {
        doc["input"] = i.clone();
    }
    doc
}

fn closure(doc: &Value) -> Result<Value, Failure> {
    if doc.get("lattice").is_some() {
        let c = wire::parse_coset(doc)?;
        let sp = special_closure_of_coset(&c);
        let defect = sp.dim() as i64 - c.dim() as i64;
        return Ok(json!({
            "ws_closure": wire::coset(&c),
            "sp_closure": wire::coset(sp.as_coset()),
            "defect": defect,
            "weak_defect": 0,
            "special": defect == 0,
            "weakly_special": true,
        }));
    }
    let c = wire::parse_curve(doc)?;
    Ok(wire::closures(&c.closures()?))
}

fn intersect(doc: &Value) -> Result<Value, Failure> {
    let cosets = doc
        .get("cosets")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("parse", "expected {\"cosets\": [A, B]}"))?;
    let [a, b] = cosets.as_slice() else {
        return Err(malformed("parse", "exactly two cosets are required"));
    };
    let comps = intersect_cosets(&wire::parse_coset(a)?, &wire::parse_coset(b)?)?;
    Ok(json!({
        "count": comps.len(),
        "components": comps.iter().map(wire::coset).collect::<Vec<_>>(),
    }))
}

fn point(doc: &Value) -> Result<Value, Failure> {
    let p = wire::parse_point(doc)?;
    let (closure, defect) = point_closures(&p);
    Ok(json!({
        "point": wire::point(&p),
        "torsion": p.is_torsion(),
        "sp_closure": wire::coset(closure.as_coset()),
        "defect": defect,
    }))
}

fn model_checks(m: &FlatModel, vs: &[usize], d: i64) -> Result<Value, Failure> {
    let defect = match m.check_defect_condition()? {
        DefectVerdict::Holds => json!({"holds": true}),
        DefectVerdict::Violation { sub, sup } => {
            json!({"holds": false, "sub": sub, "sup": sup})
        }
    };
    let opt = match m.check_optimal_implies_weakly_optimal()? {
        None => json!({"holds": true}),
        Some((v, w)) => json!({"holds": false, "v": v, "w": w}),
    };
    let mut pink = Vec::new();
    for &v in vs {
        let verdict = |p: PinkVerdict| match p {
            PinkVerdict::Holds => json!({"holds": true}),
            PinkVerdict::Violation { atypical, special } => {
                json!({"holds": false, "atypical": atypical, "special": special})
            }
        };
        pink.push(json!({
            "v": v,
            "optimal": m.optimal_flats(v)?,
            "check": verdict(m.check_pink_form(v, d)?),
            "oracle": verdict(m.pink_oracle(v, d)?),
        }));
    }
    let closures = m
        .closures()?
        .iter()
        .map(|c| {
            json!({
                "special": c.special,
                "weakly_special": c.weakly_special,
                "defect": c.defect,
                "weak_defect": c.weak_defect,
            })
        })
        .collect::<Vec<_>>();
    Ok(json!({
        "model": wire::model(m),
        "closures": closures,
        "defect_condition": defect,
        "optimal_implies_weakly_optimal": opt,
        "pink": pink,
    }))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let start = Instant::now();
    let (mut doc, timing) = match cli.verb {
        Verb::Closure(inp) => {
            let doc = inp.load()?;
            (
                report("closure", Some(&doc), json!({}), closure(&doc)?),
                inp.timing,
            )
        }
        Verb::Intersect(inp) => {
            let doc = inp.load()?;
            (
                report("intersect", Some(&doc), json!({}), intersect(&doc)?),
                inp.timing,
            )
        }
        Verb::Point(inp) => {
            let doc = inp.load()?;
            (
                report("point", Some(&doc), json!({}), point(&doc)?),
                inp.timing,
            )
        }
        Verb::Scan { input, bounds } => {
            let doc = input.load()?;
            let c = wire::parse_curve(&doc)?;
            let recs = scan_with_workers(&c, bounds.b, bounds.n, bounds.workers)?;
            let opts = json!({"B": bounds.b, "N": bounds.n});
            let result = json!({"curve": wire::curve(&c), "records": wire::records(&recs)});
            (report("scan", Some(&doc), opts, result), input.timing)
        }
        Verb::Zp { input, bounds, d } => {
            let doc = input.load()?;
            let c = wire::parse_curve(&doc)?;
            let r = zp_report(&c, d, bounds.b, bounds.n, bounds.workers)?;
            let mut result = wire::zp_report(&r);
            result["curve"] = wire::curve(&c);
            let opts = json!({"B": bounds.b, "N": bounds.n, "d": d});
            (report("zp", Some(&doc), opts, result), input.timing)
        }
        Verb::DefectFuzz {
            seed,
            count,
            timing,
        } => {
            let chains = defect_chains(seed, count)?;
            let violations: Vec<Value> = chains
                .iter()
                .filter(|c| !c.holds())
                .map(|c| json!({"kind": c.kind, "chain": c.description, "gap_sup": c.gap_sup, "gap_sub": c.gap_sub}))
                .collect();
            let kinds = |k: &str| chains.iter().filter(|c| c.kind == k).count();
            let control = defect_negative_control().check_defect_condition()?;
            let pink_control = pink_negative_control();
            let result = json!({
                "chains": chains.len(),
                "point_in_curve": kinds("point-in-curve"),
                "coset_in_coset": kinds("coset-in-coset"),
                "violations": violations,
                "negative_control_flagged": !control.holds(),
                "pink_negative_control_flagged": !pink_control.check_pink_form(1, 0)?.holds(),
            });
            (
                report(
                    "defect-fuzz",
                    None,
                    json!({"seed": seed, "count": count}),
                    result,
                ),
                timing,
            )
        }
        Verb::A5Demo { k } => {
            let lines = pythagorean_lines(k);
            let result = json!({
                "lines": lines.iter().map(|l| json!({
                    "triple": [l.a, l.b, l.c],
                    "direction": format!("({a}t, {b}t, {c}t)", a = l.a, b = l.b, c = l.c),
                    "ws_closure": "itself",
                })).collect::<Vec<_>>(),
                "summary": format!("A5 fails for C_add: {} distinct weakly special closures", lines.len()),
            });
            (report("a5-demo", None, json!({"k": k}), result), false)
        }
        Verb::ModelCheck { input, bounds, d } => {
            let doc = input.load()?;
            let (m, vs) = if doc.get("flats").is_some() {
                let m = wire::parse_model(&doc)?;
                let vs = (0..m.len()).collect::<Vec<_>>();
                (m, vs)
            } else {
                let c = wire::parse_curve(&doc)?;
                let recs = scan_with_workers(&c, bounds.b, bounds.n, bounds.workers)?;
                let (m, v) = scan_model(&c, &recs, MAX_EXPORT_FLATS)?;
                (m, vec![v])
            };
            let opts = json!({"B": bounds.b, "N": bounds.n, "d": d});
            (
                report("model-check", Some(&doc), opts, model_checks(&m, &vs, d)?),
                input.timing,
            )
        }
    };
    if timing {
        doc["timing"] = json!({"wall_ms": start.elapsed().as_millis() as u64});
    }
    Ok(doc)
}

fn emit(v: &Value) {
    // a closed pipe is not worth a panic
    let _ = writeln!(
        std::io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit(&json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(doc) => {
            emit(&doc);
            ExitCode::SUCCESS
        }
        Err(f) => {
            emit(&json!({"error": {"kind": f.kind, "message": f.message}}));
            ExitCode::from(f.code)
        }
    }
}
