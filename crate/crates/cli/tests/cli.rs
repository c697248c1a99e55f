use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-zp"))
        .args(args)
        .output()
        .unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.get("result").is_none());
    v["error"].clone()
}

const BMZ: &str = r#"{"ambient": 2, "coords": ["t", "1-t"]}"#;

#[test]
fn output_is_identical_across_worker_counts() {
    let curve = r#"{"ambient": 3, "coords": ["t", "t+1", "t-1"]}"#;
    let one = run(&[
        "zp",
        "--B",
        "2",
        "--N",
        "8",
        "--workers",
        "1",
        "--doc",
        curve,
    ]);
    let three = run(&[
        "zp",
        "--B",
        "2",
        "--N",
        "8",
        "--workers",
        "3",
        "--doc",
        curve,
    ]);
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    let again = run(&[
        "zp",
        "--B",
        "2",
        "--N",
        "8",
        "--workers",
        "1",
        "--doc",
        curve,
    ]);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn fuzz_output_depends_only_on_the_seed() {
    let a = run(&["defect-fuzz", "--seed", "9", "--count", "50"]);
    let b = run(&["defect-fuzz", "--seed", "9", "--count", "50"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["chains"], json!(50));
    assert_eq!(v["result"]["violations"], json!([]));
    assert_eq!(v["result"]["negative_control_flagged"], json!(true));
    assert!(v.get("timing").is_none());
}

#[test]
fn zp_report_for_bmz() {
    let v = report(&["zp", "--d", "0", "--B", "2", "--N", "12", "--doc", BMZ]);
    assert_eq!(v["tool"]["name"], json!("torus-zp"));
    assert_eq!(v["input"], serde_json::from_str::<Value>(BMZ).unwrap());
    let r = &v["result"];
    assert_eq!(r["optimal_records"].as_array().unwrap().len(), 1);
    assert_eq!(
        r["optimal_records"][0]["defining_poly"]["text"],
        json!("t^2 - t + 1")
    );
    assert_eq!(r["stability"]["monotone"], json!(true));
    assert_eq!(r["closures"]["defect"], json!(1));
}

#[test]
fn closure_of_special_curve() {
    let v = report(&[
        "closure",
        "--doc",
        r#"{"ambient": 2, "coords": ["t^2", "t"]}"#,
    ]);
    assert_eq!(v["result"]["defect"], json!(0));
    assert_eq!(v["result"]["weak_defect"], json!(0));
    assert_eq!(v["result"]["special"], json!(true));
}

#[test]
fn closure_of_coset() {
    let v = report(&[
        "closure",
        "--doc",
        r#"{"ambient": 2, "lattice": [[1, -1]], "values": ["2"]}"#,
    ]);
    assert_eq!(v["result"]["defect"], json!(1));
    assert_eq!(v["result"]["sp_closure"]["dim"], json!(2));
}

#[test]
fn point_and_intersect() {
    let v = report(&["point", "--doc", r#"{"coords": ["-1", "1@1/3"]}"#]);
    assert_eq!(v["result"]["defect"], json!(0));
    assert_eq!(v["result"]["torsion"], json!(true));
    let doc = r#"{"cosets": [
        {"ambient": 2, "lattice": [[1, 0]], "values": ["-1"]},
        {"ambient": 2, "lattice": [[1, 2]], "values": ["1"]}
    ]}"#;
    let v = report(&["intersect", "--doc", doc]);
    // x = -1 and x y^2 = 1 leave y^2 = -1
    assert_eq!(v["result"]["count"], json!(2));
}

#[test]
fn a5_demo_summary() {
    let v = report(&["a5-demo", "--k", "3"]);
    assert_eq!(v["result"]["lines"][0]["triple"], json!([3, 4, 5]));
    assert_eq!(
        v["result"]["summary"],
        json!("A5 fails for C_add: 3 distinct weakly special closures")
    );
}

#[test]
fn model_check_on_documents_and_curves() {
    let doc = r#"{"ambient_dim": 3,
        "flats": [
            {"label": "A", "dim": 3, "special": true, "weakly_special": true},
            {"label": "W", "dim": 2, "special": false, "weakly_special": true},
            {"label": "V", "dim": 1, "special": false, "weakly_special": false},
            {"label": "V'", "dim": 0, "special": true, "weakly_special": true}
        ],
        "containments": [[1, 0], [2, 1], [3, 2]],
        "meets": [{"pair": [1, 3], "components": [3]}]}"#;
    let v = report(&["model-check", "--doc", doc]);
    assert_eq!(v["result"]["defect_condition"]["holds"], json!(false));
    let v = report(&["model-check", "--B", "2", "--N", "12", "--doc", BMZ]);
    assert_eq!(v["result"]["defect_condition"]["holds"], json!(true));
    assert_eq!(v["result"]["pink"][0]["check"]["holds"], json!(true));
    assert_eq!(v["result"]["pink"][0]["oracle"]["holds"], json!(true));
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("torus-zp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    std::fs::write(&path, BMZ).unwrap();
    let v = report(&["closure", "--input", path.to_str().unwrap()]);
    assert_eq!(v["result"]["defect"], json!(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let v = report(&["closure", "--timing", "--doc", BMZ]);
    assert!(v["timing"]["wall_ms"].is_u64());
}

#[test]
fn exit_codes() {
    assert_eq!(
        error(&["scan", "--doc", r#"{"coords": ["2t"]}"#], 2)["kind"],
        json!("parse")
    );
    assert_eq!(
        error(&["scan", "--doc", "{not json"], 2)["kind"],
        json!("json")
    );
    assert_eq!(
        error(&["scan", "--B", "x", "--doc", BMZ], 2)["kind"],
        json!("usage")
    );
    assert_eq!(error(&["scan"], 2)["kind"], json!("usage"));
    assert_eq!(error(&["frobnicate"], 2)["kind"], json!("usage"));
    assert_eq!(
        error(&["closure", "--input", "/nonexistent/curve.json"], 2)["kind"],
        json!("io")
    );
    assert_eq!(
        error(&["zp", "--doc", r#"{"coords": ["3", "1/2"]}"#], 1)["kind"],
        json!("constant_curve")
    );
    assert_eq!(
        error(&["scan", "--B", "0", "--doc", BMZ], 1)["kind"],
        json!("invalid_argument")
    );
    assert_eq!(
        error(&["closure", "--doc", r#"{"coords": ["t", "1/(t-t)"]}"#], 1)["kind"],
        json!("zero_polynomial")
    );
    let bad_model =
        r#"{"ambient_dim": 1, "flats": [{"dim": 1, "special": false, "weakly_special": true}]}"#;
    assert_eq!(
        error(&["model-check", "--doc", bad_model], 1)["kind"],
        json!("invalid_model")
    );
}
