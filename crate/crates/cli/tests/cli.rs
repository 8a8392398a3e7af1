use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curvemf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvemf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

#[test]
fn invariants_of_m467() {
    let (code, v) = json(&["invariants", &data("m467.branch")]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["multiplicity"], 4);
    assert_eq!(r["semigroup"]["gaps"], serde_json::json!([1, 2, 3, 5, 9]));
    assert_eq!(r["semigroup"]["generators"], serde_json::json!([4, 6, 7]));
    assert_eq!(r["delta"], 5);
    assert_eq!(r["generic_projection"]["mu"], 16);
    assert_eq!(
        r["generic_projection"]["char_exponents"],
        serde_json::json!([6, 7])
    );
    assert_eq!(r["generic_projection"]["planes"][0], "(1,0,0,0,1,1)");
    assert_eq!(v["checks"]["delta_upper_bound"], true);
}

#[test]
fn invariants_of_a_plane_branch() {
    let path = scratch("cusp.branch");
    std::fs::write(&path, "coord: t^4\ncoord: t^6 + t^7\n").unwrap();
    let (code, v) = json(&["invariants", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["puiseux"]["char_exponents"],
        serde_json::json!([6, 7])
    );
    assert_eq!(v["results"]["puiseux"]["mu"], 16);
    assert_eq!(v["results"]["delta"], 8);
}

#[test]
fn cone_of_m467() {
    let (code, v) = json(&["cone5", &data("m467.branch")]);
    assert_eq!(code, 0);
    let planes = v["results"]["planes"].as_array().unwrap();
    assert_eq!(planes.len(), 2);
    assert_eq!(planes[0]["direction"], serde_json::json!(["0", "1", "0"]));
    assert_eq!(planes[1]["direction"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn matfact_round_trips_through_verify() {
    let out = scratch("m467.mf");
    let (code, v) = json(&[
        "matfact",
        &data("m467.branch"),
        "--plane",
        "1,0,0,0,1,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["factorization"]["size"], 2);
    assert_eq!(
        v["results"]["module"]["generators"],
        serde_json::json!(["1", "t^7"])
    );
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true));
    let (code, w) = json(&["verify-mf", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["results"]["factorization"], v["results"]["factorization"]);
    assert_eq!(w["checks"]["columns_are_syzygies"], true);
}

#[test]
fn family_matfact_specializes() {
    let (code, v) = json(&[
        "matfact",
        &data("m467_family.branch"),
        "--plane",
        "1,0,0,0,1,1+s6",
        "--param",
        "s6=1/3",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["param_degree"], 4);
    assert_eq!(v["checks"]["specialized.dh_is_F_id"], true);
    assert_eq!(v["checks"]["specialized.hd_is_F_id"], true);
}

#[test]
fn is_algebra_reports_the_witness() {
    let (code, v) = json(&["is-algebra", &data("cusp34.module")]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["is_algebra"], false);
    assert_eq!(v["results"]["witness"], "t·t");
    let (code, v) = json(&["is-algebra", &data("cusp23.module")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["is_algebra"], true);
}

#[test]
fn sign_of_f_matters() {
    let (code, _) = json(&["verify-mf", &data("no_alg.mf")]);
    assert_eq!(code, 0);
    let (code, v) = json(&["verify-mf", &data("no_alg_neg.mf")]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"]["dh_is_F_id"], false);
    assert_eq!(v["results"]["factorization"]["det_ratio"], "-1");
}

#[test]
fn equivalence_verdicts() {
    let out = scratch("eq.mf");
    let o = run(&[
        "matfact",
        &data("m467.branch"),
        "--plane",
        "1,0,0,0,1,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let (code, v) = json(&["equiv-mf", out.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["verdict"], "equivalent");
    let o = run(&["equiv-mf", out.to_str().unwrap(), &data("no_alg.mf")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("different equations"));
}

#[test]
fn check_generic_verdicts() {
    let (code, v) = json(&[
        "check-generic",
        &data("m467.branch"),
        "--plane",
        "1,0,0,0,1,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["mu"], 16);
    let (code, v) = json(&[
        "check-generic",
        &data("m467.branch"),
        "--x",
        "t^4",
        "--y",
        "t^6",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["results"]["generic"], false);
}

#[test]
fn implicitize_family_commutes_with_specialization() {
    let (code, v) = json(&[
        "implicitize",
        &data("m467_family.branch"),
        "--plane",
        "1,0,0,0,1,1+s6",
        "--param",
        "s6=2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"]["specialization_commutes"], true);
    assert_eq!(
        v["results"]["specialized"]["F"],
        "-81*x^7 + x^6 - 36*x^5*y - 2*x^3*y^2 + y^4"
    );
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let o = run(&["invariants", &data("bad.branch")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("bad.branch:2:10: syntax error"),
        "{}",
        stderr(&o)
    );
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["invariants", &data("m467.branch"), "--param", "u=1"][..].to_vec(),
        vec!["project", &data("m467.branch"), "--plane", "1,0,1"],
        vec!["project", &data("m467.branch"), "--plane", "1,0,0,0,1,q"],
        vec!["invariants", "/nonexistent.branch"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["invariants", &data("m5689.branch")[..]],
        vec![
            "matfact",
            &data("m467.branch"),
            "--plane",
            "1,0,0,0,1,1",
            "--json",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}
