use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn spingen(args: &[&str]) -> (Value, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_spingen")).args(args).arg("--json").output().expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is one JSON object");
    assert_eq!(v["status"] == "ok", out.status.success(), "exit code follows status");
    (v, out.status.success())
}

fn ok(args: &[&str]) -> Value {
    let (v, success) = spingen(args);
    assert!(success, "{v}");
    v["payload"].clone()
}

fn err_code(args: &[&str]) -> String {
    let (v, success) = spingen(args);
    assert!(!success, "{v}");
    v["error"]["code"].as_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn quadratic_examples() {
    let r = ok(&["quadratic", "--d", "17"]);
    assert_eq!(r["rank4"], 1);
    assert_eq!(r["verdict"], false);
    assert_eq!(r["spinor_counts"]["per_genus"], 2);
    assert_eq!(r["class_group"]["structure"], serde_json::json!([4]));
    let r = ok(&["quadratic", "--d", "5"]);
    assert_eq!(r["rank4"], 0);
    assert_eq!(r["verdict"], true);
    assert!(ok(&["quadratic", "--d", "-3"])["verdict"].as_bool().unwrap());
    assert_eq!(err_code(&["quadratic", "--d", "12"]), "D_NOT_SQUAREFREE");
    assert_eq!(err_code(&["quadratic", "--d", "1"]), "D_EXCLUDED");
    assert_eq!(err_code(&["quadratic", "--d", "-100003", "--limit-disc", "1000"]), "DISC_LIMIT_EXCEEDED");
}

#[test]
fn jordan_examples() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.csv", "1,0,0\n0,1,0\n0,0,1\n");
    let j = ok(&["jordan", "--gram", &id, "--prime", "7"]);
    let blocks = j["decomposition"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 3);
    assert!(blocks.iter().all(|b| b["scale"] == 0));

    let cubic = write(dir.path(), "cubic.json", r#"{"n": 3, "rows": [[3, 0, 2], [0, 2, 3], [2, 3, 2]]}"#);
    let j = ok(&["jordan", "--gram", &cubic, "--prime", "23"]);
    let mut scales: Vec<u64> = j["decomposition"]["blocks"].as_array().unwrap().iter().map(|b| b["scale"].as_u64().unwrap()).collect();
    scales.sort_unstable();
    assert_eq!(scales, vec![0, 0, 1]);

    let singular = write(dir.path(), "sing.csv", "1,2\n2,4\n");
    assert_eq!(err_code(&["jordan", "--gram", &singular, "--prime", "2"]), "GRAM_SINGULAR");
    assert_eq!(err_code(&["jordan", "--gram", &id, "--prime", "9"]), "NOT_PRIME");
}

#[test]
fn spinor_check_examples() {
    for poly in ["-1,-1,0,1", "x^3-x-1", "x^4+6x^2+2"] {
        assert_eq!(ok(&["spinor-check", "--poly", poly])["conclusion"], "OneProperSpinorGenus", "{poly}");
    }
    let dir = tempfile::tempdir().unwrap();
    let binary = write(dir.path(), "b.csv", "2,1\n1,9\n");
    let v = ok(&["spinor-check", "--gram", &binary]);
    assert_eq!(v["conclusion"], "Inconclusive");
    assert!(v["hint"].as_str().unwrap().contains("use quadratic --d"));

    // x^2 - 17 with basis 1, (1 + θ)/2
    let basis = write(dir.path(), "basis.json", r#"[["1", "0"], ["1/2", "1/2"]]"#);
    let v = ok(&["spinor-check", "--poly", "x^2-17", "--basis", &basis]);
    assert_eq!(v["dimension"], 2);
    let bad = write(dir.path(), "bad.json", r#"[["1", "0"], ["0", "1/2"]]"#);
    assert_eq!(err_code(&["spinor-check", "--poly", "x^2-17", "--basis", &bad]), "NON_INTEGRAL_TRACE");
    assert_eq!(err_code(&["spinor-check", "--poly", "x^2-2x+1"]), "INVALID_POLYNOMIAL");
}

#[test]
fn tame_examples() {
    let v = ok(&["tame", "--n", "3", "--prime", "23", "--ram", "2,1;1,1"]);
    assert_eq!(v["bound"]["bound"], 1);
    assert_eq!(v["bound"]["exact"], true);
    assert_eq!(v["shape"]["blocks"].as_array().unwrap().len(), 3);

    let v = ok(&["tame", "--n", "4", "--prime", "2", "--ram", "4,1"]);
    assert_eq!(v["tame"], false);
    assert_eq!(v["bound"]["corollary"], 11);
    assert!(v.get("shape").is_none());

    assert_eq!(err_code(&["tame", "--n", "4", "--prime", "3", "--ram", "2,1;1,1"]), "RAM_INCONSISTENT");
    assert_eq!(err_code(&["tame", "--n", "2", "--prime", "3", "--ram", "2"]), "PARSE");
}

#[test]
fn density_report_and_resume() {
    let r = ok(&["density", "--xmax", "1000"]);
    for key in ["alpha_plus", "alpha_minus", "alpha"] {
        let a = r[key].as_f64().unwrap();
        assert!(a > 0.0 && a < 1.0, "{key} = {a}");
    }

    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("scan.log");
    let log = log.to_str().unwrap();
    let args = ["density", "--xmax", "3000", "--chunk", "500", "--jobs", "2"];
    let fresh = ok(&args);
    let mut with_log = args.to_vec();
    with_log.extend(["--resume", log]);
    assert_eq!(ok(&with_log), fresh);
    let text = std::fs::read_to_string(log).unwrap();
    let keep: Vec<&str> = text.lines().take(3).collect();
    std::fs::write(log, format!("{}\n7", keep.join("\n"))).unwrap();
    assert_eq!(ok(&with_log), fresh);

    let mut other = with_log.clone();
    other[2] = "4000";
    assert_eq!(err_code(&other), "CHECKPOINT");
}

#[test]
fn verify_table_command() {
    let v = ok(&["verify-table"]);
    assert_eq!(v["passed"], 36);
    assert_eq!(v["total"], 36);
    assert_eq!(v["rows"].as_array().unwrap().len(), 36);
}

#[test]
fn pretty_output_is_the_same_document() {
    let out = Command::new(env!("CARGO_BIN_EXE_spingen")).args(["quadratic", "--d", "-5", "--pretty"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["payload"], ok(&["quadratic", "--d", "-5"]));
}
