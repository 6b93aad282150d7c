use std::process::{Command, Output};

use serde_json::{json, Value};

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, Output) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arithsurf"));
    cmd.args(args).env_remove("ARITHSURF_WINDOW_GUARD");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not one JSON document ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    (out.status.code().expect("exit code"), doc, out)
}

fn run(args: &[&str]) -> (i32, Value) {
    let (code, doc, _) = run_env(args, &[]);
    (code, doc)
}

#[test]
fn build_prescribed_types() {
    let (code, doc) = run(&[
        "bundle",
        "build",
        "--generic-type",
        "0",
        "--jump",
        "2:1",
        "--jump",
        "3:2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["command"], "bundle build");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    let r = &doc["result"];
    assert_eq!(r["types"], json!({"generic": 0, "jumps": {"2": 2, "3": 4}}));
    assert_eq!(r["profile"]["generic"], json!([-1, -1]));
    assert_eq!((r["rank"].as_i64(), r["degree"].as_i64()), (Some(2), Some(-2)));
}

#[test]
fn build_from_normal_form_and_reprofile() {
    let (code, built) = run(&["bundle", "build", "-n", "2", "-f", "6*x0*x1"]);
    assert_eq!(code, 0);
    assert_eq!(
        built["result"]["types"],
        json!({"generic": 0, "jumps": {"2": 2, "3": 2}})
    );
    let text = built.to_string();
    let (code, again) = run(&["bundle", "profile", "--json", &text]);
    assert_eq!(code, 0);
    assert_eq!(again["result"]["types"], built["result"]["types"]);
}

#[test]
fn profile_with_audit() {
    let (_, built) = run(&["bundle", "build", "--generic-type", "1", "--jump", "5:3"]);
    let text = built["result"]["presentation"].to_string();
    let (code, doc) = run(&["--primes-up-to", "20", "bundle", "profile", "--json", &text]);
    assert_eq!(code, 0);
    let audit = &doc["result"]["audit"];
    assert_eq!(audit["bound"], 20);
    assert_eq!(audit["checked"].as_array().unwrap().len(), 7);
    assert_eq!(audit["unexpected"], json!({}));
}

#[test]
fn check_reports_parity_and_identity() {
    let (_, built) = run(&[
        "bundle",
        "build",
        "--generic-type",
        "2",
        "--jump",
        "2:2",
        "--jump",
        "7:1",
    ]);
    let (code, doc) = run(&["bundle", "check", "--json", &built.to_string()]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["parity"]["deltas"], json!({"2": 4, "7": 2}));
    let ids = doc["result"]["identity"].as_array().unwrap();
    assert!(ids
        .iter()
        .all(|e| e["delta"].as_i64().unwrap() == 2 * e["h0"].as_i64().unwrap()));
}

#[test]
fn input_from_file() {
    let (_, built) = run(&["bundle", "build", "--generic-type", "0", "--jump", "2:1"]);
    let path = std::env::temp_dir().join(format!("arithsurf-cli-{}.json", std::process::id()));
    std::fs::write(&path, built.to_string()).unwrap();
    let (code, doc) = run(&["bundle", "profile", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["types"], json!({"generic": 0, "jumps": {"2": 2}}));
}

const SPLIT: &str = r#"{"base":"Z","map":{"source":[],"target":[-1,-3],"entries":[[],[]]}}"#;

#[test]
fn transform_apply_and_factorize() {
    let q = r#"{"p":"3","m":1,"g":"x0^2","h":"x1^4"}"#;
    let (code, doc) = run(&["transform", "apply", "--json", SPLIT, "--quotient", q]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(
        doc["result"]["bundle"]["types"],
        json!({"generic": 2, "jumps": {"3": 6}})
    );
    assert!(doc["result"]["inclusion"].is_object());

    let (code, doc) = run(&["transform", "factorize", "--json", SPLIT, "--quotient", q]);
    assert_eq!(code, 0, "{doc}");
    let r = &doc["result"];
    assert_eq!(r["m"], 1);
    assert_eq!(r["center_V"]["degree"], 2);
    assert_eq!(r["center_U"]["quotient"]["m"], -5);
}

#[test]
fn domain_errors_exit_2_with_names() {
    let (code, doc) = run(&["bundle", "build", "--generic-type", "0", "--jump", "4:1"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "CompositeModulus");

    let (code, doc) = run(&[
        "bundle",
        "build",
        "--generic-type",
        "0",
        "--jump",
        "2:1",
        "--jump",
        "2:2",
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "DuplicatePrime");

    let horizontal = r#"{"kind":"horizontal","equation":"x0 - x1"}"#;
    let (code, doc) = run(&["transform", "apply", "--json", SPLIT, "--center", horizontal]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "UnsupportedCenter");

    let bad = r#"{"p":"3","m":1,"g":"x0^2","h":"x0*x1^3"}"#;
    let (code, doc) = run(&["transform", "apply", "--json", SPLIT, "--quotient", bad]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "NotSurjective");

    let (code, doc) = run(&["surface", "normal-form", "-n", "2", "-f", "x0"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "DegreeMismatch");

    let (code, doc) = run(&["bundle", "profile", "--json", "{not json"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "Malformed");
}

#[test]
fn usage_errors_exit_1() {
    let (code, doc) = run(&["bundle", "build", "--generic-type", "0", "--jump", "two:1"]);
    assert_eq!(code, 1);
    assert!(doc["error"]["message"].as_str().unwrap().contains("--jump"));

    let (code, doc) = run(&["surface", "normal-form", "--bogus"]);
    assert_eq!(code, 1);
    assert!(doc["error"]["message"].as_str().unwrap().contains("--bogus"));

    let (code, _) = run(&["bundle", "profile"]);
    assert_eq!(code, 1);
}

#[test]
fn normal_forms() {
    let (code, doc) = run(&["surface", "normal-form", "-n", "1", "-f", "0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["equation"], "x0*y0 + x1*y1 = 0");
    assert_eq!(doc["result"]["smooth"], true);

    let (_, doc) = run(&["surface", "normal-form", "-n", "2", "-f", "5*x0*x1"]);
    let r = &doc["result"];
    assert_eq!(r["equation"], "x0^2*y0 + x1^2*y1 + 5*x0*x1*y2 = 0");
    assert_eq!(r["types"], json!({"generic": 0, "jumps": {"5": 2}}));
    assert_eq!(r["constancy"]["verdict"], "not_constant");

    let (_, doc) = run(&["surface", "normal-form", "-n", "2", "-f", "3*x0^2 + x0*x1", "--reduce"]);
    assert_eq!(doc["result"]["equation"], "x0^2*y0 + x1^2*y1 + x0*x1*y2 = 0");
}

#[test]
fn delpezzo_commands() {
    let (code, doc) = run(&["delpezzo", "classify", "--points", "1:0:0,0:1:0,0:0:1,1:1:1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["model"], "blowup_P2_4pts");
    assert_eq!(doc["result"]["K2"], 5);

    let (code, doc) = run(&["delpezzo", "check", "--points", "1:0:0,0:1:0,0:0:1,2:3:5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["general_position"], false);
    assert_eq!(doc["result"]["witness"]["kind"], "triple");
    assert_eq!(doc["result"]["witness"]["determinant"], "2");

    let (code, doc) = run(&["delpezzo", "classify", "--points", "1:0:0,0:1:0,0:0:1,1:1:1,1:2:3"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["name"], "TooManyPoints");
    assert!(doc["error"]["message"].as_str().unwrap().contains("modulo 2"));
}

#[test]
fn window_guard_is_echoed() {
    let args = ["bundle", "build", "--generic-type", "0", "--jump", "2:1"];
    let (code, doc, _) = run_env(&args, &[("ARITHSURF_WINDOW_GUARD", "9")]);
    assert_eq!(code, 0);
    assert_eq!(doc["window_guard"], json!({"value": 9, "source": "env"}));
    assert_eq!(doc["result"]["types"], json!({"generic": 0, "jumps": {"2": 2}}));

    let (_, doc) = run(&args);
    assert_eq!(doc["window_guard"]["source"], "default");

    let (code, _, _) = run_env(&args, &[("ARITHSURF_WINDOW_GUARD", "lots")]);
    assert_eq!(code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "bundle",
        "build",
        "--generic-type",
        "1",
        "--jump",
        "3:2",
        "--jump",
        "5:1",
    ];
    let (_, _, a) = run_env(&args, &[]);
    let (_, _, b) = run_env(&args, &[]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_single_criterion() {
    let (code, doc) = run(&["selftest", "--criterion", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["passed"], true);
    assert_eq!(doc["result"]["criteria"][0]["id"], 3);
    let (code, _) = run(&["selftest", "--criterion", "9"]);
    assert_eq!(code, 1);
}
