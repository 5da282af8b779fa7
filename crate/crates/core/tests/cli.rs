use assur_kit::cli::run;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("assur-kit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} / {err}"));
    (code, v)
}

#[test]
fn check_exit_codes() {
    let (code, v) = json(&["check", &data("dyad.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["satisfied"], true);
    let (code, v) = json(&["check", &data("fourbar.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["satisfied"], false);
}

#[test]
fn analyze_and_decompose() {
    let (code, _) = json(&["analyze", &data("triad.json")]);
    assert_eq!(code, 0);
    let (code, v) = json(&["decompose", &data("stacked_dyads.json")]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("components"));
    let (code, _, err) = call(&["decompose", &data("fourbar.json")]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn singular_writes_svg() {
    let dir = std::env::temp_dir().join(format!("assur-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("triad.svg");
    let (code, _) = json(&["singular", &data("triad.json"), "--seed", "3", "--svg", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("data-edge"));
    let (code, _) = json(&["singular", &data("k33_assur.json")]);
    assert_eq!(code, 0);
    let (code, _) = json(&["singular", &data("dyad.json"), "--numeric"]);
    assert_eq!(code, 0);
}

#[test]
fn reciprocal_of_k4() {
    let (code, v) = json(&["reciprocal", &data("k4.json")]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("f0"));
}

#[test]
fn drive_and_dead_end() {
    let (code, v) = json(&["drive", &data("fourbar_crank.json"), "--steps", "20", "--step", "0.01"]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("samples"));
    let (code, v) = json(&["deadend", &data("fourbar_crank.json"), "--config", &data("fourbar_dead_center.json")]);
    assert_eq!(code, 0);
    assert!(v.to_string().contains("dead_end_candidate"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["check", "/nonexistent/graph.json"]).0, 2);
    assert_eq!(call(&["check"]).0, 2);
}
