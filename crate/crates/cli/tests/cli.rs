use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_johansson"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json report"))
}

fn fan() -> String {
    data("banchoff.fan").display().to_string()
}

fn lift_to(dir: &TempDir, name: &str, n: usize, m: &str, c: &str) -> String {
    let out = dir.path().join(name).display().to_string();
    let o = run(&["lift", &fan(), "--m", m, "--c", c, "-n", &n.to_string(), "--out", &out]);
    assert!(o.status.success(), "{}", stdout(&o));
    out
}

#[test]
fn validate_bundled_fan() {
    let (code, r) = json(&["validate", &fan()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["curves"], 2);
    assert_eq!(r["results"]["crossings"], 6);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn broken_fan_is_a_seam_mismatch() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(data("banchoff.fan")).unwrap().replace("L3 -> L4", "L3 -> L3");
    let path = dir.path().join("broken.fan");
    std::fs::write(&path, text).unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("seam mismatch"), "{}", stdout(&o));
}

#[test]
fn fan_parse_error_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.fan");
    std::fs::write(&path, "fan x\nformat 1\nseam two\n").unwrap();
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));
}

#[test]
fn two_fold_lift() {
    let (code, r) = json(&["lift", &fan(), "--m", "(1 2)", "--c", "(1 2)"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["components"], 1);
    assert_eq!(r["results"]["curves"], 4);
    let fixture = std::fs::read_to_string(data("banchoff_2fold.diagram")).unwrap();
    assert_eq!(r["artifact"].as_str().unwrap(), fixture);
}

#[test]
fn irregular_lift_has_two_components() {
    let (code, r) = json(&["lift", &fan(), "--m", "(1 2)", "--c", "(2 3)", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["components"], 2);
}

#[test]
fn trivial_meridian_rejected() {
    let o = run(&["lift", &fan(), "--m", "()", "--c", "(1 2)"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["lift", &fan(), "--m", "(1 2", "--c", "(1 2)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cyclic_four_fold_dual_group() {
    let dir = TempDir::new().unwrap();
    let d = lift_to(&dir, "c4.diagram", 4, "(1 2 3 4)", "(1 4 3 2)");
    let pres = dir.path().join("c4.pres").display().to_string();
    assert!(run(&["pi1", &d, "--method", "dual", "--out", &pres]).status.success());
    let (code, r) = json(&["analyze", &pres, "--order"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["order"], 24);
    assert_eq!(r["results"]["abelianization"], "[3]");
}

#[test]
fn irregular_cover_is_simply_connected() {
    let dir = TempDir::new().unwrap();
    let d = lift_to(&dir, "irr.diagram", 3, "(1 2)", "(2 3)");
    let pres = dir.path().join("irr.pres").display().to_string();
    assert!(run(&["pi1", &d, "--method", "cell", "--out", &pres]).status.success());
    let (code, r) = json(&["analyze", &pres, "--order"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["order"], 1);
    // the dual method needs a single sphere
    assert_eq!(run(&["pi1", &d, "--method", "dual"]).status.code(), Some(3));
}

#[test]
fn knot_group_from_base() {
    let (code, r) = json(&["pi1", &fan(), "--punctured", "all"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["abelianization"], "[0]");
    assert_eq!(r["results"]["meridians"].as_array().unwrap().len(), 2);
}

#[test]
fn enumerate_three_sheets() {
    let (code, r) = json(&["enumerate", &fan(), "-n", "3", "--conjugacy"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 2);
    assert_eq!(r["results"]["cyclic"], 1);
    assert_eq!(run(&["enumerate", &fan(), "-n", "8"]).status.code(), Some(5));
}

#[test]
fn sieradski_commands() {
    let dir = TempDir::new().unwrap();
    let s3 = dir.path().join("s3.pres").display().to_string();
    assert!(run(&["sieradski", "-n", "3", "--out", &s3]).status.success());
    let (_, r) = json(&["analyze", &s3, "--order"]);
    assert_eq!(r["results"]["order"], 8);

    let d = lift_to(&dir, "c5.diagram", 5, "(1 2 3 4 5)", "(1 4 2 5 3)");
    let pres = dir.path().join("c5.pres").display().to_string();
    assert!(run(&["pi1", &d, "--method", "dual", "--out", &pres]).status.success());
    let (_, r) = json(&["sieradski", "--match", &pres]);
    assert_eq!(r["results"]["match"], 5);

    assert_eq!(run(&["sieradski", "-n", "1"]).status.code(), Some(3));
}

#[test]
fn coset_bound_exits_5() {
    let dir = TempDir::new().unwrap();
    let s6 = dir.path().join("s6.pres").display().to_string();
    assert!(run(&["sieradski", "-n", "6", "--out", &s6]).status.success());
    let (code, r) = json(&["analyze", &s6, "--order", "--max-cosets", "2000"]);
    assert_eq!(code, 5);
    assert_eq!(r["results"]["abelianization"], "[0, 0]");
}

fn svg_count(svg: &str, needle: &str) -> usize {
    svg.matches(needle).count()
}

#[test]
fn render_base_and_cover() {
    let o = run(&["render", &fan()]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg_count(&svg, r#"class="crossing""#), 6);
    assert_eq!(svg_count(&svg, r#"class="marked""#), 2);
    let mut colours: Vec<&str> = svg.lines().filter(|l| l.contains(r#"class="curve""#)).map(|l| l.split('"').nth(3).unwrap()).collect();
    colours.sort();
    colours.dedup();
    assert_eq!(colours.len(), 2);

    let dir = TempDir::new().unwrap();
    let d = lift_to(&dir, "c3.diagram", 3, "(1 2 3)", "()");
    let out = dir.path().join("c3.svg");
    assert!(run(&["render", &d, "-o", out.to_str().unwrap()]).status.success());
    let svg = std::fs::read_to_string(out).unwrap();
    assert_eq!(svg_count(&svg, r#"class="curve""#), 6);
}

#[test]
fn render_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.diagram");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(run(&["render", empty.to_str().unwrap()]).status.code(), Some(2));

    // drop a sister line: parses, fails validation
    let text = std::fs::read_to_string(data("banchoff_2fold.diagram")).unwrap();
    let cut: String = text.lines().filter(|l| !l.starts_with("sister alpha[1.1]")).map(|l| format!("{l}\n")).collect();
    let bad = dir.path().join("bad.diagram");
    std::fs::write(&bad, cut).unwrap();
    assert_eq!(run(&["render", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["render".to_string(), data("banchoff_2fold.diagram").display().to_string()],
        vec!["--format".into(), "json".into(), "enumerate".into(), fan(), "-n".into(), "4".into()],
        vec!["pi1".into(), data("banchoff_2fold.diagram").display().to_string(), "--method".into(), "dual".into()],
    ] {
        let a = bin().args(&args).output().unwrap();
        let b = bin().args(&args).output().unwrap();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
}

/// `lift | validate | pi1 | analyze` for every representation up to five sheets.
#[test]
fn pipeline_closes_for_every_representation() {
    let dir = TempDir::new().unwrap();
    let mut checked = 0;
    for n in 1..=5 {
        let (code, r) = json(&["enumerate", &fan(), "-n", &n.to_string()]);
        assert_eq!(code, 0);
        for line in r["results"]["representations"].as_array().unwrap() {
            let line = line.as_str().unwrap();
            let body = line.split(" [").next().unwrap();
            let (m, c) = body.strip_prefix("m=").unwrap().split_once(" c=").unwrap();
            let d = lift_to(&dir, "x.diagram", n, m, c);
            let v = run(&["validate", &d]);
            assert!(v.status.success(), "{line}: {}", stdout(&v));
            let pres = dir.path().join("x.pres").display().to_string();
            assert!(run(&["pi1", &d, "--out", &pres]).status.success(), "{line}");
            let a = run(&["analyze", &pres, "--homs", "3"]);
            assert!(a.status.success(), "{line}: {}{}", stdout(&a), stderr(&a));
            checked += 1;
        }
    }
    assert!(checked > 100);
}
