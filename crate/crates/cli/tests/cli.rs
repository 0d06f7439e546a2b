use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{}.toml", name))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2orbit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sl2orbit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn validate_accepts_type_ii_fixture() {
    let o = run(&["validate", fixture("example538").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("valid = true") && s.contains("type = II"), "{}", s);
}

#[test]
fn validate_names_the_parity_error() {
    let text = fs::read_to_string(fixture("example538")).unwrap().replace(r#""-1" = [[0, 1], [-1, 0]]"#, r#""-1" = [[0, 1], [1, 0]]"#);
    let o = run(&["validate", scratch("symmetric.toml", &text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parity"), "{}", stderr(&o));
}

#[test]
fn malformed_rational_is_a_located_parse_error() {
    let text = fs::read_to_string(fixture("example538")).unwrap().replace("gen_one = [1, 0, 0, 0]", r#"gen_one = ["1//2", 0, 0, 0]"#);
    let o = run(&["validate", scratch("malformed.toml", &text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("height.gen_one[0]"), "{}", stderr(&o));
}

#[test]
fn long_weight_filtration_is_unsupported() {
    let text = r#"
name = "long"
dimension = 4
[weight]
"0" = [[1, 0, 0, 0]]
"-1" = [[0, 1, 0, 0]]
"-2" = [[0, 0, 1, 0]]
"-3" = [[0, 0, 0, 1]]
[hodge]
"0" = [[1, 0, 0, 0]]
"-1" = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
[polarization]
"0" = [[1]]
"-2" = [[1]]
"#;
    let o = run(&["orbit", scratch("long.toml", text).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn split_orbit_has_trivial_g() {
    let o = run(&["orbit", fixture("split").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("g(y) = 1"));
    let v = json(&["orbit", fixture("split").to_str().unwrap()]);
    for s in v["residual_report"]["claim_a"].as_array().unwrap() {
        assert_eq!(s["exact_zero"], true);
    }
}

#[test]
fn example82_series_stops_after_one_term() {
    let v = json(&["orbit", fixture("example82").to_str().unwrap(), "--order", "4"]);
    assert_eq!(v["g_k"]["1"], serde_json::json!([["0", "0", "0"], ["0", "0", "0"], ["0", "1", "0"]]));
    let g = v["g_k"].as_object().unwrap();
    assert!(g.len() >= 2);
    for (k, x) in g {
        if k != "1" {
            assert_eq!(x, "0", "g_{}", k);
        }
    }
}

#[test]
fn perturbed_residual_shrinks_with_order() {
    let at_100 = |order: &str| {
        let v = json(&["orbit", fixture("perturbed").to_str().unwrap(), "--order", order, "--samples", "100"]);
        v["extra_residual_samples"][0]["residual"].as_f64().unwrap()
    };
    let (lo, hi) = (at_100("2"), at_100("6"));
    assert!(hi < lo, "{} vs {}", lo, hi);
}

#[test]
fn height_reports_mu_and_verdict() {
    let s = stdout(&run(&["height", fixture("example538").to_str().unwrap(), "--exponents", "1,1"]));
    assert!(s.contains("mu = 2\n") && s.contains("verdict = jumps"), "{}", s);
    let s = stdout(&run(&["height", fixture("example538").to_str().unwrap(), "--exponents", "1,2"]));
    assert!(s.contains("mu = 8/3\n"), "{}", s);
    let s = stdout(&run(&["height", fixture("example540").to_str().unwrap(), "--exponents", "1,1"]));
    assert!(s.contains("mu = 2\n") && s.contains("verdict = no-jumps"), "{}", s);
}

#[test]
fn height_rejects_nonpositive_exponents() {
    let o = run(&["height", fixture("example538").to_str().unwrap(), "--exponents", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exponents must be positive"));
}

#[test]
fn height_needs_a_height_block() {
    let o = run(&["height", fixture("type_i").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("height block"));
}

#[test]
fn height_csv_has_closed_form_column() {
    let out = std::env::temp_dir().join(format!("sl2orbit-height-{}.csv", std::process::id()));
    let o = run(&["height", fixture("example538").to_str().unwrap(), "--curve-samples", "0.01,0.0001", "--csv", out.to_str().unwrap()]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_path(&out).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["s", "asymptote", "closed_form"]);
    for rec in r.records() {
        let rec = rec.unwrap();
        let (a, c): (f64, f64) = (rec[1].parse().unwrap(), rec[2].parse().unwrap());
        assert!((a - c).abs() < 1e-9);
    }
    fs::remove_file(out).ok();
}

#[test]
fn curvature_signs() {
    let s = stdout(&run(&["curvature", fixture("type_i").to_str().unwrap()]));
    assert!(s.contains("sign = negative"), "{}", s);
    let s = stdout(&run(&["curvature", fixture("hodge_tate").to_str().unwrap()]));
    assert!(s.contains("curvature = 0\n"), "{}", s);
}

#[test]
fn every_command_emits_json() {
    for cmd in ["validate", "bigrade", "split", "sl2", "norms", "curvature", "grading-limit"] {
        for name in ["type_i", "hodge_tate", "example82"] {
            let v = json(&[cmd, fixture(name).to_str().unwrap()]);
            assert_eq!(v["name"], name, "{} {}", cmd, name);
        }
    }
}

#[test]
fn grading_limit_csv_and_tolerance() {
    let out = std::env::temp_dir().join(format!("sl2orbit-grading-{}.csv", std::process::id()));
    let v = json(&["grading-limit", fixture("hodge_tate").to_str().unwrap(), "--csv", out.to_str().unwrap()]);
    assert_eq!(v["within_tolerance"], true);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("y,gap\n"));
    assert_eq!(text.lines().count(), 4);
    fs::remove_file(out).ok();
}

#[test]
fn exact_quantities_print_as_rationals() {
    let v = json(&["height", fixture("example538").to_str().unwrap(), "--exponents", "2,3"]);
    assert_eq!(v["mu"], "24/5");
}
