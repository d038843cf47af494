use std::path::Path;
use std::process::{Command, Output};

use hstrn::channels::{db_to_linear, shadowing_preset, AlphaMuParams, SrParams};
use hstrn::metrics::{sopm, MetricControl, Path as EvalPath, SecrecyConfig};
use hstrn::orderstats::{LinkPair, Topology};

fn hstrn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hstrn")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Metadata lines and parsed records of a CSV report.
fn parse_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let meta: Vec<String> = text.lines().take_while(|l| l.starts_with('#')).map(String::from).collect();
    let body: String = text.lines().skip(meta.len()).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (meta, header, rows)
}

const SWEEP: &str = r#"
metric = "sopm"
methods = ["closed_form", "quadrature"]

[satellite]
case = 3

[topology]
n = 2
p = 2
q = 1

[sweep]
variable = "rho_b"
values = [0.0, 7.5, 15.0]
"#;

#[test]
fn csv_round_trips_at_nine_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.toml", SWEEP);
    let out = hstrn(&["analyze", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let (meta, header, rows) = parse_csv(&text);
    assert!(meta[0].starts_with("# tool: hstrn "));
    assert!(meta.iter().any(|l| l.starts_with("# spec_sha256: ")) && meta.iter().any(|l| l == "# seed: 1"));
    assert_eq!(
        header,
        [
            "curve",
            "rho_b_db",
            "sopm_closed_form",
            "sopm_closed_form_terms_used",
            "sopm_closed_form_tail_estimate",
            "sopm_quadrature",
            "sopm_quadrature_terms_used",
            "sopm_quadrature_tail_estimate"
        ]
    );
    assert_eq!(rows.len(), 3);
    let sr = SrParams::from_shadowing(shadowing_preset(3).unwrap(), db_to_linear(10.0)).unwrap();
    for (row, rho_b_db) in rows.iter().zip([0.0, 7.5, 15.0]) {
        for cell in [&row[1], &row[2], &row[5]] {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(&format!("{v:.8e}"), cell);
        }
        let cfg = SecrecyConfig {
            user_link: LinkPair::user(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(rho_b_db)).unwrap()),
            eve_link: LinkPair::eavesdropper(sr, AlphaMuParams::new(2.0, 1.0, db_to_linear(-10.0)).unwrap()),
            topo: Topology::new(2, 2, 1).unwrap(),
            phi_c: 0.5,
        };
        let want = sopm(&cfg, &MetricControl::default(), EvalPath::Quadrature).unwrap().value;
        let got: f64 = row[5].parse().unwrap();
        assert!((got - want).abs() <= 5e-9 * want.abs(), "{got} vs {want}");
    }
}

#[test]
fn reruns_are_byte_identical_and_json_parses() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.toml",
        &format!("{SWEEP}\n[mc]\ntrials = 20000\nseed = 4\n").replace(r#"["closed_form", "quadrature"]"#, r#"["quadrature", "monte_carlo"]"#),
    );
    let a = hstrn(&["analyze", &spec, "--workers", "1"]);
    let b = hstrn(&["analyze", &spec, "--workers", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let j = hstrn(&["analyze", &spec, "--format", "json", "--seed", "9"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["metadata"]["seed"], "9");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn single_point_spec_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "s.toml", "metric = \"esmc\"\nmethods = [\"quadrature\"]\n");
    let out_path = dir.path().join("r.csv");
    let out = hstrn(&["analyze", &spec, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let (_, header, rows) = parse_csv(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(header[0], "curve");
    assert_eq!(rows.len(), 1);
    // the summary table goes to stdout when writing a file
    assert!(String::from_utf8_lossy(&out.stdout).contains("esmc_quadrature"));
}

#[test]
fn fig7_curves_are_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "fig7.toml",
        r#"
metric = "sopm"
methods = ["quadrature"]

[sweep]
variable = "rho_b"
start = 0.0
stop = 30.0
step = 5.0

[[curves]]
label = "phi 0.5, eve -10"

[[curves]]
label = "phi 1, eve -10"
secrecy.phi_c = 1.0

[[curves]]
label = "phi 0.5, eve -5"
eavesdropper.rho_db = -5.0
"#,
    );
    let out = hstrn(&["analyze", &spec]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, _, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 21);
    for curve in rows.chunks(7) {
        let v: Vec<f64> = curve.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "{}: {v:?}", curve[0][0]);
    }
}

#[test]
fn compare_exit_status_follows_gates() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.toml", SWEEP);
    let out = hstrn(&["compare", &good]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let (_, header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let pass = header.iter().position(|h| h == "pass").unwrap();
    assert!(rows.iter().all(|r| r[pass] == "PASS"));

    // a shared uplink is a different model from the one the analysis assumes
    let bad = write(
        dir.path(),
        "bad.toml",
        r#"
metric = "pnsmc"
methods = ["quadrature", "monte_carlo"]

[satellite]
case = 1
rho_s_db = 0.0

[user]
rho_db = 20.0

[eavesdropper]
rho_db = 20.0

[topology]
n = 1
p = 1
q = 1

[mc]
trials = 200000
mode = "shared_uplink"
"#,
    );
    let out = hstrn(&["compare", &bad]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn exit_codes_by_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let parse = write(dir.path(), "p.toml", "metric = \"sopm\"\nmethods = [\"quadrature\"]\n[topology]\nn = 2\nbogus = 1\n");
    assert_eq!(hstrn(&["analyze", &parse]).status.code(), Some(2));
    let empty = write(dir.path(), "e.toml", "metric = \"sopm\"\nmethods = []\n");
    assert_eq!(hstrn(&["analyze", &empty]).status.code(), Some(2));
    let trunc = write(
        dir.path(),
        "t.toml",
        "metric = \"sopm\"\nmethods = [\"quadrature\"]\n[satellite]\ncase = 4\n[series]\nterms = 2\ncap = 3\n",
    );
    assert_eq!(hstrn(&["analyze", &trunc]).status.code(), Some(3));
    let resource = write(dir.path(), "r.toml", "metric = \"sopm\"\nmethods = [\"closed_form\"]\n");
    let out = hstrn(&["analyze", &resource]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    let ok = write(dir.path(), "ok.toml", "metric = \"sopm\"\nmethods = [\"quadrature\"]\n");
    let missing = dir.path().join("no/such/dir/out.csv");
    assert_eq!(hstrn(&["analyze", &ok, "--out", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn presets_and_loo_subcommands() {
    let out = hstrn(&["presets", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][2].as_f64(), Some(5.21));
    assert_eq!(rows[0][3].as_f64(), Some(0.0009));

    let out = hstrn(&["loo", "--mu", "-0.115", "--sqrt-d0", "0.161", "--ps", "0.126"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("m_s") && text.contains("xi_s"));
    assert_eq!(hstrn(&["loo", "--mu", "0", "--d0", "-1", "--ps", "0.1"]).status.code(), Some(2));
}
