use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasirot")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn config_file_drives_generate_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.toml"),
        r#"
type = "hyperbolic-b"
interval = [0.2, 0.6]
eta = -1
samples = 64

[profile]
kind = "cosh"
params = [1.0, 1.0]

[generate]
out = "out/curve.json"

[verify]
curve = "out/curve.json"
out = "out/report.json"
"#,
    )
    .unwrap();
    let g = run(&["generate", "--config", "run.toml"], d);
    assert_eq!(code(&g), 0, "{}", String::from_utf8_lossy(&g.stderr));
    let v = run(&["verify", "--config", "run.toml"], d);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "quasi_minimal");
    assert_eq!(report["eta"], -1);
    assert_eq!(report["samples"], 64);

    // flags override the config
    let v = run(&["generate", "--config", "run.toml", "--samples", "32", "--out", "small.csv"], d);
    assert_eq!(code(&v), 0);
    let csv = std::fs::read_to_string(d.join("small.csv")).unwrap();
    assert_eq!(csv.lines().count(), 33);
    assert_eq!(csv.lines().next().unwrap(), "u,phi,r,x2,x4");
}

#[test]
fn tabulated_profile_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rows: String = (0..=200).map(|i| 1.0 + i as f64 / 100.0).map(|u| format!("{u} {}\n", u * u)).collect();
    std::fs::write(d.join("p.dat"), format!("u r\n{rows}")).unwrap();
    let out =
        run(&["generate", "--type", "elliptic", "--profile", "table:p.dat", "--interval", "1,3", "--out", "t.json"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = run(&["verify", "--curve", "t.json"], d);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
}

#[test]
fn sample_writes_csv_and_obj() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let base = ["--type", "parabolic", "--profile", "exp:1,1", "--interval", "0,1", "--samples", "20"];
    let csv = run(&[&["sample"][..], &base, &["--v-samples", "5"]].concat(), d);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    assert_eq!(text.lines().next().unwrap(), "u,v,x1,x2,x3,x4,E,F,G,K,h1,h2,hh");
    assert_eq!(text.lines().count(), 1 + 20 * 5);

    let obj = run(&[&["sample"][..], &base, &["--v-samples", "5", "--format", "obj", "--drop-coord", "4"]].concat(), d);
    assert_eq!(code(&obj), 0);
    let text = stdout(&obj);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 100);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 19 * 4);
    assert!(text.lines().filter(|l| l.starts_with("v ")).all(|l| l.split_whitespace().count() == 4));
}

#[test]
fn plot_annotates_report_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = run(
        &["generate", "--type", "elliptic", "--profile", "power:1,2", "--interval", "0.5,1.5", "--out", "c.json"],
        d,
    );
    assert_eq!(code(&g), 0);
    let v = run(&["verify", "--curve", "c.json", "--out", "r.json"], d);
    assert_eq!(code(&v), 0);
    let p = run(&["plot", "--curve", "c.json", "--out", "figs"], d);
    assert_eq!(code(&p), 0, "{}", String::from_utf8_lossy(&p.stderr));
    for f in ["profile.svg", "phi.svg", "gauss.svg", "residual.svg"] {
        assert!(d.join("figs").join(f).exists(), "{f} missing");
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    let max = report["stats"]["qm_residual"]["max"].as_f64().unwrap();
    let svg = std::fs::read_to_string(d.join("figs/residual.svg")).unwrap();
    assert!(svg.contains(&format!("max qm_residual = {max:?}")), "annotation does not match {max:?}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // r' = 1 inside the interval: not a regular hyperbolic A curve
    let bad = run(&["generate", "--type", "hyperbolic-a", "--profile", "power:0.5,2", "--interval", "0.5,1.5"], d);
    assert_eq!(code(&bad), 2);
    assert!(!String::from_utf8_lossy(&bad.stderr).is_empty());
    assert_eq!(code(&run(&["verify", "--curve", "missing.json"], d)), 4);
    std::fs::write(d.join("junk.json"), "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", "--curve", "junk.json"], d)), 4);
    assert_eq!(code(&run(&["generate", "--type", "spherical"], d)), 2);

    let demo = run(&["verify", "--type", "hyperbolic-a", "--demo", "class-i", "--samples", "64"], d);
    assert_eq!(code(&demo), 1);
    assert!(stdout(&demo).contains("not_quasi_minimal"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["sample", "--type", "hyperbolic-a", "--profile", "linear:2,1", "--interval", "0,1", "--samples", "40"];
    let a = run(&args, d);
    let b = run(&args, d);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
