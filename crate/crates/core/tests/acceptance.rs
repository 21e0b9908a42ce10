//! Acceptance suite. Runs without the libtest harness so that each criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use quasirot::generator::{generate_curve, special_class_curve, Constants, GeneratingCurve, Sign, SpecialClass};
use quasirot::io::curve_to_json;
use quasirot::neutral::{causal_character, Causal};
use quasirot::profile::{Profile, ProfileSpec, RotationType};
use quasirot::surface::{eval_jet, SurfaceJet};
use quasirot::verifier::{
    fd_cross_check, parabolic_ode_residual, special_class_audit, verify_curve, Verdict, VerifyOptions,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const N: usize = 256;
const TOL: f64 = 1e-10;

struct Config {
    kind: RotationType,
    profile: &'static str,
    interval: (f64, f64),
}

const CONFIGS: [Config; 12] = [
    Config { kind: RotationType::Elliptic, profile: "constant:1", interval: (0.0, std::f64::consts::TAU) },
    Config { kind: RotationType::Elliptic, profile: "linear:0.5,1", interval: (0.0, 2.0) },
    Config { kind: RotationType::Elliptic, profile: "power:1,2", interval: (0.5, 1.5) },
    Config { kind: RotationType::Elliptic, profile: "cosh:1,1", interval: (-1.0, 1.0) },
    Config { kind: RotationType::HyperbolicB, profile: "constant:1", interval: (0.0, 2.0) },
    Config { kind: RotationType::HyperbolicA, profile: "linear:2,1", interval: (0.0, 1.0) },
    Config { kind: RotationType::HyperbolicA, profile: "power:1,2", interval: (1.0, 2.0) },
    Config { kind: RotationType::HyperbolicB, profile: "cosh:1,1", interval: (0.2, 0.6) },
    Config { kind: RotationType::Parabolic, profile: "linear:1,0", interval: (1.0, 3.0) },
    Config { kind: RotationType::Parabolic, profile: "power:1,2", interval: (0.5, 1.5) },
    Config { kind: RotationType::Parabolic, profile: "exp:1,1", interval: (0.0, 1.0) },
    Config { kind: RotationType::Parabolic, profile: "cosh:1,1", interval: (0.5, 1.5) },
];

fn profile(spec: &str, (a, b): (f64, f64)) -> Profile {
    Profile::from_spec(&ProfileSpec::parse(spec, [a, b]).unwrap()).unwrap()
}

fn constants(kind: RotationType) -> Constants {
    match kind {
        RotationType::Parabolic => Constants { c: 0.5, ..Constants::default() },
        _ => Constants::default(),
    }
}

fn curve(cfg: &Config, eta: Sign) -> GeneratingCurve {
    generate_curve(cfg.kind, &profile(cfg.profile, cfg.interval), cfg.interval, eta, &constants(cfg.kind), N, TOL)
        .unwrap_or_else(|e| panic!("{} {} {eta}: {e}", cfg.kind, cfg.profile))
}

fn all_curves() -> Vec<(String, GeneratingCurve)> {
    let mut v = Vec::new();
    for cfg in &CONFIGS {
        for eta in [Sign::Plus, Sign::Minus] {
            v.push((format!("{} {} eta={eta}", cfg.kind, cfg.profile), curve(cfg, eta)));
        }
    }
    v
}

fn v_range(kind: RotationType) -> (f64, f64) {
    match kind {
        RotationType::Elliptic => (0.0, std::f64::consts::TAU),
        _ => (-3.0, 3.0),
    }
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn generator_soundness(curves: &[(String, GeneratingCurve)]) -> Outcome {
    let (mut qm, mut arc) = (0.0_f64, 0.0_f64);
    for (name, c) in curves {
        let r = verify_curve(c, &VerifyOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        let st = r.stats.as_ref().ok_or_else(|| format!("{name}: {}", r.reasons.join("; ")))?;
        ensure(st.qm_residual.max < 1e-8, || format!("{name}: qm_residual {:e}", st.qm_residual.max))?;
        ensure(st.arc_residual.max < 1e-9, || format!("{name}: arc_residual {:e}", st.arc_residual.max))?;
        ensure(r.verdict == Verdict::QuasiMinimal, || format!("{name}: verdict {}", r.verdict))?;
        qm = qm.max(st.qm_residual.max);
        arc = arc.max(st.arc_residual.max);
    }
    Ok(format!("{} curves, max qm_residual {qm:.2e}, max arc_residual {arc:.2e}", curves.len()))
}

fn lightlike_nonzero(curves: &[(String, GeneratingCurve)]) -> Outcome {
    let mut min_coef = f64::INFINITY;
    for (name, c) in curves {
        let (v0, v1) = v_range(c.kind());
        for k in 1..c.len() - 1 {
            let v = v0 + (v1 - v0) * (k as f64 / c.len() as f64);
            let j = eval_jet(c, c.grid()[k], v).map_err(|e| e.to_string())?;
            let ch = causal_character(j.h.vector);
            ensure(ch == Causal::Lightlike, || format!("{name}: H is {ch} at u = {}", c.grid()[k]))?;
            let m = j.h.h1.abs().min(j.h.h2.abs());
            ensure(m > 1e-6, || format!("{name}: |h_i| = {m:e} at u = {}", c.grid()[k]))?;
            min_coef = min_coef.min(m);
        }
    }
    Ok(format!("all interior points lightlike, min |h_i| {min_coef:.3e}"))
}

// Boosts and null rotations act isometrically in v, so a unit window covers the
// geometry; far out the coordinates grow like e^|v| and FD roundoff dominates.
fn fd_v_window(kind: RotationType) -> (f64, f64) {
    match kind {
        RotationType::Elliptic => v_range(kind),
        _ => (-1.0, 1.0),
    }
}

fn fd_oracle(curves: &[(String, GeneratingCurve)]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut worst, mut ratio_lo, mut ratio_hi) = (0.0_f64, f64::INFINITY, 0.0_f64);
    for (name, c) in curves {
        let (a, b) = c.range();
        let (v0, v1) = fd_v_window(c.kind());
        let (mut coarse, mut fine) = (0.0_f64, 0.0_f64);
        for _ in 0..50 {
            let u = rng.gen_range(a + 0.01 * (b - a)..b - 0.01 * (b - a));
            let v = rng.gen_range(v0..v1);
            let chk = fd_cross_check(c, u, v, 1e-4).map_err(|e| format!("{name}: {e}"))?;
            ensure(chk.max_rel < 1e-5, || format!("{name}: deviation {:e} at ({u}, {v})", chk.max_rel))?;
            worst = worst.max(chk.max_rel);
            coarse = coarse.max(fd_cross_check(c, u, v, 1e-3).map_err(|e| e.to_string())?.partials);
            fine = fine.max(fd_cross_check(c, u, v, 5e-4).map_err(|e| e.to_string())?.partials);
        }
        let ratio = coarse / fine;
        ensure((3.0..=5.0).contains(&ratio), || format!("{name}: halving ratio {ratio:.3}"))?;
        ratio_lo = ratio_lo.min(ratio);
        ratio_hi = ratio_hi.max(ratio);
    }
    Ok(format!("max relative deviation {worst:.2e} at h=1e-4, halving ratios in [{ratio_lo:.3}, {ratio_hi:.3}]"))
}

fn frame_audits(curves: &[(String, GeneratingCurve)]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut seen = [false; 4];
    let mut worst = 0.0_f64;
    for (name, c) in curves {
        let (a, b) = c.range();
        let (v0, v1) = v_range(c.kind());
        for _ in 0..100 {
            let (u, v) = (rng.gen_range(a..=b), rng.gen_range(v0..v1));
            let j = eval_jet(c, u, v).map_err(|e| e.to_string())?;
            let d = j.frame.gram_deviation();
            ensure(d < 1e-9, || format!("{name}: Gram deviation {d:e} at ({u}, {v})"))?;
            worst = worst.max(d);
        }
        let idx = RotationType::ALL.iter().position(|&k| k == c.kind()).unwrap();
        seen[idx] = true;
    }
    ensure(seen.iter().all(|&s| s), || "not every type (incl. hyperbolic A and B) was audited".into())?;
    Ok(format!("elliptic, hyperbolic A (eps=+1), hyperbolic B (eps=-1), parabolic; max Gram deviation {worst:.2e}"))
}

fn curvature_formulas(curves: &[(String, GeneratingCurve)]) -> Outcome {
    let mut worst = 0.0_f64;
    for (name, c) in curves {
        for k in (0..c.len()).step_by(5) {
            let u = c.grid()[k];
            let j: SurfaceJet = eval_jet(c, u, 0.3).map_err(|e| e.to_string())?;
            let pj = c.profile().eval_jet(u).map_err(|e| e.to_string())?;
            let want = -pj.d2p / pj.p;
            let d1 = (j.k - want).abs();
            let d2 = (j.k_from_sigma() - want).abs();
            ensure(d1 < 1e-8 && d2 < 1e-8, || format!("{name}: K deviations {d1:e}, {d2:e} at u = {u}"))?;
            worst = worst.max(d1).max(d2);
        }
    }
    // cosh gives K = -1, linear and constant profiles are flat
    for (name, c) in curves {
        let p = c.profile().to_spec().kind;
        for k in 0..c.len() {
            let j = eval_jet(c, c.grid()[k], 0.1).map_err(|e| e.to_string())?;
            match p.as_str() {
                "cosh" => ensure((j.k + 1.0).abs() < 1e-8, || format!("{name}: K = {} for cosh", j.k))?,
                "linear" | "constant" => ensure(j.k.abs() < 1e-10, || format!("{name}: K = {} for flat profile", j.k))?,
                _ => ensure(j.k.abs() > 1e-10, || format!("{name}: non-flat profile gives K = {}", j.k))?,
            }
        }
    }
    Ok(format!("K = -p''/p and Gauss equation agree within {worst:.2e}; cosh K = -1; linear/constant flat"))
}

fn nonexistence_audits() -> Outcome {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for kind in RotationType::ALL {
        for class in [SpecialClass::ClassI, SpecialClass::ClassII] {
            let c = special_class_curve(kind, class, N).map_err(|e| e.to_string())?;
            let name = format!("{kind} {class:?}");
            let r = verify_curve(&c, &VerifyOptions::default()).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.verdict == Verdict::NotQuasiMinimal, || format!("{name}: verdict {}", r.verdict))?;
            let audit = special_class_audit(&c, 0.4).map_err(|e| e.to_string())?;
            ensure(audit.class == Some(class), || format!("{name}: detected {:?}", audit.class))?;
            ensure(audit.hh_identity < 1e-10, || {
                format!("{name}: coefficient identity off by {:e}", audit.hh_identity)
            })?;
            for p in &r.points {
                // class I: <H,H> = -eps h2^2 ; class II: <H,H> = eps h1^2
                let eps = kind.epsilon();
                let want = match class {
                    SpecialClass::ClassI => -eps * p.h2 * p.h2,
                    SpecialClass::ClassII => eps * p.h1 * p.h1,
                };
                let d = (p.hh - want).abs();
                ensure(d < 1e-10, || format!("{name}: hh {} vs {want} at u = {}", p.hh, p.u))?;
                worst = worst.max(d);
            }
            n += 1;
        }
    }
    Ok(format!("{n} special-class curves rejected; hh = -/+ coef^2 within {worst:.2e}"))
}

fn parabolic_ode() -> Outcome {
    let mut worst = 0.0_f64;
    for (spec, iv) in [("linear:1,0", (1.0, 3.0)), ("exp:1,1", (0.0, 1.0))] {
        let p = profile(spec, iv);
        for c in [0.0, 1.0, -2.0] {
            for eta in [Sign::Plus, Sign::Minus] {
                let k = Constants { c, ..Constants::default() };
                let curve =
                    generate_curve(RotationType::Parabolic, &p, iv, eta, &k, N, TOL).map_err(|e| e.to_string())?;
                for i in 0..curve.len() {
                    let r = parabolic_ode_residual(&curve, i).map_err(|e| e.to_string())?;
                    ensure(r < 1e-6, || format!("{spec} C={c} eta={eta}: residual {r:e} at node {i}"))?;
                    worst = worst.max(r);
                }
            }
        }
    }
    Ok(format!("f=u and f=e^u, C in {{0,1,-2}}, both eta: max residual {worst:.2e}"))
}

fn eta_symmetry() -> Outcome {
    let mut worst = 0.0_f64;
    for cfg in CONFIGS.iter().filter(|c| c.kind == RotationType::Elliptic) {
        let a = curve(cfg, Sign::Plus);
        let b = curve(cfg, Sign::Minus);
        for k in 0..a.len() {
            let [x1a, x2a, _] = a.coords()[k];
            let [x1b, x2b, _] = b.coords()[k];
            let d = (x1a - x1b).abs().max((x2a + x2b).abs());
            ensure(d < 1e-8, || format!("{}: mismatch {d:e} at u = {}", cfg.profile, a.grid()[k]))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("x1 equal and x2 negated within {worst:.2e}"))
}

fn run_cli(args: &[&str], dir: &Path) -> Result<i32, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_quasirot"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| format!("cannot run binary: {e}"))?;
    out.status.code().ok_or_else(|| "terminated by signal".to_string())
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let gen = ["generate", "--type", "elliptic", "--profile", "cosh:1,1", "--interval", "-1,1", "--samples", "256"];
    let mut with_out = gen.to_vec();
    with_out.extend(["--out", "curve"]);
    ensure(run_cli(&with_out, d)? == 0, || "generate failed".into())?;
    let csv = std::fs::read(d.join("curve.csv")).map_err(|e| e.to_string())?;
    let json = std::fs::read(d.join("curve.json")).map_err(|e| e.to_string())?;
    let code = run_cli(&["verify", "--curve", "curve.json"], d)?;
    ensure(code == 0, || format!("verify of generated JSON exited {code}"))?;
    let code = run_cli(
        &["verify", "--curve", "curve.csv", "--type", "elliptic", "--profile", "cosh:1,1", "--interval", "-1,1"],
        d,
    )?;
    ensure(code == 0, || format!("verify of generated CSV exited {code}"))?;

    let curve = quasirot::io::curve_from_json(std::str::from_utf8(&json).unwrap()).map_err(|e| e.to_string())?;
    let names = ["x1", "x2", "r"];
    for (i, name) in names.iter().enumerate() {
        let vals: Vec<f64> = curve.column(i + 1).iter().map(|x| 1.01 * x).collect();
        let bad = curve.with_column(i + 1, &vals).map_err(|e| e.to_string())?;
        std::fs::write(d.join("bad.json"), curve_to_json(&bad)).map_err(|e| e.to_string())?;
        let code = run_cli(&["verify", "--curve", "bad.json"], d)?;
        ensure(code == 1, || format!("JSON with {name} scaled by 1.01 exited {code}"))?;
        std::fs::write(d.join("bad.csv"), quasirot::io::curve_to_csv(&bad)).map_err(|e| e.to_string())?;
        let code = run_cli(
            &["verify", "--curve", "bad.csv", "--type", "elliptic", "--profile", "cosh:1,1", "--interval", "-1,1"],
            d,
        )?;
        ensure(code == 1, || format!("CSV with {name} scaled by 1.01 exited {code}"))?;
    }

    let again = tempfile::tempdir().map_err(|e| e.to_string())?;
    ensure(run_cli(&with_out, again.path())? == 0, || "second generate failed".into())?;
    let csv2 = std::fs::read(again.path().join("curve.csv")).map_err(|e| e.to_string())?;
    let json2 = std::fs::read(again.path().join("curve.json")).map_err(|e| e.to_string())?;
    ensure(csv == csv2 && json == json2, || "rerun output differs".into())?;
    Ok("generate -> verify exits 0; each coordinate column x1.01 exits 1 (JSON and CSV); reruns byte-identical".into())
}

fn main() {
    let start = Instant::now();
    let curves = all_curves();
    let criteria: Vec<Criterion> = vec![
        ("generator soundness", Box::new(|| generator_soundness(&curves))),
        ("lightlike nonzero mean curvature", Box::new(|| lightlike_nonzero(&curves))),
        ("closed form vs finite differences", Box::new(|| fd_oracle(&curves))),
        ("frame audits", Box::new(|| frame_audits(&curves))),
        ("curvature formulas", Box::new(|| curvature_formulas(&curves))),
        ("non-existence audits", Box::new(nonexistence_audits)),
        ("parabolic angle ODE", Box::new(parabolic_ode)),
        ("eta symmetry", Box::new(eta_symmetry)),
        ("CLI round trip", Box::new(cli_round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
