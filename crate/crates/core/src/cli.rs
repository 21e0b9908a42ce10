//! Command-line front end: `generate`, `verify`, `sample`, `plot`.
//!
//! Settings come from an optional TOML file (top-level keys, then a section
//! named after the command) and are overridden by flags.
//!
//! Exit codes: 0 success, 1 verification verdict is not quasi-minimal,
//! 2 invalid input or configuration, 3 quadrature failure, 4 I/O or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::generator::{
    generate_curve, special_class_curve, AngleLaw, Constants, GenerateError, GeneratingCurve, Sign, SpecialClass,
};
use crate::io::{self, CurveMeta, IoError};
use crate::plot::curve_plots;
use crate::profile::{Profile, ProfileError, ProfileSpec, RotationType};
use crate::quadrature::DEFAULT_TOL;
use crate::verifier::{verify_curve, Verdict, VerifyError, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_V_SAMPLES: usize = 33;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, message: msg.into() }
    }

    fn io(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: msg.into() }
    }
}

impl From<GenerateError> for CliError {
    fn from(e: GenerateError) -> Self {
        let code = if matches!(e, GenerateError::Quadrature(_)) { EXIT_QUADRATURE } else { EXIT_INVALID };
        CliError { code, message: e.to_string() }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        let code = if matches!(e, VerifyError::Quadrature(_)) { EXIT_QUADRATURE } else { EXIT_INVALID };
        CliError { code, message: e.to_string() }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Data(g) => g.into(),
            IoError::Profile(p) => p.into(),
            IoError::Surface(s) => CliError::invalid(s.to_string()),
            other => CliError::io(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quasirot", version, about = "Quasi-minimal rotational surfaces in neutral 4-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a generating curve and write it as CSV and/or JSON.
    Generate(CommonArgs),
    /// Check a curve (from --curve or generated from the settings).
    Verify(CommonArgs),
    /// Sample the surface on a (u, v) grid as CSV or OBJ.
    Sample(CommonArgs),
    /// Write SVG plots of profile, angle, Gauss curvature and residuals.
    Plot(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Verify(_) => "verify",
            Command::Sample(_) => "sample",
            Command::Plot(_) => "plot",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Generate(a) | Command::Verify(a) | Command::Sample(a) | Command::Plot(a) => a,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// elliptic, hyperbolic-a, hyperbolic-b or parabolic.
    #[arg(long = "type")]
    pub kind: Option<String>,
    /// Profile as kind:params, e.g. cosh:1,1, power:1,2, sqrt-poly:4,0,-1, table:FILE.
    #[arg(long, allow_hyphen_values = true)]
    pub profile: Option<String>,
    /// Parameter interval a,b.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Sign of the lightlike direction, 1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<i32>,
    /// Parabolic constant C.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Base point of the angle integral (default: left end).
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<f64>,
    /// Angle at the base point (elliptic and hyperbolic).
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<f64>,
    /// Left-end values of the two integrated coordinates, a,b.
    #[arg(long, allow_hyphen_values = true)]
    pub offsets: Option<String>,
    /// Number of curve samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Rotation parameter range a,b for sampling.
    #[arg(long, allow_hyphen_values = true)]
    pub v_range: Option<String>,
    /// Number of v samples per curve node.
    #[arg(long)]
    pub v_samples: Option<usize>,
    /// Quadrature tolerance; verification thresholds scale with it.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output path (file stem for generate, directory for plot).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, json, obj.
    #[arg(long)]
    pub format: Option<String>,
    /// Coordinate (1-4) dropped for OBJ output.
    #[arg(long)]
    pub drop_coord: Option<usize>,
    /// Curve file (.json, or .csv together with the generation settings).
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Built-in special-class curve instead of a quasi-minimal one: class-i or class-ii.
    #[arg(long)]
    pub demo: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(untagged)]
enum ProfileField {
    #[default]
    None,
    Compact(String),
    Full(ProfileTable),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileTable {
    kind: String,
    #[serde(default)]
    params: Vec<f64>,
    domain: Option<[f64; 2]>,
    file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
struct Fields {
    #[serde(rename = "type")]
    kind: Option<String>,
    #[serde(default)]
    profile: ProfileField,
    interval: Option<[f64; 2]>,
    eta: Option<i32>,
    c: Option<f64>,
    u0: Option<f64>,
    phi0: Option<f64>,
    offsets: Option<[f64; 2]>,
    samples: Option<usize>,
    v_range: Option<[f64; 2]>,
    v_samples: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
    drop_coord: Option<usize>,
    curve: Option<PathBuf>,
    demo: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    #[serde(flatten)]
    common: Fields,
    generate: Option<Fields>,
    verify: Option<Fields>,
    sample: Option<Fields>,
    plot: Option<Fields>,
}

impl Fields {
    /// Fills every unset field from `other`.
    fn or(self, other: Fields) -> Fields {
        Fields {
            kind: self.kind.or(other.kind),
            profile: match self.profile {
                ProfileField::None => other.profile,
                p => p,
            },
            interval: self.interval.or(other.interval),
            eta: self.eta.or(other.eta),
            c: self.c.or(other.c),
            u0: self.u0.or(other.u0),
            phi0: self.phi0.or(other.phi0),
            offsets: self.offsets.or(other.offsets),
            samples: self.samples.or(other.samples),
            v_range: self.v_range.or(other.v_range),
            v_samples: self.v_samples.or(other.v_samples),
            tol: self.tol.or(other.tol),
            out: self.out.or(other.out),
            format: self.format.or(other.format),
            drop_coord: self.drop_coord.or(other.drop_coord),
            curve: self.curve.or(other.curve),
            demo: self.demo.or(other.demo),
        }
    }

    /// Makes relative paths relative to `base`.
    fn rebase(mut self, base: &Path) -> Fields {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        fix(&mut self.out);
        fix(&mut self.curve);
        match &mut self.profile {
            ProfileField::Full(t) => fix(&mut t.file),
            ProfileField::Compact(s) => {
                if let Some(rest) = s.strip_prefix("table:") {
                    if Path::new(rest).is_relative() {
                        *s = format!("table:{}", base.join(rest).display());
                    }
                }
            }
            ProfileField::None => {}
        }
        self
    }
}

fn pair(s: &str, what: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::invalid(format!("{what} must be two comma-separated numbers, got '{s}'")));
    }
    let p = |t: &str| t.parse::<f64>().map_err(|_| CliError::invalid(format!("bad number '{t}' in {what}")));
    Ok([p(parts[0])?, p(parts[1])?])
}

fn flag_fields(a: &CommonArgs) -> Result<Fields, CliError> {
    Ok(Fields {
        kind: a.kind.clone(),
        profile: a.profile.clone().map_or(ProfileField::None, ProfileField::Compact),
        interval: a.interval.as_deref().map(|s| pair(s, "--interval")).transpose()?,
        eta: a.eta,
        c: a.c,
        u0: a.u0,
        phi0: a.phi0,
        offsets: a.offsets.as_deref().map(|s| pair(s, "--offsets")).transpose()?,
        samples: a.samples,
        v_range: a.v_range.as_deref().map(|s| pair(s, "--v-range")).transpose()?,
        v_samples: a.v_samples,
        tol: a.tol,
        out: a.out.clone(),
        format: a.format.clone(),
        drop_coord: a.drop_coord,
        curve: a.curve.clone(),
        demo: a.demo.clone(),
    })
}

fn load_config(path: &Path, command: &str) -> Result<Fields, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ConfigFile =
        toml::from_str(&text).map_err(|e| CliError::io(format!("cannot parse {}: {e}", path.display())))?;
    let section = match command {
        "generate" => cfg.generate,
        "verify" => cfg.verify,
        "sample" => cfg.sample,
        _ => cfg.plot,
    };
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(section.unwrap_or_default().or(cfg.common).rebase(base))
}

/// Fully merged settings of one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub kind: Option<RotationType>,
    pub profile: Option<Profile>,
    pub interval: Option<(f64, f64)>,
    pub eta: Sign,
    pub constants: Constants,
    pub samples: usize,
    pub v_range: Option<(f64, f64)>,
    pub v_samples: usize,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub drop_coord: usize,
    pub curve: Option<PathBuf>,
    pub demo: Option<SpecialClass>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))
}

fn build_profile(field: ProfileField, interval: Option<(f64, f64)>) -> Result<Option<Profile>, CliError> {
    let domain = interval.map(|(a, b)| [a, b]);
    let need_domain = || domain.ok_or_else(|| CliError::invalid("a profile needs --interval (or a domain)"));
    let table = |path: &Path, domain: Option<[f64; 2]>| -> Result<Profile, CliError> {
        let (grid, values) = io::read_table(&read(path)?)?;
        let p = Profile::tabulated(grid, values)?;
        Ok(match domain {
            Some([a, b]) => p.with_domain((a, b))?,
            None => p,
        })
    };
    match field {
        ProfileField::None => Ok(None),
        ProfileField::Compact(s) => {
            if let Some(path) = s.strip_prefix("table:") {
                return table(Path::new(path), None).map(Some);
            }
            let spec = ProfileSpec::parse(&s, need_domain()?)?;
            Ok(Some(Profile::from_spec(&spec)?))
        }
        ProfileField::Full(t) => {
            if let Some(path) = &t.file {
                return table(path, t.domain).map(Some);
            }
            let spec = ProfileSpec {
                kind: t.kind.to_ascii_lowercase(),
                params: t.params,
                domain: match t.domain {
                    Some(d) => d,
                    None => need_domain()?,
                },
                grid: None,
            };
            Ok(Some(Profile::from_spec(&spec)?))
        }
    }
}

impl Settings {
    pub fn resolve(command: &str, args: &CommonArgs) -> Result<Settings, CliError> {
        let mut f = flag_fields(args)?;
        if let Some(path) = &args.config {
            f = f.or(load_config(path, command)?);
        }
        let kind =
            f.kind.as_deref().map(RotationType::from_str).transpose().map_err(|e| CliError::invalid(e.to_string()))?;
        let interval = f.interval.map(|[a, b]| (a, b));
        let profile = build_profile(f.profile, interval)?;
        let interval = interval.or(profile.as_ref().map(Profile::domain));
        let eta = Sign::try_from(f.eta.unwrap_or(1)).map_err(CliError::invalid)?;
        let demo = match f.demo.as_deref() {
            None => None,
            Some("class-i") | Some("i") | Some("1") => Some(SpecialClass::ClassI),
            Some("class-ii") | Some("ii") | Some("2") => Some(SpecialClass::ClassII),
            Some(other) => return Err(CliError::invalid(format!("unknown demo '{other}', use class-i or class-ii"))),
        };
        let drop_coord = f.drop_coord.unwrap_or(4);
        if !(1..=4).contains(&drop_coord) {
            return Err(CliError::invalid(format!("--drop-coord must be 1..=4, got {drop_coord}")));
        }
        Ok(Settings {
            kind,
            profile,
            interval,
            eta,
            constants: Constants {
                u0: f.u0,
                phi0: f.phi0.unwrap_or(0.0),
                offsets: f.offsets.unwrap_or([0.0; 2]),
                c: f.c.unwrap_or(0.0),
            },
            samples: f.samples.unwrap_or(DEFAULT_SAMPLES),
            v_range: f.v_range.map(|[a, b]| (a, b)),
            v_samples: f.v_samples.unwrap_or(DEFAULT_V_SAMPLES),
            tol: f.tol,
            out: f.out,
            format: f.format.map(|s| s.to_ascii_lowercase()),
            drop_coord,
            curve: f.curve,
            demo,
        })
    }

    fn need_kind(&self) -> Result<RotationType, CliError> {
        self.kind.ok_or_else(|| CliError::invalid("missing --type"))
    }

    /// Generates the curve described by the settings.
    pub fn generate(&self) -> Result<GeneratingCurve, CliError> {
        let kind = self.need_kind()?;
        if let Some(class) = self.demo {
            return Ok(special_class_curve(kind, class, self.samples)?);
        }
        let profile = self.profile.as_ref().ok_or_else(|| CliError::invalid("missing --profile"))?;
        let interval = self.interval.ok_or_else(|| CliError::invalid("missing --interval"))?;
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        Ok(generate_curve(kind, profile, interval, self.eta, &self.constants, self.samples, tol)?)
    }

    /// The curve from `--curve` if given, else a freshly generated one.
    pub fn curve(&self) -> Result<GeneratingCurve, CliError> {
        let Some(path) = &self.curve else {
            return self.generate();
        };
        let text = read(path)?;
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if !is_csv {
            return Ok(io::curve_from_json(&text)?);
        }
        let kind = self.need_kind()?;
        let profile = self.profile.clone().ok_or_else(|| CliError::invalid("a CSV curve needs --profile"))?;
        let meta = CurveMeta {
            kind,
            profile,
            eta: self.eta,
            law: AngleLaw::QuasiMinimal,
            constants: self.constants,
            tol: self.tol.unwrap_or(DEFAULT_TOL),
        };
        let curve = io::curve_from_csv(&text, meta)?;
        if let Some((a, b)) = self.interval {
            let (lo, hi) = curve.range();
            let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
            if (lo - a).abs() > slack || (hi - b).abs() > slack {
                return Err(CliError::invalid(format!("curve covers [{lo}, {hi}] but the interval is [{a}, {b}]")));
            }
        }
        Ok(curve)
    }

    fn default_v_range(&self, kind: RotationType) -> (f64, f64) {
        self.v_range.unwrap_or(match kind {
            RotationType::Elliptic => (0.0, 2.0 * std::f64::consts::PI),
            _ => (-3.0, 3.0),
        })
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn run_generate(s: &Settings, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let curve = s.generate()?;
    let ext = s.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let formats: Vec<&str> = match (s.format.as_deref(), ext.as_deref()) {
        (Some(f @ ("csv" | "json")), _) => vec![f],
        (Some(f), _) => return Err(CliError::invalid(format!("generate writes csv or json, not '{f}'"))),
        (None, Some(e @ ("csv" | "json"))) => vec![e],
        (None, _) if s.out.is_some() => vec!["csv", "json"],
        (None, _) => vec!["csv"],
    };
    let render = |f: &str| if f == "csv" { io::curve_to_csv(&curve) } else { io::curve_to_json(&curve) };
    match &s.out {
        None => {
            for f in formats {
                emit(out, &render(f))?;
            }
        }
        Some(path) => {
            let single = formats.len() == 1 && ext.as_deref() == Some(formats[0]);
            for f in formats {
                let target = if single { path.clone() } else { with_ext(path, f) };
                write(&target, &render(f))?;
                let _ = writeln!(out, "wrote {}", target.display());
            }
        }
    }
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn std::io::Write, text: &str) -> Result<(), CliError> {
    match out.write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io(e.to_string())),
        _ => Ok(()),
    }
}

fn verify_options(s: &Settings) -> VerifyOptions {
    VerifyOptions { tol: s.tol, ..VerifyOptions::default() }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::QuasiMinimal => EXIT_OK,
        Verdict::NotQuasiMinimal | Verdict::Minimal => EXIT_VERDICT,
        Verdict::Invalid => EXIT_INVALID,
    }
}

fn run_verify(s: &Settings, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let curve = s.curve()?;
    let report = verify_curve(&curve, &verify_options(s))?;
    let _ = write!(out, "{}", report.summary());
    if let Some(path) = &s.out {
        write(path, &report.to_json())?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(verdict_code(report.verdict))
}

fn run_sample(s: &Settings, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let curve = s.curve()?;
    let v_range = s.default_v_range(curve.kind());
    let rows = io::sample_surface(&curve, v_range, s.v_samples)?;
    let ext = s.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let format = s.format.clone().or(ext).unwrap_or_else(|| "csv".into());
    let text = match format.as_str() {
        "csv" => io::samples_to_csv(&rows),
        "obj" => io::samples_to_obj(&rows, s.v_samples, s.drop_coord)?,
        other => return Err(CliError::invalid(format!("sample writes csv or obj, not '{other}'"))),
    };
    match &s.out {
        Some(p) => {
            write(p, &text)?;
            let _ = writeln!(out, "wrote {}", p.display());
        }
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn run_plot(s: &Settings, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let curve = s.curve()?;
    let report = verify_curve(&curve, &verify_options(s))?;
    let dir = s.out.clone().unwrap_or_else(|| PathBuf::from("plots"));
    for (name, svg) in curve_plots(&curve, &report) {
        let p = dir.join(name);
        write(&p, &svg)?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line, writing normal output to `out`.
pub fn run(cli: &Cli, out: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let s = Settings::resolve(cli.command.name(), cli.command.args())?;
    match cli.command {
        Command::Generate(_) => run_generate(&s, out),
        Command::Verify(_) => run_verify(&s, out),
        Command::Sample(_) => run_sample(&s, out),
        Command::Plot(_) => run_plot(&s, out),
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("quasirot").chain(list.iter().copied())).unwrap()
    }

    #[test]
    fn flags_resolve() {
        let cli = args(&[
            "generate",
            "--type",
            "hyperbolic-b",
            "--profile",
            "cosh:1,1",
            "--interval",
            "0.2,0.6",
            "--eta",
            "-1",
        ]);
        let s = Settings::resolve("generate", cli.command.args()).unwrap();
        assert_eq!(s.kind, Some(RotationType::HyperbolicB));
        assert_eq!(s.eta, Sign::Minus);
        assert_eq!(s.interval, Some((0.2, 0.6)));
        assert_eq!(s.samples, DEFAULT_SAMPLES);
        assert!(s.generate().is_ok());
    }

    #[test]
    fn negative_interval_is_accepted() {
        let cli = args(&["generate", "--type", "elliptic", "--profile", "cosh:1,1", "--interval", "-1,1"]);
        let s = Settings::resolve("generate", cli.command.args()).unwrap();
        assert_eq!(s.interval, Some((-1.0, 1.0)));
    }

    #[test]
    fn config_sections_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        fs::write(
            &cfg,
            "type = \"elliptic\"\nprofile = \"constant:2\"\ninterval = [0.0, 3.0]\nsamples = 40\n\
             [verify]\nsamples = 50\ntol = 1e-9\n[generate]\nout = \"curve\"\n",
        )
        .unwrap();
        let p = cfg.to_str().unwrap();
        let g = Settings::resolve("generate", args(&["generate", "--config", p]).command.args()).unwrap();
        assert_eq!(g.samples, 40);
        assert_eq!(g.out, Some(dir.path().join("curve")));
        let v =
            Settings::resolve("verify", args(&["verify", "--config", p, "--samples", "60"]).command.args()).unwrap();
        assert_eq!(v.samples, 60);
        assert_eq!(v.tol, Some(1e-9));
    }

    #[test]
    fn bad_values_are_invalid() {
        let e = Settings::resolve("generate", args(&["generate", "--interval", "1"]).command.args()).unwrap_err();
        assert_eq!(e.code, EXIT_INVALID);
        let e = Settings::resolve("generate", args(&["generate", "--type", "spherical"]).command.args()).unwrap_err();
        assert_eq!(e.code, EXIT_INVALID);
        let e = Settings::resolve("generate", args(&["generate", "--eta", "2"]).command.args()).unwrap_err();
        assert_eq!(e.code, EXIT_INVALID);
        let s = Settings::resolve("generate", args(&["generate", "--type", "elliptic"]).command.args()).unwrap();
        assert_eq!(s.generate().unwrap_err().code, EXIT_INVALID);
    }
}
