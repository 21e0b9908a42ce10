//! Curve, report and surface-sample files.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! gives bit-identical values and repeated runs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{coordinate_names, AngleLaw, Constants, CurveData, GenerateError, GeneratingCurve, Sign};
use crate::neutral::MVec4;
use crate::profile::{Profile, ProfileError, ProfileSpec, RotationType};
use crate::surface::{self, SurfaceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Data(#[from] GenerateError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Ordered column names of a curve file.
pub fn curve_columns(kind: RotationType) -> Vec<&'static str> {
    let mut v = vec!["u", "phi"];
    v.extend(coordinate_names(kind));
    v
}

/// Self-describing curve file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(rename = "type")]
    pub kind: RotationType,
    pub eta: Sign,
    pub law: AngleLaw,
    pub profile: ProfileSpec,
    pub constants: Constants,
    pub tol: f64,
    pub columns: Vec<String>,
    pub data: BTreeMap<String, Vec<f64>>,
}

impl CurveFile {
    pub fn from_curve(curve: &GeneratingCurve) -> Self {
        let columns: Vec<String> = curve_columns(curve.kind()).into_iter().map(String::from).collect();
        let mut data = BTreeMap::new();
        data.insert("u".to_string(), curve.grid().to_vec());
        for (i, name) in columns.iter().enumerate().skip(1) {
            data.insert(name.clone(), curve.column(i - 1));
        }
        CurveFile {
            kind: curve.kind(),
            eta: curve.eta(),
            law: curve.law(),
            profile: curve.profile().to_spec(),
            constants: *curve.constants(),
            tol: curve.quad_tol(),
            columns,
            data,
        }
    }

    pub fn into_curve(self) -> Result<GeneratingCurve, IoError> {
        let profile = Profile::from_spec(&self.profile)?;
        let get = |name: &str| {
            self.data.get(name).cloned().ok_or_else(|| IoError::Parse(format!("curve file lacks column '{name}'")))
        };
        let names = coordinate_names(self.kind);
        let grid = get("u")?;
        let phi = get("phi")?;
        let cols = [get(names[0])?, get(names[1])?, get(names[2])?];
        if cols.iter().any(|c| c.len() != grid.len()) {
            return Err(IoError::Parse("curve columns have different lengths".into()));
        }
        let coords = (0..grid.len()).map(|i| [cols[0][i], cols[1][i], cols[2][i]]).collect();
        Ok(GeneratingCurve::from_parts(
            self.kind,
            profile,
            self.eta,
            self.law,
            self.constants,
            self.tol,
            CurveData { grid, phi, coords },
        )?)
    }
}

pub fn curve_to_json(curve: &GeneratingCurve) -> String {
    let mut s = serde_json::to_string_pretty(&CurveFile::from_curve(curve)).expect("curve serializes");
    s.push('\n');
    s
}

pub fn curve_from_json(text: &str) -> Result<GeneratingCurve, IoError> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| IoError::Parse(format!("curve JSON: {e}")))?;
    file.into_curve()
}

pub fn curve_to_csv(curve: &GeneratingCurve) -> String {
    let mut s = curve_columns(curve.kind()).join(",");
    s.push('\n');
    for k in 0..curve.len() {
        let st = curve.node_state(k);
        let row = [st.u, st.phi, st.coords[0], st.coords[1], st.coords[2]];
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Numeric rows of a CSV text with a header line.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), IoError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| IoError::Parse("empty CSV".into()))?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| IoError::Parse(format!("row {}: bad number '{t}'", i + 2))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != header.len() {
            return Err(IoError::Parse(format!("row {} has {} fields, expected {}", i + 2, row.len(), header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Metadata a bare CSV curve lacks.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveMeta {
    pub kind: RotationType,
    pub profile: Profile,
    pub eta: Sign,
    pub law: AngleLaw,
    pub constants: Constants,
    pub tol: f64,
}

pub fn curve_from_csv(text: &str, meta: CurveMeta) -> Result<GeneratingCurve, IoError> {
    let (header, rows) = parse_csv(text)?;
    let idx = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IoError::Parse(format!("CSV lacks column '{name}' for a {} curve", meta.kind)))
    };
    let names = coordinate_names(meta.kind);
    let (iu, ip) = (idx("u")?, idx("phi")?);
    let ic = [idx(names[0])?, idx(names[1])?, idx(names[2])?];
    let data = CurveData {
        grid: rows.iter().map(|r| r[iu]).collect(),
        phi: rows.iter().map(|r| r[ip]).collect(),
        coords: rows.iter().map(|r| ic.map(|i| r[i])).collect(),
    };
    let mut constants = meta.constants;
    if constants.u0.is_none() {
        constants.u0 = data.grid.first().copied();
    }
    Ok(GeneratingCurve::from_parts(meta.kind, meta.profile, meta.eta, meta.law, constants, meta.tol, data)?)
}

/// Two-column `(u, value)` table, comma or whitespace separated, with an
/// optional header line.
pub fn read_table(text: &str) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut grid = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        let nums: Result<Vec<f64>, _> = fields.iter().map(|t| t.parse::<f64>()).collect();
        match nums {
            Ok(n) if n.len() == 2 => {
                grid.push(n[0]);
                values.push(n[1]);
            }
            Err(_) if grid.is_empty() => continue,
            _ => return Err(IoError::Parse(format!("table line {}: expected two numbers", i + 1))),
        }
    }
    Ok((grid, values))
}

/// One sampled surface point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleRow {
    pub u: f64,
    pub v: f64,
    pub z: MVec4,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub k: f64,
    pub h1: f64,
    pub h2: f64,
    pub hh: f64,
}

pub const SAMPLE_COLUMNS: [&str; 13] = ["u", "v", "x1", "x2", "x3", "x4", "E", "F", "G", "K", "h1", "h2", "hh"];

/// Samples the surface on the curve nodes times a uniform `v` grid
/// (`v_samples` points, end point included).
pub fn sample_surface(
    curve: &GeneratingCurve,
    v_range: (f64, f64),
    v_samples: usize,
) -> Result<Vec<SampleRow>, IoError> {
    if v_samples < 2 {
        return Err(IoError::Parse(format!("need at least 2 v samples, got {v_samples}")));
    }
    let (v0, v1) = v_range;
    let mut rows = Vec::with_capacity(curve.len() * v_samples);
    for k in 0..curve.len() {
        let cj = curve.node_jet(k).map_err(SurfaceError::from)?;
        for j in 0..v_samples {
            let v = v0 + (v1 - v0) * j as f64 / (v_samples - 1) as f64;
            let s = surface::jet_from_curve_jet(curve.kind(), &cj, v)?;
            rows.push(SampleRow {
                u: s.u,
                v,
                z: s.z,
                e: s.first.e,
                f: s.first.f,
                g: s.first.g,
                k: s.k,
                h1: s.h.h1,
                h2: s.h.h2,
                hh: s.h.hh,
            });
        }
    }
    Ok(rows)
}

pub fn samples_to_csv(rows: &[SampleRow]) -> String {
    let mut s = SAMPLE_COLUMNS.join(",");
    s.push('\n');
    for r in rows {
        let [x1, x2, x3, x4] = r.z.0;
        let vals = [r.u, r.v, x1, x2, x3, x4, r.e, r.f, r.g, r.k, r.h1, r.h2, r.hh];
        let cells: Vec<String> = vals.iter().map(|&x| fmt_f64(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Wavefront OBJ of the sampled grid projected to 3-space by dropping
/// coordinate `drop` (1..=4). Rows must come from [`sample_surface`].
pub fn samples_to_obj(rows: &[SampleRow], v_samples: usize, drop: usize) -> Result<String, IoError> {
    if !(1..=4).contains(&drop) {
        return Err(IoError::Parse(format!("dropped coordinate must be 1..=4, got {drop}")));
    }
    if v_samples < 2 || !rows.len().is_multiple_of(v_samples) {
        return Err(IoError::Parse("sample grid is not rectangular".into()));
    }
    let nu = rows.len() / v_samples;
    let mut s = String::new();
    let _ = writeln!(s, "# surface grid {nu} x {v_samples}, coordinate x{drop} dropped");
    for r in rows {
        let kept: Vec<String> = (0..4).filter(|&i| i != drop - 1).map(|i| fmt_f64(r.z.0[i])).collect();
        let _ = writeln!(s, "v {}", kept.join(" "));
    }
    for i in 0..nu.saturating_sub(1) {
        for j in 0..v_samples - 1 {
            let a = i * v_samples + j + 1;
            let b = a + 1;
            let c = a + v_samples + 1;
            let d = a + v_samples;
            let _ = writeln!(s, "f {a} {b} {c} {d}");
        }
    }
    Ok(s)
}
