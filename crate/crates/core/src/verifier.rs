//! Independent checks of a generated curve and its surface.
//!
//! The quasi-minimality residual is evaluated through the planar identity
//! (`r P = eta Q`), and cross-checked by finite differences of the stored
//! columns. Stored columns are also re-integrated cell by cell, so a column
//! that does not belong to the curve shows up in the arc-length and
//! consistency residuals even when the angle column is intact.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{
    integrated_slots, AngleLaw, CurveError, CurveJet, GenerateError, GeneratingCurve, Sign, SpecialClass,
};
use crate::neutral::{inner, Causal, MVec4};
use crate::profile::{
    generality_quantity, regime_classify, validity_check, ProfileError, RegimeClass, RotationType, ValidityIssue,
};
use crate::quadrature::QuadratureError;
use crate::surface::{self, eval_point, jet_from_curve_jet, SurfaceError, SurfaceJet};

pub const FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("{0}")]
    Invalid(String),
}

impl From<CurveError> for VerifyError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Quadrature(q) => VerifyError::Quadrature(q),
            other => VerifyError::Invalid(other.to_string()),
        }
    }
}

impl From<SurfaceError> for VerifyError {
    fn from(e: SurfaceError) -> Self {
        match e {
            SurfaceError::Curve(c) => c.into(),
            other => VerifyError::Invalid(other.to_string()),
        }
    }
}

impl From<GenerateError> for VerifyError {
    fn from(e: GenerateError) -> Self {
        match e {
            GenerateError::Quadrature(q) => VerifyError::Quadrature(q),
            other => VerifyError::Invalid(other.to_string()),
        }
    }
}

impl From<ProfileError> for VerifyError {
    fn from(e: ProfileError) -> Self {
        VerifyError::Invalid(e.to_string())
    }
}

/// Residual of the planar identity with the better of the two signs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmResidual {
    pub value: f64,
    pub eta: Sign,
}

fn qm_from_planar(kind: RotationType, cj: &CurveJet, planar: f64) -> QmResidual {
    let lhs = cj.profile.p * planar;
    let q = generality_quantity(kind, cj.profile).value;
    let plus = (lhs - q).abs();
    let minus = (lhs + q).abs();
    if plus <= minus {
        QmResidual { value: plus, eta: Sign::Plus }
    } else {
        QmResidual { value: minus, eta: Sign::Minus }
    }
}

/// `|r P - eta Q|` minimised over `eta`, with `P` from the angle law.
pub fn qm_residual(curve: &GeneratingCurve, u: f64) -> Result<QmResidual, VerifyError> {
    let cj = curve.jet_at(u)?;
    Ok(qm_from_planar(curve.kind(), &cj, cj.planar_quantity(curve.kind()).value))
}

const D1_W: [[f64; 5]; 5] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
    [1.0, -8.0, 0.0, 8.0, -1.0],
    [-1.0, 6.0, -18.0, 10.0, 3.0],
    [3.0, -16.0, 36.0, -48.0, 25.0],
];

const D2_W: [[f64; 5]; 5] = [
    [35.0, -104.0, 114.0, -56.0, 11.0],
    [11.0, -20.0, 6.0, 4.0, -1.0],
    [-1.0, 16.0, -30.0, 16.0, -1.0],
    [-1.0, 4.0, 6.0, -20.0, 11.0],
    [11.0, -56.0, 114.0, -104.0, 35.0],
];

/// Five-point first and second derivatives of sampled values at node `k` of
/// a uniform grid; one-sided stencils near the ends.
pub fn fd5(values: &[f64], k: usize, h: f64) -> (f64, f64) {
    let n = values.len();
    assert!(n >= 5, "five-point differences need at least 5 samples");
    let s = k.saturating_sub(2).min(n - 5);
    let m = k - s;
    let w = &values[s..s + 5];
    let d1: f64 = D1_W[m].iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (12.0 * h);
    let d2: f64 = D2_W[m].iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (12.0 * h * h);
    (d1, d2)
}

fn grid_step(curve: &GeneratingCurve, k: usize) -> f64 {
    let g = curve.grid();
    if k + 1 < g.len() {
        g[k + 1] - g[k]
    } else {
        g[k] - g[k - 1]
    }
}

/// Planar-identity residual with curve derivatives from five-point
/// differences of the stored columns; `None` at the two nodes nearest each end.
pub fn qm_residual_fd(curve: &GeneratingCurve, k: usize) -> Result<Option<QmResidual>, VerifyError> {
    let n = curve.len();
    if k < 2 || k + 2 >= n {
        return Ok(None);
    }
    let h = grid_step(curve, k);
    let mut cj = curve.node_jet(k)?;
    for s in 0..3 {
        let col = curve.column(s + 1);
        let (d1, d2) = fd5(&col, k, h);
        cj.d1[s] = d1;
        cj.d2[s] = d2;
    }
    Ok(Some(qm_from_planar(curve.kind(), &cj, cj.planar_quantity(curve.kind()).value)))
}

/// `<c', c'> - 1` on the profile-and-coordinate tangent.
fn arc_identity(kind: RotationType, d1: [f64; 3]) -> f64 {
    match kind {
        RotationType::Parabolic => d1[0] * d1[0] - 2.0 * d1[1] * d1[2] - 1.0,
        _ => d1[0] * d1[0] + d1[1] * d1[1] - d1[2] * d1[2] - 1.0,
    }
}

/// Mismatch between stored and re-integrated increments for every cell.
pub fn cell_defects(curve: &GeneratingCurve) -> Result<Vec<[f64; 4]>, VerifyError> {
    (0..curve.len() - 1).into_par_iter().map(|k| curve.cell_defects(k).map_err(VerifyError::from)).collect()
}

fn defect_correction(defects: &[[f64; 4]], cells: &[usize], h: f64) -> [f64; 3] {
    let mut c = [0.0; 3];
    for &i in cells {
        for s in 0..3 {
            c[s] += defects[i][s + 1] / (h * cells.len() as f64);
        }
    }
    c
}

fn adjacent_cells(n: usize, k: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(2);
    if k > 0 {
        v.push(k - 1);
    }
    if k + 1 < n {
        v.push(k);
    }
    v
}

fn arc_at_node(curve: &GeneratingCurve, cj: &CurveJet, defects: &[[f64; 4]], k: usize) -> f64 {
    let h = grid_step(curve, k);
    let corr = defect_correction(defects, &adjacent_cells(curve.len(), k), h);
    let d1: [f64; 3] = std::array::from_fn(|s| cj.d1[s] + corr[s]);
    arc_identity(curve.kind(), d1).abs()
}

/// `|<c', c'> - 1|` where `c'` is the law tangent plus the secant correction
/// of the stored increments of the surrounding cell(s).
pub fn arc_length_residual(curve: &GeneratingCurve, u: f64) -> Result<f64, VerifyError> {
    let cj = curve.jet_at(u)?;
    let k = curve.nearest_node(u);
    let n = curve.len();
    let cells = if curve.grid()[k] == u {
        adjacent_cells(n, k)
    } else if u > curve.grid()[k] {
        vec![k.min(n - 2)]
    } else {
        vec![k - 1]
    };
    let defects: Vec<[f64; 4]> =
        cells.iter().map(|&c| curve.cell_defects(c)).collect::<Result<_, _>>().map_err(VerifyError::from)?;
    let idx: Vec<usize> = (0..cells.len()).collect();
    let h = grid_step(curve, cells[0]);
    let corr = defect_correction(&defects, &idx, h);
    let d1: [f64; 3] = std::array::from_fn(|s| cj.d1[s] + corr[s]);
    Ok(arc_identity(curve.kind(), d1).abs())
}

/// Largest deviation of the left-end state from the integration constants.
pub fn start_defect(curve: &GeneratingCurve) -> Result<f64, VerifyError> {
    let want = curve.start_state()?;
    let got = curve.node_state(0);
    let mut m = (got.phi - want.phi).abs();
    for s in 0..3 {
        m = m.max((got.coords[s] - want.coords[s]).abs());
    }
    Ok(m)
}

/// Parabolic angle ODE `phi' - (f''/f') phi = eta (f''/f' + f'/f)` with
/// `phi'` from five-point differences of the stored angle column at node `k`.
pub fn parabolic_ode_residual(curve: &GeneratingCurve, k: usize) -> Result<f64, VerifyError> {
    if curve.kind() != RotationType::Parabolic {
        return Err(VerifyError::Invalid("the angle ODE applies to parabolic curves only".into()));
    }
    let h = grid_step(curve, k);
    let (dphi, _) = fd5(curve.phi(), k, h);
    let j = curve.profile().jet(curve.grid()[k]);
    let a = j.d2p / j.dp;
    let e = curve.eta().value();
    Ok((dphi - a * curve.phi()[k] - e * (a + j.dp / j.p)).abs())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Central-difference cross-check of one surface point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdCheck {
    pub first_form: f64,
    pub second_form: f64,
    pub mean_curvature: f64,
    pub gauss: f64,
    /// Largest of the four relative deviations above.
    pub max_rel: f64,
    /// Largest absolute deviation of the raw partials `z_u .. z_vv`.
    pub partials: f64,
}

/// Compares the closed-form jet at `(u, v)` with central differences of
/// [`eval_point`] using step `h`. `u +- h` must lie in the curve range.
pub fn fd_cross_check(curve: &GeneratingCurve, u: f64, v: f64, h: f64) -> Result<FdCheck, VerifyError> {
    let jet = surface::eval_jet(curve, u, v)?;
    let z = |du: f64, dv: f64| eval_point(curve, u + du * h, v + dv * h);
    let z0 = jet.z;
    let (zp0, zm0, z0p, z0m) = (z(1.0, 0.0)?, z(-1.0, 0.0)?, z(0.0, 1.0)?, z(0.0, -1.0)?);
    let (zpp, zpm, zmp, zmm) = (z(1.0, 1.0)?, z(1.0, -1.0)?, z(-1.0, 1.0)?, z(-1.0, -1.0)?);
    let z_u = (1.0 / (2.0 * h)) * (zp0 - zm0);
    let z_v = (1.0 / (2.0 * h)) * (z0p - z0m);
    let z_uu = (1.0 / (h * h)) * (zp0 - 2.0 * z0 + zm0);
    let z_vv = (1.0 / (h * h)) * (z0p - 2.0 * z0 + z0m);
    let z_uv = (1.0 / (4.0 * h * h)) * (zpp - zpm - zmp + zmm);

    let partials = [(z_u, jet.z_u), (z_v, jet.z_v), (z_uu, jet.z_uu), (z_uv, jet.z_uv), (z_vv, jet.z_vv)]
        .iter()
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max);

    let (e, f, g) = (inner(z_u, z_u), inner(z_u, z_v), inner(z_v, z_v));
    let first_form = rel(e, jet.first.e).max(rel(f, jet.first.f)).max(rel(g, jet.first.g));

    let fr = jet.frame;
    let proj = |w: MVec4| [inner(w, fr.n1) / fr.eps, -inner(w, fr.n2) / fr.eps];
    let (s_uu, s_uv, s_vv) = (proj(z_uu), proj(z_uv), proj(z_vv));
    let ag = g.abs();
    let xx = s_uu;
    let xy = s_uv.map(|c| c / ag.sqrt());
    let yy = s_vv.map(|c| c / ag);
    let mut second_form = 0.0_f64;
    for (a, b) in [(xx, jet.sigma.xx), (xy, jet.sigma.xy), (yy, jet.sigma.yy)] {
        second_form = second_form.max(rel(a[0], b[0])).max(rel(a[1], b[1]));
    }

    let det = e * g - f * f;
    let h_fd: [f64; 2] = std::array::from_fn(|i| 0.5 * (g * s_uu[i] - 2.0 * f * s_uv[i] + e * s_vv[i]) / det);
    let mean_curvature = rel(h_fd[0], jet.h.h1).max(rel(h_fd[1], jet.h.h2));

    let vec = |c: [f64; 2]| c[0] * fr.n1 + c[1] * fr.n2;
    let k_fd = (inner(vec(s_uu), vec(s_vv)) - inner(vec(s_uv), vec(s_uv))) / det;
    let gauss = rel(k_fd, jet.k);

    let max_rel = first_form.max(second_form).max(mean_curvature).max(gauss);
    Ok(FdCheck { first_form, second_form, mean_curvature, gauss, max_rel, partials })
}

/// Gram deviation of the adapted frame at `(u, v)`.
pub fn frame_audit(curve: &GeneratingCurve, u: f64, v: f64) -> Result<f64, VerifyError> {
    Ok(surface::eval_jet(curve, u, v)?.frame.gram_deviation())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    QuasiMinimal,
    NotQuasiMinimal,
    Minimal,
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::QuasiMinimal => "quasi_minimal",
            Verdict::NotQuasiMinimal => "not_quasi_minimal",
            Verdict::Minimal => "minimal",
            Verdict::Invalid => "invalid",
        })
    }
}

/// Result of the special-class audit over all nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassAudit {
    /// The class every node belongs to, if any.
    pub class: Option<SpecialClass>,
    /// `max |<H,H> - <n_i,n_i> h_i^2|` for the surviving coefficient.
    pub hh_identity: f64,
    /// Largest Euclidean size of the finite-difference derivatives of `n1`
    /// in `u` and `v` (class I only).
    pub n1_variation: Option<f64>,
    /// Always `not_quasi_minimal` or `minimal` for a detected class.
    pub verdict: Verdict,
}

/// Detects class I/II membership on the whole curve and checks the
/// consequences: one mean-curvature coefficient vanishes, and in class I the
/// normal `n1` is constant.
pub fn special_class_audit(curve: &GeneratingCurve, v: f64) -> Result<ClassAudit, VerifyError> {
    let kind = curve.kind();
    let n = curve.len();
    let mut classes = Vec::with_capacity(n);
    let mut jets = Vec::with_capacity(n);
    for k in 0..n {
        let cj = curve.node_jet(k)?;
        classes.push(regime_classify(kind, cj.profile, Some(cj.planar_quantity(kind))).class);
        jets.push(jet_from_curve_jet(kind, &cj, v)?);
    }
    let all = |c: RegimeClass| classes.iter().all(|&x| x == c);
    let class = if all(RegimeClass::SpecialI) {
        Some(SpecialClass::ClassI)
    } else if all(RegimeClass::SpecialII) {
        Some(SpecialClass::ClassII)
    } else {
        None
    };
    let minimal = all(RegimeClass::MinimalCandidate);
    let hh_identity = jets
        .iter()
        .map(|j: &SurfaceJet| {
            let e = j.frame.eps;
            let nominal = match class {
                Some(SpecialClass::ClassI) => -e * j.h.h2 * j.h.h2,
                Some(SpecialClass::ClassII) => e * j.h.h1 * j.h.h1,
                None => j.hh_from_coefficients(),
            };
            (j.h.hh - nominal).abs()
        })
        .fold(0.0, f64::max);
    let n1_variation = if class == Some(SpecialClass::ClassI) {
        let (a, b) = curve.range();
        let h = FD_STEP;
        let mut m = 0.0_f64;
        for k in 0..n {
            let u = curve.grid()[k].clamp(a + h, b - h);
            let n1 = |du: f64, dv: f64| -> Result<MVec4, VerifyError> {
                let cj = curve.jet_at(u + du)?;
                Ok(surface::frame(kind, &cj, v + dv)?.n1)
            };
            let du = (1.0 / (2.0 * h)) * (n1(h, 0.0)? - n1(-h, 0.0)?);
            let dv = (1.0 / (2.0 * h)) * (n1(0.0, h)? - n1(0.0, -h)?);
            m = m.max(du.euclid_norm()).max(dv.euclid_norm());
        }
        Some(m)
    } else {
        None
    };
    let verdict = if minimal {
        Verdict::Minimal
    } else if class.is_some() {
        Verdict::NotQuasiMinimal
    } else {
        // no special class: decided by the full report
        Verdict::QuasiMinimal
    };
    Ok(ClassAudit { class, hh_identity, n1_variation, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub max: f64,
    pub mean: f64,
    /// Parameter value where the maximum occurs.
    pub at: f64,
}

impl Stat {
    fn of(values: impl IntoIterator<Item = (f64, f64)>) -> Option<Stat> {
        let mut max = f64::NEG_INFINITY;
        let mut at = f64::NAN;
        let mut sum = 0.0;
        let mut n = 0usize;
        for (u, x) in values {
            // NaN counts as the worst value
            if x > max || x.is_nan() && !max.is_nan() {
                max = x;
                at = u;
            }
            sum += x;
            n += 1;
        }
        (n > 0).then(|| Stat { max, mean: sum / n as f64, at })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub u: f64,
    pub phi: f64,
    pub gauss: f64,
    pub h1: f64,
    pub h2: f64,
    pub hh: f64,
    pub causal: Causal,
    pub regime: RegimeClass,
    pub flat: bool,
    pub qm_residual: f64,
    pub qm_eta: Sign,
    pub qm_residual_fd: Option<f64>,
    pub arc_residual: f64,
    pub consistency: f64,
    pub gram_deviation: f64,
    pub fd_deviation: Option<f64>,
    pub ode_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    pub qm_residual: Stat,
    pub qm_residual_fd: Option<Stat>,
    pub arc_residual: Stat,
    pub consistency: Stat,
    pub gram_deviation: Stat,
    pub fd_deviation: Option<Stat>,
    pub ode_residual: Option<Stat>,
    /// `min(|h1|, |h2|)` over interior nodes.
    pub min_h_coefficient: f64,
    pub max_abs_hh: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub qm_residual: f64,
    pub arc_residual: f64,
    pub consistency: f64,
    pub h_coefficient: f64,
}

impl Thresholds {
    pub fn from_tol(tol: f64) -> Self {
        Thresholds {
            qm_residual: 100.0 * tol,
            arc_residual: 10.0 * tol,
            consistency: 100.0 * tol,
            h_coefficient: 100.0 * tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    #[serde(rename = "type")]
    pub kind: RotationType,
    pub eta: Sign,
    pub law: AngleLaw,
    pub interval: [f64; 2],
    pub samples: usize,
    pub tol: f64,
    pub v_probe: f64,
    pub fd_step: f64,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    pub thresholds: Thresholds,
    pub stats: Option<ReportStats>,
    pub special_class: Option<ClassAudit>,
    pub lightlike_fraction: f64,
    pub points: Vec<PointReport>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance the thresholds derive from; defaults to the curve's.
    pub tol: Option<f64>,
    /// Rotation parameter at which frames and finite differences are probed.
    pub v_probe: f64,
    pub fd_step: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: None, v_probe: 0.5, fd_step: FD_STEP }
    }
}

fn regularity_problem(curve: &GeneratingCurve) -> Result<Option<String>, VerifyError> {
    let report = validity_check(curve.profile(), curve.kind(), curve.range())?;
    let bad: Vec<String> = report
        .issues
        .iter()
        .filter(|i| !matches!(i, ValidityIssue::GeneralityVanishes { .. } | ValidityIssue::GeneralitySignChange { .. }))
        .map(|i| i.to_string())
        .collect();
    Ok((!bad.is_empty()).then(|| bad.join("; ")))
}

fn empty_report(curve: &GeneratingCurve, tol: f64, opts: &VerifyOptions, reason: String) -> GeometryReport {
    let (a, b) = curve.range();
    GeometryReport {
        kind: curve.kind(),
        eta: curve.eta(),
        law: curve.law(),
        interval: [a, b],
        samples: curve.len(),
        tol,
        v_probe: opts.v_probe,
        fd_step: opts.fd_step,
        verdict: Verdict::Invalid,
        reasons: vec![reason],
        thresholds: Thresholds::from_tol(tol),
        stats: None,
        special_class: None,
        lightlike_fraction: 0.0,
        points: Vec::new(),
    }
}

/// Runs every check on every node and decides the verdict.
pub fn verify_curve(curve: &GeneratingCurve, opts: &VerifyOptions) -> Result<GeometryReport, VerifyError> {
    let tol = opts.tol.unwrap_or(curve.quad_tol());
    if !(tol.is_finite() && tol > 0.0) {
        return Err(VerifyError::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    if curve.len() < 5 {
        return Err(VerifyError::Invalid(format!("at least 5 samples are needed, got {}", curve.len())));
    }
    if let Some(reason) = regularity_problem(curve)? {
        return Ok(empty_report(curve, tol, opts, reason));
    }
    let kind = curve.kind();
    let n = curve.len();
    let v = opts.v_probe;
    let defects = cell_defects(curve)?;
    let start = start_defect(curve)?;
    let (a, b) = curve.range();

    let points: Vec<PointReport> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<PointReport, VerifyError> {
            let u = curve.grid()[k];
            let cj = curve.node_jet(k)?;
            let sj = jet_from_curve_jet(kind, &cj, v)?;
            let qm = qm_from_planar(kind, &cj, cj.planar_quantity(kind).value);
            let regime = regime_classify(kind, cj.profile, Some(cj.planar_quantity(kind)));
            let mut consistency =
                adjacent_cells(n, k).iter().flat_map(|&c| defects[c].iter().map(|d| d.abs())).fold(0.0, f64::max);
            if k == 0 {
                consistency = consistency.max(start);
            }
            let fd_deviation = if u - 2.0 * opts.fd_step >= a && u + 2.0 * opts.fd_step <= b {
                Some(fd_cross_check(curve, u, v, opts.fd_step)?.max_rel)
            } else {
                None
            };
            let ode_residual = match kind {
                RotationType::Parabolic => Some(parabolic_ode_residual(curve, k)?),
                _ => None,
            };
            Ok(PointReport {
                u,
                phi: cj.phi,
                gauss: sj.k,
                h1: sj.h.h1,
                h2: sj.h.h2,
                hh: sj.h.hh,
                causal: sj.h.causal(),
                regime: regime.class,
                flat: regime.flat,
                qm_residual: qm.value,
                qm_eta: qm.eta,
                qm_residual_fd: qm_residual_fd(curve, k)?.map(|r| r.value),
                arc_residual: arc_at_node(curve, &cj, &defects, k),
                consistency,
                gram_deviation: sj.frame.gram_deviation(),
                fd_deviation,
                ode_residual,
            })
        })
        .collect::<Result<_, _>>()?;

    let pick = |f: &dyn Fn(&PointReport) -> Option<f64>| Stat::of(points.iter().filter_map(|p| f(p).map(|x| (p.u, x))));
    let stats = ReportStats {
        qm_residual: pick(&|p| Some(p.qm_residual)).expect("non-empty"),
        qm_residual_fd: pick(&|p| p.qm_residual_fd),
        arc_residual: pick(&|p| Some(p.arc_residual)).expect("non-empty"),
        consistency: pick(&|p| Some(p.consistency)).expect("non-empty"),
        gram_deviation: pick(&|p| Some(p.gram_deviation)).expect("non-empty"),
        fd_deviation: pick(&|p| p.fd_deviation),
        ode_residual: pick(&|p| p.ode_residual),
        min_h_coefficient: points[1..n - 1].iter().map(|p| p.h1.abs().min(p.h2.abs())).fold(f64::INFINITY, f64::min),
        max_abs_hh: points.iter().map(|p| p.hh.abs()).fold(0.0, f64::max),
    };
    let audit = special_class_audit(curve, v)?;
    let th = Thresholds::from_tol(tol);

    let mut reasons = Vec::new();
    let verdict = if audit.verdict == Verdict::Minimal {
        reasons.push("planar and generality quantities vanish at every node".to_string());
        Verdict::Minimal
    } else {
        let checks = [
            ("qm_residual", stats.qm_residual.max, th.qm_residual, true),
            ("arc_residual", stats.arc_residual.max, th.arc_residual, true),
            ("consistency", stats.consistency.max, th.consistency, true),
            ("min_h_coefficient", stats.min_h_coefficient, th.h_coefficient, false),
        ];
        for (name, value, limit, below) in checks {
            let ok = if below { value < limit } else { value > limit };
            if !ok {
                let rel = if below { ">=" } else { "<=" };
                reasons.push(format!("{name} {value:e} {rel} {limit:e}"));
            }
        }
        if let Some(c) = audit.class {
            let name = match c {
                SpecialClass::ClassI => "class I",
                SpecialClass::ClassII => "class II",
            };
            reasons.push(format!("curve is in special {name}"));
        }
        if reasons.is_empty() {
            Verdict::QuasiMinimal
        } else {
            Verdict::NotQuasiMinimal
        }
    };
    let lightlike = points.iter().filter(|p| p.causal == Causal::Lightlike).count();
    Ok(GeometryReport {
        kind,
        eta: curve.eta(),
        law: curve.law(),
        interval: [a, b],
        samples: n,
        tol,
        v_probe: v,
        fd_step: opts.fd_step,
        verdict,
        reasons,
        thresholds: th,
        stats: Some(stats),
        special_class: Some(audit),
        lightlike_fraction: lightlike as f64 / n as f64,
        points,
    })
}

impl GeometryReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::QuasiMinimal)
    }

    /// Plain-text summary table.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let [a, b] = self.interval;
        let _ = writeln!(s, "type        {}", self.kind);
        let _ = writeln!(s, "eta         {}", self.eta);
        let _ = writeln!(s, "interval    [{a}, {b}]  ({} samples)", self.samples);
        let _ = writeln!(s, "tolerance   {:e}", self.tol);
        let _ = writeln!(s, "verdict     {}", self.verdict);
        for r in &self.reasons {
            let _ = writeln!(s, "  - {r}");
        }
        if let Some(st) = &self.stats {
            let _ = writeln!(s, "{:<20} {:>14} {:>14} {:>12}", "check", "max", "mean", "at u");
            let mut row = |name: &str, x: &Option<Stat>| {
                if let Some(x) = x {
                    let _ = writeln!(s, "{:<20} {:>14.6e} {:>14.6e} {:>12.6}", name, x.max, x.mean, x.at);
                }
            };
            row("qm_residual", &Some(st.qm_residual));
            row("qm_residual_fd", &st.qm_residual_fd);
            row("arc_residual", &Some(st.arc_residual));
            row("consistency", &Some(st.consistency));
            row("gram_deviation", &Some(st.gram_deviation));
            row("fd_deviation", &st.fd_deviation);
            row("ode_residual", &st.ode_residual);
            let _ = writeln!(s, "{:<20} {:>14.6e}", "min |h_i|", st.min_h_coefficient);
            let _ = writeln!(s, "{:<20} {:>14.6e}", "max |<H,H>|", st.max_abs_hh);
            let _ = writeln!(s, "{:<20} {:>14.4}", "lightlike fraction", self.lightlike_fraction);
        }
        s
    }
}

/// `max |phi_i - phi_j|` between the angle column of a curve and the one
/// obtained with the opposite sign, after mirroring (`phi -> -phi`).
pub fn eta_symmetry_defect(a: &GeneratingCurve, b: &GeneratingCurve) -> f64 {
    a.phi().iter().zip(b.phi()).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max)
}

/// The two integrated coordinate columns, in stored order.
pub fn integrated_columns(curve: &GeneratingCurve) -> [Vec<f64>; 2] {
    integrated_slots(curve.kind()).map(|s| curve.column(s + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_curve, generate_with_law, special_class_curve, Constants};
    use crate::profile::Profile;

    fn cosh_elliptic() -> GeneratingCurve {
        let p = Profile::cosh(1.0, 1.0, (-2.0, 2.0)).unwrap();
        generate_curve(RotationType::Elliptic, &p, (-1.0, 1.0), Sign::Plus, &Constants::default(), 128, 1e-10).unwrap()
    }

    #[test]
    fn fd5_exact_on_quartics() {
        let h = 0.1;
        let vals: Vec<f64> = (0..9).map(|i| (i as f64 * h).powi(4)).collect();
        for k in 0..9 {
            let x = k as f64 * h;
            let (d1, d2) = fd5(&vals, k, h);
            assert!((d1 - 4.0 * x.powi(3)).abs() < 1e-10, "k={k}");
            assert!((d2 - 12.0 * x * x).abs() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn generated_curve_is_quasi_minimal() {
        let c = cosh_elliptic();
        let r = verify_curve(&c, &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::QuasiMinimal, "{}", r.summary());
        let st = r.stats.unwrap();
        assert!(st.qm_residual.max < 1e-8);
        assert!(st.arc_residual.max < 1e-9);
        assert!(st.fd_deviation.unwrap().max < 1e-5);
        assert!(st.qm_residual_fd.unwrap().max < 1e-5);
        assert_eq!(r.lightlike_fraction, 1.0);
        assert!(r.points.iter().all(|p| p.qm_eta == Sign::Plus));
    }

    #[test]
    fn corrupted_column_fails() {
        let c = cosh_elliptic();
        for col in 0..4 {
            let vals: Vec<f64> = c.column(col).iter().map(|x| 1.01 * x).collect();
            let bad = c.with_column(col, &vals).unwrap();
            let r = verify_curve(&bad, &VerifyOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::NotQuasiMinimal, "column {col}");
        }
    }

    #[test]
    fn wrong_law_fails() {
        let p = Profile::constant(1.0, (0.0, 7.0)).unwrap();
        let c = generate_with_law(
            RotationType::Elliptic,
            &p,
            (0.0, 3.0),
            Sign::Plus,
            AngleLaw::Uniform { rate: 0.5 },
            &Constants::default(),
            64,
            1e-10,
        )
        .unwrap();
        let r = verify_curve(&c, &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotQuasiMinimal);
        // the identity holds for the stored data, only the law is wrong
        assert!(r.stats.unwrap().arc_residual.max < 1e-9);
    }

    #[test]
    fn special_classes_are_rejected() {
        for kind in RotationType::ALL {
            for class in [SpecialClass::ClassI, SpecialClass::ClassII] {
                let c = special_class_curve(kind, class, 64).unwrap();
                let audit = special_class_audit(&c, 0.3).unwrap();
                assert_eq!(audit.class, Some(class), "{kind}");
                assert_eq!(audit.verdict, Verdict::NotQuasiMinimal);
                assert!(audit.hh_identity < 1e-9, "{kind} {class:?} {}", audit.hh_identity);
                if class == SpecialClass::ClassI {
                    assert!(audit.n1_variation.unwrap() < 1e-6, "{kind} {:?}", audit.n1_variation);
                }
                let r = verify_curve(&c, &VerifyOptions::default()).unwrap();
                assert_eq!(r.verdict, Verdict::NotQuasiMinimal);
            }
        }
    }

    #[test]
    fn parabolic_ode_detects_perturbation() {
        let f = Profile::linear(1.0, 0.0, (0.5, 4.0)).unwrap();
        let c = generate_curve(RotationType::Parabolic, &f, (1.0, 3.0), Sign::Plus, &Constants::default(), 256, 1e-10)
            .unwrap();
        let good = (0..c.len()).map(|k| parabolic_ode_residual(&c, k).unwrap()).fold(0.0, f64::max);
        assert!(good < 1e-6, "{good}");
        let phi: Vec<f64> = c.grid().iter().zip(c.phi()).map(|(u, p)| p + 0.1 * u).collect();
        let bad = c.with_column(0, &phi).unwrap();
        let worst = (0..c.len()).map(|k| parabolic_ode_residual(&bad, k).unwrap()).fold(0.0, f64::max);
        assert!(worst > 1e-3, "{worst}");
    }

    #[test]
    fn report_json_round_trip() {
        let c = cosh_elliptic();
        let r = verify_curve(&c, &VerifyOptions::default()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: GeometryReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.verdict, r.verdict);
        assert_eq!(back.stats.unwrap().qm_residual.max, r.stats.unwrap().qm_residual.max);
    }
}
