//! Minimal deterministic SVG line plots.

use std::fmt::Write as _;

use crate::generator::GeneratingCurve;
use crate::io::fmt_f64;
use crate::profile::RotationType;
use crate::verifier::GeometryReport;

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 3] = ["#1f5fa8", "#c0392b", "#2e8b57"];

pub struct Series<'a> {
    pub label: &'a str,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.5 * (1.0 + lo.abs());
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders one or more series over a shared box. `notes` are printed under
/// the title verbatim.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series], notes: &[String]) -> String {
    let (x0, x1) = bounds(series.iter().flat_map(|s| s.xs.iter().copied()));
    let (y0, y1) = bounds(series.iter().flat_map(|s| s.ys.iter().copied()));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" font-size="15" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    for (i, n) in notes.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
            LEFT + 6.0,
            TOP + 14.0 + 13.0 * i as f64,
            escape(n)
        );
    }
    for t in 0..=4 {
        let fx = x0 + (x1 - x0) * t as f64 / 4.0;
        let fy = y0 + (y1 - y0) * t as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{:.4}</text>"#,
            sx(fx),
            H - BOTTOM + 14.0,
            fx
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{:.4e}</text>"#,
            LEFT - 4.0,
            sy(fy) + 3.0,
            fy
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(ylabel)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = ser
            .xs
            .iter()
            .zip(ser.ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = TOP + ph - 10.0 - 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{color}" text-anchor="end">{}</text>"#,
            W - RIGHT - 6.0,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `(file name, svg)` for the profile, angle, Gauss curvature and residual plots.
pub fn curve_plots(curve: &GeneratingCurve, report: &GeometryReport) -> Vec<(String, String)> {
    let kind = curve.kind();
    let pname = if kind == RotationType::Parabolic { "f" } else { "r" };
    let us = curve.grid();
    let prof: Vec<f64> = us.iter().map(|&u| curve.profile().jet(u).p).collect();
    let ru: Vec<f64> = report.points.iter().map(|p| p.u).collect();
    let gauss: Vec<f64> = report.points.iter().map(|p| p.gauss).collect();
    let floor = |x: f64| x.max(1e-18).log10();
    let qm: Vec<f64> = report.points.iter().map(|p| floor(p.qm_residual)).collect();
    let arc: Vec<f64> = report.points.iter().map(|p| floor(p.arc_residual)).collect();
    let mut notes = Vec::new();
    if let Some(st) = &report.stats {
        notes.push(format!("max qm_residual = {}", fmt_f64(st.qm_residual.max)));
        notes.push(format!("max arc_residual = {}", fmt_f64(st.arc_residual.max)));
    }
    notes.push(format!("verdict: {}", report.verdict));
    let title = format!("{kind} eta = {}", curve.eta());
    vec![
        (
            "profile.svg".to_string(),
            line_plot(
                &format!("profile {pname}(u), {title}"),
                "u",
                pname,
                &[Series { label: pname, xs: us, ys: &prof }],
                &[],
            ),
        ),
        (
            "phi.svg".to_string(),
            line_plot(
                &format!("angle phi(u), {title}"),
                "u",
                "phi",
                &[Series { label: "phi", xs: us, ys: curve.phi() }],
                &[],
            ),
        ),
        (
            "gauss.svg".to_string(),
            line_plot(
                &format!("Gauss curvature, {title}"),
                "u",
                "K",
                &[Series { label: "K", xs: &ru, ys: &gauss }],
                &[],
            ),
        ),
        (
            "residual.svg".to_string(),
            line_plot(
                &format!("residuals, {title}"),
                "u",
                "log10 residual",
                &[
                    Series { label: "qm_residual", xs: &ru, ys: &qm },
                    Series { label: "arc_residual", xs: &ru, ys: &arc },
                ],
                &notes,
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_deterministic_and_escaped() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [1.0, 0.5, 2.0];
        let a = line_plot("a < b", "u", "y", &[Series { label: "s", xs: &xs, ys: &ys }], &["max = 2.0".into()]);
        let b = line_plot("a < b", "u", "y", &[Series { label: "s", xs: &xs, ys: &ys }], &["max = 2.0".into()]);
        assert_eq!(a, b);
        assert!(a.contains("a &lt; b"));
        assert!(a.contains("max = 2.0"));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn constant_series_does_not_divide_by_zero() {
        let xs = [0.0, 1.0];
        let ys = [3.0, 3.0];
        let s = line_plot("c", "u", "y", &[Series { label: "s", xs: &xs, ys: &ys }], &[]);
        assert!(!s.contains("NaN") && !s.contains("inf"));
    }
}
