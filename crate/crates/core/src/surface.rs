//! The rotational surface swept by a generating curve, with its adapted
//! frame, second fundamental form and curvatures in closed form.
//!
//! Parametrisations:
//!
//! * elliptic `z = (x1, x2, r cos v, r sin v)`
//! * hyperbolic `z = (r cosh v, x2, r sinh v, x4)`
//! * parabolic `z = x1 e1 + sqrt2 v f e4 + f xi1 + (-v^2 f + g) xi2`
//!
//! The tangent frame is `X = z_u`, `Y = z_v / |z_v|`; the normals satisfy
//! `<n1,n1> = eps`, `<n2,n2> = -eps` with `eps = -1` only for hyperbolic case B.

use serde::Serialize;
use thiserror::Error;

use crate::generator::{CurveError, CurveJet, GeneratingCurve};
use crate::neutral::{causal_character, gram, inner, Causal, MVec4};
use crate::profile::{generality_quantity, RotationType};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("degenerate frame at u = {u}: {what}")]
    Degenerate { u: f64, what: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: MVec4,
    pub y: MVec4,
    pub n1: MVec4,
    pub n2: MVec4,
    pub eps: f64,
}

impl Frame {
    pub fn vectors(&self) -> [MVec4; 4] {
        [self.x, self.y, self.n1, self.n2]
    }

    /// Nominal Gram matrix `diag(1, -1, eps, -eps)`.
    pub fn nominal_gram(&self) -> [[f64; 4]; 4] {
        let d = [1.0, -1.0, self.eps, -self.eps];
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 }))
    }

    /// Largest entry of `|gram - nominal|`.
    pub fn gram_deviation(&self) -> f64 {
        let g = gram(self.vectors());
        let want = self.nominal_gram();
        let mut m = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((g[i][j] - want[i][j]).abs());
            }
        }
        m
    }
}

/// Coefficients of a normal vector on `(n1, n2)`.
pub type NormalCoeffs = [f64; 2];

/// `sigma(X,X)`, `sigma(X,Y)`, `sigma(Y,Y)` on the normal frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecondForm {
    pub xx: NormalCoeffs,
    pub xy: NormalCoeffs,
    pub yy: NormalCoeffs,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanCurvature {
    pub h1: f64,
    pub h2: f64,
    pub vector: MVec4,
    /// `<H, H>` of the assembled vector.
    pub hh: f64,
}

impl MeanCurvature {
    pub fn causal(&self) -> Causal {
        causal_character(self.vector)
    }
}

/// Everything known at one surface point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceJet {
    pub u: f64,
    pub v: f64,
    pub z: MVec4,
    pub z_u: MVec4,
    pub z_v: MVec4,
    pub z_uu: MVec4,
    pub z_uv: MVec4,
    pub z_vv: MVec4,
    pub frame: Frame,
    pub first: FirstForm,
    pub sigma: SecondForm,
    pub k: f64,
    pub h: MeanCurvature,
}

impl SurfaceJet {
    fn normal(&self, c: NormalCoeffs) -> MVec4 {
        c[0] * self.frame.n1 + c[1] * self.frame.n2
    }

    /// Gauss curvature from the Gauss equation on the orthonormal tangent frame.
    pub fn k_from_sigma(&self) -> f64 {
        let (xx, xy, yy) = (self.normal(self.sigma.xx), self.normal(self.sigma.xy), self.normal(self.sigma.yy));
        let (x, y) = (self.frame.x, self.frame.y);
        let den = inner(x, x) * inner(y, y) - inner(x, y).powi(2);
        (inner(xx, yy) - inner(xy, xy)) / den
    }

    /// `<H,H>` from the coefficients with the nominal normal norms.
    pub fn hh_from_coefficients(&self) -> f64 {
        let e = self.frame.eps;
        e * self.h.h1 * self.h.h1 - e * self.h.h2 * self.h.h2
    }
}

fn nb(a: f64, b: f64, p: f64, q: f64) -> MVec4 {
    MVec4::from_null_basis(a, b, p, q)
}

fn check_regular(kind: RotationType, cj: &CurveJet) -> Result<(), SurfaceError> {
    let (p, dp) = (cj.profile.p, cj.profile.dp);
    let u = cj.u;
    if p == 0.0 {
        return Err(SurfaceError::Degenerate { u, what: "profile vanishes" });
    }
    match kind {
        RotationType::Parabolic if dp == 0.0 => Err(SurfaceError::Degenerate { u, what: "f' = 0" }),
        RotationType::HyperbolicA | RotationType::HyperbolicB if dp * dp == 1.0 => {
            Err(SurfaceError::Degenerate { u, what: "(r')^2 = 1" })
        }
        _ => Ok(()),
    }
}

/// Surface point `z(u, v)`.
pub fn eval_point(curve: &GeneratingCurve, u: f64, v: f64) -> Result<MVec4, SurfaceError> {
    let st = curve.state_at(u)?;
    Ok(point_from_coords(curve.kind(), st.coords, v))
}

pub(crate) fn point_from_coords(kind: RotationType, c: [f64; 3], v: f64) -> MVec4 {
    match kind {
        RotationType::Elliptic => {
            let [x1, x2, r] = c;
            MVec4::new(x1, x2, r * v.cos(), r * v.sin())
        }
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            let [r, x2, x4] = c;
            MVec4::new(r * v.cosh(), x2, r * v.sinh(), x4)
        }
        RotationType::Parabolic => {
            let [x1, f, g] = c;
            nb(x1, std::f64::consts::SQRT_2 * v * f, f, -v * v * f + g)
        }
    }
}

/// The adapted frame at parameter `v` over a curve jet.
pub fn frame(kind: RotationType, cj: &CurveJet, v: f64) -> Result<Frame, SurfaceError> {
    check_regular(kind, cj)?;
    let ProfileJetParts { dp, .. } = parts(cj);
    let [d0, d1, d2] = cj.d1;
    Ok(match kind {
        RotationType::Elliptic => {
            let w = (1.0 + dp * dp).sqrt();
            let (s, c) = v.sin_cos();
            Frame {
                x: MVec4::new(d0, d1, dp * c, dp * s),
                y: MVec4::new(0.0, 0.0, -s, c),
                n1: MVec4::new(-d1 / w, d0 / w, 0.0, 0.0),
                n2: MVec4::new(dp * d0 / w, dp * d1 / w, w * c, w * s),
                eps: 1.0,
            }
        }
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            let eps = kind.epsilon();
            let s = (eps * (dp * dp - 1.0)).sqrt();
            let (sh, ch) = (v.sinh(), v.cosh());
            let (x2, x4) = (d1, d2);
            let m = 1.0 - dp * dp;
            Frame {
                x: MVec4::new(dp * ch, x2, dp * sh, x4),
                y: MVec4::new(sh, 0.0, ch, 0.0),
                n1: MVec4::new(0.0, x4 / s, 0.0, x2 / s),
                n2: MVec4::new(m * ch / s, -dp * x2 / s, m * sh / s, -dp * x4 / s),
                eps,
            }
        }
        RotationType::Parabolic => {
            let s2 = std::f64::consts::SQRT_2;
            let (x1, g) = (d0, d2);
            Frame {
                x: nb(x1, s2 * v * dp, dp, -v * v * dp + g),
                y: nb(0.0, 1.0, 0.0, -s2 * v),
                n1: nb(1.0, 0.0, 0.0, x1 / dp),
                n2: nb(x1, s2 * v * dp, dp, (1.0 + dp * g - v * v * dp * dp) / dp),
                eps: 1.0,
            }
        }
    })
}

struct ProfileJetParts {
    p: f64,
    dp: f64,
    d2p: f64,
}

fn parts(cj: &CurveJet) -> ProfileJetParts {
    ProfileJetParts { p: cj.profile.p, dp: cj.profile.dp, d2p: cj.profile.d2p }
}

/// Second fundamental form on `(n1, n2)`; independent of `v`.
pub fn second_form(kind: RotationType, cj: &CurveJet) -> Result<SecondForm, SurfaceError> {
    check_regular(kind, cj)?;
    let ProfileJetParts { p, dp, d2p } = parts(cj);
    let planar = cj.planar_quantity(kind).value;
    Ok(match kind {
        RotationType::Elliptic => {
            let w = (1.0 + dp * dp).sqrt();
            SecondForm { xx: [planar / w, d2p / w], xy: [0.0, 0.0], yy: [0.0, -w / p] }
        }
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            let eps = kind.epsilon();
            let s = (eps * (dp * dp - 1.0)).sqrt();
            // planar is x2'x4''-x2''x4'; the frame uses x4'x2''-x4''x2'
            let b = -planar;
            SecondForm { xx: [eps * b / s, -eps * d2p / s], xy: [0.0, 0.0], yy: [0.0, eps * (dp * dp - 1.0) / (p * s)] }
        }
        RotationType::Parabolic => SecondForm { xx: [planar / dp, d2p / dp], xy: [0.0, 0.0], yy: [0.0, -dp / p] },
    })
}

/// `K = -r''/r` (or `-f''/f`).
pub fn gauss_curvature(cj: &CurveJet) -> f64 {
    -cj.profile.d2p / cj.profile.p
}

/// Mean curvature coefficients `(h1, h2)` with `H = h1 n1 + h2 n2`.
pub fn mean_curvature_coeffs(kind: RotationType, cj: &CurveJet) -> Result<(f64, f64), SurfaceError> {
    let s = second_form(kind, cj)?;
    // H = (sigma(X,X) - sigma(Y,Y)) / 2 since <X,X> = 1, <Y,Y> = -1
    Ok((0.5 * (s.xx[0] - s.yy[0]), 0.5 * (s.xx[1] - s.yy[1])))
}

pub fn mean_curvature(kind: RotationType, cj: &CurveJet, v: f64) -> Result<MeanCurvature, SurfaceError> {
    let (h1, h2) = mean_curvature_coeffs(kind, cj)?;
    let fr = frame(kind, cj, v)?;
    let vector = h1 * fr.n1 + h2 * fr.n2;
    Ok(MeanCurvature { h1, h2, vector, hh: inner(vector, vector) })
}

/// The scalar `lambda` with `H = lambda (eta n1 + n2)` on a quasi-minimal
/// curve; it depends only on the profile.
pub fn quasi_minimal_scale(kind: RotationType, cj: &CurveJet) -> f64 {
    let ProfileJetParts { p, dp, .. } = parts(cj);
    let q = generality_quantity(kind, cj.profile).value;
    match kind {
        RotationType::Elliptic => q / (2.0 * p * (1.0 + dp * dp).sqrt()),
        RotationType::HyperbolicA => -q / (2.0 * p * (dp * dp - 1.0).sqrt()),
        RotationType::HyperbolicB => q / (2.0 * p * (1.0 - dp * dp).sqrt()),
        RotationType::Parabolic => q / (2.0 * p * dp),
    }
}

/// Surface data at `(u, v)` from a known curve jet.
pub fn jet_from_curve_jet(kind: RotationType, cj: &CurveJet, v: f64) -> Result<SurfaceJet, SurfaceError> {
    let fr = frame(kind, cj, v)?;
    let sigma = second_form(kind, cj)?;
    let (h1, h2) = mean_curvature_coeffs(kind, cj)?;
    let hv = h1 * fr.n1 + h2 * fr.n2;
    let h = MeanCurvature { h1, h2, vector: hv, hh: inner(hv, hv) };
    let ProfileJetParts { p, dp, d2p } = parts(cj);
    let (c, d1, d2) = (cj.pos, cj.d1, cj.d2);
    let z = point_from_coords(kind, c, v);
    let (z_u, z_v, z_uu, z_uv, z_vv) = match kind {
        RotationType::Elliptic => {
            let (s, co) = v.sin_cos();
            (
                MVec4::new(d1[0], d1[1], dp * co, dp * s),
                MVec4::new(0.0, 0.0, -p * s, p * co),
                MVec4::new(d2[0], d2[1], d2p * co, d2p * s),
                MVec4::new(0.0, 0.0, -dp * s, dp * co),
                MVec4::new(0.0, 0.0, -p * co, -p * s),
            )
        }
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            let (sh, ch) = (v.sinh(), v.cosh());
            (
                MVec4::new(dp * ch, d1[1], dp * sh, d1[2]),
                MVec4::new(p * sh, 0.0, p * ch, 0.0),
                MVec4::new(d2p * ch, d2[1], d2p * sh, d2[2]),
                MVec4::new(dp * sh, 0.0, dp * ch, 0.0),
                MVec4::new(p * ch, 0.0, p * sh, 0.0),
            )
        }
        RotationType::Parabolic => {
            let s2 = std::f64::consts::SQRT_2;
            (
                nb(d1[0], s2 * v * dp, dp, -v * v * dp + d1[2]),
                nb(0.0, s2 * p, 0.0, -2.0 * v * p),
                nb(d2[0], s2 * v * d2p, d2p, -v * v * d2p + d2[2]),
                nb(0.0, s2 * dp, 0.0, -2.0 * v * dp),
                nb(0.0, 0.0, 0.0, -2.0 * p),
            )
        }
    };
    let first = FirstForm { e: inner(z_u, z_u), f: inner(z_u, z_v), g: inner(z_v, z_v) };
    Ok(SurfaceJet { u: cj.u, v, z, z_u, z_v, z_uu, z_uv, z_vv, frame: fr, first, sigma, k: gauss_curvature(cj), h })
}

pub fn eval_jet(curve: &GeneratingCurve, u: f64, v: f64) -> Result<SurfaceJet, SurfaceError> {
    let cj = curve.jet_at(u)?;
    jet_from_curve_jet(curve.kind(), &cj, v)
}
