//! Generating curves of quasi-minimal rotational surfaces.
//!
//! Every spacelike arc-length curve of the three families is fixed, up to
//! translation, by its profile (`r` or `f`) and an angle function `phi`:
//!
//! * elliptic `(x1, x2, r, 0)`: `x1' = sqrt(1+r'^2) cos phi`, `x2' = sqrt(1+r'^2) sin phi`
//! * hyperbolic A `(r, x2, 0, x4)`: `x2' = sqrt(r'^2-1) sinh phi`, `x4' = sqrt(r'^2-1) cosh phi`
//! * hyperbolic B: `x2' = sqrt(1-r'^2) cosh phi`, `x4' = sqrt(1-r'^2) sinh phi`
//! * parabolic `x1 e1 + f xi1 + g xi2`: `x1' = phi`, `g' = (phi^2 - 1) / (2 f')`
//!
//! The quasi-minimal curves are those whose angle obeys the first-order law
//! in [`AngleLaw::QuasiMinimal`]. [`AngleLaw::Uniform`] gives the planar and
//! special-class curves used to exercise the non-existence results.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{
    generality_quantity, slope_excess, validity_check, Profile, ProfileError, ProfileJet, RotationType, Scaled,
    ValidityReport,
};
use crate::quadrature::{AdaptiveSimpson, QuadratureError};

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("profile is not valid for {}: {}", .0.kind, .0.summary())]
    Validity(ValidityReport),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("at least {MIN_SAMPLES} samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("{what} at u = {u}")]
    Singular { u: f64, what: &'static str },
    #[error("{0}")]
    BadInput(String),
}

/// The formal sign `eta` selecting one of the two lightlike normal
/// directions. It carries no orientation meaning beyond that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;

    fn try_from(v: i32) -> Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Integration constants of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Base point of the angle integral; `None` means the left end of the interval.
    pub u0: Option<f64>,
    /// `phi(u0)` for elliptic and hyperbolic curves.
    pub phi0: f64,
    /// Values of the two integrated coordinates at the left end:
    /// `(x1, x2)` elliptic, `(x2, x4)` hyperbolic, `(x1, g)` parabolic.
    pub offsets: [f64; 2],
    /// The parabolic constant `C`.
    pub c: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { u0: None, phi0: 0.0, offsets: [0.0; 2], c: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngleLaw {
    /// `phi' = eta (r r''+(r')^2+1) / (r (1+(r')^2))` (elliptic),
    /// `phi' = eta (r r''+(r')^2-1) / (r (1-(r')^2))` (hyperbolic),
    /// `phi = f' (C + eta (-1/f' + \int du/f))` (parabolic).
    QuasiMinimal,
    /// `phi = phi0 + rate (u - u0)`.
    Uniform { rate: f64 },
}

/// Column names of the stored coordinate triple.
pub fn coordinate_names(kind: RotationType) -> [&'static str; 3] {
    match kind {
        RotationType::Elliptic => ["x1", "x2", "r"],
        RotationType::HyperbolicA | RotationType::HyperbolicB => ["r", "x2", "x4"],
        RotationType::Parabolic => ["x1", "f", "g"],
    }
}

/// Index of the profile coordinate in the stored triple.
pub fn profile_slot(kind: RotationType) -> usize {
    match kind {
        RotationType::Elliptic => 2,
        RotationType::HyperbolicA | RotationType::HyperbolicB => 0,
        RotationType::Parabolic => 1,
    }
}

/// Indices of the two coordinates obtained by integration.
pub fn integrated_slots(kind: RotationType) -> [usize; 2] {
    match kind {
        RotationType::Elliptic => [0, 1],
        RotationType::HyperbolicA | RotationType::HyperbolicB => [1, 2],
        RotationType::Parabolic => [0, 2],
    }
}

/// The elliptic/hyperbolic angle derivative for `eta = +1`.
pub fn phi_integrand(kind: RotationType, profile: &Profile, u: f64) -> Result<f64, GenerateError> {
    let jet = profile.eval_jet(u)?;
    integrand_at(kind, jet, u)
}

fn integrand_at(kind: RotationType, jet: ProfileJet, u: f64) -> Result<f64, GenerateError> {
    let ProfileJet { p, dp, .. } = jet;
    if p == 0.0 {
        return Err(GenerateError::Singular { u, what: "r = 0" });
    }
    let q = generality_quantity(kind, jet).value;
    match kind {
        RotationType::Elliptic => Ok(q / (p * (1.0 + dp * dp))),
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            if slope_excess(jet).vanishes() {
                return Err(GenerateError::Singular { u, what: "(r')^2 = 1" });
            }
            Ok(q / (p * (1.0 - dp * dp)))
        }
        RotationType::Parabolic => {
            Err(GenerateError::BadInput("the parabolic angle has a closed form, not an integrand".into()))
        }
    }
}

/// `phi(u)` from its base point by a single quadrature.
///
/// Elliptic and hyperbolic: `phi0 + eta \int_{u0}^{u} phi_integrand`.
/// Parabolic: `f'(u) (C + eta (-1/f'(u) + \int_{u0}^{u} du/f))`.
pub fn phi_of_u(
    kind: RotationType,
    profile: &Profile,
    u0: f64,
    u: f64,
    eta: Sign,
    constants: &Constants,
    tol: f64,
) -> Result<f64, GenerateError> {
    for x in [u0, u] {
        profile.eval_jet(x)?;
    }
    let quad = AdaptiveSimpson::new(tol);
    let e = eta.value();
    match kind {
        RotationType::Parabolic => {
            let df = profile.jet(u).dp;
            if df == 0.0 {
                return Err(GenerateError::Singular { u, what: "f' = 0" });
            }
            let int = quad.integrate(|t| 1.0 / profile.jet(t).p, u0, u)?;
            Ok(df * (constants.c + e * (-1.0 / df + int)))
        }
        _ => {
            let int = quad.integrate(|t| integrand_at(kind, profile.jet(t), t).unwrap_or(f64::NAN), u0, u)?;
            Ok(constants.phi0 + e * int)
        }
    }
}

/// Curve position at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveState {
    pub u: f64,
    pub phi: f64,
    pub coords: [f64; 3],
}

/// Position and first two derivatives of the generating curve, all from the
/// angle law and the profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet {
    pub u: f64,
    pub profile: ProfileJet,
    pub phi: f64,
    pub dphi: f64,
    pub pos: [f64; 3],
    pub d1: [f64; 3],
    pub d2: [f64; 3],
}

impl CurveJet {
    /// `x1'x2''-x1''x2'` (elliptic), `x2'x4''-x2''x4'` (hyperbolic),
    /// `x1''f'-x1'f''` (parabolic).
    pub fn planar_quantity(&self, kind: RotationType) -> Scaled {
        let (d1, d2) = (self.d1, self.d2);
        let (a, b) = match kind {
            RotationType::Elliptic => (d1[0] * d2[1], d2[0] * d1[1]),
            RotationType::HyperbolicA | RotationType::HyperbolicB => (d1[1] * d2[2], d2[1] * d1[2]),
            RotationType::Parabolic => (d2[0] * d1[1], d1[0] * d2[1]),
        };
        Scaled { value: a - b, scale: a.abs() + b.abs() }
    }

    pub fn generality(&self, kind: RotationType) -> Scaled {
        generality_quantity(kind, self.profile)
    }
}

/// Raw sampled columns of a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveData {
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub coords: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingCurve {
    kind: RotationType,
    profile: Profile,
    eta: Sign,
    law: AngleLaw,
    constants: Constants,
    quad_tol: f64,
    data: CurveData,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("u = {u} is outside the curve range [{lo}, {hi}]")]
    OutOfRange { u: f64, lo: f64, hi: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("{what} at u = {u}")]
    Singular { u: f64, what: &'static str },
}

impl GeneratingCurve {
    /// Assembles a curve from stored columns, e.g. after reading a file.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        kind: RotationType,
        profile: Profile,
        eta: Sign,
        law: AngleLaw,
        constants: Constants,
        quad_tol: f64,
        data: CurveData,
    ) -> Result<Self, GenerateError> {
        let n = data.grid.len();
        if n < 2 || data.phi.len() != n || data.coords.len() != n {
            return Err(GenerateError::BadInput(format!(
                "column lengths differ or are too short: u {}, phi {}, coords {}",
                n,
                data.phi.len(),
                data.coords.len()
            )));
        }
        if !(quad_tol.is_finite() && quad_tol > 0.0) {
            return Err(GenerateError::BadInput(format!("tolerance must be positive, got {quad_tol}")));
        }
        if data.grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(GenerateError::BadInput("u column must be strictly increasing".into()));
        }
        let finite = data.grid.iter().chain(&data.phi).chain(data.coords.iter().flatten()).all(|x| x.is_finite());
        if !finite {
            return Err(GenerateError::BadInput("curve data contains non-finite values".into()));
        }
        for u in [data.grid[0], data.grid[n - 1]] {
            profile.eval_jet(u)?;
        }
        Ok(GeneratingCurve { kind, profile, eta, law, constants, quad_tol, data })
    }

    pub fn kind(&self) -> RotationType {
        self.kind
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn eta(&self) -> Sign {
        self.eta
    }

    pub fn law(&self) -> AngleLaw {
        self.law
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn data(&self) -> &CurveData {
        &self.data
    }

    pub fn grid(&self) -> &[f64] {
        &self.data.grid
    }

    pub fn phi(&self) -> &[f64] {
        &self.data.phi
    }

    pub fn coords(&self) -> &[[f64; 3]] {
        &self.data.coords
    }

    pub fn len(&self) -> usize {
        self.data.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.grid.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.data.grid[0], self.data.grid[self.len() - 1])
    }

    /// The same curve with column `col` replaced (0 is `phi`, 1..=3 the coordinates).
    pub fn with_column(&self, col: usize, values: &[f64]) -> Result<Self, GenerateError> {
        if values.len() != self.len() || col > 3 {
            return Err(GenerateError::BadInput(format!("cannot replace column {col}")));
        }
        let mut data = self.data.clone();
        for (i, &v) in values.iter().enumerate() {
            match col {
                0 => data.phi[i] = v,
                c => data.coords[i][c - 1] = v,
            }
        }
        Self::from_parts(self.kind, self.profile.clone(), self.eta, self.law, self.constants, self.quad_tol, data)
    }

    /// Column `col` as a vector (0 is `phi`, 1..=3 the coordinates).
    pub fn column(&self, col: usize) -> Vec<f64> {
        match col {
            0 => self.data.phi.clone(),
            c => self.data.coords.iter().map(|x| x[c - 1]).collect(),
        }
    }

    fn span(&self) -> f64 {
        let (a, b) = self.range();
        b - a
    }

    /// Tolerance share for an integral over a piece of length `len`.
    fn local_tol(&self, len: f64) -> f64 {
        (self.quad_tol * len.abs() / self.span()).max(f64::MIN_POSITIVE)
    }

    /// Coordinate derivatives at a point with angle `phi`.
    pub(crate) fn tangent(&self, jet: ProfileJet, phi: f64) -> [f64; 3] {
        let ProfileJet { dp, .. } = jet;
        match self.kind {
            RotationType::Elliptic => {
                let w = (1.0 + dp * dp).sqrt();
                [w * phi.cos(), w * phi.sin(), dp]
            }
            RotationType::HyperbolicA => {
                let s = (dp * dp - 1.0).sqrt();
                [dp, s * phi.sinh(), s * phi.cosh()]
            }
            RotationType::HyperbolicB => {
                let s = (1.0 - dp * dp).sqrt();
                [dp, s * phi.cosh(), s * phi.sinh()]
            }
            RotationType::Parabolic => [phi, dp, (phi * phi - 1.0) / (2.0 * dp)],
        }
    }

    /// `phi'` from the angle law at a point where the angle is `phi`.
    pub(crate) fn phi_prime(&self, jet: ProfileJet, phi: f64) -> f64 {
        let e = self.eta.value();
        match (self.law, self.kind) {
            (AngleLaw::Uniform { rate }, _) => rate,
            (AngleLaw::QuasiMinimal, RotationType::Parabolic) => {
                let ProfileJet { p, dp, d2p } = jet;
                d2p / dp * phi + e * (d2p / dp + dp / p)
            }
            (AngleLaw::QuasiMinimal, kind) => {
                let ProfileJet { p, dp, .. } = jet;
                let q = generality_quantity(kind, jet).value;
                let den = match kind {
                    RotationType::Elliptic => p * (1.0 + dp * dp),
                    _ => p * (1.0 - dp * dp),
                };
                e * q / den
            }
        }
    }

    /// Angle at `s` continued from a known angle `base_phi` at `base_u`.
    fn phi_from(&self, base_u: f64, base_phi: f64, s: f64) -> Result<f64, QuadratureError> {
        if s == base_u {
            return Ok(base_phi);
        }
        let e = self.eta.value();
        let quad = AdaptiveSimpson::new(self.local_tol(s - base_u));
        match (self.law, self.kind) {
            (AngleLaw::Uniform { rate }, _) => Ok(base_phi + rate * (s - base_u)),
            (AngleLaw::QuasiMinimal, RotationType::Parabolic) => {
                let c = self.constants.c;
                let b = self.profile.jet(base_u);
                // recover \int_{u0}^{base} du/f from the closed form
                let int_base = e * (base_phi / b.dp - c) + 1.0 / b.dp;
                let int = int_base + quad.integrate(|t| 1.0 / self.profile.jet(t).p, base_u, s)?;
                let df = self.profile.jet(s).dp;
                Ok(df * (c + e * (-1.0 / df + int)))
            }
            (AngleLaw::QuasiMinimal, kind) => {
                let int =
                    quad.integrate(|t| integrand_at(kind, self.profile.jet(t), t).unwrap_or(f64::NAN), base_u, s)?;
                Ok(base_phi + e * int)
            }
        }
    }

    /// Continues the curve from a known state to `s` by local quadrature.
    fn advance(&self, base: &CurveState, s: f64) -> Result<CurveState, QuadratureError> {
        let phi = self.phi_from(base.u, base.phi, s)?;
        let mut coords = base.coords;
        let quad = AdaptiveSimpson::new(self.local_tol(s - base.u));
        for slot in integrated_slots(self.kind) {
            let integrand = |t: f64| match self.phi_from(base.u, base.phi, t) {
                Ok(ph) => self.tangent(self.profile.jet(t), ph)[slot],
                Err(_) => f64::NAN,
            };
            coords[slot] = base.coords[slot] + quad.integrate(integrand, base.u, s)?;
        }
        coords[profile_slot(self.kind)] = self.profile.jet(s).p;
        Ok(CurveState { u: s, phi, coords })
    }

    pub fn node_state(&self, k: usize) -> CurveState {
        CurveState { u: self.data.grid[k], phi: self.data.phi[k], coords: self.data.coords[k] }
    }

    /// Index of the grid node nearest to `u`.
    pub fn nearest_node(&self, u: f64) -> usize {
        let g = &self.data.grid;
        let i = g.partition_point(|&x| x < u);
        if i == 0 {
            0
        } else if i >= g.len() {
            g.len() - 1
        } else if u - g[i - 1] <= g[i] - u {
            i - 1
        } else {
            i
        }
    }

    fn check_range(&self, u: f64) -> Result<(), CurveError> {
        let (lo, hi) = self.range();
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if !(u >= lo - slack && u <= hi + slack) {
            return Err(CurveError::OutOfRange { u, lo, hi });
        }
        Ok(())
    }

    /// Curve state at any `u` in range: stored values at nodes, otherwise a
    /// local quadrature from the nearest node.
    pub fn state_at(&self, u: f64) -> Result<CurveState, CurveError> {
        self.check_range(u)?;
        let k = self.nearest_node(u);
        let base = self.node_state(k);
        if base.u == u {
            return Ok(base);
        }
        Ok(self.advance(&base, u)?)
    }

    /// Builds the jet at a point whose state is already known.
    pub(crate) fn jet_from_state(&self, st: &CurveState) -> Result<CurveJet, CurveError> {
        let jet = self.profile.jet(st.u);
        let ProfileJet { p, dp, d2p } = jet;
        let u = st.u;
        match self.kind {
            RotationType::Parabolic if dp == 0.0 => return Err(CurveError::Singular { u, what: "f' = 0" }),
            RotationType::Parabolic if p == 0.0 => return Err(CurveError::Singular { u, what: "f = 0" }),
            RotationType::HyperbolicA | RotationType::HyperbolicB if slope_excess(jet).vanishes() => {
                return Err(CurveError::Singular { u, what: "(r')^2 = 1" })
            }
            RotationType::HyperbolicA if dp * dp < 1.0 => {
                return Err(CurveError::Singular { u, what: "(r')^2 < 1 on a case A curve" })
            }
            RotationType::HyperbolicB if dp * dp > 1.0 => {
                return Err(CurveError::Singular { u, what: "(r')^2 > 1 on a case B curve" })
            }
            _ => {}
        }
        let phi = st.phi;
        let dphi = self.phi_prime(jet, phi);
        let d1 = self.tangent(jet, phi);
        let d2 = match self.kind {
            RotationType::Elliptic => {
                let w = (1.0 + dp * dp).sqrt();
                let dw = dp * d2p / w;
                let (s, c) = phi.sin_cos();
                [dw * c - w * s * dphi, dw * s + w * c * dphi, d2p]
            }
            RotationType::HyperbolicA => {
                let w = (dp * dp - 1.0).sqrt();
                let dw = dp * d2p / w;
                let (sh, ch) = (phi.sinh(), phi.cosh());
                [d2p, dw * sh + w * ch * dphi, dw * ch + w * sh * dphi]
            }
            RotationType::HyperbolicB => {
                let w = (1.0 - dp * dp).sqrt();
                let dw = -dp * d2p / w;
                let (sh, ch) = (phi.sinh(), phi.cosh());
                [d2p, dw * ch + w * sh * dphi, dw * sh + w * ch * dphi]
            }
            RotationType::Parabolic => {
                let dg = phi * dphi / dp - (phi * phi - 1.0) * d2p / (2.0 * dp * dp);
                [dphi, d2p, dg]
            }
        };
        Ok(CurveJet { u, profile: jet, phi, dphi, pos: st.coords, d1, d2 })
    }

    pub fn jet_at(&self, u: f64) -> Result<CurveJet, CurveError> {
        let st = self.state_at(u)?;
        self.jet_from_state(&st)
    }

    pub fn node_jet(&self, k: usize) -> Result<CurveJet, CurveError> {
        self.jet_from_state(&self.node_state(k))
    }

    /// Angle and coordinates at the left end implied by the constants.
    pub(crate) fn start_state(&self) -> Result<CurveState, GenerateError> {
        let a = self.data.grid[0];
        let u0 = self.constants.u0.unwrap_or(a);
        let phi = match (self.law, self.kind) {
            (AngleLaw::Uniform { rate }, _) => self.constants.phi0 + rate * (a - u0),
            (AngleLaw::QuasiMinimal, kind) => {
                phi_of_u(kind, &self.profile, u0, a, self.eta, &self.constants, self.local_tol(a - u0))?
            }
        };
        let mut coords = [0.0; 3];
        let [i, j] = integrated_slots(self.kind);
        coords[i] = self.constants.offsets[0];
        coords[j] = self.constants.offsets[1];
        coords[profile_slot(self.kind)] = self.profile.jet(a).p;
        Ok(CurveState { u: a, phi, coords })
    }

    /// Differences between each stored cell increment and the increment
    /// recomputed from the angle law: `[phi, c1, c2, c3]` per cell. For the
    /// profile coordinate the stored value is compared with the profile itself.
    pub fn cell_defects(&self, k: usize) -> Result<[f64; 4], CurveError> {
        let base = self.node_state(k);
        let next = self.node_state(k + 1);
        let want = self.advance(&base, next.u)?;
        let ps = profile_slot(self.kind);
        let mut d = [next.phi - want.phi, 0.0, 0.0, 0.0];
        for s in 0..3 {
            d[s + 1] = if s == ps {
                // both ends against the profile
                (next.coords[s] - want.coords[s]).abs().max((base.coords[s] - self.profile.jet(base.u).p).abs())
            } else {
                next.coords[s] - want.coords[s]
            };
        }
        Ok(d)
    }
}

fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    g[n - 1] = b;
    g
}

/// Builds a curve with an arbitrary angle law. Only the regularity needed by
/// the formulas is checked (`r > 0`, hyperbolic case, `f, f' != 0`); the
/// generality quantity may vanish.
#[allow(clippy::too_many_arguments)]
pub fn generate_with_law(
    kind: RotationType,
    profile: &Profile,
    interval: (f64, f64),
    eta: Sign,
    law: AngleLaw,
    constants: &Constants,
    n_samples: usize,
    tol: f64,
) -> Result<GeneratingCurve, GenerateError> {
    if n_samples < MIN_SAMPLES {
        return Err(GenerateError::TooFewSamples(n_samples));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(GenerateError::BadInput(format!("tolerance must be positive, got {tol}")));
    }
    let (a, b) = interval;
    let report = validity_check(profile, kind, interval)?;
    let regular = report.issues.iter().all(|i| {
        matches!(
            i,
            crate::profile::ValidityIssue::GeneralityVanishes { .. }
                | crate::profile::ValidityIssue::GeneralitySignChange { .. }
        )
    });
    if !regular || (law == AngleLaw::QuasiMinimal && !report.is_valid()) {
        return Err(GenerateError::Validity(report));
    }
    let u0 = constants.u0.unwrap_or(a);
    if !(u0 >= a && u0 <= b) {
        return Err(GenerateError::BadInput(format!("base point u0 = {u0} is outside [{a}, {b}]")));
    }
    let grid = uniform_grid(a, b, n_samples);
    let n = grid.len();
    let mut curve = GeneratingCurve {
        kind,
        profile: profile.clone(),
        eta,
        law,
        constants: Constants { u0: Some(u0), ..*constants },
        quad_tol: tol,
        data: CurveData { grid, phi: vec![0.0; n], coords: vec![[0.0; 3]; n] },
    };
    let mut state = curve.start_state()?;
    curve.data.phi[0] = state.phi;
    curve.data.coords[0] = state.coords;
    for k in 1..n {
        state = curve.advance(&state, curve.data.grid[k])?;
        curve.data.phi[k] = state.phi;
        curve.data.coords[k] = state.coords;
    }
    Ok(curve)
}

/// Generating curve of a quasi-minimal rotational surface for a profile that
/// passes [`validity_check`].
pub fn generate_curve(
    kind: RotationType,
    profile: &Profile,
    interval: (f64, f64),
    eta: Sign,
    constants: &Constants,
    n_samples: usize,
    tol: f64,
) -> Result<GeneratingCurve, GenerateError> {
    generate_with_law(kind, profile, interval, eta, AngleLaw::QuasiMinimal, constants, n_samples, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialClass {
    /// Planar quantity vanishes: the normal `n1` is constant.
    ClassI,
    /// Generality quantity vanishes.
    ClassII,
}

/// Built-in curves of the two special classes for every rotation type.
pub fn special_class_curve(
    kind: RotationType,
    class: SpecialClass,
    n_samples: usize,
) -> Result<GeneratingCurve, GenerateError> {
    use RotationType::*;
    use SpecialClass::*;
    let tol = crate::quadrature::DEFAULT_TOL;
    let (profile, interval, law, phi0) = match (kind, class) {
        // x2 = 0
        (Elliptic, ClassI) => (Profile::constant(1.0, (0.0, 2.0))?, (0.0, 2.0), AngleLaw::Uniform { rate: 0.0 }, 0.0),
        // r^2 + u^2 = 4
        (Elliptic, ClassII) => (
            Profile::sqrt_polynomial(vec![4.0, 0.0, -1.0], (-1.0, 1.0))?,
            (-1.0, 1.0),
            AngleLaw::Uniform { rate: 1.0 },
            0.0,
        ),
        (HyperbolicA, ClassI) => {
            (Profile::linear(2.0, 1.0, (0.0, 1.0))?, (0.0, 1.0), AngleLaw::Uniform { rate: 0.0 }, 0.0)
        }
        (HyperbolicB, ClassI) => {
            (Profile::linear(0.5, 2.0, (0.0, 1.0))?, (0.0, 1.0), AngleLaw::Uniform { rate: 0.0 }, 0.0)
        }
        // r^2 = u^2 - 1 gives (r')^2 > 1
        (HyperbolicA, ClassII) => (
            Profile::sqrt_polynomial(vec![-1.0, 0.0, 1.0], (1.5, 2.5))?,
            (1.5, 2.5),
            AngleLaw::Uniform { rate: 1.0 },
            0.0,
        ),
        // r^2 = u^2 + 1 gives (r')^2 < 1
        (HyperbolicB, ClassII) => (
            Profile::sqrt_polynomial(vec![1.0, 0.0, 1.0], (0.5, 1.5))?,
            (0.5, 1.5),
            AngleLaw::Uniform { rate: 1.0 },
            0.0,
        ),
        // f linear with constant phi: x1'' f' - x1' f'' = 0
        (Parabolic, ClassI) => {
            (Profile::linear(1.0, 1.0, (0.0, 1.0))?, (0.0, 1.0), AngleLaw::Uniform { rate: 0.0 }, 2.0)
        }
        // f f' = 1
        (Parabolic, ClassII) => {
            (Profile::sqrt_polynomial(vec![1.0, 2.0], (0.5, 1.5))?, (0.5, 1.5), AngleLaw::Uniform { rate: 1.0 }, 0.0)
        }
    };
    let constants = Constants { phi0, ..Constants::default() };
    generate_with_law(kind, &profile, interval, Sign::Plus, law, &constants, n_samples, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn ell_const(c: f64, eta: Sign) -> GeneratingCurve {
        let p = Profile::constant(c, (0.0, 7.0)).unwrap();
        generate_curve(
            RotationType::Elliptic,
            &p,
            (0.0, 2.0 * std::f64::consts::PI),
            eta,
            &Constants::default(),
            256,
            TOL,
        )
        .unwrap()
    }

    #[test]
    fn integrand_examples() {
        let c = Profile::constant(2.0, (0.0, 1.0)).unwrap();
        assert_eq!(phi_integrand(RotationType::Elliptic, &c, 0.5).unwrap(), 0.5);
        assert_eq!(phi_integrand(RotationType::HyperbolicB, &c, 0.5).unwrap(), -0.5);
        let s2 = 2f64.sqrt();
        let lin = Profile::linear(s2, 0.0, (0.0, 1.0)).unwrap();
        let v = phi_integrand(RotationType::HyperbolicA, &lin, 0.5).unwrap();
        assert!((v + 1.0 / (s2 * 0.5)).abs() < 1e-14);
        let one = Profile::linear(1.0, 0.0, (0.0, 2.0)).unwrap();
        assert!(matches!(phi_integrand(RotationType::HyperbolicA, &one, 1.0), Err(GenerateError::Singular { .. })));
        let zero = Profile::linear(1.0, -1.0, (0.0, 2.0)).unwrap();
        assert!(matches!(phi_integrand(RotationType::Elliptic, &zero, 1.0), Err(GenerateError::Singular { .. })));
    }

    #[test]
    fn phi_of_u_closed_forms() {
        let k = Constants::default();
        let c = Profile::constant(2.0, (0.0, 5.0)).unwrap();
        let v = phi_of_u(RotationType::Elliptic, &c, 0.0, 3.0, Sign::Plus, &k, TOL).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        let w = phi_of_u(RotationType::Elliptic, &c, 0.0, 3.0, Sign::Minus, &k, TOL).unwrap();
        assert_eq!(v, -w);

        let f = Profile::linear(1.0, 0.0, (0.5, 4.0)).unwrap();
        for u in [1.0, 1.7, 3.0] {
            let v = phi_of_u(RotationType::Parabolic, &f, 1.0, u, Sign::Plus, &k, TOL).unwrap();
            assert!((v - (u.ln() - 1.0)).abs() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn phi_of_u_frozen_values() {
        // values from an independent 30-digit quadrature
        let k = Constants::default();
        let ch = Profile::cosh(1.0, 1.0, (-2.0, 2.0)).unwrap();
        let v = phi_of_u(RotationType::Elliptic, &ch, 0.0, 1.0, Sign::Plus, &k, 1e-12).unwrap();
        assert!((v - 1.731_538_966_479_317_2).abs() < 1e-11);
        let sq = Profile::power(1.0, 2.0, (0.1, 3.0)).unwrap();
        let v = phi_of_u(RotationType::Elliptic, &sq, 0.5, 1.5, Sign::Plus, &k, 1e-12).unwrap();
        assert!((v - 1.796_980_942_334_139_4).abs() < 1e-11);
        let v = phi_of_u(RotationType::HyperbolicA, &sq, 1.0, 2.0, Sign::Plus, &k, 1e-12).unwrap();
        assert!((v + 0.793_893_332_451_059_5).abs() < 1e-11);
        let v = phi_of_u(RotationType::HyperbolicB, &ch, 0.2, 0.6, Sign::Plus, &k, 1e-12).unwrap();
        assert!((v - 0.180_145_791_252_765_7).abs() < 1e-11);
        let e = Profile::exp(1.0, 1.0, (0.0, 1.0)).unwrap();
        let kc = Constants { c: 1.0, ..k };
        let v = phi_of_u(RotationType::Parabolic, &e, 0.0, 1.0, Sign::Plus, &kc, 1e-12).unwrap();
        assert!((v - 3.436_563_656_918_090_5).abs() < 1e-11);
    }

    #[test]
    fn elliptic_constant_closed_form() {
        let c = 1.3;
        let p = Profile::constant(c, (0.0, 7.0)).unwrap();
        let curve = generate_curve(RotationType::Elliptic, &p, (0.0, 6.0), Sign::Plus, &Constants::default(), 128, TOL)
            .unwrap();
        for (k, &u) in curve.grid().iter().enumerate() {
            let [x1, x2, r] = curve.coords()[k];
            assert!((x1 - c * (u / c).sin()).abs() < 1e-9, "x1 at {u}");
            assert!((x2 - c * (1.0 - (u / c).cos())).abs() < 1e-9, "x2 at {u}");
            assert_eq!(r, c);
            assert!((curve.phi()[k] - u / c).abs() < 1e-10);
        }
    }

    #[test]
    fn frozen_curve_endpoints() {
        let ch = Profile::cosh(1.0, 1.0, (-2.0, 2.0)).unwrap();
        let k = Constants::default();
        let e = generate_curve(RotationType::Elliptic, &ch, (-1.0, 1.0), Sign::Plus, &k, 64, 1e-11).unwrap();
        let [x1, x2, _] = e.coords()[63];
        assert!((x1 + 0.178_085_186_224_594_2).abs() < 1e-9, "{x1}");
        assert!((x2 - 1.098_331_705_989_442_6).abs() < 1e-9, "{x2}");
        assert!((e.phi()[63] - 3.463_077_932_958_634_5).abs() < 1e-10);

        let b = generate_curve(RotationType::HyperbolicB, &ch, (0.2, 0.6), Sign::Plus, &k, 64, 1e-11).unwrap();
        let [_, x2, x4] = b.coords()[63];
        assert!((x2 - 0.360_904_200_059_228_6).abs() < 1e-9, "{x2}");
        assert!((x4 - 0.019_363_184_862_934_55).abs() < 1e-9, "{x4}");

        let sq = Profile::power(1.0, 2.0, (0.1, 3.0)).unwrap();
        let a = generate_curve(RotationType::HyperbolicA, &sq, (1.0, 2.0), Sign::Plus, &k, 64, 1e-11).unwrap();
        let [_, x2, x4] = a.coords()[63];
        assert!((x2 + 1.627_911_673_021_986).abs() < 1e-9, "{x2}");
        assert!((x4 - 3.309_385_854_901_817_7).abs() < 1e-9, "{x4}");

        let p = generate_curve(RotationType::Parabolic, &sq, (0.5, 1.5), Sign::Plus, &k, 64, 1e-11).unwrap();
        let [x1, _, g] = p.coords()[63];
        assert!((x1 - 1.0).abs() < 1e-9, "{x1}");
        assert!((g - 0.197_224_577_336_219_38).abs() < 1e-9, "{g}");
        assert!((p.phi()[63] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn eta_flip_mirrors_elliptic_curve() {
        let a = ell_const(1.0, Sign::Plus);
        let b = ell_const(1.0, Sign::Minus);
        for k in 0..a.len() {
            assert!((a.phi()[k] + b.phi()[k]).abs() < 1e-12);
            assert!((a.coords()[k][0] - b.coords()[k][0]).abs() < 1e-12);
            assert!((a.coords()[k][1] + b.coords()[k][1]).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_is_grid_independent() {
        let p = Profile::cosh(1.0, 1.0, (-2.0, 2.0)).unwrap();
        let k = Constants::default();
        let coarse = generate_curve(RotationType::Elliptic, &p, (-1.0, 1.0), Sign::Plus, &k, 33, TOL).unwrap();
        let fine = generate_curve(RotationType::Elliptic, &p, (-1.0, 1.0), Sign::Plus, &k, 65, TOL).unwrap();
        for i in 0..coarse.len() {
            let j = 2 * i;
            assert_eq!(coarse.grid()[i], fine.grid()[j]);
            assert!((coarse.phi()[i] - fine.phi()[j]).abs() < 10.0 * TOL);
            for s in 0..3 {
                assert!((coarse.coords()[i][s] - fine.coords()[j][s]).abs() < 10.0 * TOL);
            }
        }
    }

    #[test]
    fn state_between_nodes_matches_closed_form() {
        let curve = ell_const(1.0, Sign::Plus);
        for u in [0.013, 1.0, 2.345, 6.27] {
            let st = curve.state_at(u).unwrap();
            assert!((st.coords[0] - u.sin()).abs() < 1e-10);
            assert!((st.coords[1] - (1.0 - u.cos())).abs() < 1e-10);
            assert!((st.phi - u).abs() < 1e-10);
        }
        assert!(matches!(curve.state_at(7.0), Err(CurveError::OutOfRange { .. })));
    }

    #[test]
    fn constants_shift_the_curve() {
        let p = Profile::constant(1.0, (0.0, 4.0)).unwrap();
        let k = Constants { u0: Some(1.0), phi0: 0.5, offsets: [2.0, -3.0], c: 0.0 };
        let curve = generate_curve(RotationType::Elliptic, &p, (0.0, 3.0), Sign::Plus, &k, 64, TOL).unwrap();
        // phi = 0.5 + (u - 1)
        assert!((curve.phi()[0] + 0.5).abs() < 1e-12);
        assert_eq!(curve.coords()[0][0], 2.0);
        assert_eq!(curve.coords()[0][1], -3.0);
        let bad = Constants { u0: Some(5.0), ..k };
        assert!(generate_curve(RotationType::Elliptic, &p, (0.0, 3.0), Sign::Plus, &bad, 64, TOL).is_err());
    }

    #[test]
    fn generation_rejects_bad_input() {
        let p = Profile::constant(1.0, (0.0, 4.0)).unwrap();
        let k = Constants::default();
        assert!(matches!(
            generate_curve(RotationType::Elliptic, &p, (0.0, 3.0), Sign::Plus, &k, 8, TOL),
            Err(GenerateError::TooFewSamples(8))
        ));
        let circle = Profile::sqrt_polynomial(vec![4.0, 0.0, -1.0], (-1.0, 1.0)).unwrap();
        assert!(matches!(
            generate_curve(RotationType::Elliptic, &circle, (-1.0, 1.0), Sign::Plus, &k, 32, TOL),
            Err(GenerateError::Validity(_))
        ));
        let sq = Profile::power(0.5, 2.0, (0.0, 2.0)).unwrap();
        let err = generate_curve(RotationType::HyperbolicA, &sq, (0.5, 1.5), Sign::Plus, &k, 32, TOL).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("singular point") && msg.contains("u = 1;"), "{msg}");
    }

    #[test]
    fn special_class_curves_build() {
        for kind in RotationType::ALL {
            for class in [SpecialClass::ClassI, SpecialClass::ClassII] {
                let c = special_class_curve(kind, class, 64).unwrap();
                for k in 0..c.len() {
                    let jet = c.node_jet(k).unwrap();
                    let planar = jet.planar_quantity(kind);
                    let q = jet.generality(kind);
                    match class {
                        SpecialClass::ClassI => assert!(planar.vanishes() && !q.vanishes(), "{kind} I at {k}"),
                        SpecialClass::ClassII => assert!(!planar.vanishes() && q.vanishes(), "{kind} II at {k}"),
                    }
                }
            }
        }
        let c = special_class_curve(RotationType::Elliptic, SpecialClass::ClassI, 32).unwrap();
        assert!(c.coords().iter().all(|x| x[1] == 0.0));
    }

    #[test]
    fn sign_serde() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
        assert!(serde_json::from_str::<Sign>("0").is_err());
    }
}
