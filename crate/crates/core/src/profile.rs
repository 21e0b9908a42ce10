//! Scalar profile functions: `r(u)` for elliptic and hyperbolic surfaces,
//! `f(u)` for parabolic ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for the "= 0" side of every vanishing test.
pub const VANISH_TOL: f64 = 1e-9;

/// Number of samples used by [`validity_check`].
pub const VALIDITY_SAMPLES: usize = 2049;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("u = {u} is outside the profile domain [{lo}, {hi}]")]
    OutOfDomain { u: f64, lo: f64, hi: f64 },
    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(f64, f64),
    #[error("interval [{a}, {b}] is not inside the profile domain [{lo}, {hi}]")]
    IntervalOutsideDomain { a: f64, b: f64, lo: f64, hi: f64 },
    #[error("bad profile spec: {0}")]
    BadSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationType {
    Elliptic,
    /// Hyperbolic rotation with `(r')^2 > 1` on the working interval.
    HyperbolicA,
    /// Hyperbolic rotation with `(r')^2 < 1` on the working interval.
    HyperbolicB,
    Parabolic,
}

impl RotationType {
    pub const ALL: [RotationType; 4] =
        [RotationType::Elliptic, RotationType::HyperbolicA, RotationType::HyperbolicB, RotationType::Parabolic];

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, RotationType::HyperbolicA | RotationType::HyperbolicB)
    }

    /// The sign of `(r')^2 - 1` on a hyperbolic working interval, `+1` otherwise.
    pub fn epsilon(self) -> f64 {
        match self {
            RotationType::HyperbolicB => -1.0,
            _ => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RotationType::Elliptic => "elliptic",
            RotationType::HyperbolicA => "hyperbolic-a",
            RotationType::HyperbolicB => "hyperbolic-b",
            RotationType::Parabolic => "parabolic",
        }
    }
}

impl fmt::Display for RotationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RotationType {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "elliptic" => Ok(RotationType::Elliptic),
            "hyperbolic-a" | "hyperbolic_a" => Ok(RotationType::HyperbolicA),
            "hyperbolic-b" | "hyperbolic_b" => Ok(RotationType::HyperbolicB),
            "parabolic" => Ok(RotationType::Parabolic),
            other => Err(ProfileError::BadSpec(format!("unknown rotation type '{other}'"))),
        }
    }
}

/// Value, first and second derivative of a profile at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub p: f64,
    pub dp: f64,
    pub d2p: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    Constant {
        c: f64,
    },
    /// `a u + b`
    Linear {
        a: f64,
        b: f64,
    },
    /// `a u^p`
    Power {
        a: f64,
        p: f64,
    },
    /// `a exp(b u)`
    Exp {
        a: f64,
        b: f64,
    },
    /// `a cosh(b u)`
    Cosh {
        a: f64,
        b: f64,
    },
    /// `c0 + c1 u + c2 u^2 + ...`
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `sqrt(c0 + c1 u + ...)`; the profiles with `(p^2)'' = const` live here.
    SqrtPolynomial {
        coeffs: Vec<f64>,
    },
    /// Uniformly spaced samples; derivatives by finite differences.
    Tabulated(Table),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    grid: Vec<f64>,
    values: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl Table {
    fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        let n = grid.len();
        if n < 5 || values.len() != n {
            return Err(ProfileError::BadSpec(format!(
                "tabulated profile needs >= 5 (u, value) pairs of equal length, got {} and {}",
                n,
                values.len()
            )));
        }
        if grid.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(ProfileError::BadSpec("tabulated profile has non-finite entries".into()));
        }
        let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
        if h <= 0.0 {
            return Err(ProfileError::BadSpec("tabulated grid must be increasing".into()));
        }
        for (i, u) in grid.iter().enumerate() {
            let want = grid[0] + i as f64 * h;
            if (u - want).abs() > 1e-9 * h.max(want.abs()) {
                return Err(ProfileError::BadSpec(format!("tabulated grid is not uniform near u = {u}")));
            }
        }
        let f = &values;
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        for i in 0..n {
            let (a, b) = if i >= 2 && i + 2 < n {
                (
                    (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h),
                    (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h),
                )
            } else if i >= 1 && i + 1 < n {
                ((f[i + 1] - f[i - 1]) / (2.0 * h), (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h))
            } else if i == 0 {
                ((-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h), (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h))
            } else {
                let k = n - 1;
                (
                    (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * h),
                    (2.0 * f[k] - 5.0 * f[k - 1] + 4.0 * f[k - 2] - f[k - 3]) / (h * h),
                )
            };
            d1[i] = a;
            d2[i] = b;
        }
        Ok(Table { grid, values, d1, d2 })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn jet(&self, u: f64) -> ProfileJet {
        let n = self.grid.len();
        let h = (self.grid[n - 1] - self.grid[0]) / (n - 1) as f64;
        let k = (((u - self.grid[0]) / h).floor().max(0.0) as usize).min(n - 2);
        let t = (u - self.grid[k]) / h;
        // four-point Lagrange cubic for the value, linear for the derivatives
        let j = k.saturating_sub(1).min(n - 4);
        let x = (u - self.grid[j]) / h;
        let y = &self.values[j..j + 4];
        let p = -y[0] * (x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0 + y[1] * x * (x - 2.0) * (x - 3.0) / 2.0
            - y[2] * x * (x - 1.0) * (x - 3.0) / 2.0
            + y[3] * x * (x - 1.0) * (x - 2.0) / 6.0;
        let dp = self.d1[k] + t * (self.d1[k + 1] - self.d1[k]);
        let d2p = self.d2[k] + t * (self.d2[k + 1] - self.d2[k]);
        ProfileJet { p, dp, d2p }
    }
}

/// Serializable description of a profile: `kind`, `params`, `domain`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kind: String,
    pub params: Vec<f64>,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
}

impl ProfileSpec {
    /// Parses the compact `kind:p1,p2,...` form used on the command line.
    /// Tabulated profiles cannot be written this way.
    pub fn parse(s: &str, domain: [f64; 2]) -> Result<Self, ProfileError> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = rest
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| ProfileError::BadSpec(format!("bad number '{t}' in '{s}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ProfileSpec { kind: kind.trim().to_ascii_lowercase(), params, domain, grid: None })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    kind: ProfileKind,
    domain: (f64, f64),
}

fn poly_jet(coeffs: &[f64], u: f64) -> ProfileJet {
    // Horner on value and both derivatives at once
    let mut jet = ProfileJet::default();
    for &c in coeffs.iter().rev() {
        jet.d2p = jet.d2p * u + 2.0 * jet.dp;
        jet.dp = jet.dp * u + jet.p;
        jet.p = jet.p * u + c;
    }
    jet
}

impl Profile {
    pub fn new(kind: ProfileKind, domain: (f64, f64)) -> Result<Self, ProfileError> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(ProfileError::EmptyInterval(lo, hi));
        }
        let params_ok = match &kind {
            ProfileKind::Constant { c } => c.is_finite(),
            ProfileKind::Linear { a, b } | ProfileKind::Exp { a, b } | ProfileKind::Cosh { a, b } => {
                a.is_finite() && b.is_finite()
            }
            ProfileKind::Power { a, p } => {
                if p.fract() != 0.0 && lo <= 0.0 {
                    return Err(ProfileError::BadSpec(format!(
                        "power profile with non-integer exponent {p} needs a domain with u > 0"
                    )));
                }
                a.is_finite() && p.is_finite()
            }
            ProfileKind::Polynomial { coeffs } | ProfileKind::SqrtPolynomial { coeffs } => {
                !coeffs.is_empty() && coeffs.iter().all(|c| c.is_finite())
            }
            ProfileKind::Tabulated(t) => {
                if lo < t.grid[0] || hi > t.grid[t.grid.len() - 1] {
                    return Err(ProfileError::BadSpec("domain exceeds the tabulated range".into()));
                }
                true
            }
        };
        if !params_ok {
            return Err(ProfileError::BadSpec("non-finite or missing parameters".into()));
        }
        Ok(Profile { kind, domain })
    }

    pub fn constant(c: f64, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Constant { c }, domain)
    }

    pub fn linear(a: f64, b: f64, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Linear { a, b }, domain)
    }

    pub fn power(a: f64, p: f64, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Power { a, p }, domain)
    }

    pub fn exp(a: f64, b: f64, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Exp { a, b }, domain)
    }

    pub fn cosh(a: f64, b: f64, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Cosh { a, b }, domain)
    }

    pub fn polynomial(coeffs: Vec<f64>, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::Polynomial { coeffs }, domain)
    }

    pub fn sqrt_polynomial(coeffs: Vec<f64>, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(ProfileKind::SqrtPolynomial { coeffs }, domain)
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        let table = Table::new(grid, values)?;
        let domain = (table.grid[0], table.grid[table.grid.len() - 1]);
        Self::new(ProfileKind::Tabulated(table), domain)
    }

    pub fn from_spec(spec: &ProfileSpec) -> Result<Self, ProfileError> {
        let domain = (spec.domain[0], spec.domain[1]);
        let p = &spec.params;
        let want = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(ProfileError::BadSpec(format!("'{}' takes {n} parameter(s), got {}", spec.kind, p.len())))
            }
        };
        let kind = match spec.kind.as_str() {
            "constant" => {
                want(1)?;
                ProfileKind::Constant { c: p[0] }
            }
            "linear" => {
                want(2)?;
                ProfileKind::Linear { a: p[0], b: p[1] }
            }
            "power" => {
                want(2)?;
                ProfileKind::Power { a: p[0], p: p[1] }
            }
            "exp" => {
                want(2)?;
                ProfileKind::Exp { a: p[0], b: p[1] }
            }
            "cosh" => {
                want(2)?;
                ProfileKind::Cosh { a: p[0], b: p[1] }
            }
            "poly" | "polynomial" => ProfileKind::Polynomial { coeffs: p.clone() },
            "sqrt-poly" | "sqrt_poly" | "sqrt-polynomial" => ProfileKind::SqrtPolynomial { coeffs: p.clone() },
            "table" | "tabulated" => {
                let grid =
                    spec.grid.clone().ok_or_else(|| ProfileError::BadSpec("tabulated profile needs a grid".into()))?;
                let table = Table::new(grid, p.clone())?;
                return Self::new(ProfileKind::Tabulated(table), domain);
            }
            other => return Err(ProfileError::BadSpec(format!("unknown profile kind '{other}'"))),
        };
        Self::new(kind, domain)
    }

    pub fn to_spec(&self) -> ProfileSpec {
        let domain = [self.domain.0, self.domain.1];
        let (kind, params, grid) = match &self.kind {
            ProfileKind::Constant { c } => ("constant", vec![*c], None),
            ProfileKind::Linear { a, b } => ("linear", vec![*a, *b], None),
            ProfileKind::Power { a, p } => ("power", vec![*a, *p], None),
            ProfileKind::Exp { a, b } => ("exp", vec![*a, *b], None),
            ProfileKind::Cosh { a, b } => ("cosh", vec![*a, *b], None),
            ProfileKind::Polynomial { coeffs } => ("poly", coeffs.clone(), None),
            ProfileKind::SqrtPolynomial { coeffs } => ("sqrt-poly", coeffs.clone(), None),
            ProfileKind::Tabulated(t) => ("tabulated", t.values.clone(), Some(t.grid.clone())),
        };
        ProfileSpec { kind: kind.to_string(), params, domain, grid }
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// True when derivatives come from exact formulas rather than finite
    /// differences of samples.
    pub fn has_exact_derivatives(&self) -> bool {
        !matches!(self.kind, ProfileKind::Tabulated(_))
    }

    /// A copy of this profile with its domain replaced.
    pub fn with_domain(&self, domain: (f64, f64)) -> Result<Self, ProfileError> {
        Self::new(self.kind.clone(), domain)
    }

    pub fn contains(&self, u: f64) -> bool {
        let (lo, hi) = self.domain;
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        u >= lo - slack && u <= hi + slack
    }

    pub fn eval_jet(&self, u: f64) -> Result<ProfileJet, ProfileError> {
        if !self.contains(u) {
            let (lo, hi) = self.domain;
            return Err(ProfileError::OutOfDomain { u, lo, hi });
        }
        Ok(self.jet(u))
    }

    /// Jet without the domain check. Callers must already know `u` is inside.
    pub(crate) fn jet(&self, u: f64) -> ProfileJet {
        match &self.kind {
            ProfileKind::Constant { c } => ProfileJet { p: *c, dp: 0.0, d2p: 0.0 },
            ProfileKind::Linear { a, b } => ProfileJet { p: a * u + b, dp: *a, d2p: 0.0 },
            ProfileKind::Power { a, p } => {
                let up = u.powf(*p);
                if u == 0.0 {
                    let p2 = if *p == 2.0 { 2.0 * a } else { a * p * (p - 1.0) * u.powf(p - 2.0) };
                    let p1 = if *p == 1.0 { *a } else { a * p * u.powf(p - 1.0) };
                    return ProfileJet { p: a * up, dp: p1, d2p: p2 };
                }
                ProfileJet { p: a * up, dp: a * p * up / u, d2p: a * p * (p - 1.0) * up / (u * u) }
            }
            ProfileKind::Exp { a, b } => {
                let e = a * (b * u).exp();
                ProfileJet { p: e, dp: b * e, d2p: b * b * e }
            }
            ProfileKind::Cosh { a, b } => {
                let (s, c) = ((b * u).sinh(), (b * u).cosh());
                ProfileJet { p: a * c, dp: a * b * s, d2p: a * b * b * c }
            }
            ProfileKind::Polynomial { coeffs } => poly_jet(coeffs, u),
            ProfileKind::SqrtPolynomial { coeffs } => {
                let q = poly_jet(coeffs, u);
                let p = q.p.sqrt();
                ProfileJet { p, dp: q.dp / (2.0 * p), d2p: (2.0 * q.p * q.d2p - q.dp * q.dp) / (4.0 * q.p * p) }
            }
            ProfileKind::Tabulated(t) => t.jet(u),
        }
    }
}

/// A value paired with the magnitude of the ingredients it was assembled
/// from, so "is it zero?" can be decided relative to that magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub value: f64,
    pub scale: f64,
}

impl Scaled {
    pub fn vanishes(self) -> bool {
        self.vanishes_tol(VANISH_TOL)
    }

    pub fn vanishes_tol(self, tol: f64) -> bool {
        self.value.abs() <= tol * self.scale
    }
}

/// `r r'' + (r')^2 + 1` (elliptic), `r r'' + (r')^2 - 1` (hyperbolic),
/// `f f'' + (f')^2` (parabolic). Quasi-minimal construction needs it nonzero.
pub fn generality_quantity(kind: RotationType, jet: ProfileJet) -> Scaled {
    let ProfileJet { p, dp, d2p } = jet;
    let base = p * d2p + dp * dp;
    let scale = (p * d2p).abs() + dp * dp;
    match kind {
        RotationType::Elliptic => Scaled { value: base + 1.0, scale: scale + 1.0 },
        RotationType::HyperbolicA | RotationType::HyperbolicB => Scaled { value: base - 1.0, scale: scale + 1.0 },
        RotationType::Parabolic => Scaled { value: base, scale },
    }
}

/// `(r')^2 - 1`, whose sign is the hyperbolic epsilon.
pub fn slope_excess(jet: ProfileJet) -> Scaled {
    Scaled { value: jet.dp * jet.dp - 1.0, scale: jet.dp * jet.dp + 1.0 }
}

pub fn is_flat(jet: ProfileJet) -> bool {
    Scaled { value: jet.d2p, scale: jet.p.abs() + jet.dp.abs() + 1.0 }.vanishes()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeClass {
    General,
    /// Planar quantity vanishes, generality quantity does not.
    SpecialI,
    /// Generality quantity vanishes, planar quantity does not.
    SpecialII,
    MinimalCandidate,
    /// `(r')^2 = 1` on a hyperbolic surface.
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub flat: bool,
    pub class: RegimeClass,
}

/// Classifies a point from the profile jet and, when a curve is available,
/// its planar quantity (`x1'x2''-x1''x2'`, `x2'x4''-x2''x4'` or
/// `x1''f'-x1'f''`). Without a planar quantity the curve is taken to be
/// non-planar, so only `General`, `SpecialII` and `Singular` can result.
pub fn regime_classify(kind: RotationType, jet: ProfileJet, planar: Option<Scaled>) -> Regime {
    let flat = is_flat(jet);
    if kind.is_hyperbolic() && slope_excess(jet).vanishes() {
        return Regime { flat, class: RegimeClass::Singular };
    }
    let q0 = generality_quantity(kind, jet).vanishes();
    let p0 = planar.is_some_and(Scaled::vanishes);
    let class = match (p0, q0) {
        (false, false) => RegimeClass::General,
        (true, false) => RegimeClass::SpecialI,
        (false, true) => RegimeClass::SpecialII,
        (true, true) => RegimeClass::MinimalCandidate,
    };
    Regime { flat, class }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum ValidityIssue {
    NonFinite {
        u: f64,
    },
    NonPositive {
        u: f64,
    },
    ProfileVanishes {
        u: f64,
    },
    SlopeVanishes {
        u: f64,
    },
    /// `(r')^2 = 1` is reached inside the interval.
    SingularSlope {
        u: f64,
    },
    /// `(r')^2 - 1` has the sign of the other hyperbolic case.
    WrongCase {
        u: f64,
    },
    GeneralityVanishes {
        u: f64,
    },
    GeneralitySignChange {
        u: f64,
    },
}

impl fmt::Display for ValidityIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidityIssue::NonFinite { u } => write!(f, "profile is not finite at u = {u}"),
            ValidityIssue::NonPositive { u } => write!(f, "r(u) <= 0 at u = {u}"),
            ValidityIssue::ProfileVanishes { u } => write!(f, "f(u) = 0 at u = {u}"),
            ValidityIssue::SlopeVanishes { u } => write!(f, "f'(u) = 0 at u = {u}"),
            ValidityIssue::SingularSlope { u } => write!(f, "(r')^2 = 1 (singular point) at u = {u}"),
            ValidityIssue::WrongCase { u } => write!(f, "(r')^2 - 1 has the wrong sign for this case at u = {u}"),
            ValidityIssue::GeneralityVanishes { u } => write!(f, "generality quantity vanishes at u = {u}"),
            ValidityIssue::GeneralitySignChange { u } => write!(f, "generality quantity changes sign near u = {u}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub kind: RotationType,
    pub interval: [f64; 2],
    pub samples: usize,
    pub issues: Vec<ValidityIssue>,
    /// Sign of the generality quantity when it is constant on the interval.
    pub generality_sign: Option<f64>,
    pub generality_min_abs: f64,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            return format!("{} profile valid on [{}, {}]", self.kind, self.interval[0], self.interval[1]);
        }
        let list: Vec<String> = self.issues.iter().map(ToString::to_string).collect();
        list.join("; ")
    }
}

/// Locates a root of `g` in `[a, b]` given a sign change, by bisection.
fn bisect<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Checks the conditions the construction needs on a dense sample of
/// `[a, b]`: positivity of `r`, the hyperbolic slope case, `f, f' != 0`, and
/// a generality quantity that neither vanishes nor changes sign.
pub fn validity_check(
    profile: &Profile,
    kind: RotationType,
    interval: (f64, f64),
) -> Result<ValidityReport, ProfileError> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(ProfileError::EmptyInterval(a, b));
    }
    if !(profile.contains(a) && profile.contains(b)) {
        let (lo, hi) = profile.domain();
        return Err(ProfileError::IntervalOutsideDomain { a, b, lo, hi });
    }
    let n = VALIDITY_SAMPLES;
    let us: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let jets: Vec<ProfileJet> = us.iter().map(|&u| profile.jet(u)).collect();
    let mut issues = Vec::new();

    if let Some(i) = jets.iter().position(|j| !(j.p.is_finite() && j.dp.is_finite() && j.d2p.is_finite())) {
        issues.push(ValidityIssue::NonFinite { u: us[i] });
        return Ok(ValidityReport {
            kind,
            interval: [a, b],
            samples: n,
            issues,
            generality_sign: None,
            generality_min_abs: f64::NAN,
        });
    }

    match kind {
        RotationType::Parabolic => {
            if let Some(i) = jets.iter().position(|j| j.p == 0.0) {
                issues.push(ValidityIssue::ProfileVanishes { u: us[i] });
            } else if let Some(i) = jets.windows(2).position(|w| (w[0].p > 0.0) != (w[1].p > 0.0)) {
                let u = bisect(|u| profile.jet(u).p, us[i], us[i + 1]);
                issues.push(ValidityIssue::ProfileVanishes { u });
            }
            let slope = |j: &ProfileJet| Scaled { value: j.dp, scale: j.p.abs() + 1.0 };
            if let Some(i) = jets.iter().position(|j| slope(j).vanishes()) {
                issues.push(ValidityIssue::SlopeVanishes { u: us[i] });
            } else if let Some(i) = jets.windows(2).position(|w| (w[0].dp > 0.0) != (w[1].dp > 0.0)) {
                let u = bisect(|u| profile.jet(u).dp, us[i], us[i + 1]);
                issues.push(ValidityIssue::SlopeVanishes { u });
            }
        }
        _ => {
            if let Some(i) = jets.iter().position(|j| j.p <= 0.0) {
                issues.push(ValidityIssue::NonPositive { u: us[i] });
            }
        }
    }

    if kind.is_hyperbolic() {
        let want = kind.epsilon();
        if let Some(i) = jets.iter().position(|&j| slope_excess(j).vanishes()) {
            issues.push(ValidityIssue::SingularSlope { u: us[i] });
        } else if let Some(i) =
            jets.windows(2).position(|w| (slope_excess(w[0]).value > 0.0) != (slope_excess(w[1]).value > 0.0))
        {
            let u = bisect(|u| slope_excess(profile.jet(u)).value, us[i], us[i + 1]);
            issues.push(ValidityIssue::SingularSlope { u });
        } else if slope_excess(jets[0]).value.signum() != want {
            issues.push(ValidityIssue::WrongCase { u: us[0] });
        }
    }

    let q: Vec<Scaled> = jets.iter().map(|&j| generality_quantity(kind, j)).collect();
    let generality_min_abs = q.iter().map(|s| s.value.abs()).fold(f64::INFINITY, f64::min);
    let mut generality_sign = None;
    if let Some(i) = q.iter().position(|s| s.vanishes()) {
        issues.push(ValidityIssue::GeneralityVanishes { u: us[i] });
    } else if let Some(i) = q.windows(2).position(|w| (w[0].value > 0.0) != (w[1].value > 0.0)) {
        let u = bisect(|u| generality_quantity(kind, profile.jet(u)).value, us[i], us[i + 1]);
        issues.push(ValidityIssue::GeneralitySignChange { u });
    } else {
        generality_sign = Some(q[0].value.signum());
    }

    Ok(ValidityReport { kind, interval: [a, b], samples: n, issues, generality_sign, generality_min_abs })
}
