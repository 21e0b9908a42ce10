//! C ABI over the `quasirot` library.
//!
//! Objects are opaque handles created by `qr_*_new`/`qr_*_generate`-style
//! functions and released by the matching `qr_*_free`. Every fallible call
//! returns a [`QrStatus`]; on failure [`qr_last_error`] describes the problem
//! for the calling thread. Strings returned through `char **` outputs must be
//! released with [`qr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quasirot::generator::{generate_curve, Constants, GenerateError, GeneratingCurve, Sign};
use quasirot::io;
use quasirot::profile::{Profile, ProfileSpec, RotationType};
use quasirot::surface;
use quasirot::verifier::{verify_curve, GeometryReport, Verdict, VerifyError, VerifyOptions};

/// Status codes; the first five match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    VerdictFail = 1,
    Invalid = 2,
    Quadrature = 3,
    Io = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrType {
    Elliptic = 0,
    HyperbolicA = 1,
    HyperbolicB = 2,
    Parabolic = 3,
}

impl From<QrType> for RotationType {
    fn from(t: QrType) -> Self {
        match t {
            QrType::Elliptic => RotationType::Elliptic,
            QrType::HyperbolicA => RotationType::HyperbolicA,
            QrType::HyperbolicB => RotationType::HyperbolicB,
            QrType::Parabolic => RotationType::Parabolic,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrVerdict {
    QuasiMinimal = 0,
    NotQuasiMinimal = 1,
    Minimal = 2,
    Invalid = 3,
}

/// Integration constants. `has_u0 == 0` means the base point is the left end.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QrConstants {
    pub has_u0: c_int,
    pub u0: f64,
    pub phi0: f64,
    pub offsets: [f64; 2],
    pub c: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QrSurfaceJet {
    pub z: [f64; 4],
    pub first_e: f64,
    pub first_f: f64,
    pub first_g: f64,
    pub gauss: f64,
    pub h1: f64,
    pub h2: f64,
    pub hh: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QrReportSummary {
    pub verdict: QrVerdict,
    pub qm_residual_max: f64,
    pub arc_residual_max: f64,
    pub consistency_max: f64,
    pub gram_deviation_max: f64,
    pub min_h_coefficient: f64,
}

pub struct QrProfile(Profile);
pub struct QrCurve(GeneratingCurve);
pub struct QrReport(GeometryReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

struct Failure(QrStatus, String);

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Self {
        let code = if matches!(e, GenerateError::Quadrature(_)) { QrStatus::Quadrature } else { QrStatus::Invalid };
        Failure(code, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = if matches!(e, VerifyError::Quadrature(_)) { QrStatus::Quadrature } else { QrStatus::Invalid };
        Failure(code, e.to_string())
    }
}

impl From<quasirot::profile::ProfileError> for Failure {
    fn from(e: quasirot::profile::ProfileError) -> Self {
        Failure(QrStatus::Invalid, e.to_string())
    }
}

impl From<surface::SurfaceError> for Failure {
    fn from(e: surface::SurfaceError) -> Self {
        Failure::from(VerifyError::from(e))
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        match e {
            io::IoError::Data(g) => g.into(),
            io::IoError::Profile(p) => p.into(),
            other => Failure(QrStatus::Io, other.to_string()),
        }
    }
}

fn guard<F>(f: F) -> QrStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QrStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            QrStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(QrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(QrStatus::InvalidArgument, "string is not UTF-8".into()))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a profile `kind:p1,p2,...` on the domain `[lo, hi]`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_profile_parse(spec: *const c_char, lo: f64, hi: f64, out: *mut *mut QrProfile) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = ProfileSpec::parse(str_arg(spec)?, [lo, hi])?;
        let p = Profile::from_spec(&spec)?;
        *out = Box::into_raw(Box::new(QrProfile(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from [`qr_profile_parse`].
#[no_mangle]
pub unsafe extern "C" fn qr_profile_free(p: *mut QrProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Writes `(p, p', p'')` at `u` into `jet[0..3]`.
///
/// # Safety
/// `p` must be a valid profile handle and `jet` point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_profile_eval(p: *const QrProfile, u: f64, jet: *mut f64) -> QrStatus {
    guard(|| {
        let p = borrow(p)?;
        if jet.is_null() {
            return Err(null());
        }
        let j = p.0.eval_jet(u)?;
        let out = std::slice::from_raw_parts_mut(jet, 3);
        out.copy_from_slice(&[j.p, j.dp, j.d2p]);
        Ok(())
    })
}

/// Generates a quasi-minimal generating curve. `constants` may be NULL.
///
/// # Safety
/// Pointers must be valid; `out` receives a new curve handle.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_generate(
    kind: QrType,
    profile: *const QrProfile,
    a: f64,
    b: f64,
    eta: c_int,
    constants: *const QrConstants,
    n_samples: usize,
    tol: f64,
    out: *mut *mut QrCurve,
) -> QrStatus {
    guard(|| {
        let p = borrow(profile)?;
        if out.is_null() {
            return Err(null());
        }
        let eta = Sign::try_from(eta).map_err(|m| Failure(QrStatus::InvalidArgument, m))?;
        let k = constants.as_ref().copied().unwrap_or_default();
        let k = Constants { u0: (k.has_u0 != 0).then_some(k.u0), phi0: k.phi0, offsets: k.offsets, c: k.c };
        let curve = generate_curve(kind.into(), &p.0, (a, b), eta, &k, n_samples, tol)?;
        *out = Box::into_raw(Box::new(QrCurve(curve)));
        Ok(())
    })
}

/// Reads a curve from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_from_json(json: *const c_char, out: *mut *mut QrCurve) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let c = io::curve_from_json(str_arg(json)?)?;
        *out = Box::into_raw(Box::new(QrCurve(c)));
        Ok(())
    })
}

/// JSON form of a curve; release with [`qr_string_free`].
///
/// # Safety
/// `c` must be a valid curve handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_to_json(c: *const QrCurve, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let c = borrow(c)?;
        if out.is_null() {
            return Err(null());
        }
        *out = to_c_string(io::curve_to_json(&c.0));
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a curve handle.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_free(c: *mut QrCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of samples, 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a valid curve handle.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_len(c: *const QrCurve) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Sample `k`: parameter, angle and the stored coordinate triple
/// (`x1,x2,r` elliptic, `r,x2,x4` hyperbolic, `x1,f,g` parabolic).
///
/// # Safety
/// `c` must be a valid handle, `u`/`phi` valid pointers, `coords` 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_curve_node(
    c: *const QrCurve,
    k: usize,
    u: *mut f64,
    phi: *mut f64,
    coords: *mut f64,
) -> QrStatus {
    guard(|| {
        let c = borrow(c)?;
        if u.is_null() || phi.is_null() || coords.is_null() {
            return Err(null());
        }
        if k >= c.0.len() {
            return Err(Failure(QrStatus::InvalidArgument, format!("sample {k} out of range")));
        }
        let st = c.0.node_state(k);
        *u = st.u;
        *phi = st.phi;
        std::slice::from_raw_parts_mut(coords, 3).copy_from_slice(&st.coords);
        Ok(())
    })
}

/// Surface point `z(u, v)` into `out[0..4]`.
///
/// # Safety
/// `c` must be a valid handle and `out` point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn qr_surface_point(c: *const QrCurve, u: f64, v: f64, out: *mut f64) -> QrStatus {
    guard(|| {
        let c = borrow(c)?;
        if out.is_null() {
            return Err(null());
        }
        let z = surface::eval_point(&c.0, u, v)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&z.0);
        Ok(())
    })
}

/// # Safety
/// `c` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_surface_jet(c: *const QrCurve, u: f64, v: f64, out: *mut QrSurfaceJet) -> QrStatus {
    guard(|| {
        let c = borrow(c)?;
        if out.is_null() {
            return Err(null());
        }
        let j = surface::eval_jet(&c.0, u, v)?;
        *out = QrSurfaceJet {
            z: j.z.0,
            first_e: j.first.e,
            first_f: j.first.f,
            first_g: j.first.g,
            gauss: j.k,
            h1: j.h.h1,
            h2: j.h.h2,
            hh: j.h.hh,
        };
        Ok(())
    })
}

/// Verifies a curve. `tol <= 0` uses the curve's own tolerance.
///
/// # Safety
/// `c` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_verify(c: *const QrCurve, tol: f64, out: *mut *mut QrReport) -> QrStatus {
    guard(|| {
        let c = borrow(c)?;
        if out.is_null() {
            return Err(null());
        }
        let opts = VerifyOptions { tol: (tol > 0.0).then_some(tol), ..VerifyOptions::default() };
        let r = verify_curve(&c.0, &opts)?;
        *out = Box::into_raw(Box::new(QrReport(r)));
        Ok(())
    })
}

/// # Safety
/// `r` must be a valid report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_report_summary(r: *const QrReport, out: *mut QrReportSummary) -> QrStatus {
    guard(|| {
        let r = &borrow(r)?.0;
        if out.is_null() {
            return Err(null());
        }
        let verdict = match r.verdict {
            Verdict::QuasiMinimal => QrVerdict::QuasiMinimal,
            Verdict::NotQuasiMinimal => QrVerdict::NotQuasiMinimal,
            Verdict::Minimal => QrVerdict::Minimal,
            Verdict::Invalid => QrVerdict::Invalid,
        };
        let nan = f64::NAN;
        *out = match &r.stats {
            Some(s) => QrReportSummary {
                verdict,
                qm_residual_max: s.qm_residual.max,
                arc_residual_max: s.arc_residual.max,
                consistency_max: s.consistency.max,
                gram_deviation_max: s.gram_deviation.max,
                min_h_coefficient: s.min_h_coefficient,
            },
            None => QrReportSummary {
                verdict,
                qm_residual_max: nan,
                arc_residual_max: nan,
                consistency_max: nan,
                gram_deviation_max: nan,
                min_h_coefficient: nan,
            },
        };
        Ok(())
    })
}

/// Full report as JSON; release with [`qr_string_free`].
///
/// # Safety
/// `r` must be a valid report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_report_to_json(r: *const QrReport, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let r = borrow(r)?;
        if out.is_null() {
            return Err(null());
        }
        *out = to_c_string(r.0.to_json());
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a report handle.
#[no_mangle]
pub unsafe extern "C" fn qr_report_free(r: *mut QrReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
