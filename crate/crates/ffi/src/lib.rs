//! C ABI over the `virateich` library.
//!
//! Every function returns a [`VtStatus`]. Objects cross the boundary as
//! opaque handles that the caller releases with the matching `*_free`
//! function. After a non-`VT_OK` status, [`vt_last_error`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use virateich::diffeo::{act_on_hill, compose, invert, schwarzian, DiffeoLift, HillPotential};
use virateich::hill::{ds_normalize, hill_from_asu, monodromy, BoundaryConnection, OrbitClass};
use virateich::spectral::PeriodicFn;
use virateich::trumpet::{omega_n, TrumpetPoint, TrumpetTangent};
use virateich::verify::{run_suite, Suite, VerifyConfig};
use virateich::Error;

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad sizes, non-finite samples, mismatched grids or unknown names.
    InvalidInput = 2,
    /// A mathematical precondition failed (e.g. `a ≤ 0`, non-monotone lift).
    Precondition = 3,
    /// An iteration or internal consistency check failed.
    Numerical = 4,
    /// The caller's output buffer is too short.
    BufferTooSmall = 5,
    /// Rust panicked; the handle arguments are still valid.
    Panic = 6,
}

/// Samples of a real function on the uniform grid `k/n`.
pub struct VtPeriodicFn(PeriodicFn);
/// Lift `x ↦ x + φ(x) + winding` of a circle diffeomorphism.
pub struct VtDiffeo(DiffeoLift);
/// Hill potential `T`, a density of weight 2.
pub struct VtPotential(HillPotential);
/// Positive boundary connection `(a, s, u)`.
pub struct VtConnection(BoundaryConnection);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> VtStatus {
    match e {
        Error::InvalidSampleCount { .. }
        | Error::NonFinite { .. }
        | Error::CutoffTooLarge { .. }
        | Error::NonZeroMean { .. }
        | Error::GridMismatch { .. }
        | Error::Domain(_)
        | Error::Dimension(_)
        | Error::IndexOutOfRange { .. } => VtStatus::InvalidInput,
        Error::NotMonotone { .. } | Error::NotPositive { .. } | Error::NotUnimodular { .. } | Error::Orientation { .. } => {
            VtStatus::Precondition
        }
        Error::InverseDiverged { .. } | Error::Numerical(_) | Error::Resolution { .. } => VtStatus::Numerical,
    }
}

struct Failure(VtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(VtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> VtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&msg);
            VtStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn samples<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, n))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = value;
    Ok(())
}

unsafe fn copy_values(src: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < src.len() {
        return Err(Failure(VtStatus::BufferTooSmall, format!("buffer holds {len} values, {} needed", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn vt_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
            *buf.add(k) = 0;
        }
        bytes.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn vt_status_str(status: VtStatus) -> *const c_char {
    let s: &'static CStr = match status {
        VtStatus::Ok => c"ok",
        VtStatus::NullPointer => c"null pointer",
        VtStatus::InvalidInput => c"invalid input",
        VtStatus::Precondition => c"precondition violated",
        VtStatus::Numerical => c"numerical failure",
        VtStatus::BufferTooSmall => c"buffer too small",
        VtStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

// ---- periodic functions ----

/// Copies `n` samples (`n` a power of two ≥ 16) into a new function.
///
/// # Safety
/// `values` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_new(values: *const f64, n: usize, weight: i32, out: *mut *mut VtPeriodicFn) -> VtStatus {
    guard(|| {
        let v = samples(values, n, "values")?;
        emit(out, VtPeriodicFn(PeriodicFn::new(v.to_vec(), weight)?))
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_free(f: *mut VtPeriodicFn) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Sample count, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_len(f: *const VtPeriodicFn) -> usize {
    f.as_ref().map_or(0, |f| f.0.n())
}

/// # Safety
/// `f` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_values(f: *const VtPeriodicFn, out: *mut f64, len: usize) -> VtStatus {
    guard(|| copy_values(borrow(f, "function")?.0.values(), out, len))
}

/// Spectral derivative of the given order.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_derivative(f: *const VtPeriodicFn, order: u32, out: *mut *mut VtPeriodicFn) -> VtStatus {
    guard(|| emit(out, VtPeriodicFn(borrow(f, "function")?.0.derivative(order))))
}

/// `∫₀¹ f dx`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_periodic_integral(f: *const VtPeriodicFn, out: *mut f64) -> VtStatus {
    guard(|| write_out(out, borrow(f, "function")?.0.integral(), "output"))
}

// ---- diffeomorphisms ----

/// Lift with displacement samples `phi` (length `n`) and integer winding.
///
/// # Safety
/// `phi` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_new(phi: *const f64, n: usize, winding: i64, out: *mut *mut VtDiffeo) -> VtStatus {
    guard(|| {
        let v = samples(phi, n, "phi")?;
        emit(out, VtDiffeo(DiffeoLift::new(PeriodicFn::new(v.to_vec(), 0)?, winding)?))
    })
}

/// `x ↦ x + t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_rotation(n: usize, t: f64, out: *mut *mut VtDiffeo) -> VtStatus {
    guard(|| emit(out, VtDiffeo(DiffeoLift::rotation(n, t)?)))
}

/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_free(f: *mut VtDiffeo) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Displacement `F(x_k) − x_k` at the grid points.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_displacement(f: *const VtDiffeo, out: *mut f64, len: usize) -> VtStatus {
    guard(|| copy_values(borrow(f, "diffeo")?.0.displacement().values(), out, len))
}

/// `f ∘ g`.
///
/// # Safety
/// `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_compose(f: *const VtDiffeo, g: *const VtDiffeo, out: *mut *mut VtDiffeo) -> VtStatus {
    guard(|| emit(out, VtDiffeo(compose(&borrow(f, "f")?.0, &borrow(g, "g")?.0)?)))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_invert(f: *const VtDiffeo, out: *mut *mut VtDiffeo) -> VtStatus {
    guard(|| emit(out, VtDiffeo(invert(&borrow(f, "diffeo")?.0)?)))
}

/// Schwarzian derivative `F‴/F′ − (3/2)(F″/F′)²`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_diffeo_schwarzian(f: *const VtDiffeo, out: *mut *mut VtPeriodicFn) -> VtStatus {
    guard(|| emit(out, VtPeriodicFn(schwarzian(&borrow(f, "diffeo")?.0))))
}

// ---- Hill potentials ----

/// # Safety
/// `values` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_potential_new(values: *const f64, n: usize, out: *mut *mut VtPotential) -> VtStatus {
    guard(|| {
        let v = samples(values, n, "values")?;
        emit(out, VtPotential(HillPotential::new(PeriodicFn::new(v.to_vec(), 2)?)))
    })
}

/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_potential_free(t: *mut VtPotential) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn vt_potential_values(t: *const VtPotential, out: *mut f64, len: usize) -> VtStatus {
    guard(|| copy_values(borrow(t, "potential")?.0.values(), out, len))
}

/// `F⁻¹·T = F′² T∘F + ½ 𝒮(F)`.
///
/// # Safety
/// `f`, `t` must be live handles on the same grid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_potential_act(f: *const VtDiffeo, t: *const VtPotential, out: *mut *mut VtPotential) -> VtStatus {
    guard(|| {
        let (f, t) = (&borrow(f, "diffeo")?.0, &borrow(t, "potential")?.0);
        if f.n() != t.n() {
            return Err(Error::GridMismatch { expected: t.n(), found: f.n() }.into());
        }
        emit(out, VtPotential(act_on_hill(f, t)))
    })
}

/// Orbit type of a monodromy matrix.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VtOrbitClass {
    Hyperbolic = 0,
    Parabolic = 1,
    Elliptic = 2,
}

/// Monodromy of `u″ + T u = 0`: row-major matrix, trace and orbit class.
/// Any output pointer may be null.
///
/// # Safety
/// `t` must be a live handle; non-null outputs must be writable (`matrix`
/// for four doubles).
#[no_mangle]
pub unsafe extern "C" fn vt_potential_monodromy(
    t: *const VtPotential,
    matrix: *mut f64,
    trace: *mut f64,
    class: *mut VtOrbitClass,
) -> VtStatus {
    guard(|| {
        let m = monodromy(&borrow(t, "potential")?.0)?;
        if !matrix.is_null() {
            let flat = [m.matrix[0][0], m.matrix[0][1], m.matrix[1][0], m.matrix[1][1]];
            ptr::copy_nonoverlapping(flat.as_ptr(), matrix, 4);
        }
        if !trace.is_null() {
            *trace = m.trace;
        }
        if !class.is_null() {
            *class = match m.class {
                OrbitClass::Hyperbolic => VtOrbitClass::Hyperbolic,
                OrbitClass::Parabolic => VtOrbitClass::Parabolic,
                OrbitClass::Elliptic => VtOrbitClass::Elliptic,
            };
        }
        Ok(())
    })
}

// ---- boundary connections ----

/// Connection with coefficients `a`, `s`, `u`, each of length `n`.
///
/// # Safety
/// `a`, `s`, `u` must each point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_connection_new(
    a: *const f64,
    s: *const f64,
    u: *const f64,
    n: usize,
    out: *mut *mut VtConnection,
) -> VtStatus {
    guard(|| {
        let f = |p, what| -> Result<PeriodicFn, Failure> { Ok(PeriodicFn::new(samples(p, n, what)?.to_vec(), 0)?) };
        emit(out, VtConnection(BoundaryConnection::new(f(a, "a")?, f(s, "s")?, f(u, "u")?)?))
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vt_connection_free(c: *mut VtConnection) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Hill potential of a positive connection by the closed formula.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_hill_from_asu(c: *const VtConnection, out: *mut *mut VtPotential) -> VtStatus {
    guard(|| emit(out, VtPotential(hill_from_asu(&borrow(c, "connection")?.0)?)))
}

/// Hill potential of a positive connection by Drinfeld–Sokolov gauge fixing.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_ds_normalize(c: *const VtConnection, out: *mut *mut VtPotential) -> VtStatus {
    guard(|| emit(out, VtPotential(ds_normalize(&borrow(c, "connection")?.0)?.1)))
}

// ---- trumpet ----

/// `ω_N(v, w)` at the point `(ell, F)`, tangents `(v_ell, v_f)` and
/// `(w_ell, w_f)` with `v_f`, `w_f` sampled on the grid of `f`.
///
/// # Safety
/// `f` must be a live handle; `v_f`, `w_f` must point to `vt_diffeo` grid
/// size doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vt_trumpet_omega(
    ell: f64,
    f: *const VtDiffeo,
    v_ell: f64,
    v_f: *const f64,
    w_ell: f64,
    w_f: *const f64,
    out: *mut f64,
) -> VtStatus {
    guard(|| {
        let f = &borrow(f, "diffeo")?.0;
        let n = f.n();
        let p = TrumpetPoint::new(ell, f.clone())?;
        let v = TrumpetTangent::new(v_ell, PeriodicFn::new(samples(v_f, n, "v_f")?.to_vec(), 0)?);
        let w = TrumpetTangent::new(w_ell, PeriodicFn::new(samples(w_f, n, "w_f")?.to_vec(), 0)?);
        write_out(out, omega_n(&p, &v, &w), "output")
    })
}

// ---- verification ----

/// Runs a verification suite (`"all"`, `"diffeo"`, `"hill"`, `"coframe"`,
/// `"trumpet"`, `"wolpert"` or `"groupoid"`) and returns its JSON report in
/// `*json`, to be released with [`vt_string_free`]. `*passed` is set to 1
/// when every check passes.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `json` and `passed` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn vt_verify(
    suite: *const c_char,
    n: usize,
    trials: usize,
    seed: u64,
    json: *mut *mut c_char,
    passed: *mut i32,
) -> VtStatus {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        if json.is_null() || passed.is_null() {
            return Err(null("output"));
        }
        let name = CStr::from_ptr(suite).to_string_lossy();
        let suite = std::iter::once(Suite::All)
            .chain(Suite::MODULES)
            .find(|s| s.name() == name)
            .ok_or_else(|| Failure(VtStatus::InvalidInput, format!("unknown suite `{name}`")))?;
        let cfg = VerifyConfig { n, trials, seed, ..VerifyConfig::default() };
        let report = run_suite(suite, &cfg)?;
        let text = report.to_json();
        *json = CString::new(text).expect("JSON has no NUL").into_raw();
        *passed = i32::from(report.pass);
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
