//! C ABI over `heatspec`.
//!
//! Every function returns an [`HsStatus`]. On failure the message is kept
//! per thread and read back with [`hs_last_error_message`]. Handles are
//! opaque and owned by the caller once returned; strings handed out must be
//! released with [`hs_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io::Cursor;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heatspec::asymptotic_fit::{fit_spectrum, TGrid};
use heatspec::boundary_geometry::{BoundaryClassification, BoundaryInvariants, ModelManifold};
use heatspec::cli::parse_model_spec;
use heatspec::discriminator::{classify_from_spectra, compare_manifolds, recover_invariants, FitOptions, SpectralDataset};
use heatspec::exact_algebra::{coefficient_matrix, Rational};
use heatspec::heat_coefficients::heat_coefficients;
use heatspec::scalar::Scalar;
use heatspec::spectra::{spectrum, EigenvalueList};
use heatspec::{BoundaryCondition, Error, OperatorPair};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    NumericPrecondition = 4,
    HypothesisViolation = 5,
    Inconsistent = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsBoundaryCondition {
    Dirichlet = 0,
    Neumann = 1,
    Absolute = 2,
    Relative = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsPair {
    DirichletNeumann = 0,
    Absolute01 = 1,
    Relative01 = 2,
}

/// Boundary invariants and classification flags, as floats.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HsClassification {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    pub vol_dm: f64,
    pub totally_geodesic: bool,
    pub minimal: bool,
    pub totally_umbilic: bool,
    pub strongly_totally_umbilic: bool,
    /// Meaningful only when `has_mu`.
    pub mu: f64,
    pub has_mu: bool,
}

/// A model manifold.
pub struct HsModel {
    inner: ModelManifold,
}

/// A truncated spectrum.
pub struct HsSpectrum {
    inner: EigenvalueList,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HsStatus {
    if e.is_numeric_precondition() {
        return HsStatus::NumericPrecondition;
    }
    match e {
        Error::Unsupported(_) | Error::UnsupportedEndomorphism { .. } => HsStatus::Unsupported,
        Error::HypothesisViolation(_) => HsStatus::HypothesisViolation,
        Error::SpecializationMismatch(_) | Error::InconsistentSamples { .. } => HsStatus::Inconsistent,
        _ => HsStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
    Status(HsStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            HsStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside heatspec".into());
            HsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(HsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

fn bc(b: HsBoundaryCondition) -> BoundaryCondition {
    match b {
        HsBoundaryCondition::Dirichlet => BoundaryCondition::Dirichlet,
        HsBoundaryCondition::Neumann => BoundaryCondition::Neumann,
        HsBoundaryCondition::Absolute => BoundaryCondition::Absolute,
        HsBoundaryCondition::Relative => BoundaryCondition::Relative,
    }
}

fn pair(p: HsPair) -> OperatorPair {
    match p {
        HsPair::DirichletNeumann => OperatorPair::DirichletNeumann,
        HsPair::Absolute01 => OperatorPair::Absolute01,
        HsPair::Relative01 => OperatorPair::Relative01,
    }
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail::Status(HsStatus::Inconsistent, "output contained NUL".into()))
}

fn fill<V: Scalar>(inv: &BoundaryInvariants<V>, c: &BoundaryClassification<V>) -> HsClassification {
    HsClassification {
        i0: inv.i0.to_f64(),
        i1: inv.i1.to_f64(),
        i2: inv.i2.to_f64(),
        vol_dm: inv.vol_dm.to_f64(),
        totally_geodesic: c.totally_geodesic,
        minimal: c.minimal,
        totally_umbilic: c.totally_umbilic,
        strongly_totally_umbilic: c.strongly_totally_umbilic,
        mu: c.mu.as_ref().map_or(0.0, Scalar::to_f64),
        has_mu: c.mu.is_some(),
    }
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `disk:radius=1`, `cylinder:height=pi,radius=1`, `hemisphere`,
/// `interval:length=pi`.
#[no_mangle]
pub unsafe extern "C" fn hs_model_new(spec: *const c_char, out: *mut *mut HsModel) -> HsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let spec = str_arg(spec, "spec")?;
        *out = Box::into_raw(Box::new(HsModel {
            inner: parse_model_spec(spec)?,
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hs_model_free(model: *mut HsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[no_mangle]
pub unsafe extern "C" fn hs_model_dimension(model: *const HsModel, out: *mut usize) -> HsStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(model, "model")?.inner.m;
        Ok(())
    })
}

/// `a₀..a₃` of `Δ_p` with condition `bc`, as floats.
#[no_mangle]
pub unsafe extern "C" fn hs_heat_coefficients(
    model: *const HsModel,
    p: usize,
    condition: HsBoundaryCondition,
    out: *mut f64,
) -> HsStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let set = heat_coefficients(&model.inner, p, bc(condition))?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&set.floats());
        Ok(())
    })
}

/// The same coefficients as exact JSON; free with [`hs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hs_heat_coefficients_json(
    model: *const HsModel,
    p: usize,
    condition: HsBoundaryCondition,
    out: *mut *mut c_char,
) -> HsStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        let out = out_arg(out, "out")?;
        let set = heat_coefficients(&model.inner, p, bc(condition))?;
        let json = serde_json::to_string(&set).map_err(|e| Fail::Status(HsStatus::Inconsistent, e.to_string()))?;
        *out = to_c_string(json)?;
        Ok(())
    })
}

/// Determinant of the exact coefficient matrix of `pair` in dimension `m`.
#[no_mangle]
pub extern "C" fn hs_pair_determinant(which: HsPair, m: usize, num: *mut i64, den: *mut i64) -> HsStatus {
    guard(|| {
        let (num, den) = unsafe { (out_arg(num, "num")?, out_arg(den, "den")?) };
        let det = coefficient_matrix(pair(which), m)?.determinant;
        let narrow = |x: &Rational| -> Result<(i64, i64), Fail> {
            let n = i64::try_from(x.numer()).ok();
            let d = i64::try_from(x.denom()).ok();
            n.zip(d)
                .ok_or_else(|| Fail::Status(HsStatus::InvalidArgument, "determinant exceeds 64 bits".into()))
        };
        (*num, *den) = narrow(&det)?;
        Ok(())
    })
}

/// Eigenvalues of `Δ_p` below `lambda_max` on a model.
#[no_mangle]
pub unsafe extern "C" fn hs_spectrum_new(
    model: *const HsModel,
    p: usize,
    condition: HsBoundaryCondition,
    lambda_max: f64,
    out: *mut *mut HsSpectrum,
) -> HsStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        let out = out_arg(out, "out")?;
        let list = spectrum(&model.inner, p, bc(condition), lambda_max)?;
        *out = Box::into_raw(Box::new(HsSpectrum { inner: list }));
        Ok(())
    })
}

/// Reads `lambda,multiplicity` text of a dimension-`m` operator.
/// `lambda_max <= 0` takes the largest eigenvalue read.
#[no_mangle]
pub unsafe extern "C" fn hs_spectrum_from_csv(
    text: *const c_char,
    m: usize,
    lambda_max: f64,
    out: *mut *mut HsSpectrum,
) -> HsStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(text, "text")?;
        let cutoff = (lambda_max > 0.0).then_some(lambda_max);
        let list = EigenvalueList::from_csv(Cursor::new(text), m, cutoff, None)?;
        *out = Box::into_raw(Box::new(HsSpectrum { inner: list }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hs_spectrum_free(spectrum: *mut HsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of distinct eigenvalues.
#[no_mangle]
pub unsafe extern "C" fn hs_spectrum_len(spectrum: *const HsSpectrum, out: *mut usize) -> HsStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(spectrum, "spectrum")?.inner.entries.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn hs_spectrum_entry(
    spectrum: *const HsSpectrum,
    index: usize,
    lambda: *mut f64,
    multiplicity: *mut u64,
) -> HsStatus {
    guard(|| {
        let s = ref_arg(spectrum, "spectrum")?;
        let (lambda, multiplicity) = (out_arg(lambda, "lambda")?, out_arg(multiplicity, "multiplicity")?);
        let &(l, k) = s.inner.entries.get(index).ok_or_else(|| {
            Fail::Status(
                HsStatus::InvalidArgument,
                format!("index {index} out of range ({} entries)", s.inner.entries.len()),
            )
        })?;
        (*lambda, *multiplicity) = (l, k);
        Ok(())
    })
}

/// Least-squares fit of the first `n_terms` heat coefficients on a
/// geometric grid of `samples` times in `[t_min, t_max]`. `out` receives
/// `n_terms` values; `condition` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn hs_fit(
    spectrum: *const HsSpectrum,
    t_min: f64,
    t_max: f64,
    samples: usize,
    n_terms: usize,
    out: *mut f64,
    out_len: usize,
    condition: *mut f64,
) -> HsStatus {
    guard(|| {
        let s = ref_arg(spectrum, "spectrum")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        if out_len < n_terms {
            return Err(Fail::Status(
                HsStatus::BufferTooSmall,
                format!("need room for {n_terms} coefficients, got {out_len}"),
            ));
        }
        let grid = TGrid::new(t_min, t_max, samples)?;
        let f = fit_spectrum(&s.inner, &grid, n_terms)?;
        std::slice::from_raw_parts_mut(out, n_terms).copy_from_slice(&f.a_hat);
        if let Some(c) = condition.as_mut() {
            *c = f.condition_estimate;
        }
        Ok(())
    })
}

/// Boundary invariants recovered exactly from a model's closed-form
/// coefficients for `which`.
#[no_mangle]
pub unsafe extern "C" fn hs_classify_model(model: *const HsModel, which: HsPair, out: *mut HsClassification) -> HsStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        let out = out_arg(out, "out")?;
        let r = recover_invariants(&SpectralDataset::exact(&model.inner, pair(which))?, None)?;
        *out = fill(&r.invariants, &r.classification);
        Ok(())
    })
}

/// Fits both spectra of `which` (first and second member, in order) and
/// recovers the invariants. `tau` is `tau_num / tau_den`; `tol_rel <= 0`
/// uses the default fitted tolerance.
#[no_mangle]
pub unsafe extern "C" fn hs_classify_spectra(
    first: *const HsSpectrum,
    second: *const HsSpectrum,
    which: HsPair,
    m: usize,
    tau_num: i64,
    tau_den: i64,
    tol_rel: f64,
    out: *mut HsClassification,
) -> HsStatus {
    guard(|| {
        let (a, b) = (ref_arg(first, "first")?, ref_arg(second, "second")?);
        let out = out_arg(out, "out")?;
        if tau_den == 0 {
            return Err(Fail::Status(HsStatus::InvalidArgument, "tau denominator is zero".into()));
        }
        let tau = Rational::new(tau_num.into(), tau_den.into());
        let tol = (tol_rel > 0.0).then_some(tol_rel);
        let r = classify_from_spectra([&a.inner, &b.inner], pair(which), m, &tau, tol, &FitOptions::default())?;
        *out = fill(&r.invariants, &r.classification);
        Ok(())
    })
}

/// Exact transfer report between two models as JSON; free with
/// [`hs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hs_compare_models_json(
    a: *const HsModel,
    b: *const HsModel,
    which: HsPair,
    out: *mut *mut c_char,
) -> HsStatus {
    guard(|| {
        let (a, b) = (ref_arg(a, "a")?, ref_arg(b, "b")?);
        let out = out_arg(out, "out")?;
        let da = SpectralDataset::exact(&a.inner, pair(which))?;
        let db = SpectralDataset::exact(&b.inner, pair(which))?;
        let report = compare_manifolds(&da, &db, None)?;
        let json = serde_json::to_string(&report).map_err(|e| Fail::Status(HsStatus::Inconsistent, e.to_string()))?;
        *out = to_c_string(json)?;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_follow_the_error_kind() {
        assert_eq!(status_of(&Error::SingularSystem), HsStatus::NumericPrecondition);
        assert_eq!(status_of(&Error::HypothesisViolation(String::new())), HsStatus::HypothesisViolation);
        assert_eq!(status_of(&Error::Parse(String::new())), HsStatus::InvalidArgument);
    }
}
