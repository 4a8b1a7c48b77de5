//! C ABI over `repgrowth`.
//!
//! Every fallible function returns an [`RgStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and read
//! with [`rg_last_error_message`]. Objects are opaque handles released with
//! their `_free` function. Strings returned through out-pointers are owned by
//! the caller and released with [`rg_string_free`]. Exact rationals cross the
//! boundary as decimal strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use repgrowth::charzeta::{zeta_even, GroupTables};
use repgrowth::liepipe::{
    bound_root, min_genus, run_pipeline, LieError, LieType, PipelineRun, SimpleFactor,
};
use repgrowth::localring::LocalRingSpec;
use repgrowth::modgroup::{build_named, build_sl, cache, GroupError, NamedGroup};
use repgrowth::padicpush::{analyze, parse_exponents, MonomialMapSpec};
use repgrowth::varcount::{count_graph_variety, CountError, GraphShape, GraphVarietyInstance};
use repgrowth::verify::{run_criterion, Profile, VerifyOptions};
use repgrowth::wordmap::{fiber_count, WordMapError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    Failed = 4,
    Panic = 5,
}

/// A finite group with its conjugacy classes and class constants.
pub struct RgGroup {
    tables: GroupTables,
}

/// A finished degeneration pipeline run.
pub struct RgPipeline {
    run: PipelineRun,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct FfiError {
    status: RgStatus,
    message: String,
}

impl FfiError {
    fn new(status: RgStatus, message: impl ToString) -> Self {
        FfiError {
            status,
            message: message.to_string(),
        }
    }
}

impl From<GroupError> for FfiError {
    fn from(e: GroupError) -> Self {
        let status = match e {
            GroupError::SizeLimit { .. } => RgStatus::BudgetExceeded,
            GroupError::Io(_) | GroupError::Cache(_) => RgStatus::Failed,
            _ => RgStatus::InvalidArgument,
        };
        FfiError::new(status, e)
    }
}

impl From<WordMapError> for FfiError {
    fn from(e: WordMapError) -> Self {
        match e {
            WordMapError::Group(g) => g.into(),
            WordMapError::BadLength { .. } => FfiError::new(RgStatus::InvalidArgument, e),
            _ => FfiError::new(RgStatus::Failed, e),
        }
    }
}

impl From<CountError> for FfiError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. } => FfiError::new(RgStatus::BudgetExceeded, e),
            CountError::Group(g) => g.into(),
            CountError::Zeta(_) => FfiError::new(RgStatus::Failed, e),
            _ => FfiError::new(RgStatus::InvalidArgument, e),
        }
    }
}

impl From<LieError> for FfiError {
    fn from(e: LieError) -> Self {
        FfiError::new(RgStatus::InvalidArgument, e)
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), FfiError>) -> RgStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RgStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(&e.message);
            e.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            RgStatus::Panic
        }
    }
}

unsafe fn input<'a>(s: *const c_char, what: &str) -> Result<&'a str, FfiError> {
    if s.is_null() {
        return Err(FfiError::new(
            RgStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| FfiError::new(RgStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, FfiError>
where
    T::Err: std::fmt::Display,
{
    s.parse()
        .map_err(|e: T::Err| FfiError::new(RgStatus::InvalidArgument, format!("{what}: {e}")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), FfiError> {
    if out.is_null() {
        return Err(FfiError::new(
            RgStatus::NullPointer,
            "output pointer is null",
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, FfiError> {
    h.as_ref()
        .ok_or_else(|| FfiError::new(RgStatus::NullPointer, "handle is null"))
}

fn owned_string(s: impl Into<Vec<u8>>) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

unsafe fn write_string(out: *mut *mut c_char, s: impl Into<Vec<u8>>) -> Result<(), FfiError> {
    if out.is_null() {
        return Err(FfiError::new(
            RgStatus::NullPointer,
            "output pointer is null",
        ));
    }
    out.write(owned_string(s));
    Ok(())
}

fn json(value: &impl serde::Serialize) -> Result<String, FfiError> {
    serde_json::to_string(value).map_err(|e| FfiError::new(RgStatus::Failed, e))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `SL_d` over a ring written `zmod:p^r`, `tpoly:p^r` or `gf:p^f`.
///
/// # Safety
/// `ring` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_new_sl(
    d: u32,
    ring: *const c_char,
    budget: u64,
    out: *mut *mut RgGroup,
) -> RgStatus {
    guard(|| {
        let spec: LocalRingSpec = parse(input(ring, "ring")?, "ring")?;
        let g = build_sl(d as usize, spec, budget)?;
        write(
            out,
            Box::into_raw(Box::new(RgGroup {
                tables: GroupTables::new(g),
            })),
        )
    })
}

/// A named group: `trivial`, `s3`, `d4`, `q8`, `c5`, ...
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_new_named(
    name: *const c_char,
    out: *mut *mut RgGroup,
) -> RgStatus {
    guard(|| {
        let named: NamedGroup = input(name, "name")?.parse()?;
        let g = build_named(named)?;
        write(
            out,
            Box::into_raw(Box::new(RgGroup {
                tables: GroupTables::new(g),
            })),
        )
    })
}

/// Reads a group written by the binary cache.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_load(path: *const c_char, out: *mut *mut RgGroup) -> RgStatus {
    guard(|| {
        let (g, conj) = cache::load(Path::new(input(path, "path")?))?;
        write(
            out,
            Box::into_raw(Box::new(RgGroup {
                tables: GroupTables::with_conjugacy(g, conj),
            })),
        )
    })
}

/// Writes the group and its classes to the binary cache format.
///
/// # Safety
/// `group` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rg_group_save(group: *const RgGroup, path: *const c_char) -> RgStatus {
    guard(|| {
        let g = handle(group)?;
        Ok(cache::save(
            Path::new(input(path, "path")?),
            &g.tables.group,
            &g.tables.conj,
        )?)
    })
}

/// # Safety
/// `group` must come from an `rg_group_new_*` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rg_group_free(group: *mut RgGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_order(group: *const RgGroup, out: *mut u64) -> RgStatus {
    guard(|| write(out, handle(group)?.tables.order()))
}

/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_class_count(group: *const RgGroup, out: *mut usize) -> RgStatus {
    guard(|| write(out, handle(group)?.tables.class_count()))
}

/// `ζ_G(s)` for even `s >= 2`, as a fraction `"num/den"` (or an integer).
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_zeta(
    group: *const RgGroup,
    s: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        let z = zeta_even(&handle(group)?.tables, s, seed).map_err(|e| match e {
            repgrowth::charzeta::CharError::BadArgument(_) => {
                FfiError::new(RgStatus::InvalidArgument, e)
            }
            _ => FfiError::new(RgStatus::Failed, e),
        })?;
        write_string(out, z.to_string())
    })
}

/// Number of `(x_1, y_1, ..., x_n, y_n)` with `Π [x_i, y_i]` equal to element
/// `element` (an index below the group order), as a decimal string.
///
/// # Safety
/// `group` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_group_fiber_count(
    group: *const RgGroup,
    n: u32,
    element: u32,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        let t = &handle(group)?.tables;
        if element as u64 >= t.order() {
            return Err(FfiError::new(
                RgStatus::InvalidArgument,
                format!("element {element} out of range"),
            ));
        }
        if n == 0 {
            return Err(WordMapError::BadLength { n, min: 1 }.into());
        }
        write_string(out, fiber_count(t, n, element)?.to_string())
    })
}

/// Runs the degeneration pipeline for `ty` in `sl`, `so`, `sp`.
///
/// # Safety
/// `ty` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_run(
    ty: *const c_char,
    d: u32,
    out: *mut *mut RgPipeline,
) -> RgStatus {
    guard(|| {
        let ty: LieType = input(ty, "type")?.parse()?;
        let run = run_pipeline(ty, d)?;
        write(out, Box::into_raw(Box::new(RgPipeline { run })))
    })
}

/// # Safety
/// `p` must come from `rg_pipeline_run` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_free(p: *mut RgPipeline) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_discrepancy_count(
    p: *const RgPipeline,
    out: *mut usize,
) -> RgStatus {
    guard(|| write(out, handle(p)?.run.report.discrepancies.len()))
}

/// Whether every terminal graph is a forest of maximal degree at most `max_degree`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_forests_ok(
    p: *const RgPipeline,
    max_degree: usize,
    out: *mut bool,
) -> RgStatus {
    guard(|| write(out, handle(p)?.run.report.forests_ok(max_degree)))
}

/// The full report as JSON.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_report_json(
    p: *const RgPipeline,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| write_string(out, json(&handle(p)?.run.report)?))
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_dot_count(p: *const RgPipeline, out: *mut usize) -> RgStatus {
    guard(|| write(out, handle(p)?.run.dot.len()))
}

/// Name and DOT text of the `index`-th terminal graph.
///
/// # Safety
/// `p` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pipeline_dot(
    p: *const RgPipeline,
    index: usize,
    out_name: *mut *mut c_char,
    out_doc: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        let (name, doc) = handle(p)?.run.dot.get(index).ok_or_else(|| {
            FfiError::new(
                RgStatus::InvalidArgument,
                format!("no DOT document {index}"),
            )
        })?;
        if out_name.is_null() || out_doc.is_null() {
            return Err(FfiError::new(
                RgStatus::NullPointer,
                "output pointer is null",
            ));
        }
        write_string(out_name, name.as_str())?;
        write_string(out_doc, doc.as_str())
    })
}

/// `B` for one simple factor such as `sl:5`, `sp3` or `e8`.
///
/// # Safety
/// `factor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_bound_root(factor: *const c_char, out: *mut u64) -> RgStatus {
    guard(|| {
        let f: SimpleFactor = input(factor, "factor")?.parse()?;
        write(out, bound_root(f))
    })
}

/// The genus threshold `⌈B/2⌉ + 1` and the smallest `n` with `n >= B/2 + 1`.
///
/// # Safety
/// Both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_min_genus(
    bound: u64,
    out_headline: *mut u64,
    out_strict: *mut u64,
) -> RgStatus {
    guard(|| {
        let g = min_genus(bound);
        write(out_headline, g.headline)?;
        write(out_strict, g.strict)
    })
}

/// Points on the symplectic graph variety, as a decimal string.
///
/// # Safety
/// `graph` and `ring` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pointcount(
    graph: *const c_char,
    dimw: u32,
    ring: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        let shape: GraphShape = input(graph, "graph")?.parse()?;
        let spec: LocalRingSpec = parse(input(ring, "ring")?, "ring")?;
        let inst = GraphVarietyInstance::uniform(shape.0, dimw, spec)?;
        write_string(out, count_graph_variety(&inst, budget)?.count.to_string())
    })
}

/// Pushforward report of a monomial map as JSON; `a` and `b` are comma lists.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rg_pushforward_json(
    a: *const c_char,
    b: *const c_char,
    q: u64,
    r_max: u32,
    out: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        let invalid =
            |e: repgrowth::padicpush::PushError| FfiError::new(RgStatus::InvalidArgument, e);
        let a = parse_exponents(input(a, "A")?).map_err(invalid)?;
        let b = parse_exponents(input(b, "B")?).map_err(invalid)?;
        let spec = MonomialMapSpec::new(a, b, q).map_err(invalid)?;
        write_string(out, json(&analyze(&spec, r_max))?)
    })
}

/// Runs one acceptance criterion (1 to 11).
///
/// # Safety
/// `out_passed` must be writable; `out_detail` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rg_verify_criterion(
    id: u8,
    full: bool,
    seed: u64,
    out_passed: *mut bool,
    out_detail: *mut *mut c_char,
) -> RgStatus {
    guard(|| {
        if !(1..=repgrowth::verify::CRITERIA).contains(&id) {
            return Err(FfiError::new(
                RgStatus::InvalidArgument,
                format!("no criterion {id}"),
            ));
        }
        let profile = if full { Profile::Full } else { Profile::Quick };
        let r = run_criterion(
            id,
            &VerifyOptions {
                profile,
                seed,
                fault: None,
                dot_dir: None,
            },
        );
        write(out_passed, r.passed)?;
        if !out_detail.is_null() {
            write_string(out_detail, r.detail)?;
        }
        Ok(())
    })
}
