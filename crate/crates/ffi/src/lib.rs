//! C ABI over the `mixedbf` library.
//!
//! Every function returns an `i32` status, `MBF_OK` on success, and writes
//! results through out-pointers. Objects are opaque handles released by their
//! `_free` function. The message of the last failure on the calling thread is
//! available from [`mbf_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mixedbf::boundary::boundary_t_integral;
use mixedbf::defcomplex::{weight_one_triviality, CEComplex, ComplexA, FinDimLieAlgebra, Module};
use mixedbf::graphs::{ChiralGraph, ChiralVertex, GraphClass};
use mixedbf::kernels::solve_lambda_constants;
use mixedbf::quadrature::QuadOptions;
use mixedbf::verify::identity_suite;
use mixedbf::weights::{bulk_weight, TestInput};
use mixedbf::Error;
use num::ToPrimitive;

pub const MBF_OK: i32 = 0;
pub const MBF_NULL_POINTER: i32 = 1;
pub const MBF_INVALID_UTF8: i32 = 2;
pub const MBF_DOMAIN: i32 = 3;
pub const MBF_DEGREE: i32 = 4;
pub const MBF_NUMERIC: i32 = 5;
pub const MBF_RESOURCE: i32 = 6;
pub const MBF_PRECONDITION: i32 = 7;
pub const MBF_CONSTRUCTION: i32 = 8;
pub const MBF_FIT: i32 = 9;
pub const MBF_PARSE: i32 = 10;
pub const MBF_BUFFER_TOO_SMALL: i32 = 11;
pub const MBF_PANIC: i32 = 12;

pub const MBF_MODULE_TRIVIAL: i32 = 0;
pub const MBF_MODULE_ADJOINT: i32 = 1;
pub const MBF_MODULE_COADJOINT: i32 = 2;

pub const MBF_CLASS_BETA_ROOTED_TREE: i32 = 0;
pub const MBF_CLASS_ISOLATED_VERTEX: i32 = 1;
pub const MBF_CLASS_ONE_LOOP_WHEEL: i32 = 2;
pub const MBF_CLASS_INADMISSIBLE: i32 = 3;

/// Opaque finite-dimensional Lie algebra with an invariant pairing.
pub struct MbfLieAlgebra(FinDimLieAlgebra);

/// Opaque graph of chiral vertices.
pub struct MbfGraph(ChiralGraph);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => MBF_DOMAIN,
        Error::Degree(_) => MBF_DEGREE,
        Error::Numeric(_) => MBF_NUMERIC,
        Error::Resource(_) => MBF_RESOURCE,
        Error::Precondition(_) => MBF_PRECONDITION,
        Error::Construction(_) => MBF_CONSTRUCTION,
        Error::Fit(_) => MBF_FIT,
        Error::Parse(_) => MBF_PARSE,
    }
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(code(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MBF_NULL_POINTER, format!("{what} is null"))
}

/// Runs `f`, recording failures and containing panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MBF_OK,
        Ok(Err(Fail(c, msg))) => {
            set_error(msg);
            c
        }
        Err(_) => {
            set_error("internal panic".into());
            MBF_PANIC
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MBF_INVALID_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string; `len_out` receives the length without the NUL.
///
/// # Safety
/// `buf` must be valid for `cap` bytes or null with `cap == 0`.
#[no_mangle]
pub unsafe extern "C" fn mbf_last_error_message(
    buf: *mut c_char,
    cap: usize,
    len_out: *mut usize,
) -> i32 {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    if !len_out.is_null() {
        len_out.write(msg.len());
    }
    if cap < msg.len() + 1 {
        return MBF_BUFFER_TOO_SMALL;
    }
    if buf.is_null() {
        return MBF_NULL_POINTER;
    }
    std::ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, msg.len());
    buf.add(msg.len()).write(0);
    MBF_OK
}

/// The solved constants `(c1, c2)` of the operator taking the heat-kernel
/// Gaussian to the propagator integrand.
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_lambda_constants(c1: *mut f64, c2: *mut f64) -> i32 {
    guard(|| {
        let (a, b) = solve_lambda_constants()?;
        let f = |q: &mixedbf::ratfn::Q| q.to_f64().unwrap_or(f64::NAN);
        put(c1, f(&a), "c1")?;
        put(c2, f(&b), "c2")
    })
}

/// Runs the exact identity suite.
///
/// # Safety
/// Out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_identity_suite(total: *mut usize, failed: *mut usize) -> i32 {
    guard(|| {
        let checks = identity_suite();
        put(total, checks.len(), "total")?;
        put(
            failed,
            checks.iter().filter(|c| !c.passed).count(),
            "failed",
        )
    })
}
/// `int_{eps <= T0 <= T1 <= L} dT0 dT1 / (T0 + T1)`, half the square integral.
/// `int_{[eps,L]^2} dT0 dT1 / (T0 + T1)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_boundary_t_integral(eps: f64, l: f64, out: *mut f64) -> i32 {
    guard(|| put(out, boundary_t_integral(eps, l)?, "out"))
}

/// Loads a shipped algebra: `sl2`, `sl2+sl2` or `abelian1`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_lie_algebra_shipped(
    name: *const c_char,
    out: *mut *mut MbfLieAlgebra,
) -> i32 {
    guard(|| {
        let g = FinDimLieAlgebra::shipped(text(name, "name")?)?;
        put(out, Box::into_raw(Box::new(MbfLieAlgebra(g))), "out")
    })
}

/// Parses an algebra from its TOML description.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_lie_algebra_from_toml(
    toml: *const c_char,
    out: *mut *mut MbfLieAlgebra,
) -> i32 {
    guard(|| {
        let g = FinDimLieAlgebra::from_toml(text(toml, "toml")?)?;
        put(out, Box::into_raw(Box::new(MbfLieAlgebra(g))), "out")
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mbf_lie_algebra_free(g: *mut MbfLieAlgebra) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_lie_algebra_dim(g: *const MbfLieAlgebra, out: *mut usize) -> i32 {
    guard(|| put(out, get(g, "algebra")?.0.dim(), "out"))
}

/// Dimensions of `H^k(g; M)` for `k = 0..=dim g` into `buf`. `module` is one
/// of the `MBF_MODULE_*` constants; `len_out` receives the count.
///
/// # Safety
/// `g` must be a live handle, `buf` valid for `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn mbf_cohomology_dims(
    g: *const MbfLieAlgebra,
    module: i32,
    buf: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> i32 {
    guard(|| {
        let g = &get(g, "algebra")?.0;
        let m = match module {
            MBF_MODULE_TRIVIAL => Module::Trivial,
            MBF_MODULE_ADJOINT => Module::Adjoint,
            MBF_MODULE_COADJOINT => Module::Coadjoint,
            _ => return Err(Fail(MBF_DOMAIN, format!("unknown module {module}"))),
        };
        write_dims(&CEComplex::new(g, m).cohomology_dims()?, buf, cap, len_out)
    })
}

/// Cohomology of the two-term complex, starting in degree -2.
///
/// # Safety
/// As for [`mbf_cohomology_dims`].
#[no_mangle]
pub unsafe extern "C" fn mbf_complex_a_dims(
    g: *const MbfLieAlgebra,
    buf: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> i32 {
    guard(|| {
        let g = &get(g, "algebra")?.0;
        write_dims(&ComplexA::new(g).cohomology_dims()?, buf, cap, len_out)
    })
}

unsafe fn write_dims(
    dims: &[usize],
    buf: *mut usize,
    cap: usize,
    len_out: *mut usize,
) -> Result<(), Fail> {
    put(len_out, dims.len(), "len_out")?;
    if cap < dims.len() {
        return Err(Fail(
            MBF_BUFFER_TOO_SMALL,
            format!("need {} entries", dims.len()),
        ));
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    std::ptr::copy_nonoverlapping(dims.as_ptr(), buf, dims.len());
    Ok(())
}

/// Writes 1 if every adjoint cohomology group vanishes, else 0. Fails with
/// `MBF_PRECONDITION` for a non-semisimple algebra.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_weight_one_trivial(g: *const MbfLieAlgebra, out: *mut i32) -> i32 {
    guard(|| {
        let b = weight_one_triviality(&get(g, "algebra")?.0)?;
        put(out, b as i32, "out")
    })
}

/// Parses a graph from its text description.
///
/// # Safety
/// `desc` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_graph_parse(desc: *const c_char, out: *mut *mut MbfGraph) -> i32 {
    guard(|| {
        let g = ChiralGraph::parse(text(desc, "desc")?)?;
        g.validate().map_err(|m| Fail(MBF_DOMAIN, m))?;
        put(out, Box::into_raw(Box::new(MbfGraph(g))), "out")
    })
}

/// A wheel of `n` cubic vertices.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_graph_wheel(n: usize, out: *mut *mut MbfGraph) -> i32 {
    guard(|| {
        if n == 0 {
            return Err(Fail(MBF_DOMAIN, "a wheel needs at least one vertex".into()));
        }
        let g = ChiralGraph::wheel(vec![ChiralVertex::cubic(); n]);
        put(out, Box::into_raw(Box::new(MbfGraph(g))), "out")
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mbf_graph_free(g: *mut MbfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// First Betti number `E - V + components`.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_graph_betti(g: *const MbfGraph, out: *mut i64) -> i32 {
    guard(|| put(out, get(g, "graph")?.0.betti_number() as i64, "out"))
}

/// One of the `MBF_CLASS_*` constants.
///
/// # Safety
/// `g` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_graph_classify(g: *const MbfGraph, out: *mut i32) -> i32 {
    guard(|| {
        let c = match get(g, "graph")?.0.classify()? {
            GraphClass::BetaRootedTree => MBF_CLASS_BETA_ROOTED_TREE,
            GraphClass::IsolatedVertex => MBF_CLASS_ISOLATED_VERTEX,
            GraphClass::OneLoopWheel => MBF_CLASS_ONE_LOOP_WHEEL,
            GraphClass::Inadmissible => MBF_CLASS_INADMISSIBLE,
        };
        put(out, c, "out")
    })
}

/// Bulk wheel weight with the standard test inputs, relative quadrature
/// tolerance `tol`.
///
/// # Safety
/// `g` must be a live handle and the out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn mbf_bulk_weight(
    g: *const MbfGraph,
    eps: f64,
    l: f64,
    tol: f64,
    value: *mut f64,
    error_estimate: *mut f64,
) -> i32 {
    guard(|| {
        let g = &get(g, "graph")?.0;
        if !(tol > 0.0) {
            return Err(Fail(MBF_DOMAIN, "tolerance must be positive".into()));
        }
        let opts = QuadOptions {
            tol,
            ..QuadOptions::default()
        };
        let w = bulk_weight(
            g,
            eps,
            l,
            &TestInput::wheel_inputs(g.external_legs().len()),
            &opts,
        )?;
        put(value, w.value, "value")?;
        put(error_estimate, w.error_estimate, "error_estimate")
    })
}
