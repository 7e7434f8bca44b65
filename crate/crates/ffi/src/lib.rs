//! C ABI over `lame-susy`.
//!
//! Objects are opaque handles created by `ls_*_new` and released by the
//! matching `ls_*_free`. Every fallible call returns an [`LsStatus`]; on
//! failure a message is kept per thread and read with [`ls_last_error`].
//! Outputs are written only on success, except that buffer calls always
//! report the required length through `written`. Panics never cross the
//! boundary.

// Entry points are safe to call with null pointers; non-null pointers must
// satisfy the contract stated on each function, as is usual for a C API.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lame_susy::cli::{build_partner, RunConfig};
use lame_susy::frobenius::{potential, solve, GeneralSolution, LameParams};
use lame_susy::spectral::{band_edges, BandStructure};
use lame_susy::susy::{PartnerPotential, Periodicity};
use lame_susy::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    Domain = 10,
    Pole = 11,
    Numeric = 12,
    ExceptionalEnergy = 13,
    BranchSelection = 14,
    NodalSeed = 15,
    NodalWronskian = 16,
    Reality = 17,
    Path = 18,
    Range = 19,
    NullAction = 20,
    Panic = 99,
}

/// Bloch solutions `ψ±` at one energy.
pub struct LsSolution(GeneralSolution);

/// Band edges of the associated Lamé potential over an energy interval.
pub struct LsBands(BandStructure);

/// A first- or second-order SUSY partner potential.
pub struct LsPartner(PartnerPotential);

/// One seed of a partner: `u = ψ^sign + λ ψ^−sign` at `energy`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LsSeed {
    pub energy: f64,
    pub lambda: f64,
    /// `+1` or `−1`.
    pub sign: i32,
}

struct Failure {
    status: LsStatus,
    message: String,
}

impl Failure {
    fn new(status: LsStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => LsStatus::Domain,
            Error::Pole { .. } => LsStatus::Pole,
            Error::Numeric { .. } => LsStatus::Numeric,
            Error::ExceptionalEnergy { .. } => LsStatus::ExceptionalEnergy,
            Error::BranchSelection(_) => LsStatus::BranchSelection,
            Error::NodalSeed { .. } => LsStatus::NodalSeed,
            Error::NodalWronskian { .. } => LsStatus::NodalWronskian,
            Error::Reality { .. } => LsStatus::Reality,
            Error::Path { .. } => LsStatus::Path,
            Error::Range { .. } => LsStatus::Range,
            Error::NullAction { .. } => LsStatus::NullAction,
        };
        Self::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LsStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            LsStatus::Panic
        }
    }
}

fn nonnull<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either null or a pointer obtained from this
    // library (or to caller-owned storage) that is valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| Failure::new(LsStatus::NullPointer, format!("{what} is null")))
}

fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::new(LsStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and, per the API contract, valid for writes.
    unsafe { p.write(value) };
    Ok(())
}

/// Copy `values` to `buf` of capacity `len`; `written` always receives the
/// full count so callers can size a retry.
fn write_slice(values: &[f64], buf: *mut f64, len: usize, written: *mut usize) -> Result<(), Failure> {
    write_out(written, values.len(), "written")?;
    if values.len() > len {
        return Err(Failure::new(
            LsStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(Failure::new(LsStatus::NullPointer, "buffer is null"));
    }
    // SAFETY: buf is valid for `len >= values.len()` writes.
    unsafe { std::ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    Ok(())
}

fn sign_of(sign: i32) -> Result<i8, Failure> {
    match sign {
        1 => Ok(1),
        -1 => Ok(-1),
        s => Err(Failure::new(LsStatus::InvalidArgument, format!("sign must be +1 or -1, got {s}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ls_version() -> *const c_char {
    const V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(c) => c,
        Err(_) => panic!("version contains NUL"),
    };
    V.as_ptr()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// `V(x) = m(m+1)k² sn²x + ℓ(ℓ+1)k² cn²x/dn²x`.
#[no_mangle]
pub extern "C" fn ls_potential(m: u32, ell: u32, ksq: f64, x: f64, out: *mut f64) -> LsStatus {
    guard(|| {
        let p = LameParams::new(m, ell, ksq)?;
        write_out(out, potential(x, &p), "out")
    })
}

/// Solve at energy `energy`; `*out` receives a handle owned by the caller.
#[no_mangle]
pub extern "C" fn ls_solution_new(m: u32, ell: u32, ksq: f64, energy: f64, out: *mut *mut LsSolution) -> LsStatus {
    guard(|| {
        let p = LameParams::new(m, ell, ksq)?;
        let s = solve(&p, energy)?;
        write_out(out, Box::into_raw(Box::new(LsSolution(s))), "out")
    })
}

/// Release a handle from [`ls_solution_new`]; null is ignored.
///
/// # Safety
/// `sol` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ls_solution_free(sol: *mut LsSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// `ψ^sign(x)` as real and imaginary parts.
#[no_mangle]
pub extern "C" fn ls_solution_evaluate(
    sol: *const LsSolution,
    sign: i32,
    x: f64,
    re: *mut f64,
    im: *mut f64,
) -> LsStatus {
    guard(|| {
        let s = nonnull(sol, "solution")?;
        let z = s.0.get(sign_of(sign)?).evaluate(x)?;
        write_out(re, z.re, "re")?;
        write_out(im, z.im, "im")
    })
}

/// Bloch factor `ψ^sign(x + 2K) / ψ^sign(x)`.
#[no_mangle]
pub extern "C" fn ls_solution_bloch_factor(sol: *const LsSolution, sign: i32, re: *mut f64, im: *mut f64) -> LsStatus {
    guard(|| {
        let s = nonnull(sol, "solution")?;
        let z = s.0.get(sign_of(sign)?).bloch_factor()?;
        write_out(re, z.re, "re")?;
        write_out(im, z.im, "im")
    })
}

/// Series coefficients `a₀ … a_{m+ℓ}`.
#[no_mangle]
pub extern "C" fn ls_solution_coefficients(
    sol: *const LsSolution,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> LsStatus {
    guard(|| write_slice(&nonnull(sol, "solution")?.0.table.a, buf, len, written))
}

/// Shifts `b_r` of `ψ⁺`, as separate real and imaginary buffers of
/// capacity `len` each.
#[no_mangle]
pub extern "C" fn ls_solution_shifts(
    sol: *const LsSolution,
    re: *mut f64,
    im: *mut f64,
    len: usize,
    written: *mut usize,
) -> LsStatus {
    guard(|| {
        let b = &nonnull(sol, "solution")?.0.product.broots;
        let res: Vec<f64> = b.iter().map(|z| z.re).collect();
        let ims: Vec<f64> = b.iter().map(|z| z.im).collect();
        write_slice(&res, re, len, written)?;
        write_slice(&ims, im, len, written)
    })
}

/// Band edges in `[emin, emax]`, located to `tolerance`.
#[no_mangle]
pub extern "C" fn ls_bands_new(
    m: u32,
    ell: u32,
    ksq: f64,
    emin: f64,
    emax: f64,
    tolerance: f64,
    out: *mut *mut LsBands,
) -> LsStatus {
    guard(|| {
        let p = LameParams::new(m, ell, ksq)?;
        let (b, _) = band_edges(&|x| potential(x, &p), (emin, emax), p.period(), tolerance)?;
        write_out(out, Box::into_raw(Box::new(LsBands(b))), "out")
    })
}

/// # Safety
/// `bands` must be null or a live handle from [`ls_bands_new`].
#[no_mangle]
pub unsafe extern "C" fn ls_bands_free(bands: *mut LsBands) {
    if !bands.is_null() {
        drop(Box::from_raw(bands));
    }
}

#[no_mangle]
pub extern "C" fn ls_bands_edges(bands: *const LsBands, buf: *mut f64, len: usize, written: *mut usize) -> LsStatus {
    guard(|| write_slice(&nonnull(bands, "bands")?.0.edges, buf, len, written))
}

/// Gaps as consecutive `(lower, upper)` pairs; `len` and `*written` count
/// doubles, not pairs.
#[no_mangle]
pub extern "C" fn ls_bands_gaps(bands: *const LsBands, buf: *mut f64, len: usize, written: *mut usize) -> LsStatus {
    guard(|| {
        let flat: Vec<f64> = nonnull(bands, "bands")?.0.gaps.iter().flatten().copied().collect();
        write_slice(&flat, buf, len, written)
    })
}

/// Partner from one seed (below the spectrum) or two seeds (inside one gap).
/// All `lambda` zero gives the periodic partner, otherwise the
/// asymptotically periodic one. Placement and nodelessness are checked.
#[no_mangle]
pub extern "C" fn ls_partner_new(
    m: u32,
    ell: u32,
    ksq: f64,
    seeds: *const LsSeed,
    n_seeds: usize,
    out: *mut *mut LsPartner,
) -> LsStatus {
    guard(|| {
        if seeds.is_null() {
            return Err(Failure::new(LsStatus::NullPointer, "seeds is null"));
        }
        // SAFETY: seeds is valid for n_seeds reads per the API contract.
        let seeds = unsafe { std::slice::from_raw_parts(seeds, n_seeds) };
        let mut c = RunConfig {
            m,
            ell,
            ksq,
            ..RunConfig::default()
        };
        match seeds {
            [s] => {
                c.order = 1;
                (c.eps, c.lambda, c.sign) = (s.energy, s.lambda, sign_of(s.sign)?);
            }
            [s1, s2] => {
                c.order = 2;
                (c.eps1, c.lambda1, c.sign1) = (s1.energy, s1.lambda, sign_of(s1.sign)?);
                (c.eps2, c.lambda2, c.sign2) = (s2.energy, s2.lambda, sign_of(s2.sign)?);
            }
            _ => {
                return Err(Failure::new(
                    LsStatus::InvalidArgument,
                    format!("partners take 1 or 2 seeds, got {n_seeds}"),
                ))
            }
        }
        let (q, _) = build_partner(&c)?;
        write_out(out, Box::into_raw(Box::new(LsPartner(q))), "out")
    })
}

/// # Safety
/// `partner` must be null or a live handle from [`ls_partner_new`].
#[no_mangle]
pub unsafe extern "C" fn ls_partner_free(partner: *mut LsPartner) {
    if !partner.is_null() {
        drop(Box::from_raw(partner));
    }
}

/// `Ṽ(x)`.
#[no_mangle]
pub extern "C" fn ls_partner_value(partner: *const LsPartner, x: f64, out: *mut f64) -> LsStatus {
    guard(|| write_out(out, nonnull(partner, "partner")?.0.value(x)?, "out"))
}

/// Order (1 or 2) and whether the partner is exactly `2K`-periodic.
#[no_mangle]
pub extern "C" fn ls_partner_info(partner: *const LsPartner, order: *mut u32, periodic: *mut bool) -> LsStatus {
    guard(|| {
        let q = &nonnull(partner, "partner")?.0;
        write_out(order, q.order() as u32, "order")?;
        write_out(periodic, q.periodicity() == Periodicity::Periodic, "periodic")
    })
}

/// Energies of the states bound at the defect (none for periodic partners).
#[no_mangle]
pub extern "C" fn ls_partner_bound_states(
    partner: *const LsPartner,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> LsStatus {
    guard(|| write_slice(&nonnull(partner, "partner")?.0.bound_state_energies(), buf, len, written))
}
