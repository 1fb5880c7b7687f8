//! C ABI for `lsbec-core`.
//!
//! Every entry point returns an [`LsStatus`]; outputs go through pointer
//! arguments. Handles are opaque and must be released with the matching
//! `*_free` function. On failure, [`ls_last_error_message`] describes the
//! most recent error on the calling thread.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lsbec_core::bounds::{
    box_count_criterion, critical_density, hard_core_eigenstate_bound, localization_criterion,
    long_interval_threshold, longest_interval_bracket, trial_state_energy,
};
use lsbec_core::disorder::{count_intervals_at_least, longest_interval, sample_realization, DisorderRealization, EnsembleSeed};
use lsbec_core::spectrum::{build_converged_spectrum, build_spectrum, Spectrum};
use lsbec_core::thermo::{condensate_profile, ensure_feasible, grand_canonical_chemical_potential};
use lsbec_core::Error;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    EmptySpectrum = 3,
    Domain = 4,
    VoidTrialState = 5,
    AboveCriticalDensity = 6,
    InfeasibleThermo = 7,
    Internal = 8,
    Panic = 9,
}

/// Opaque disorder realization.
pub struct LsRealization(DisorderRealization);

/// Opaque spectrum.
pub struct LsSpectrum(Spectrum);

/// Condensate summary of a canonical ideal gas.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LsCondensate {
    pub log_partition: f64,
    pub ground_energy: f64,
    pub ground_occupation: f64,
    pub condensate_density: f64,
    pub condensate_fraction: f64,
    pub grand_canonical_mu: f64,
    /// 1 when the spectrum tail weight is below tolerance.
    pub converged: i32,
}

/// Trial-state energy pieces.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LsTrialEnergy {
    pub count_q: u64,
    pub kinetic_per_particle: f64,
    pub interaction_per_particle: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> LsStatus {
    match err {
        Error::InvalidArgument(_) | Error::Parse { .. } => LsStatus::InvalidArgument,
        Error::EmptySpectrum { .. } => LsStatus::EmptySpectrum,
        Error::Domain(_) => LsStatus::Domain,
        Error::VoidTrialState => LsStatus::VoidTrialState,
        Error::AboveCriticalDensity { .. } => LsStatus::AboveCriticalDensity,
        Error::InfeasibleThermo { .. } => LsStatus::InfeasibleThermo,
        _ => LsStatus::Internal,
    }
}

enum Fail {
    Null,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_last_error("null pointer argument".into());
            LsStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            LsStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null)
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

/// Message for the last failing call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn ls_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

// ---------------------------------------------------------------------------
// disorder

/// Samples a realization on `(-box_length/2, box_length/2)`.
///
/// # Safety
/// `out_handle` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_sample(
    intensity: f64,
    box_length: f64,
    base_seed: u64,
    realization_index: u64,
    out_handle: *mut *mut LsRealization,
) -> LsStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        let r = sample_realization(intensity, box_length, EnsembleSeed::new(base_seed, realization_index))?;
        *slot = Box::into_raw(Box::new(LsRealization(r)));
        Ok(())
    })
}

/// Releases a realization. Null is ignored.
///
/// # Safety
/// `handle` must come from `ls_realization_sample` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_free(handle: *mut LsRealization) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_point_count(handle: *const LsRealization, out_count: *mut usize) -> LsStatus {
    guard(|| {
        *out(out_count)? = borrow(handle)?.0.points().len();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_interval_count(
    handle: *const LsRealization,
    out_count: *mut usize,
) -> LsStatus {
    guard(|| {
        *out(out_count)? = borrow(handle)?.0.intervals().len();
        Ok(())
    })
}

/// Copies up to `capacity` sorted points into `buffer`; `out_written` gets
/// the number copied.
///
/// # Safety
/// `buffer` must hold `capacity` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_points(
    handle: *const LsRealization,
    buffer: *mut f64,
    capacity: usize,
    out_written: *mut usize,
) -> LsStatus {
    guard(|| {
        let points = borrow(handle)?.0.points();
        let written = out(out_written)?;
        let n = points.len().min(capacity);
        if n > 0 {
            if buffer.is_null() {
                return Err(Fail::Null);
            }
            ptr::copy_nonoverlapping(points.as_ptr(), buffer, n);
        }
        *written = n;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_longest_interval(
    handle: *const LsRealization,
    out_length: *mut f64,
    out_index: *mut usize,
) -> LsStatus {
    guard(|| {
        let (len, idx) = longest_interval(&borrow(handle)?.0);
        *out(out_length)? = len;
        *out(out_index)? = idx;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_realization_count_at_least(
    handle: *const LsRealization,
    threshold: f64,
    out_count: *mut usize,
) -> LsStatus {
    guard(|| {
        let r = &borrow(handle)?.0;
        if !(threshold > 0.0) {
            return Err(Error::InvalidArgument("threshold must be positive".into()).into());
        }
        *out(out_count)? = count_intervals_at_least(r, threshold);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// spectrum

/// Builds the spectrum below `energy_cutoff`, or the converged spectrum for
/// `beta` when `energy_cutoff` is not positive.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_build(
    realization: *const LsRealization,
    energy_cutoff: f64,
    beta: f64,
    out_handle: *mut *mut LsSpectrum,
) -> LsStatus {
    guard(|| {
        let slot = out(out_handle)?;
        *slot = ptr::null_mut();
        let r = &borrow(realization)?.0;
        let s = if energy_cutoff > 0.0 {
            build_spectrum(r, energy_cutoff)?
        } else {
            build_converged_spectrum(r, beta)?
        };
        *slot = Box::into_raw(Box::new(LsSpectrum(s)));
        Ok(())
    })
}

/// Releases a spectrum. Null is ignored.
///
/// # Safety
/// `handle` must come from `ls_spectrum_build` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_free(handle: *mut LsSpectrum) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_len(handle: *const LsSpectrum, out_len: *mut usize) -> LsStatus {
    guard(|| {
        *out(out_len)? = borrow(handle)?.0.len();
        Ok(())
    })
}

/// Copies up to `capacity` ascending energies into `buffer`.
///
/// # Safety
/// `buffer` must hold `capacity` doubles; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_spectrum_energies(
    handle: *const LsSpectrum,
    buffer: *mut f64,
    capacity: usize,
    out_written: *mut usize,
) -> LsStatus {
    guard(|| {
        let energies = borrow(handle)?.0.energies();
        let written = out(out_written)?;
        let n = energies.len().min(capacity);
        if n > 0 {
            if buffer.is_null() {
                return Err(Fail::Null);
            }
            ptr::copy_nonoverlapping(energies.as_ptr(), buffer, n);
        }
        *written = n;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// thermodynamics

/// Canonical condensate summary for `particle_number` bosons (at most 20000).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_condensate(
    spectrum: *const LsSpectrum,
    beta: f64,
    particle_number: u64,
    out_result: *mut LsCondensate,
) -> LsStatus {
    guard(|| {
        let s = &borrow(spectrum)?.0;
        let result = out(out_result)?;
        ensure_feasible(particle_number)?;
        let sol = condensate_profile(s, beta, particle_number, 1)?;
        let mu = grand_canonical_chemical_potential(s.energies(), beta, particle_number as f64)?;
        *result = LsCondensate {
            log_partition: sol.log_partition(),
            ground_energy: sol.ground_energy,
            ground_occupation: sol.occupations[0],
            condensate_density: sol.condensate_density,
            condensate_fraction: sol.condensate_fraction,
            grand_canonical_mu: mu,
            converged: i32::from(sol.converged),
        };
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// bounds

/// Bracket `[ν⁻¹(ln L − (1+ε) ln ln L), α ν⁻¹ ln L]` for the longest interval.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_longest_interval_bracket(
    intensity: f64,
    box_length: f64,
    epsilon: f64,
    alpha: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> LsStatus {
    guard(|| {
        let (lo, hi) = longest_interval_bracket(intensity, box_length, epsilon, alpha)?;
        *out(out_lower)? = lo;
        *out(out_upper)? = hi;
        Ok(())
    })
}

/// `α² ν⁻² ln²L / (a² L)`.
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_hard_core_eigenstate_bound(
    alpha: f64,
    intensity: f64,
    box_length: f64,
    radius: f64,
    out_value: *mut f64,
) -> LsStatus {
    guard(|| {
        *out(out_value)? = hard_core_eigenstate_bound(alpha, intensity, box_length, radius)?;
        Ok(())
    })
}

/// `1 / (2 a)`.
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_critical_density(radius_sup: f64, out_value: *mut f64) -> LsStatus {
    guard(|| {
        *out(out_value)? = critical_density(radius_sup)?;
        Ok(())
    })
}

/// `S² / N`.
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_box_count_criterion(
    support_box_count: u64,
    particle_number: u64,
    out_value: *mut f64,
) -> LsStatus {
    guard(|| {
        if particle_number == 0 {
            return Err(Error::InvalidArgument("particle number must be positive".into()).into());
        }
        *out(out_value)? = box_count_criterion(support_box_count, particle_number);
        Ok(())
    })
}

/// Writes 1 when `gamma ≥ 1/3 − alpha_exp`, else 0.
///
/// # Safety
/// `out_flag` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_localization_criterion(gamma: f64, alpha_exp: f64, out_flag: *mut i32) -> LsStatus {
    guard(|| {
        *out(out_flag)? = i32::from(localization_criterion(gamma, alpha_exp)?);
        Ok(())
    })
}

/// `ν N / (4 e^{3ν} ρ)`.
///
/// # Safety
/// `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_long_interval_threshold(
    intensity: f64,
    density: f64,
    particle_number: f64,
    out_value: *mut f64,
) -> LsStatus {
    guard(|| {
        *out(out_value)? = long_interval_threshold(intensity, density, particle_number);
        Ok(())
    })
}

/// Trial-state energy on a realization.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_trial_state_energy(
    realization: *const LsRealization,
    particle_number: u64,
    interaction_l1_norm: f64,
    out_result: *mut LsTrialEnergy,
) -> LsStatus {
    guard(|| {
        let r = &borrow(realization)?.0;
        let result = out(out_result)?;
        let e = trial_state_energy(r, particle_number, interaction_l1_norm)?;
        *result = LsTrialEnergy {
            count_q: e.count_q as u64,
            kinetic_per_particle: e.kinetic_per_particle,
            interaction_per_particle: e.interaction_per_particle,
        };
        Ok(())
    })
}
