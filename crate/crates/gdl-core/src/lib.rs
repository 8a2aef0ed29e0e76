//! Numerical laboratory for non-uniform Gabor systems on a finite
//! time-frequency model.
//!
//! The model lives on a cyclic grid of `L` samples with period `P = sqrt(L)`
//! and step `h = 1/sqrt(L)`, which makes time and frequency resolution
//! symmetric and time-frequency shifts exactly unitary. On top of it the
//! crate provides:
//!
//! * [`tf`] — signals, windows, time-frequency shifts, the short-time
//!   Fourier transform and discrete modulation-space norms,
//! * [`pointset`] — phase-space point-set geometry (separation, relative
//!   separation, hole, Beurling densities, weak-convergence distance),
//! * [`deform`] — deformation maps, the (L1)/(L2) Lipschitz conditions,
//!   Morrey-type bounds and the alternating-annuli counterexample,
//! * [`frame`] — analysis matrices, frame/Riesz bounds, twisted shifts and
//!   heuristic `ℓ^p` lower bounds,
//! * [`certify`] — the modulus-of-continuity frame certificate,
//! * [`molecule`] — time-frequency molecules, Wilson bases, envelopes,
//!   Schur norms, partitions of unity and commutator matrices,
//! * [`report`] / [`config`] — flat key-value experiment records and configs.

pub mod certify;
pub mod config;
pub mod deform;
pub mod error;
pub mod frame;
pub mod molecule;
pub mod pointset;
pub mod report;
pub mod tf;

pub use error::{GdlError, Result};

/// Installs a global rayon pool capped at `n` workers. Call once, before any
/// parallel work; later calls are ignored. Used by the CLI to honor
/// `GDL_THREADS`.
pub fn set_thread_cap(n: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}
