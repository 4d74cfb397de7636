//! Spectra of integro-differential equations with memory kernels given by a
//! positive measure: first- and second-order equations with relaxation, and
//! the Kelvin–Voigt equation with viscosity.
//!
//! The spectrum is the union over the mode index `n` of the zero sets of the
//! characteristic functions built from the Cauchy transform of the measure.
//! The crate computes each mode slice by two independent routes — a cleared
//! polynomial solved simultaneously for all roots (discrete measures), and a
//! holomorphic fixed-point iteration with Newton polish plus an
//! argument-principle certificate (any measure) — and cross-checks them.
//!
//! Everything is generic over the scalar type through [`num::Real`]; use the
//! `*64` aliases at the crate root for the common double-precision case.

pub mod cauchy;
pub mod chareq;
pub mod dw;
pub mod measure;
mod num;
pub mod polyoracle;
pub mod spectrum;

pub use crate::num::Real;

pub use crate::measure::{Atom, Measure, MeasureError, ValidationPolicy, ValidationReport};

pub use crate::cauchy::{eval_k, eval_k_guarded, eval_k_real, TransformValue};

pub use crate::chareq::{CharacteristicFn, EquationKind, EquationSystem};

pub use crate::dw::{DwClassification, DwOptions, DwTrace, Rect, ZeroCertificate};

pub use crate::spectrum::{
    compute_slice, kv_nonreal_cutoff, predict, verify_asymptotics, AsymptoticFormula,
    AsymptoticPrediction, KvCutoff, RealZero, SliceMethod, SliceOptions, SpectrumSlice,
    VerifyReport, VerifyRow,
};

/// Double-precision aliases for the main types.
pub type Atom64 = Atom<f64>;
pub type Measure64 = Measure<f64>;
pub type EquationSystem64 = EquationSystem<f64>;
pub type SpectrumSlice64 = SpectrumSlice<f64>;
pub type SliceOptions64 = SliceOptions<f64>;
pub type KvCutoff64 = KvCutoff<f64>;
pub type VerifyReport64 = VerifyReport<f64>;
pub type Complex64 = num_complex::Complex<f64>;
