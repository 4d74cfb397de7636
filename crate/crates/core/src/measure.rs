//! Positive Stieltjes measures defining the memory kernel
//! `k(t) = ∫ e^{-tτ} dμ(τ)`.
//!
//! A measure is either a finite list of atoms, an exact power law
//! `μ(t) = b·t^ρ` with `ρ ∈ (0,1)`, or a finite sum of such measures.
//! Values are immutable after construction and safe to share across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{lit, Real};

/// A point mass: weight `mass` at location `loc > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom<F> {
    pub mass: F,
    pub loc: F,
}

impl<F: Real> Atom<F> {
    pub fn new(mass: F, loc: F) -> Self {
        Atom { mass, loc }
    }
}

/// Spectral data of the memory kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Measure<F> {
    /// Finitely many atoms, locations strictly increasing.
    Discrete { atoms: Vec<Atom<F>> },
    /// Exact power law `μ(t) = b·t^ρ`, `b > 0`, `ρ ∈ (0,1)`.
    PowerLaw { b: F, rho: F },
    /// Superposition of measures.
    Sum { parts: Vec<Measure<F>> },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("discrete measure has no atoms")]
    EmptyAtomList,
    #[error("atom {index} has non-positive mass")]
    NonPositiveMass { index: usize },
    #[error("atom {index} has non-positive location")]
    NonPositiveLocation { index: usize },
    #[error("atom locations not strictly increasing at index {index}")]
    LocationsNotIncreasing { index: usize },
    #[error("power-law coefficient b must be positive")]
    NonPositivePowerLawCoefficient,
    #[error("power-law exponent rho must lie in (0,1)")]
    PowerLawExponentOutOfRange,
    #[error("sum measure has no parts")]
    EmptySum,
    #[error("standing assumption violated under strict policy: {which}")]
    StandingAssumption { which: &'static str },
    #[error("operation `{op}` supports only discrete measures")]
    UnsupportedVariant { op: &'static str },
}

/// Whether the kernel's standing assumptions are enforced or waivable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationPolicy {
    /// Enforce finiteness of `∫ dμ(t)/t` and support bounded away from 0.
    Strict,
    /// Waive those two; used for pure power-law asymptotic models.
    AsymptoticModel,
}

/// Which hypotheses hold for the given measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    /// E1: `∫ dμ(t)/t < ∞` (kernel integrable).
    pub inv_moment_finite: bool,
    /// E2: support bounded away from zero.
    pub support_positive: bool,
    /// E3: total mass finite.
    pub total_mass_finite: bool,
    /// E4: compact support.
    pub compact_support: bool,
}

impl ValidationReport {
    /// All four hypotheses hold.
    pub fn all(&self) -> bool {
        self.inv_moment_finite && self.support_positive && self.total_mass_finite && self.compact_support
    }
}

impl<F: Real> Measure<F> {
    pub fn discrete(atoms: Vec<Atom<F>>) -> Self {
        Measure::Discrete { atoms }
    }

    pub fn single_atom(mass: F, loc: F) -> Self {
        Measure::Discrete {
            atoms: vec![Atom::new(mass, loc)],
        }
    }

    pub fn power_law(b: F, rho: F) -> Self {
        Measure::PowerLaw { b, rho }
    }

    pub fn sum(parts: Vec<Measure<F>>) -> Self {
        Measure::Sum { parts }
    }

    /// Infimum of the support.
    pub fn support_min(&self) -> F {
        match self {
            Measure::Discrete { atoms } => atoms.first().map_or(F::zero(), |a| a.loc),
            Measure::PowerLaw { .. } => F::zero(),
            Measure::Sum { parts } => parts
                .iter()
                .map(|p| p.support_min())
                .fold(F::infinity(), F::min),
        }
    }

    /// Supremum of the support (may be `+∞`).
    pub fn support_max(&self) -> F {
        match self {
            Measure::Discrete { atoms } => atoms.last().map_or(F::zero(), |a| a.loc),
            Measure::PowerLaw { .. } => F::infinity(),
            Measure::Sum { parts } => parts
                .iter()
                .map(|p| p.support_max())
                .fold(F::zero(), F::max),
        }
    }

    /// Total mass `A = ∫ dμ(t)` (may be `+∞`).
    pub fn total_mass(&self) -> F {
        match self {
            Measure::Discrete { atoms } => atoms.iter().fold(F::zero(), |s, a| s + a.mass),
            Measure::PowerLaw { .. } => F::infinity(),
            Measure::Sum { parts } => parts.iter().fold(F::zero(), |s, p| s + p.total_mass()),
        }
    }

    /// `∫ dμ(t)/t` (may be `+∞`); finiteness is the kernel integrability hypothesis.
    pub fn inv_moment(&self) -> F {
        match self {
            Measure::Discrete { atoms } => atoms.iter().fold(F::zero(), |s, a| s + a.mass / a.loc),
            Measure::PowerLaw { .. } => F::infinity(),
            Measure::Sum { parts } => parts.iter().fold(F::zero(), |s, p| s + p.inv_moment()),
        }
    }

    /// Structural well-formedness; always enforced regardless of policy.
    fn check_structure(&self) -> Result<(), MeasureError> {
        match self {
            Measure::Discrete { atoms } => {
                if atoms.is_empty() {
                    return Err(MeasureError::EmptyAtomList);
                }
                let mut prev = F::zero();
                for (index, a) in atoms.iter().enumerate() {
                    if !(a.mass > F::zero()) {
                        return Err(MeasureError::NonPositiveMass { index });
                    }
                    if !(a.loc > F::zero()) {
                        return Err(MeasureError::NonPositiveLocation { index });
                    }
                    if !(a.loc > prev) {
                        return Err(MeasureError::LocationsNotIncreasing { index });
                    }
                    prev = a.loc;
                }
                Ok(())
            }
            Measure::PowerLaw { b, rho } => {
                if !(*b > F::zero()) {
                    return Err(MeasureError::NonPositivePowerLawCoefficient);
                }
                if !(*rho > F::zero() && *rho < F::one()) {
                    return Err(MeasureError::PowerLawExponentOutOfRange);
                }
                Ok(())
            }
            Measure::Sum { parts } => {
                if parts.is_empty() {
                    return Err(MeasureError::EmptySum);
                }
                for p in parts {
                    p.check_structure()?;
                }
                Ok(())
            }
        }
    }

    /// Checks structure (hard errors) and reports which hypotheses hold.
    ///
    /// Under [`ValidationPolicy::Strict`] the kernel integrability and
    /// positive-support hypotheses are errors when violated; under
    /// [`ValidationPolicy::AsymptoticModel`] they are merely reported.
    pub fn validate(&self, policy: ValidationPolicy) -> Result<ValidationReport, MeasureError> {
        self.check_structure()?;
        let report = ValidationReport {
            inv_moment_finite: self.inv_moment().is_finite(),
            support_positive: self.support_min() > F::zero(),
            total_mass_finite: self.total_mass().is_finite(),
            compact_support: self.support_max().is_finite(),
        };
        if policy == ValidationPolicy::Strict {
            if !report.inv_moment_finite {
                return Err(MeasureError::StandingAssumption {
                    which: "inverse moment finite",
                });
            }
            if !report.support_positive {
                return Err(MeasureError::StandingAssumption {
                    which: "support bounded away from zero",
                });
            }
        }
        Ok(report)
    }

    /// The measure of `-dk/dt`: multiplies each atom mass by its location,
    /// `dμ̃(τ) = τ·dμ(τ)`. Only discrete measures are closed under this map.
    pub fn differentiate_kernel(&self) -> Result<Measure<F>, MeasureError> {
        match self {
            Measure::Discrete { atoms } => Ok(Measure::Discrete {
                atoms: atoms
                    .iter()
                    .map(|a| Atom::new(a.mass * a.loc, a.loc))
                    .collect(),
            }),
            _ => Err(MeasureError::UnsupportedVariant {
                op: "differentiate_kernel",
            }),
        }
    }

    /// Flattens a purely discrete measure (possibly a `Sum` of discretes)
    /// into a sorted atom list, merging coincident locations.
    /// Returns `None` if any power-law part is present.
    pub fn as_atoms(&self) -> Option<Vec<Atom<F>>> {
        fn collect<F: Real>(m: &Measure<F>, out: &mut Vec<Atom<F>>) -> bool {
            match m {
                Measure::Discrete { atoms } => {
                    out.extend_from_slice(atoms);
                    true
                }
                Measure::PowerLaw { .. } => false,
                Measure::Sum { parts } => parts.iter().all(|p| collect(p, out)),
            }
        }
        let mut atoms = Vec::new();
        if !collect(self, &mut atoms) {
            return None;
        }
        atoms.sort_by(|x, y| x.loc.partial_cmp(&y.loc).expect("finite locations"));
        let mut merged: Vec<Atom<F>> = Vec::with_capacity(atoms.len());
        let merge_tol = lit::<F>(0.0);
        for a in atoms {
            match merged.last_mut() {
                Some(last) if (a.loc - last.loc).abs() <= merge_tol => last.mass = last.mass + a.mass,
                _ => merged.push(a),
            }
        }
        Some(merged)
    }
}
