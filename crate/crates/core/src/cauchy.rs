//! The Cauchy transform `K(z) = ∫ dμ(t)/(z+t)` of a measure, with its
//! derivative, leading-order asymptotics and sector bounds.
//!
//! `K` is analytic off the closed negative real ray (for power laws the whole
//! ray is a branch cut; for discrete measures only the reflected atom
//! locations are excluded). It maps each half-plane into the opposite one:
//! `Im K(z)·Im z < 0` whenever `Im z ≠ 0`.

use num_complex::Complex;
use thiserror::Error;

use crate::measure::Measure;
use crate::num::{lit, Real};

/// Relative pole/branch-cut guard: evaluation fails within
/// `DEFAULT_POLE_GUARD·(1+|z|)` of a singularity.
pub const DEFAULT_POLE_GUARD: f64 = 1e-13;

/// Value of the transform at a point, with its analytic derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformValue<F> {
    pub value: Complex<F>,
    pub derivative: Complex<F>,
    /// The guard distance to the nearest singularity was respected.
    pub domain_ok: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CauchyError<F: Real> {
    #[error("evaluation point within guard distance {distance} of atom {index} at location {loc}")]
    NearPole { index: usize, loc: F, distance: F },
    #[error("evaluation point within guard distance {distance} of the branch cut on the negative ray")]
    NearCut { distance: F },
    #[error("no asymptotic model for this measure: {reason}")]
    UnsupportedAsymptotic { reason: &'static str },
    #[error("sector half-angle delta must lie in (0, pi/2)")]
    InvalidSector,
}

/// `b·π·ρ/sin(π·ρ)`, the closed-form power-law transform coefficient.
pub(crate) fn power_law_coefficient<F: Real>(b: F, rho: F) -> F {
    b * F::PI() * rho / (F::PI() * rho).sin()
}

fn eval_inner<F: Real>(
    m: &Measure<F>,
    z: Complex<F>,
    guard: F,
) -> Result<(Complex<F>, Complex<F>), CauchyError<F>> {
    match m {
        Measure::Discrete { atoms } => {
            let mut value = Complex::new(F::zero(), F::zero());
            let mut derivative = Complex::new(F::zero(), F::zero());
            for (index, a) in atoms.iter().enumerate() {
                let denom = z + Complex::new(a.loc, F::zero());
                let dist = denom.norm();
                if dist < guard {
                    return Err(CauchyError::NearPole {
                        index,
                        loc: a.loc,
                        distance: dist,
                    });
                }
                let term = Complex::new(a.mass, F::zero()) / denom;
                value = value + term;
                derivative = derivative - term / denom;
            }
            Ok((value, derivative))
        }
        Measure::PowerLaw { b, rho } => {
            // Distance to the closed ray (-inf, 0].
            let dist = if z.re <= F::zero() { z.im.abs() } else { z.norm() };
            if dist < guard {
                return Err(CauchyError::NearCut { distance: dist });
            }
            // Principal branch of z^(rho-1), positive on the positive ray.
            let value = z.powf(*rho - F::one()) * power_law_coefficient(*b, *rho);
            let derivative = value * (*rho - F::one()) / z;
            Ok((value, derivative))
        }
        Measure::Sum { parts } => {
            let mut value = Complex::new(F::zero(), F::zero());
            let mut derivative = Complex::new(F::zero(), F::zero());
            for p in parts {
                let (v, d) = eval_inner(p, z, guard)?;
                value = value + v;
                derivative = derivative + d;
            }
            Ok((value, derivative))
        }
    }
}

/// Evaluates `K(z)` and `K'(z)` with the given relative pole guard.
pub fn eval_k_guarded<F: Real>(
    m: &Measure<F>,
    z: Complex<F>,
    guard_factor: F,
) -> Result<TransformValue<F>, CauchyError<F>> {
    let guard = guard_factor * (F::one() + z.norm());
    let (value, derivative) = eval_inner(m, z, guard)?;
    Ok(TransformValue {
        value,
        derivative,
        domain_ok: true,
    })
}

/// Evaluates `K(z)` and `K'(z)` with the default pole guard.
pub fn eval_k<F: Real>(m: &Measure<F>, z: Complex<F>) -> Result<TransformValue<F>, CauchyError<F>> {
    eval_k_guarded(m, z, lit(DEFAULT_POLE_GUARD))
}

/// Evaluates `K(x)` and `K'(x)` at a real point off the reflected support.
/// Only defined for purely discrete measures (power laws put a cut on the ray).
pub fn eval_k_real<F: Real>(m: &Measure<F>, x: F) -> Result<(F, F), CauchyError<F>> {
    let atoms = m
        .as_atoms()
        .ok_or(CauchyError::UnsupportedAsymptotic {
            reason: "real-axis evaluation requires a discrete measure",
        })?;
    let guard = lit::<F>(DEFAULT_POLE_GUARD) * (F::one() + x.abs());
    let mut value = F::zero();
    let mut derivative = F::zero();
    for (index, a) in atoms.iter().enumerate() {
        let denom = x + a.loc;
        if denom.abs() < guard {
            return Err(CauchyError::NearPole {
                index,
                loc: a.loc,
                distance: denom.abs(),
            });
        }
        value = value + a.mass / denom;
        derivative = derivative - a.mass / (denom * denom);
    }
    Ok((value, derivative))
}

/// Leading-order model of `K` at large `|z|`: `A/z` for finite-mass measures,
/// the exact closed form for power laws.
pub fn asymptotic_k<F: Real>(m: &Measure<F>, z: Complex<F>) -> Result<Complex<F>, CauchyError<F>> {
    let mass = m.total_mass();
    if mass.is_finite() {
        return Ok(Complex::new(mass, F::zero()) / z);
    }
    if let Measure::PowerLaw { b, rho } = m {
        return Ok(z.powf(*rho - F::one()) * power_law_coefficient(*b, *rho));
    }
    Err(CauchyError::UnsupportedAsymptotic {
        reason: "measure has infinite mass and is not a pure power law",
    })
}

/// Upper bound for `|K(z)|` on the arc `|z| = r`, `|arg z| <= pi - delta`,
/// from the comparison `|z+t| >= (1/2)(|z|+t)·cos(delta)`.
pub fn sector_bound<F: Real>(m: &Measure<F>, r: F, delta: F) -> Result<F, CauchyError<F>> {
    if !(delta > F::zero() && delta < F::FRAC_PI_2()) {
        return Err(CauchyError::InvalidSector);
    }
    fn moment<F: Real>(m: &Measure<F>, r: F) -> F {
        match m {
            Measure::Discrete { atoms } => atoms.iter().fold(F::zero(), |s, a| s + a.mass / (r + a.loc)),
            Measure::PowerLaw { b, rho } => {
                power_law_coefficient(*b, *rho) * r.powf(*rho - F::one())
            }
            Measure::Sum { parts } => parts.iter().fold(F::zero(), |s, p| s + moment(p, r)),
        }
    }
    Ok(lit::<F>(2.0) / delta.cos() * moment(m, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn single() -> Measure<f64> {
        Measure::single_atom(1.0, 1.0)
    }

    #[test]
    fn single_atom_at_one() {
        let tv = eval_k(&single(), Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(tv.value.re, 0.5);
        assert_relative_eq!(tv.derivative.re, -0.25);
        assert!(tv.domain_ok);
    }

    #[test]
    fn single_atom_at_i_obeys_sign_law() {
        let tv = eval_k(&single(), Complex64::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(tv.value.re, 0.5);
        assert_relative_eq!(tv.value.im, -0.5);
        assert!(tv.value.im * 1.0 < 0.0);
    }

    #[test]
    fn power_law_closed_form_at_one() {
        let p = Measure::power_law(1.0, 0.5);
        let tv = eval_k(&p, Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(tv.value.re, PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(tv.value.im, 0.0);
    }

    #[test]
    fn power_law_above_cut_has_negative_imaginary_part() {
        let p = Measure::power_law(1.0, 0.5);
        let tv = eval_k(&p, Complex64::new(-1.0, 0.01)).unwrap();
        assert!(tv.value.im < 0.0);
    }

    #[test]
    fn pole_guard_rejects_nearby_points() {
        let err = eval_k(&single(), Complex64::new(-1.0, 1e-15)).unwrap_err();
        assert!(matches!(err, CauchyError::NearPole { index: 0, .. }));
        let p = Measure::<f64>::power_law(1.0, 0.5);
        assert!(matches!(
            eval_k(&p, Complex64::new(-1.0, 1e-15)),
            Err(CauchyError::NearCut { .. })
        ));
    }

    #[test]
    fn asymptotic_matches_total_mass() {
        let m = Measure::discrete(vec![Atom::new(1.0, 1.0), Atom::new(2.0, 3.0)]);
        let z = Complex64::new(0.0, 1e6);
        let a = asymptotic_k(&m, z).unwrap();
        assert_relative_eq!(a.im, -3.0 / 1e6, max_relative = 1e-14);
        // |K - A/z| <= max(b_k)/|z|^2 for this measure.
        let k = eval_k(&m, z).unwrap().value;
        assert!((k - a).norm() <= 3.0 / 1e12 * 3.0);
    }

    #[test]
    fn asymptotic_power_law_equals_exact() {
        let p = Measure::power_law(1.0, 0.5);
        let z = Complex64::new(2.0, 3.0);
        assert_eq!(asymptotic_k(&p, z).unwrap(), eval_k(&p, z).unwrap().value);
    }

    #[test]
    fn asymptotic_unsupported_for_mixed_infinite_mass() {
        let m = Measure::sum(vec![single(), Measure::power_law(1.0, 0.5)]);
        assert!(matches!(
            asymptotic_k(&m, Complex64::new(0.0, 1.0)),
            Err(CauchyError::UnsupportedAsymptotic { .. })
        ));
    }

    #[test]
    fn sector_bound_values() {
        // (2/cos(pi/3)) * 1/(1+1) = 4 * 0.5 = 2
        assert_relative_eq!(sector_bound(&single(), 1.0, PI / 3.0).unwrap(), 2.0);
        let b = sector_bound(&single(), 1e6, PI / 4.0).unwrap();
        assert_relative_eq!(b, 2.0 * 2f64.sqrt() / (1e6 + 1.0), max_relative = 1e-12);
        // Power law: exact modulus on the circle is (pi/2)·r^{-1/2} = pi/4 at r=4.
        let p = Measure::power_law(1.0, 0.5);
        let exact = eval_k(&p, Complex64::new(0.0, 4.0)).unwrap().value.norm();
        assert_relative_eq!(exact, PI / 4.0, max_relative = 1e-14);
        assert!(sector_bound(&p, 4.0, PI / 3.0).unwrap() >= exact);
    }

    #[test]
    fn sector_bound_rejects_degenerate_angle() {
        assert_eq!(
            sector_bound(&single(), 1.0, PI / 2.0),
            Err(CauchyError::InvalidSector)
        );
    }

    #[test]
    fn kernel_differentiation_identity() {
        // K_tilde(z) = A - z*K(z) for the mass-times-location measure.
        let m = Measure::discrete(vec![Atom::new(0.1, 1.0), Atom::new(0.1, 2.0)]);
        let mt = m.differentiate_kernel().unwrap();
        let mass = m.total_mass();
        for &(re, im) in &[(1.0, 0.5), (-0.3, 2.0), (3.0, -1.0), (0.1, 10.0), (5.0, 5.0)] {
            let z = Complex64::new(re, im);
            let lhs = eval_k(&mt, z).unwrap().value;
            let rhs = Complex64::new(mass, 0.0) - z * eval_k(&m, z).unwrap().value;
            assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12);
            assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-12, epsilon = 1e-14);
        }
    }
}
