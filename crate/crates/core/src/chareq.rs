//! Characteristic functions of the mode equations and the fixed-point maps
//! whose upper-half-plane fixed points are the non-real spectrum.
//!
//! For mode `n` the characteristic functions are
//! `F_n(z) = z + n²K(z)` (first-order memory equation),
//! `G_n(z) = z² + a·n² − n²K(z)` (second-order), and
//! `H_n(z) = z² + ε·z·n² + n² − n²K(z)` (Kelvin–Voigt).

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cauchy::{eval_k, eval_k_real, CauchyError};
use crate::measure::{Measure, MeasureError, ValidationPolicy, ValidationReport};
use crate::num::{from_u32, Real};

/// Which equation family, with its scalar parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquationKind<F> {
    /// First order in time; characteristic function `z + n²K(z)`.
    Gp1,
    /// Second order in time with elastic coefficient `a > 0`.
    Gp2 { a: F },
    /// Kelvin–Voigt damping with coefficient `epsilon > 0`.
    Kv { epsilon: F },
}

/// An equation kind together with its memory measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "SystemRepr<F>",
    into = "SystemRepr<F>",
    bound(serialize = "F: Real", deserialize = "F: Real")
)]
pub struct EquationSystem<F: Real> {
    pub kind: EquationKind<F>,
    pub measure: Measure<F>,
}

/// Wire format: `{"equation":"gp1"|"gp2"|"kv","a":...,"epsilon":...,"measure":...}`.
#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "F: Real", deserialize = "F: Real"))]
struct SystemRepr<F> {
    equation: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    a: Option<F>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    epsilon: Option<F>,
    measure: Measure<F>,
}

impl<F: Real> From<EquationSystem<F>> for SystemRepr<F> {
    fn from(sys: EquationSystem<F>) -> Self {
        let (equation, a, epsilon) = match sys.kind {
            EquationKind::Gp1 => ("gp1", None, None),
            EquationKind::Gp2 { a } => ("gp2", Some(a), None),
            EquationKind::Kv { epsilon } => ("kv", None, Some(epsilon)),
        };
        SystemRepr {
            equation: equation.to_owned(),
            a,
            epsilon,
            measure: sys.measure,
        }
    }
}

impl<F: Real> TryFrom<SystemRepr<F>> for EquationSystem<F> {
    type Error = String;

    fn try_from(repr: SystemRepr<F>) -> Result<Self, String> {
        let kind = match repr.equation.as_str() {
            "gp1" => EquationKind::Gp1,
            "gp2" => {
                let a = repr.a.ok_or("gp2 requires field `a`")?;
                if !(a > F::zero()) {
                    return Err("gp2 requires a > 0".into());
                }
                EquationKind::Gp2 { a }
            }
            "kv" => {
                let epsilon = repr.epsilon.ok_or("kv requires field `epsilon`")?;
                if !(epsilon > F::zero()) {
                    return Err("kv requires epsilon > 0".into());
                }
                EquationKind::Kv { epsilon }
            }
            other => return Err(format!("unknown equation kind `{other}`")),
        };
        Ok(EquationSystem {
            kind,
            measure: repr.measure,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharEqError<F: Real> {
    #[error(transparent)]
    Cauchy(#[from] CauchyError<F>),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("equation parameter must be positive: {which}")]
    NonPositiveParameter { which: &'static str },
    #[error("mode index must be at least 1")]
    ZeroModeIndex,
    #[error("square-root branch argument lies in the open upper half-plane")]
    PhiDomain,
    #[error("fixed-point map evaluated outside the open upper half-plane")]
    NotUpperHalfPlane,
    #[error("internal invariant violated: {what}")]
    InternalInvariant { what: &'static str },
}

impl<F: Real> EquationSystem<F> {
    pub fn gp1(measure: Measure<F>) -> Self {
        EquationSystem {
            kind: EquationKind::Gp1,
            measure,
        }
    }

    pub fn gp2(a: F, measure: Measure<F>) -> Result<Self, CharEqError<F>> {
        if !(a > F::zero()) {
            return Err(CharEqError::NonPositiveParameter { which: "a" });
        }
        Ok(EquationSystem {
            kind: EquationKind::Gp2 { a },
            measure,
        })
    }

    pub fn kv(epsilon: F, measure: Measure<F>) -> Result<Self, CharEqError<F>> {
        if !(epsilon > F::zero()) {
            return Err(CharEqError::NonPositiveParameter { which: "epsilon" });
        }
        Ok(EquationSystem {
            kind: EquationKind::Kv { epsilon },
            measure,
        })
    }

    pub fn validate(&self, policy: ValidationPolicy) -> Result<ValidationReport, MeasureError> {
        self.measure.validate(policy)
    }
}

/// Branch of the square root mapping the closed lower half-plane onto the
/// second quadrant: the negated principal root, continued from below on the
/// negative ray. `phi(w)² = w`, `Im phi(w) >= 0`, `Re phi(w) <= 0`.
pub fn phi<F: Real>(w: Complex<F>) -> Result<Complex<F>, CharEqError<F>> {
    if w.im > F::zero() {
        return Err(CharEqError::PhiDomain);
    }
    if w.im == F::zero() {
        return Ok(if w.re >= F::zero() {
            Complex::new(-w.re.sqrt(), F::zero())
        } else {
            Complex::new(F::zero(), (-w.re).sqrt())
        });
    }
    Ok(-w.sqrt())
}

/// A characteristic function, fixed equation system and mode index.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicFn<'a, F: Real> {
    system: &'a EquationSystem<F>,
    n: u32,
}

impl<'a, F: Real> CharacteristicFn<'a, F> {
    pub fn new(system: &'a EquationSystem<F>, n: u32) -> Result<Self, CharEqError<F>> {
        if n == 0 {
            return Err(CharEqError::ZeroModeIndex);
        }
        Ok(CharacteristicFn { system, n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn system(&self) -> &'a EquationSystem<F> {
        self.system
    }

    fn n_sq(&self) -> F {
        let n = from_u32::<F>(self.n);
        n * n
    }

    /// Value and derivative at `z`.
    pub fn eval(&self, z: Complex<F>) -> Result<(Complex<F>, Complex<F>), CharEqError<F>> {
        let nsq = self.n_sq();
        let k = eval_k(&self.system.measure, z)?;
        let one = Complex::new(F::one(), F::zero());
        Ok(match self.system.kind {
            EquationKind::Gp1 => (z + k.value * nsq, one + k.derivative * nsq),
            EquationKind::Gp2 { a } => (
                z * z + Complex::new(a * nsq, F::zero()) - k.value * nsq,
                z * (F::one() + F::one()) - k.derivative * nsq,
            ),
            EquationKind::Kv { epsilon } => (
                z * z + z * (epsilon * nsq) + Complex::new(nsq, F::zero()) - k.value * nsq,
                z * (F::one() + F::one()) + Complex::new(epsilon * nsq, F::zero()) - k.derivative * nsq,
            ),
        })
    }

    /// Value and derivative at a real point off the reflected support;
    /// real arithmetic throughout. Discrete measures only.
    pub fn eval_real(&self, x: F) -> Result<(F, F), CharEqError<F>> {
        let nsq = self.n_sq();
        let (k, dk) = eval_k_real(&self.system.measure, x)?;
        Ok(match self.system.kind {
            EquationKind::Gp1 => (x + nsq * k, F::one() + nsq * dk),
            EquationKind::Gp2 { a } => (x * x + a * nsq - nsq * k, (x + x) - nsq * dk),
            EquationKind::Kv { epsilon } => (
                x * x + epsilon * x * nsq + nsq - nsq * k,
                (x + x) + epsilon * nsq - nsq * dk,
            ),
        })
    }

    /// The self-map of the upper half-plane whose fixed points are the
    /// non-real zeros: `-n²K(z)`, `n·phi(K(z)-a)`, or `n·phi(K(z)-εz-1)`.
    pub fn fixed_point_map(&self, z: Complex<F>) -> Result<Complex<F>, CharEqError<F>> {
        if !(z.im > F::zero()) {
            return Err(CharEqError::NotUpperHalfPlane);
        }
        let k = eval_k(&self.system.measure, z)?.value;
        let f = match self.system.kind {
            EquationKind::Gp1 => -k * self.n_sq(),
            EquationKind::Gp2 { a } => {
                let w = k - Complex::new(a, F::zero());
                if w.im > F::zero() {
                    return Err(CharEqError::InternalInvariant {
                        what: "K(z)-a left the closed lower half-plane",
                    });
                }
                phi(w)? * from_u32::<F>(self.n)
            }
            EquationKind::Kv { epsilon } => {
                let w = k - z * epsilon - Complex::new(F::one(), F::zero());
                if w.im > F::zero() {
                    return Err(CharEqError::InternalInvariant {
                        what: "K(z)-eps*z-1 left the closed lower half-plane",
                    });
                }
                phi(w)? * from_u32::<F>(self.n)
            }
        };
        if !(f.im > F::zero()) {
            return Err(CharEqError::InternalInvariant {
                what: "fixed-point map left the upper half-plane",
            });
        }
        Ok(f)
    }

    /// Derivative of the fixed-point map at `z`.
    pub fn map_derivative(&self, z: Complex<F>) -> Result<Complex<F>, CharEqError<F>> {
        let k = eval_k(&self.system.measure, z)?;
        match self.system.kind {
            EquationKind::Gp1 => Ok(-k.derivative * self.n_sq()),
            EquationKind::Gp2 { .. } => {
                let f = self.fixed_point_map(z)?;
                Ok(k.derivative * self.n_sq() / (f * (F::one() + F::one())))
            }
            EquationKind::Kv { epsilon } => {
                let f = self.fixed_point_map(z)?;
                let g_prime = k.derivative - Complex::new(epsilon, F::zero());
                Ok(g_prime * self.n_sq() / (f * (F::one() + F::one())))
            }
        }
    }

    /// True when the fixed-point map is a fractional-linear transformation:
    /// first-order equation with a single atom. When additionally
    /// `b₁² < 4n²a₁` the map is elliptic and iteration never converges.
    pub fn is_mobius_degenerate(&self) -> bool {
        matches!(self.system.kind, EquationKind::Gp1)
            && self
                .system
                .measure
                .as_atoms()
                .map_or(false, |atoms| atoms.len() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn single() -> Measure<f64> {
        Measure::single_atom(1.0, 1.0)
    }

    #[test]
    fn gp1_root_of_cleared_quadratic() {
        let sys = EquationSystem::gp1(single());
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let z = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        let (v, _) = cf.eval(z).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn gp2_value_at_origin() {
        let sys = EquationSystem::gp2(1.0, Measure::single_atom(0.5, 1.0)).unwrap();
        let cf = CharacteristicFn::new(&sys, 10).unwrap();
        let (v, _) = cf.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 50.0);
        assert_relative_eq!(v.im, 0.0);
    }

    #[test]
    fn kv_value_at_origin_vanishes_for_unit_inverse_moment() {
        let sys = EquationSystem::kv(0.1, single()).unwrap();
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let (v, _) = cf.eval(Complex64::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.0);
    }

    #[test]
    fn phi_branch_values() {
        assert_eq!(phi(Complex64::new(4.0, 0.0)).unwrap(), Complex64::new(-2.0, 0.0));
        assert_eq!(phi(Complex64::new(-1.0, 0.0)).unwrap(), Complex64::new(0.0, 1.0));
        let v = phi(Complex64::new(0.0, -2.0)).unwrap();
        assert_relative_eq!(v.re, -1.0, max_relative = 1e-15);
        assert_relative_eq!(v.im, 1.0, max_relative = 1e-15);
        assert!(phi(Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn gp1_fixed_point_map_direct_arithmetic() {
        let sys = EquationSystem::gp1(single());
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let f = cf.fixed_point_map(Complex64::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(f.re, -0.5);
        assert_relative_eq!(f.im, 0.5);
    }

    #[test]
    fn gp2_fixed_point_map_goes_through_phi() {
        let sys = EquationSystem::gp2(1.0, single()).unwrap();
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let f = cf.fixed_point_map(Complex64::new(0.0, 1.0)).unwrap();
        let expected = phi(Complex64::new(-0.5, -0.5)).unwrap();
        assert_relative_eq!(f.re, expected.re);
        assert_relative_eq!(f.im, expected.im);
        assert!(f.im > 0.0);
    }

    #[test]
    fn fixed_point_is_zero_of_characteristic_fn() {
        // For GP1 two atoms, iterate a few steps toward the Denjoy-Wolff point
        // and confirm |f(z)-z| small implies |F_n(z)| small at a genuine root.
        let sys = EquationSystem::gp1(Measure::discrete(vec![
            Atom::new(1.0, 1.0),
            Atom::new(3.0, 2.0),
        ]));
        let cf = CharacteristicFn::new(&sys, 3).unwrap();
        let mut z = Complex64::new(0.0, 1.0);
        for _ in 0..6000 {
            z = cf.fixed_point_map(z).unwrap();
        }
        let (v, _) = cf.eval(z).unwrap();
        assert!(v.norm() < 1e-9, "residual {}", v.norm());
    }

    #[test]
    fn mobius_degeneracy_detection() {
        let s1 = EquationSystem::gp1(single());
        assert!(CharacteristicFn::new(&s1, 7).unwrap().is_mobius_degenerate());
        let s2 = EquationSystem::gp1(Measure::discrete(vec![
            Atom::new(0.1, 1.0),
            Atom::new(0.1, 2.0),
        ]));
        assert!(!CharacteristicFn::new(&s2, 1).unwrap().is_mobius_degenerate());
        let s3 = EquationSystem::gp2(1.0, single()).unwrap();
        assert!(!CharacteristicFn::new(&s3, 1).unwrap().is_mobius_degenerate());
    }

    #[test]
    fn conjugate_symmetry() {
        let sys = EquationSystem::kv(0.3, Measure::discrete(vec![
            Atom::new(0.4, 0.5),
            Atom::new(1.2, 2.5),
        ]))
        .unwrap();
        let cf = CharacteristicFn::new(&sys, 4).unwrap();
        let z = Complex64::new(-1.3, 2.1);
        let (v, _) = cf.eval(z).unwrap();
        let (vc, _) = cf.eval(z.conj()).unwrap();
        assert_relative_eq!(v.re, vc.re, max_relative = 1e-14);
        assert_relative_eq!(v.im, -vc.im, max_relative = 1e-14);
    }

    #[test]
    fn system_json_round_trip() {
        let sys = EquationSystem::gp2(2.0, single()).unwrap();
        let json = serde_json::to_string(&sys).unwrap();
        assert_eq!(
            json,
            r#"{"equation":"gp2","a":2.0,"measure":{"type":"discrete","atoms":[{"mass":1.0,"loc":1.0}]}}"#
        );
        let back: EquationSystem<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sys);
        assert!(serde_json::from_str::<EquationSystem<f64>>(
            r#"{"equation":"gp2","measure":{"type":"discrete","atoms":[{"mass":1.0,"loc":1.0}]}}"#
        )
        .is_err());
    }
}
