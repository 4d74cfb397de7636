//! Iteration engine for the upper-half-plane fixed-point maps, Newton
//! polishing, and argument-principle certification of zero counts.
//!
//! Iterating the self-map from any interior starting point converges to its
//! unique attracting point. An interior limit is the unique non-real zero of
//! the characteristic function in the upper half-plane; attraction to the
//! real axis signals that no such zero exists, but that verdict is heuristic
//! (boundary convergence can be arbitrarily slow) and is always cross-checked
//! against the polynomial oracle or a winding certificate.

use num_complex::Complex;
use thiserror::Error;

use crate::cauchy::eval_k;
use crate::chareq::{CharacteristicFn, CharEqError};
use crate::num::{from_u32, lit, Real};

/// Outcome of the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DwClassification {
    /// Converged to an interior point: the unique upper-half-plane zero.
    InteriorFixedPoint,
    /// Iterates sank to the real axis: heuristic evidence of no interior zero.
    BoundaryAttracted,
    /// The map is an elliptic fractional-linear transformation; iteration
    /// rotates forever and is bypassed.
    EllipticDegenerate,
    /// Iteration budget exhausted without a verdict.
    Undecided,
}

/// Trajectory of the fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DwTrace<F> {
    pub iterates: Vec<Complex<F>>,
    pub classification: DwClassification,
    pub fixed_point: Option<Complex<F>>,
    /// `f'(w)` at an interior fixed point; `|f'(w)| < 1` there.
    pub multiplier: Option<Complex<F>>,
    pub iterations_used: usize,
}

/// Tuning knobs for [`iterate`].
#[derive(Debug, Clone, Copy)]
pub struct DwOptions<F> {
    pub max_iter: usize,
    pub tol: F,
    /// Interior verdicts require `Im z` above `boundary_factor * tol`.
    pub boundary_factor: F,
    /// Consecutive contraction steps required for an interior verdict.
    pub contraction_window: usize,
    /// Step-ratio bound counting as contraction.
    pub contraction_ratio: F,
    /// Consecutive sub-threshold, non-increasing steps for a boundary verdict.
    pub trend_window: usize,
}

impl<F: Real> Default for DwOptions<F> {
    fn default() -> Self {
        DwOptions {
            max_iter: 10_000,
            tol: lit(1e-12),
            boundary_factor: lit(10.0),
            contraction_window: 5,
            contraction_ratio: lit(0.99),
            trend_window: 20,
        }
    }
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<F> {
    pub re_min: F,
    pub re_max: F,
    pub im_min: F,
    pub im_max: F,
}

impl<F: Real> Rect<F> {
    pub fn new(re_min: F, re_max: F, im_min: F, im_max: F) -> Self {
        Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    pub fn center(&self) -> Complex<F> {
        let half = lit::<F>(0.5);
        Complex::new((self.re_min + self.re_max) * half, (self.im_min + self.im_max) * half)
    }

    pub fn contains(&self, z: Complex<F>) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn corners(&self) -> [Complex<F>; 4] {
        [
            Complex::new(self.re_min, self.im_min),
            Complex::new(self.re_max, self.im_min),
            Complex::new(self.re_max, self.im_max),
            Complex::new(self.re_min, self.im_max),
        ]
    }
}

/// Winding-number certificate over a box in the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCertificate<F> {
    pub rect: Rect<F>,
    pub winding: i32,
    /// Distance of the raw contour integral to the nearest integer.
    pub quadrature_residual: F,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DwError<F: Real> {
    #[error("fixed-point map failed after {} iterates: {source}", trace.iterations_used)]
    MapDomain {
        trace: DwTrace<F>,
        source: CharEqError<F>,
    },
    #[error(transparent)]
    CharEq(#[from] CharEqError<F>),
    #[error("Newton refinement did not converge; last iterate {last}, residual {residual}")]
    NewtonNoConvergence { last: Complex<F>, residual: F },
    #[error("certification box must lie in the open upper half-plane")]
    BoxNotUpperHalfPlane,
    #[error("characteristic function too small on the box boundary at {z} (|value| = {value})")]
    BoundaryNearZero { z: Complex<F>, value: F },
    #[error("winding quadrature inconclusive: residual {residual} exceeds 0.1")]
    InconclusiveWinding { residual: F },
}

/// Iterates the fixed-point map from `z0` (conventionally `i`).
pub fn iterate<F: Real>(
    cf: &CharacteristicFn<'_, F>,
    z0: Complex<F>,
    opts: &DwOptions<F>,
) -> Result<DwTrace<F>, DwError<F>> {
    if cf.is_mobius_degenerate() {
        return Ok(DwTrace {
            iterates: Vec::new(),
            classification: DwClassification::EllipticDegenerate,
            fixed_point: None,
            multiplier: None,
            iterations_used: 0,
        });
    }
    if !(z0.im > F::zero()) {
        return Err(DwError::CharEq(CharEqError::NotUpperHalfPlane));
    }
    let boundary = opts.boundary_factor * opts.tol;
    let mut iterates = vec![z0];
    let mut z = z0;
    let mut prev_delta = F::infinity();
    let mut contraction_run = 0usize;
    let mut trend_run = 0usize;

    for k in 1..=opts.max_iter {
        let next = match cf.fixed_point_map(z) {
            Ok(v) => v,
            Err(source) => {
                // A vanishing imaginary part (underflow toward the axis) is
                // boundary attraction, not a domain bug.
                let classification = if z.im <= boundary {
                    DwClassification::BoundaryAttracted
                } else {
                    DwClassification::Undecided
                };
                let trace = DwTrace {
                    iterates: iterates.clone(),
                    classification,
                    fixed_point: None,
                    multiplier: None,
                    iterations_used: k - 1,
                };
                if classification == DwClassification::BoundaryAttracted {
                    return Ok(trace);
                }
                return Err(DwError::MapDomain { trace, source });
            }
        };
        let delta = (next - z).norm();
        if delta <= opts.contraction_ratio * prev_delta || delta == F::zero() {
            contraction_run += 1;
        } else {
            contraction_run = 0;
        }
        if next.im < boundary && next.im <= z.im {
            trend_run += 1;
        } else {
            trend_run = 0;
        }
        iterates.push(next);

        if delta < opts.tol && next.im > boundary && contraction_run >= opts.contraction_window {
            let multiplier = cf.map_derivative(next)?;
            return Ok(DwTrace {
                iterates,
                classification: DwClassification::InteriorFixedPoint,
                fixed_point: Some(next),
                multiplier: Some(multiplier),
                iterations_used: k,
            });
        }
        if trend_run >= opts.trend_window {
            return Ok(DwTrace {
                iterates,
                classification: DwClassification::BoundaryAttracted,
                fixed_point: None,
                multiplier: None,
                iterations_used: k,
            });
        }
        prev_delta = delta;
        z = next;
    }
    Ok(DwTrace {
        iterates,
        classification: DwClassification::Undecided,
        fixed_point: None,
        multiplier: None,
        iterations_used: opts.max_iter,
    })
}

fn residual_scale<F: Real>(cf: &CharacteristicFn<'_, F>, z: Complex<F>) -> F {
    let n = from_u32::<F>(cf.n());
    let k_norm = eval_k(&cf.system().measure, z)
        .map(|tv| tv.value.norm())
        .unwrap_or(F::one());
    F::one() + z.norm() + n * n * k_norm
}

/// Newton polishing of a root estimate, damped to stay in the closed upper
/// half-plane.
pub fn newton_refine<F: Real>(
    cf: &CharacteristicFn<'_, F>,
    z0: Complex<F>,
    tol: F,
    max_iter: usize,
) -> Result<Complex<F>, DwError<F>> {
    let mut z = z0;
    let mut best = z0;
    let mut best_residual = F::infinity();
    for _ in 0..max_iter {
        let (value, derivative) = cf.eval(z)?;
        let scale = residual_scale(cf, z);
        let residual = value.norm();
        if residual < best_residual {
            best_residual = residual;
            best = z;
        }
        if residual < tol * scale {
            return Ok(z);
        }
        if derivative.norm() == F::zero() {
            break;
        }
        let mut step = value / derivative;
        let mut halvings = 0;
        while (z - step).im < F::zero() && halvings < 64 {
            step = step * lit::<F>(0.5);
            halvings += 1;
        }
        let next = z - step;
        if next == z {
            break;
        }
        z = next;
    }
    // Final residual check on the best iterate seen.
    let (value, _) = cf.eval(best)?;
    if value.norm() < tol * residual_scale(cf, best) {
        return Ok(best);
    }
    Err(DwError::NewtonNoConvergence {
        last: best,
        residual: best_residual,
    })
}

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982_0,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

fn gl_segment<F: Real>(
    cf: &CharacteristicFn<'_, F>,
    a: Complex<F>,
    b: Complex<F>,
) -> Result<Complex<F>, DwError<F>> {
    let mid = (a + b) * lit::<F>(0.5);
    let half = (b - a) * lit::<F>(0.5);
    let mut acc = Complex::new(F::zero(), F::zero());
    for i in 0..5 {
        let x = lit::<F>(GL_NODES[i]);
        let w = lit::<F>(GL_WEIGHTS[i]);
        for sign in [F::one(), -F::one()] {
            let z = mid + half * (x * sign);
            let (value, derivative) = cf.eval(z)?;
            acc = acc + (derivative / value) * w;
        }
    }
    Ok(acc * half)
}

fn adaptive_segment<F: Real>(
    cf: &CharacteristicFn<'_, F>,
    a: Complex<F>,
    b: Complex<F>,
    tol: F,
    depth: usize,
) -> Result<Complex<F>, DwError<F>> {
    let whole = gl_segment(cf, a, b)?;
    let mid = (a + b) * lit::<F>(0.5);
    let split = gl_segment(cf, a, mid)? + gl_segment(cf, mid, b)?;
    if (whole - split).norm() <= tol || depth == 0 {
        return Ok(split);
    }
    let half_tol = tol * lit::<F>(0.5);
    Ok(adaptive_segment(cf, a, mid, half_tol, depth - 1)?
        + adaptive_segment(cf, mid, b, half_tol, depth - 1)?)
}

/// Certifies the number of zeros inside `rect` by the argument principle:
/// `(1/2πi) ∮ F'/F dz` over the counterclockwise boundary.
pub fn certify_upper_zero<F: Real>(
    cf: &CharacteristicFn<'_, F>,
    rect: Rect<F>,
) -> Result<ZeroCertificate<F>, DwError<F>> {
    if !(rect.im_min > F::zero()) || rect.im_max <= rect.im_min || rect.re_max <= rect.re_min {
        return Err(DwError::BoxNotUpperHalfPlane);
    }
    // Boundary guard: the contour must stay away from zeros.
    let corners = rect.corners();
    let samples = 24;
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        for s in 0..=samples {
            let t = lit::<F>(s as f64 / samples as f64);
            let z = a + (b - a) * t;
            let (value, _) = cf.eval(z)?;
            let n = from_u32::<F>(cf.n());
            let guard = lit::<F>(1e-9) * (F::one() + z.norm() + n * n);
            if value.norm() < guard {
                return Err(DwError::BoundaryNearZero {
                    z,
                    value: value.norm(),
                });
            }
        }
    }
    let side_tol = lit::<F>(0.01) * F::TAU();
    let mut total = Complex::new(F::zero(), F::zero());
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        total = total + adaptive_segment(cf, a, b, side_tol, 26)?;
    }
    let two_pi_i = Complex::new(F::zero(), F::TAU());
    let raw = total / two_pi_i;
    let winding_f = raw.re.round();
    let residual = (raw - Complex::new(winding_f, F::zero())).norm();
    if residual >= lit::<F>(0.1) {
        return Err(DwError::InconclusiveWinding { residual });
    }
    Ok(ZeroCertificate {
        rect,
        winding: winding_f.to_i32().unwrap_or(0),
        quadrature_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chareq::EquationSystem;
    use crate::measure::{Atom, Measure};
    use num_complex::Complex64;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn example1() -> Measure<f64> {
        Measure::discrete(vec![Atom::new(0.1, 1.0), Atom::new(0.1, 2.0)])
    }

    #[test]
    fn example1_is_boundary_attracted() {
        let sys = EquationSystem::gp1(example1());
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let trace = iterate(&cf, I, &DwOptions::default()).unwrap();
        assert_eq!(trace.classification, DwClassification::BoundaryAttracted);
    }

    #[test]
    fn single_atom_gp1_is_elliptic_degenerate() {
        let sys = EquationSystem::gp1(Measure::single_atom(1.0, 1.0));
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let trace = iterate(&cf, I, &DwOptions::default()).unwrap();
        assert_eq!(trace.classification, DwClassification::EllipticDegenerate);
        assert!(trace.iterates.is_empty());
    }

    #[test]
    fn gp2_cubic_interior_fixed_point() {
        let sys = EquationSystem::gp2(1.0, Measure::single_atom(0.5, 1.0)).unwrap();
        let cf = CharacteristicFn::new(&sys, 10).unwrap();
        let trace = iterate(&cf, I, &DwOptions::default()).unwrap();
        assert_eq!(trace.classification, DwClassification::InteriorFixedPoint);
        let w = trace.fixed_point.unwrap();
        // Independent value from the cleared cubic z^3 + z^2 + 100 z + 50.
        assert!((w - Complex64::new(-0.24937343752946801, 9.98437852141919)).norm() < 1e-8);
        assert!(w.re < 0.0 && w.im > 0.0);
        assert!(trace.multiplier.unwrap().norm() < 1.0);
    }

    #[test]
    fn newton_polishes_to_quadratic_root() {
        let sys = EquationSystem::gp1(Measure::single_atom(1.0, 1.0));
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let root = newton_refine(&cf, Complex64::new(-0.5, 0.9), 1e-14, 100).unwrap();
        let expected = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        assert!((root - expected).norm() < 1e-12);
        // An exact root is a no-op.
        let again = newton_refine(&cf, expected, 1e-12, 100).unwrap();
        assert_eq!(again, expected);
    }

    #[test]
    fn winding_counts_the_quadratic_root() {
        let sys = EquationSystem::gp1(Measure::single_atom(1.0, 1.0));
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let hit = certify_upper_zero(&cf, Rect::new(-1.0, 0.0, 0.5, 1.2)).unwrap();
        assert_eq!(hit.winding, 1);
        assert!(hit.quadrature_residual < 0.1);
        let miss = certify_upper_zero(&cf, Rect::new(1.0, 2.0, 0.5, 1.2)).unwrap();
        assert_eq!(miss.winding, 0);
    }

    #[test]
    fn winding_zero_for_example1_large_box() {
        let sys = EquationSystem::gp1(example1());
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        let cert = certify_upper_zero(&cf, Rect::new(-3.0, 0.0, 0.01, 10.0)).unwrap();
        assert_eq!(cert.winding, 0);
    }

    #[test]
    fn box_must_be_interior() {
        let sys = EquationSystem::gp1(example1());
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        assert!(matches!(
            certify_upper_zero(&cf, Rect::new(-1.0, 0.0, 0.0, 1.0)),
            Err(DwError::BoxNotUpperHalfPlane)
        ));
    }
}
