//! Exact finite-dimensional oracle for discrete measures: clears the
//! characteristic function's denominators to a real polynomial and finds all
//! of its roots by simultaneous iteration, independently of the fixed-point
//! machinery.

use num_complex::Complex;
use thiserror::Error;

use crate::chareq::{CharacteristicFn, CharEqError, EquationKind};
use crate::measure::Atom;
use crate::num::{from_u32, lit, Real};

/// `cf(z) · Π_k (z + b_k)` expanded in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearedPolynomial<F: Real> {
    /// Real coefficients, ascending degree; leading coefficient is 1.
    pub coefficients: Vec<F>,
    /// Which characteristic function this clears.
    pub kind: EquationKind<F>,
    pub n: u32,
}

impl<F: Real> ClearedPolynomial<F> {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, z: Complex<F>) -> Complex<F> {
        horner(&self.coefficients, z)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError<F: Real> {
    #[error("denominator clearing requires a discrete measure")]
    NonDiscreteMeasure,
    #[error(transparent)]
    CharEq(#[from] CharEqError<F>),
    #[error("expanded coefficients disagree with rational evaluation at {z} (|diff| = {diff})")]
    ExpansionMismatch { z: Complex<F>, diff: F },
    #[error("cleared polynomial nearly vanishes at atom location {loc}")]
    SpuriousAtomRoot { loc: F },
    #[error("root iteration did not converge; worst residual {worst_residual}")]
    NoConvergence {
        roots: Vec<Complex<F>>,
        worst_residual: F,
    },
    #[error("{count} roots lie in the ambiguity band around the real axis")]
    AmbiguousCount { count: usize },
    #[error("non-real roots do not pair into conjugates")]
    UnpairedRoots,
}

fn horner<F: Real>(coeffs: &[F], z: Complex<F>) -> Complex<F> {
    let mut acc = Complex::new(F::zero(), F::zero());
    for &c in coeffs.iter().rev() {
        acc = acc * z + Complex::new(c, F::zero());
    }
    acc
}

fn horner_with_derivative<F: Real>(coeffs: &[F], z: Complex<F>) -> (Complex<F>, Complex<F>) {
    let mut p = Complex::new(F::zero(), F::zero());
    let mut dp = Complex::new(F::zero(), F::zero());
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(c, F::zero());
    }
    (p, dp)
}

/// Multiplies `poly` by the linear factor `(z + b)` in place.
fn mul_linear<F: Real>(poly: &mut Vec<F>, b: F) {
    poly.push(F::zero());
    for i in (1..poly.len()).rev() {
        poly[i] = poly[i - 1] + poly[i] * b;
    }
    poly[0] = poly[0] * b;
}

fn add_scaled<F: Real>(target: &mut [F], source: &[F], scale: F) {
    for (t, &s) in target.iter_mut().zip(source) {
        *t = *t + s * scale;
    }
}

/// Clears the denominators of a discrete-measure characteristic function to
/// a monic real polynomial; degree `N+1` for the first-order equation and
/// `N+2` otherwise.
pub fn clear_denominators<F: Real>(
    cf: &CharacteristicFn<'_, F>,
) -> Result<ClearedPolynomial<F>, PolyError<F>> {
    let atoms: Vec<Atom<F>> = cf
        .system()
        .measure
        .as_atoms()
        .ok_or(PolyError::NonDiscreteMeasure)?;
    let n_atoms = atoms.len();
    let nf = from_u32::<F>(cf.n());
    let nsq = nf * nf;

    // Full product P(z) = prod (z + b_k) and the deleted products Q_k.
    let mut full = vec![F::one()];
    for a in &atoms {
        mul_linear(&mut full, a.loc);
    }
    let deleted: Vec<Vec<F>> = (0..n_atoms)
        .map(|k| {
            let mut q = vec![F::one()];
            for (j, a) in atoms.iter().enumerate() {
                if j != k {
                    mul_linear(&mut q, a.loc);
                }
            }
            q
        })
        .collect();

    let kind = cf.system().kind;
    let degree = match kind {
        EquationKind::Gp1 => n_atoms + 1,
        _ => n_atoms + 2,
    };
    let mut coeffs = vec![F::zero(); degree + 1];
    match kind {
        EquationKind::Gp1 => {
            // z * full + n^2 * sum a_k Q_k
            for (i, &c) in full.iter().enumerate() {
                coeffs[i + 1] = coeffs[i + 1] + c;
            }
            for (k, a) in atoms.iter().enumerate() {
                add_scaled(&mut coeffs[..n_atoms], &deleted[k], nsq * a.mass);
            }
        }
        EquationKind::Gp2 { a } => {
            // (z^2 + a n^2) * full - n^2 * sum a_k Q_k
            for (i, &c) in full.iter().enumerate() {
                coeffs[i + 2] = coeffs[i + 2] + c;
            }
            add_scaled(&mut coeffs[..=n_atoms], &full, a * nsq);
            for (k, at) in atoms.iter().enumerate() {
                add_scaled(&mut coeffs[..n_atoms], &deleted[k], -nsq * at.mass);
            }
        }
        EquationKind::Kv { epsilon } => {
            // (z^2 + eps n^2 z + n^2) * full - n^2 * sum a_k Q_k
            for (i, &c) in full.iter().enumerate() {
                coeffs[i + 2] = coeffs[i + 2] + c;
                coeffs[i + 1] = coeffs[i + 1] + c * epsilon * nsq;
                coeffs[i] = coeffs[i] + c * nsq;
            }
            for (k, at) in atoms.iter().enumerate() {
                add_scaled(&mut coeffs[..n_atoms], &deleted[k], -nsq * at.mass);
            }
        }
    }

    let poly = ClearedPolynomial {
        coefficients: coeffs,
        kind,
        n: cf.n(),
    };

    // Cross-check the expansion against direct rational evaluation at a
    // deterministic fan of upper-half-plane points.
    let max_loc = atoms.last().map(|a| a.loc).unwrap_or(F::one());
    let check_tol = F::epsilon() * lit::<F>(5e5);
    for j in 0..16usize {
        let angle = lit::<F>(std::f64::consts::PI * (2.0 * j as f64 + 1.0) / 34.0);
        let radius = (F::one() + max_loc) * (lit::<F>(0.5) + lit::<F>(0.25) * lit::<F>(j as f64));
        let z = Complex::from_polar(radius, angle);
        let (cf_value, _) = cf.eval(z)?;
        let rational = cf_value * horner(&full, z);
        let expanded = poly.eval(z);
        let scale = poly
            .coefficients
            .iter()
            .enumerate()
            .fold(F::zero(), |s, (i, c)| {
                s + c.abs() * z.norm().powi(i as i32)
            });
        let diff = (rational - expanded).norm();
        if diff > check_tol * (scale + rational.norm()) {
            return Err(PolyError::ExpansionMismatch { z, diff });
        }
    }

    // Atom locations are poles of cf, never roots of the cleared polynomial:
    // the value there collapses to ± n^2 a_k prod_{j!=k} (b_j - b_k).
    for (k, at) in atoms.iter().enumerate() {
        let expected = atoms
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .fold(nsq * at.mass, |acc, (_, other)| acc * (other.loc - at.loc));
        let actual = poly.eval(Complex::new(-at.loc, F::zero()));
        if actual.norm() < lit::<F>(0.5) * expected.abs() {
            return Err(PolyError::SpuriousAtomRoot { loc: at.loc });
        }
    }

    Ok(poly)
}

/// All roots by Aberth–Ehrlich simultaneous iteration, seeded on a circle of
/// radius `1 + max |c_k / c_deg|`. Conjugate pairs are symmetrized after
/// convergence; output is sorted by descending imaginary part, then
/// ascending real part.
pub fn all_roots<F: Real>(
    p: &ClearedPolynomial<F>,
    tol: F,
) -> Result<Vec<Complex<F>>, PolyError<F>> {
    // Deflate exact roots at the origin (the constant term can vanish to the
    // last bit for measures with unit transform at zero); Aberth otherwise
    // stalls in the denormal range chasing them.
    let zero_roots = p
        .coefficients
        .iter()
        .take_while(|c| **c == F::zero())
        .count();
    let coeffs = &p.coefficients[zero_roots..];
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    debug_assert!(lead != F::zero());
    let with_zeros = |mut roots: Vec<Complex<F>>| {
        roots.extend(std::iter::repeat(Complex::new(F::zero(), F::zero())).take(zero_roots));
        roots
    };

    if degree == 0 {
        let mut roots = with_zeros(Vec::new());
        symmetrize_conjugates(&mut roots);
        sort_roots(&mut roots);
        return Ok(roots);
    }
    if degree == 1 {
        let mut roots = with_zeros(vec![Complex::new(-coeffs[0] / coeffs[1], F::zero())]);
        symmetrize_conjugates(&mut roots);
        sort_roots(&mut roots);
        return Ok(roots);
    }

    let radius = F::one()
        + coeffs[..degree]
            .iter()
            .fold(F::zero(), |m, c| m.max((*c / lead).abs()));
    let mut roots: Vec<Complex<F>> = (0..degree)
        .map(|j| {
            let angle =
                lit::<F>(2.0 * std::f64::consts::PI * j as f64 / degree as f64) + lit::<F>(0.4);
            Complex::from_polar(radius, angle)
        })
        .collect();

    let max_sweeps = 400;
    for _ in 0..max_sweeps {
        let mut max_update = F::zero();
        for i in 0..degree {
            let (value, derivative) = horner_with_derivative(coeffs, roots[i]);
            if value.norm() == F::zero() {
                continue;
            }
            let newton = if derivative.norm() == F::zero() {
                // Nudge off a critical point.
                Complex::new(F::epsilon() * (F::one() + roots[i].norm()), F::zero())
            } else {
                value / derivative
            };
            let mut repulsion = Complex::new(F::zero(), F::zero());
            for j in 0..degree {
                if j != i {
                    repulsion = repulsion + Complex::new(F::one(), F::zero()) / (roots[i] - roots[j]);
                }
            }
            let denom = Complex::new(F::one(), F::zero()) - newton * repulsion;
            let correction = if denom.norm() == F::zero() {
                newton
            } else {
                newton / denom
            };
            roots[i] = roots[i] - correction;
            max_update = max_update.max(correction.norm() / (F::one() + roots[i].norm()));
        }
        if max_update < F::epsilon() * lit::<F>(8.0) {
            break;
        }
    }

    // Residual contract: |P(z)| below tol relative to the backward-error scale.
    let residual_ok = |z: Complex<F>| {
        let scale = coeffs
            .iter()
            .enumerate()
            .fold(F::zero(), |s, (i, c)| s + c.abs() * z.norm().powi(i as i32));
        (horner(coeffs, z).norm(), scale.max(F::min_positive_value()))
    };
    let mut worst = F::zero();
    for &z in &roots {
        let (res, scale) = residual_ok(z);
        worst = worst.max(res / scale);
    }
    if worst > tol {
        return Err(PolyError::NoConvergence {
            roots,
            worst_residual: worst,
        });
    }

    let mut roots = with_zeros(roots);
    symmetrize_conjugates(&mut roots);
    sort_roots(&mut roots);
    Ok(roots)
}

fn sort_roots<F: Real>(roots: &mut [Complex<F>]) {
    roots.sort_by(|x, y| {
        y.im.partial_cmp(&x.im)
            .unwrap()
            .then(x.re.partial_cmp(&y.re).unwrap())
    });
}

/// Pairs each clearly-complex root with its conjugate partner and averages
/// the pair to exact symmetry. Near-real roots are left untouched.
fn symmetrize_conjugates<F: Real>(roots: &mut [Complex<F>]) {
    let len = roots.len();
    let mut used = vec![false; len];
    for i in 0..len {
        if used[i] || !(roots[i].im > F::zero()) {
            continue;
        }
        let target = roots[i].conj();
        let mut best: Option<(usize, F)> = None;
        for j in 0..len {
            if j == i || used[j] || roots[j].im >= F::zero() {
                continue;
            }
            let dist = (roots[j] - target).norm();
            if best.map_or(true, |(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        if let Some((j, dist)) = best {
            // Accept only when the partner is much closer to the mirror image
            // than either root is to the real axis.
            if dist <= lit::<F>(0.5) * (roots[i].im.abs() + roots[j].im.abs()) {
                let avg = (roots[i] + roots[j].conj()) * lit::<F>(0.5);
                roots[i] = avg;
                roots[j] = avg.conj();
                used[i] = true;
                used[j] = true;
            }
        }
    }
}

/// Number of roots with `|Im z| > im_tol·(1+|z|)`; errors when any root falls
/// in the ambiguity band `[0.1·band, band]`.
pub fn count_nonreal<F: Real>(roots: &[Complex<F>], im_tol: F) -> Result<usize, PolyError<F>> {
    let mut count = 0usize;
    let mut ambiguous = 0usize;
    for z in roots {
        let band = im_tol * (F::one() + z.norm());
        let im = z.im.abs();
        if im > band {
            count += 1;
        } else if im >= lit::<F>(0.1) * band {
            ambiguous += 1;
        }
    }
    if ambiguous > 0 {
        return Err(PolyError::AmbiguousCount { count: ambiguous });
    }
    if count % 2 != 0 {
        return Err(PolyError::UnpairedRoots);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chareq::EquationSystem;
    use crate::measure::Measure;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn coeffs_of(sys: &EquationSystem<f64>, n: u32) -> Vec<f64> {
        let cf = CharacteristicFn::new(sys, n).unwrap();
        clear_denominators(&cf).unwrap().coefficients
    }

    #[test]
    fn gp1_single_atom_clears_to_quadratic() {
        let sys = EquationSystem::gp1(Measure::single_atom(1.0, 1.0));
        assert_eq!(coeffs_of(&sys, 1), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn gp1_example1_cubic() {
        let sys = EquationSystem::gp1(Measure::discrete(vec![
            Atom::new(0.1, 1.0),
            Atom::new(0.1, 2.0),
        ]));
        let c = coeffs_of(&sys, 1);
        assert_relative_eq!(c[0], 0.3, max_relative = 1e-14);
        assert_relative_eq!(c[1], 2.2, max_relative = 1e-14);
        assert_relative_eq!(c[2], 3.0, max_relative = 1e-14);
        assert_relative_eq!(c[3], 1.0);
    }

    #[test]
    fn gp2_cubic_coefficients() {
        let sys = EquationSystem::gp2(1.0, Measure::single_atom(0.5, 1.0)).unwrap();
        let c = coeffs_of(&sys, 10);
        assert_relative_eq!(c[0], 50.0, max_relative = 1e-14);
        assert_relative_eq!(c[1], 100.0, max_relative = 1e-14);
        assert_relative_eq!(c[2], 1.0, max_relative = 1e-14);
        assert_relative_eq!(c[3], 1.0);
    }

    #[test]
    fn degree_law() {
        let m = Measure::discrete(vec![
            Atom::new(0.3, 0.7),
            Atom::new(1.0, 1.5),
            Atom::new(0.2, 4.0),
        ]);
        assert_eq!(coeffs_of(&EquationSystem::gp1(m.clone()), 2).len(), 5);
        assert_eq!(
            coeffs_of(&EquationSystem::gp2(1.0, m.clone()).unwrap(), 2).len(),
            6
        );
        assert_eq!(
            coeffs_of(&EquationSystem::kv(0.2, m).unwrap(), 2).len(),
            6
        );
    }

    #[test]
    fn quadratic_roots() {
        let p = ClearedPolynomial {
            coefficients: vec![1.0, 1.0, 1.0],
            kind: EquationKind::Gp1,
            n: 1,
        };
        let roots = all_roots(&p, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert_relative_eq!(roots[0].re, -0.5, max_relative = 1e-12);
        assert_relative_eq!(roots[0].im, 3f64.sqrt() / 2.0, max_relative = 1e-12);
        assert_eq!(roots[0].conj(), roots[1]);
        assert_eq!(count_nonreal(&roots, 1e-9).unwrap(), 2);
    }

    #[test]
    fn example1_cubic_has_three_real_roots() {
        let p = ClearedPolynomial {
            coefficients: vec![0.3, 2.2, 3.0, 1.0],
            kind: EquationKind::Gp1,
            n: 1,
        };
        let roots = all_roots(&p, 1e-12).unwrap();
        assert_eq!(count_nonreal(&roots, 1e-9).unwrap(), 0);
        let mut res: Vec<f64> = roots.iter().map(|z| z.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Values frozen from an independent high-precision solve.
        assert_relative_eq!(res[0], -1.9513733275118055, max_relative = 1e-10);
        assert_relative_eq!(res[1], -0.8724032582101547, max_relative = 1e-10);
        assert_relative_eq!(res[2], -0.1762234142780398, max_relative = 1e-10);
        assert!(res[0] > -2.0 && res[0] < -1.0);
        assert!(res[1] > -1.0 && res[2] < 0.0);
    }

    #[test]
    fn gp2_cubic_roots_match_independent_solve() {
        let p = ClearedPolynomial::<f64> {
            coefficients: vec![50.0, 100.0, 1.0, 1.0],
            kind: EquationKind::Gp2 { a: 1.0 },
            n: 10,
        };
        let roots = all_roots(&p, 1e-12).unwrap();
        assert_eq!(count_nonreal(&roots, 1e-9).unwrap(), 2);
        assert_relative_eq!(roots[0].re, -0.24937343752946801, max_relative = 1e-10);
        assert_relative_eq!(roots[0].im, 9.98437852141919, max_relative = 1e-10);
        let real_root = roots.iter().find(|z| z.im.abs() < 1e-9).unwrap();
        assert_relative_eq!(real_root.re, -0.50125312494106397, max_relative = 1e-10);
        // Sum of roots equals -c2/c3.
        let sum: Complex64 = roots.iter().sum();
        assert_relative_eq!(sum.re, -1.0, max_relative = 1e-9);
        assert!(sum.im.abs() < 1e-12);
    }

    #[test]
    fn roots_are_zeros_of_the_characteristic_fn() {
        let sys = EquationSystem::kv(
            0.4,
            Measure::discrete(vec![Atom::new(0.5, 1.0), Atom::new(0.25, 3.0)]),
        )
        .unwrap();
        let cf = CharacteristicFn::new(&sys, 3).unwrap();
        let p = clear_denominators(&cf).unwrap();
        let roots = all_roots(&p, 1e-12).unwrap();
        assert_eq!(roots.len(), 4);
        for z in &roots {
            let (v, _) = cf.eval(*z).unwrap();
            let scale = 1.0 + z.norm() + 9.0;
            assert!(v.norm() < 1e-10 * scale, "residual {} at {}", v.norm(), z);
        }
    }

    #[test]
    fn non_discrete_is_unsupported() {
        let sys = EquationSystem::gp1(Measure::power_law(1.0, 0.5));
        let cf = CharacteristicFn::new(&sys, 1).unwrap();
        assert!(matches!(
            clear_denominators(&cf),
            Err(PolyError::NonDiscreteMeasure)
        ));
    }
}
