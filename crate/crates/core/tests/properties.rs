//! Property tests for the structural invariants: the sign law of the Cauchy
//! transform, the square-root branch, self-mapping of the fixed-point maps,
//! conjugate symmetry, and agreement of the power-law closed form with an
//! independent quadrature.

mod common;

use num_complex::Complex;
use proptest::prelude::*;
use spectra_core::chareq::phi;
use spectra_core::{
    eval_k, Atom, CharacteristicFn, Complex64, EquationSystem, Measure,
};

fn measure_strategy() -> impl Strategy<Value = Measure<f64>> {
    prop::collection::vec((0.05f64..5.0, 0.2f64..10.0), 1..5).prop_map(|pairs| {
        let mut loc = 0.0;
        let atoms = pairs
            .into_iter()
            .map(|(mass, gap)| {
                loc += gap;
                Atom::new(mass, loc)
            })
            .collect();
        Measure::discrete(atoms)
    })
}

fn offaxis_z() -> impl Strategy<Value = Complex64> {
    (-30.0f64..30.0, 0.01f64..30.0, prop::bool::ANY)
        .prop_map(|(re, im, flip)| Complex::new(re, if flip { -im } else { im }))
}

proptest! {
    /// Im K(z) and Im z have opposite signs off the real axis.
    #[test]
    fn sign_law_discrete(m in measure_strategy(), z in offaxis_z()) {
        let k = eval_k(&m, z).unwrap();
        prop_assert!(k.value.im * z.im < 0.0);
    }

    #[test]
    fn sign_law_power_law(b in 0.1f64..3.0, rho in 0.05f64..0.95, z in offaxis_z()) {
        let m = Measure::power_law(b, rho);
        let k = eval_k(&m, z).unwrap();
        prop_assert!(k.value.im * z.im < 0.0);
    }

    /// The transform of a sum is the sum of the transforms.
    #[test]
    fn sum_additivity(m1 in measure_strategy(), m2 in measure_strategy(), z in offaxis_z()) {
        let total = Measure::sum(vec![m1.clone(), m2.clone()]);
        let lhs = eval_k(&total, z).unwrap().value;
        let rhs = eval_k(&m1, z).unwrap().value + eval_k(&m2, z).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    /// φ squares back to its argument and lands in the closed second quadrant.
    #[test]
    fn phi_branch(re in -50.0f64..50.0, im in 0.0f64..50.0) {
        let w = Complex::new(re, -im);
        let p = phi(w).unwrap();
        prop_assert!((p * p - w).norm() <= 1e-12 * (1.0 + w.norm()));
        prop_assert!(p.im >= -1e-15);
        prop_assert!(p.re <= 1e-15 || (w.im == 0.0 && w.re >= 0.0 && p.im.abs() <= 1e-15));
    }

    /// The fixed-point maps send the open upper half-plane into itself.
    #[test]
    fn fixed_point_maps_are_self_maps(
        m in measure_strategy(),
        re in -20.0f64..20.0,
        im in 0.001f64..20.0,
        n in 1u32..12,
        which in 0usize..3,
        a in 0.1f64..10.0,
        eps in 0.01f64..2.0,
    ) {
        let sys = match which {
            0 => EquationSystem::gp1(m),
            1 => EquationSystem::gp2(a, m).unwrap(),
            _ => EquationSystem::kv(eps, m).unwrap(),
        };
        let cf = CharacteristicFn::new(&sys, n).unwrap();
        let z = Complex::new(re, im);
        let f = cf.fixed_point_map(z).unwrap();
        prop_assert!(f.im > 0.0);
    }

    /// Real coefficients: the characteristic function commutes with conjugation.
    #[test]
    fn conjugate_symmetry(m in measure_strategy(), z in offaxis_z(), n in 1u32..12) {
        let sys = EquationSystem::gp2(1.0, m).unwrap();
        let cf = CharacteristicFn::new(&sys, n).unwrap();
        let (v, _) = cf.eval(z).unwrap();
        let (vc, _) = cf.eval(z.conj()).unwrap();
        prop_assert!((vc - v.conj()).norm() <= 1e-10 * (1.0 + v.norm()));
    }

    /// The reported derivative matches a central finite difference.
    #[test]
    fn derivative_matches_finite_difference(m in measure_strategy(), n in 1u32..8) {
        let sys = EquationSystem::gp1(m);
        let cf = CharacteristicFn::new(&sys, n).unwrap();
        let z = Complex::new(-0.3, 2.0);
        let h = 1e-6;
        let (_, d) = cf.eval(z).unwrap();
        let (vp, _) = cf.eval(z + Complex::new(h, 0.0)).unwrap();
        let (vm, _) = cf.eval(z - Complex::new(h, 0.0)).unwrap();
        let fd = (vp - vm) / (2.0 * h);
        prop_assert!((fd - d).norm() <= 1e-5 * (1.0 + d.norm()));
    }
}

#[test]
fn power_law_closed_form_matches_quadrature() {
    for &(b, rho) in &[(1.0, 0.5), (0.3, 0.25), (2.0, 0.8)] {
        let m = Measure::power_law(b, rho);
        for &z in &[
            Complex::new(1.0, 1.0),
            Complex::new(-2.0, 3.0),
            Complex::new(0.5, -4.0),
            Complex::new(-10.0, 0.7),
            Complex::new(30.0, 5.0),
        ] {
            let closed = eval_k(&m, z).unwrap().value;
            let quad = common::power_law_k_by_quadrature(b, rho, z);
            assert!(
                (closed - quad).norm() <= 1e-9 * (1.0 + closed.norm()),
                "b={b} rho={rho} z={z}: {closed} vs {quad}"
            );
        }
    }
}
