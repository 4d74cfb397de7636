//! Shared helpers for integration tests: an independent quadrature
//! evaluation of the power-law transform.

use num_complex::Complex;

/// 10-point Gauss–Legendre nodes/weights on [-1, 1].
const GL_NODES: [f64; 10] = [
    -0.973906528517171720,
    -0.865063366688984511,
    -0.679409568299024406,
    -0.433395394129247191,
    -0.148874338981631211,
    0.148874338981631211,
    0.433395394129247191,
    0.679409568299024406,
    0.865063366688984511,
    0.973906528517171720,
];
const GL_WEIGHTS: [f64; 10] = [
    0.066671344308688138,
    0.149451349150580593,
    0.219086362515982044,
    0.269266719309996355,
    0.295524224714752870,
    0.295524224714752870,
    0.269266719309996355,
    0.219086362515982044,
    0.149451349150580593,
    0.066671344308688138,
];

fn panel_integral<G: Fn(f64) -> Complex<f64>>(g: &G, a: f64, b: f64) -> Complex<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex::new(0.0, 0.0);
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        acc += g(mid + half * x) * *w;
    }
    acc * half
}

fn composite<G: Fn(f64) -> Complex<f64>>(g: G, panels: usize) -> Complex<f64> {
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..panels {
        let a = i as f64 / panels as f64;
        let b = (i + 1) as f64 / panels as f64;
        acc += panel_integral(&g, a, b);
    }
    acc
}

/// `∫₀^∞ bρ t^{ρ-1}/(z+t) dt` by substitutions that remove both the endpoint
/// singularity and the tail, then composite Gauss–Legendre. Independent of
/// the library's closed form.
pub fn power_law_k_by_quadrature(b: f64, rho: f64, z: Complex<f64>) -> Complex<f64> {
    // t in (0,1): t = u^{1/ρ} turns the integrand into b/(z + u^{1/ρ}).
    let head = composite(|u: f64| b / (z + u.powf(1.0 / rho)), 96);
    // t in (1,∞): t = 1/v then v = u^{1/(1-ρ)} gives
    // bρ/(1-ρ) · 1/(z·u^{1/(1-ρ)} + 1).
    let tail = composite(
        |u: f64| b * rho / (1.0 - rho) / (z * u.powf(1.0 / (1.0 - rho)) + 1.0),
        96,
    );
    head + tail
}
