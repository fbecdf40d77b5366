//! Accuracy self-test of the special-function kernel: the invariants that
//! every other module leans on, run on fixed grids.

use casimir_core::specfun::{airy, dedekind_eta, hurwitz_zeta_neg1, jacobi_theta3, PrecisionPolicy};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub observed: f64,
    pub tolerance: f64,
    pub status: String,
}

fn check(name: &str, observed: f64, tolerance: f64) -> Check {
    Check {
        check: name.to_string(),
        observed,
        tolerance,
        status: if observed.is_finite() && observed < tolerance { "pass" } else { "FAIL" }.to_string(),
    }
}

pub fn run() -> (Vec<Check>, bool) {
    let mut out = Vec::new();
    let policy = PrecisionPolicy::default();

    // Airy Wronskian on [-10, 30]
    let mut worst = 0.0f64;
    let mut x = -10.0;
    while x <= 30.0 {
        let v = airy(x).unwrap();
        let w = v.ai * v.bi_prime - v.ai_prime * v.bi;
        worst = worst.max((w - std::f64::consts::FRAC_1_PI).abs());
        x += 0.13;
    }
    out.push(check("airy_wronskian_max_dev", worst, 1e-9));

    // Airy ODE residual via central differences of the derivative
    let mut worst = 0.0f64;
    for &x in &[-9.0, -4.0, -1.5, 0.0, 1.0, 3.0, 6.0, 8.5, 12.0, 20.0] {
        let h = 1e-5;
        let vp = airy(x + h).unwrap();
        let vm = airy(x - h).unwrap();
        let v = airy(x).unwrap();
        let scale = v.bi.abs().max(1.0);
        worst = worst.max(((vp.ai_prime - vm.ai_prime) / (2.0 * h) - x * v.ai).abs() / scale);
        worst = worst.max(((vp.bi_prime - vm.bi_prime) / (2.0 * h) - x * v.bi).abs() / scale);
    }
    out.push(check("airy_ode_residual_max", worst, 1e-7));

    // Airy values at the origin against the exact constants
    let v0 = airy(0.0).unwrap();
    out.push(check(
        "airy_origin_max_dev",
        (v0.ai - 0.3550280538878172)
            .abs()
            .max((v0.bi - 0.6149266274460007).abs()),
        1e-13,
    ));

    // Hurwitz zeta closed form and reflection symmetry
    let anchors = (hurwitz_zeta_neg1(1.0).unwrap() + 1.0 / 12.0)
        .abs()
        .max((hurwitz_zeta_neg1(0.5).unwrap() - 1.0 / 24.0).abs());
    out.push(check("hurwitz_anchors_dev", anchors, 1e-15));
    let mut worst = 0.0f64;
    let mut state = 0x243f6a8885a308d3u64;
    for _ in 0..100 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = ((state >> 11) as f64 / (1u64 << 53) as f64).clamp(1e-6, 1.0 - 1e-6);
        worst = worst.max(
            (hurwitz_zeta_neg1(a).unwrap() - hurwitz_zeta_neg1(1.0 - a).unwrap()).abs(),
        );
    }
    out.push(check("hurwitz_symmetry_max_dev", worst, 1e-15));

    // Dedekind eta at i against Gamma(1/4)/(2 pi^{3/4})
    const GAMMA_QUARTER: f64 = 3.6256099082219083;
    let expected = GAMMA_QUARTER / (2.0 * std::f64::consts::PI.powf(0.75));
    let (eta_i, _) = dedekind_eta(Complex64::new(0.0, 1.0), &policy).unwrap();
    out.push(check("eta_at_i_dev", (eta_i.re - expected).abs() + eta_i.im.abs(), 1e-12));

    // eta(iy) positive real, decreasing on y >= 1
    let mut prev = f64::MAX;
    let mut ok = true;
    let mut y = 1.0;
    while y <= 10.0 {
        let (v, _) = dedekind_eta(Complex64::new(0.0, y), &policy).unwrap();
        ok &= v.re > 0.0 && v.re < prev && v.im.abs() < 1e-14;
        prev = v.re;
        y += 0.5;
    }
    out.push(check("eta_imag_axis_monotone", if ok { 0.0 } else { 1.0 }, 0.5));

    // theta3 anchor and monotonicity
    let th = jacobi_theta3(0.0, Complex64::new(0.0, 1.0), &policy).unwrap();
    out.push(check("theta3_at_i_dev", (th.re - 1.7726372048266522).abs(), 1e-12));
    let mut prev = f64::MAX;
    let mut ok = true;
    let mut y = 0.5;
    while y <= 20.0 {
        let v = jacobi_theta3(0.0, Complex64::new(0.0, y), &policy).unwrap().re;
        ok &= v > 1.0 && v < prev;
        prev = v;
        y += 0.5;
    }
    out.push(check("theta3_monotone", if ok { 0.0 } else { 1.0 }, 0.5));

    let all_pass = out.iter().all(|c| c.status == "pass");
    (out, all_pass)
}
