//! 2N-piece alternating string: Casimir energy from the eigenvalues of the
//! junction recursion matrix, at zero and finite temperature, plus the
//! near-universal scaling function E_N(x)/E_N(0).
//!
//! The string has 2N pieces of equal length with alternating tensions. With
//! alpha = (1-x)/(1+x), the per-piece transfer matrix has eigenvalues
//! (for imaginary frequency, q = xi L / N)
//!
//!   lambda_pm = cosh q - alpha^2 +- sqrt((cosh q - alpha^2)^2 - (1-alpha^2)^2),
//!
//! and the zero-temperature energy is
//!
//!   E_N(x) = N/(2 pi L) int_0^inf ln| (2(1-a^2)^N - [l+^N + l-^N]) / (4 sinh^2(Nq/2)) | dq.
//!
//! Writing lambda_pm = (1-a^2) e^{+-phi} with cosh phi = (cosh q - a^2)/(1 - a^2)
//! turns the numerator into -4 (1-a^2)^N sinh^2(N phi / 2), so the integrand
//! becomes N ln(1-a^2) + 2 [ln sinh(N phi/2) - ln sinh(N q/2)] — an
//! overflow-free form valid at any Nq. The power sum l+^N + l-^N is also
//! exposed through the Newton recurrence on (l+ + l-, l+ l-) for the
//! finite-temperature sum.

use serde::Serialize;
use thiserror::Error;

use crate::quad::{self, QuadError, QuadratureSettings};
use crate::twopiece::{EnergyEstimate, Method};

use std::f64::consts::PI;

pub use crate::quad::QuadratureSettings as Settings;

/// Parameters of the 2N-piece alternating string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NPieceString {
    /// Piece-pair count; the string has 2N pieces.
    pub n: u32,
    /// Tension ratio in [0, 1]; 0 is the exact extreme limit.
    pub x: f64,
    /// Total string length.
    pub l_total: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NPieceError {
    #[error("domain error: {what}")]
    Domain { what: String },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

impl crate::ClassifyError for NPieceError {
    fn class(&self) -> crate::ErrorClass {
        match self {
            NPieceError::Domain { .. } => crate::ErrorClass::Domain,
            NPieceError::Quad(q) => crate::ClassifyError::class(q),
        }
    }
}

/// Eigenvalue pair of the junction matrix at imaginary argument.
/// Both are real and nonnegative, with lambda_plus * lambda_minus = (1-alpha^2)^2.
pub fn lambda_pm(alpha: f64, q: f64) -> (f64, f64) {
    assert!((0.0..1.0).contains(&alpha) || alpha == 1.0, "alpha must lie in [0, 1]");
    assert!(q >= 0.0, "q must be nonnegative");
    let a2 = alpha * alpha;
    let c = q.cosh() - a2;
    let disc = (c - (1.0 - a2)) * (c + (1.0 - a2));
    debug_assert!(disc >= -1e-12 * c.abs().max(1.0), "negative discriminant");
    let root = disc.max(0.0).sqrt();
    let plus = c + root;
    // product form avoids cancellation in the small eigenvalue
    let minus = if plus > 0.0 { (1.0 - a2) * (1.0 - a2) / plus } else { 0.0 };
    (plus, minus)
}

impl NPieceString {
    pub fn new(n: u32, x: f64, l_total: f64) -> Result<Self, NPieceError> {
        if n == 0 {
            return Err(NPieceError::Domain { what: "piece-pair count N must be >= 1".into() });
        }
        if !(0.0..=1.0).contains(&x) {
            return Err(NPieceError::Domain {
                what: format!("tension ratio x must lie in [0, 1], got {x}"),
            });
        }
        if !(l_total > 0.0) {
            return Err(NPieceError::Domain { what: format!("total length must be positive, got {l_total}") });
        }
        Ok(NPieceString { n, x, l_total })
    }

    /// alpha = (1-x)/(1+x); zero only for the uniform string.
    pub fn alpha(&self) -> f64 {
        (1.0 - self.x) / (1.0 + self.x)
    }

    /// Integrand of the zero-temperature energy in the variable q = xi L / N;
    /// also the summand of the finite-temperature Matsubara sum at q = q_n.
    /// The q -> 0 limit is (N-1) ln(1-alpha^2), which diverges only at x = 0.
    pub fn log_ratio(&self, q: f64) -> f64 {
        let n = self.n as f64;
        let alpha = self.alpha();
        let a2 = alpha * alpha;
        if alpha == 1.0 {
            // extreme limit: lambda_plus = 4 sinh^2(q/2), lambda_minus = 0
            if q == 0.0 {
                return f64::NEG_INFINITY;
            }
            if q > 30.0 {
                // the leading q/2 and ln 2 pieces cancel exactly; only the
                // exponentially small remainders survive
                return 2.0 * (n * (-(-q).exp()).ln_1p() - (-(-n * q).exp()).ln_1p());
            }
            return 2.0 * ((n - 1.0) * std::f64::consts::LN_2 + n * ln_sinh(0.5 * q) - ln_sinh(0.5 * n * q));
        }
        let one_m = 1.0 - a2;
        if q == 0.0 {
            return (n - 1.0) * one_m.ln();
        }
        if q > 30.0 {
            // phi = q - ln(1-a^2) + delta with delta = ln1p(e^{-2q} - 2 a^2 e^{-q});
            // the O(q) and ln(1-a^2) pieces cancel against the prefactor exactly,
            // leaving n*delta plus exponentially small sinh corrections.
            let em = (-q).exp();
            let delta = (em * em - 2.0 * a2 * em).ln_1p();
            let e_nq = (-n * q).exp();
            let e_nphi = e_nq * one_m.powi(self.n as i32) * (-n * delta).exp();
            return n * delta + 2.0 * ((-e_nphi).ln_1p() - (-e_nq).ln_1p());
        }
        // cosh phi - 1 = 2 sinh^2(q/2) / (1-a^2), free of cancellation
        let y1 = 2.0 * (0.5 * q).sinh().powi(2) / one_m;
        let phi = (y1 * (y1 + 2.0)).sqrt().asinh();
        n * one_m.ln() + 2.0 * (ln_sinh(0.5 * n * phi) - ln_sinh(0.5 * n * q))
    }

    /// Zero-temperature Casimir energy by contour integration.
    pub fn energy_zero_t(&self, settings: &QuadratureSettings) -> Result<EnergyEstimate, NPieceError> {
        if self.n == 1 || self.x == 1.0 {
            return Ok(EnergyEstimate { value: 0.0, method: Method::Contour, abs_error_est: 0.0, temperature: 0.0 });
        }
        let n = self.n as f64;
        let prefactor = n / (2.0 * PI * self.l_total);
        let alpha = self.alpha();

        let mut value;
        let mut abs_err;
        if alpha == 1.0 {
            // logarithmic endpoint: peel off int_0^{q0} 2[(N-1) ln q - ln N] dq
            let q0 = 1e-4f64;
            let strip = 2.0 * ((n - 1.0) * (q0 * q0.ln() - q0) - q0 * n.ln());
            let res = quad::integrate_to_infinity(|q| self.log_ratio(q), q0, 1.0, settings)?;
            value = prefactor * (strip + res.value);
            abs_err = prefactor * (res.abs_error + 1e-12 * q0);
        } else {
            let res = quad::integrate_to_infinity(|q| self.log_ratio(q), 0.0, 1.0, settings)?;
            value = prefactor * res.value;
            abs_err = prefactor * res.abs_error;
        }
        // guard against a -0.0 result for near-uniform strings
        if value == 0.0 {
            value = 0.0;
            abs_err = abs_err.max(0.0);
        }
        Ok(EnergyEstimate { value, method: Method::Contour, abs_error_est: abs_err, temperature: 0.0 })
    }

    /// Finite-temperature energy: T sum' over Matsubara modes q_n = 2 pi n T L / N
    /// with the zero mode at half weight. Diverges logarithmically as x -> 0
    /// through the zero mode, so x = 0 exactly is rejected.
    pub fn energy_finite_t(&self, temperature: f64) -> Result<EnergyEstimate, NPieceError> {
        if !(temperature > 0.0) {
            return Err(NPieceError::Domain {
                what: format!("temperature must be positive, got {temperature}"),
            });
        }
        if self.n == 1 || self.x == 1.0 {
            return Ok(EnergyEstimate { value: 0.0, method: Method::Contour, abs_error_est: 0.0, temperature });
        }
        if self.x == 0.0 {
            return Err(NPieceError::Domain {
                what: "finite-temperature energy diverges logarithmically at x = 0 (half-weight zero mode)".into(),
            });
        }
        let q_step = 2.0 * PI * temperature * self.l_total / self.n as f64;
        let mut sum = 0.5 * self.log_ratio(0.0);
        let mut n = 1usize;
        let mut last;
        loop {
            let term = self.log_ratio(q_step * n as f64);
            sum += term;
            last = term;
            if term.abs() < 1e-14 * sum.abs().max(1e-300) {
                break;
            }
            n += 1;
            if n > 100_000_000 {
                return Err(NPieceError::Quad(QuadError::NonConvergence {
                    achieved: term.abs(),
                    required: 1e-14 * sum.abs(),
                    subdivisions: n,
                }));
            }
        }
        Ok(EnergyEstimate {
            value: temperature * sum,
            method: Method::Contour,
            abs_error_est: temperature * (last.abs() + 1e-14 * sum.abs()),
            temperature,
        })
    }

    /// Scaling function f_N(x) = E_N(x) / E_N(0) in (0, 1); requires N >= 2
    /// since E_1 vanishes identically.
    pub fn scaling_f(&self, settings: &QuadratureSettings) -> Result<f64, NPieceError> {
        if self.n < 2 {
            return Err(NPieceError::Domain {
                what: "scaling function is undefined for N = 1 (E_1 = 0)".into(),
            });
        }
        let n = self.n as f64;
        let e0 = -PI / (6.0 * self.l_total) * (n * n - 1.0);
        let e = self.energy_zero_t(settings)?;
        Ok(e.value / e0)
    }
}

/// ln sinh(z) for z > 0 without overflow or small-z cancellation.
fn ln_sinh(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    if z < 1.0 {
        (2.0 * z).exp_m1().ln() - z - std::f64::consts::LN_2
    } else {
        z + (-(-2.0 * z).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

/// Empirical approximation to the universal scaling curve: (1 - sqrt(x))^{5/2}.
pub fn scaling_fit(x: f64) -> f64 {
    (1.0 - x.sqrt()).powf(2.5)
}

/// Least-squares exponent p in f = (1 - sqrt(x))^p over sample points,
/// returned with the maximum absolute residual of the fixed 5/2 exponent.
pub fn fit_scaling_exponent(points: &[(f64, f64)]) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut max_resid: f64 = 0.0;
    for &(x, f) in points {
        let b = (1.0 - x.sqrt()).ln();
        let y = f.ln();
        num += b * y;
        den += b * b;
        max_resid = max_resid.max((f - scaling_fit(x)).abs());
    }
    (num / den, max_resid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    const QUAD: QuadratureSettings = QuadratureSettings {
        rel_tol: 1e-10,
        abs_tol: 1e-13,
        tail_cut: 1e-15,
        max_subdivisions: 4000,
    };

    #[test]
    fn lambda_special_points() {
        // q = 0: double eigenvalue 1 - alpha^2
        let (p, m) = lambda_pm(0.6, 0.0);
        assert!((p - 0.64).abs() < 1e-14 && (m - 0.64).abs() < 1e-14);
        // alpha = 0: e^{+-q}
        let (p, m) = lambda_pm(0.0, 1.3);
        assert!((p - 1.3f64.exp()).abs() < 1e-12);
        assert!((m - (-1.3f64).exp()).abs() < 1e-14);
        // alpha = 1: 4 sinh^2(q/2) and 0
        let (p, m) = lambda_pm(1.0, 0.8);
        assert!((p - 4.0 * (0.4f64).sinh().powi(2)).abs() < 1e-13);
        assert_eq!(m, 0.0);
    }

    proptest! {
        #[test]
        fn lambda_product_identity(alpha in 0.0f64..0.999, q in 0.0f64..20.0) {
            let (p, m) = lambda_pm(alpha, q);
            let expect = (1.0 - alpha * alpha) * (1.0 - alpha * alpha);
            prop_assert!((p * m - expect * expect / expect).abs() < 1e-12 * expect.max(1e-30));
            prop_assert!(p >= 0.0 && m >= 0.0);
        }
    }

    #[test]
    fn exceptional_cases_vanish() {
        let one = NPieceString::new(1, 0.3, PI).unwrap();
        assert_eq!(one.energy_zero_t(&QUAD).unwrap().value, 0.0);
        assert_eq!(one.energy_finite_t(0.9).unwrap().value, 0.0);
        let uniform = NPieceString::new(5, 1.0, PI).unwrap();
        assert_eq!(uniform.energy_zero_t(&QUAD).unwrap().value, 0.0);
        assert_eq!(uniform.energy_finite_t(2.0).unwrap().value, 0.0);
    }

    #[test]
    fn extreme_limit_closed_form() {
        for n in [2u32, 3, 4, 8] {
            let cfg = NPieceString::new(n, 0.0, PI).unwrap();
            let e = cfg.energy_zero_t(&QUAD).unwrap();
            let expected = -((n * n - 1) as f64) / 6.0;
            assert!(
                (e.value - expected).abs() < 1e-6,
                "N = {n}: {} vs {expected}",
                e.value
            );
        }
    }

    #[test]
    fn generic_point_matches_independent_evaluation() {
        // frozen from an independent 20-digit quadrature
        let e = NPieceString::new(4, 0.3, PI).unwrap().energy_zero_t(&QUAD).unwrap();
        assert!((e.value - (-0.3358422417582446)).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn near_uniform_is_small_and_negative() {
        let e = NPieceString::new(3, 0.9999, PI).unwrap().energy_zero_t(&QUAD).unwrap();
        assert!(e.value <= 0.0 && e.value.abs() < 1e-6);
    }

    #[test]
    fn magnitude_grows_with_n() {
        let mut prev = 0.0f64;
        for n in 2..=6 {
            let e = NPieceString::new(n, 0.3, PI).unwrap().energy_zero_t(&QUAD).unwrap();
            assert!(e.value < 0.0);
            assert!(e.value.abs() > prev, "|E_{n}| did not grow");
            prev = e.value.abs();
        }
    }

    #[test]
    fn scaling_function_range_and_limits() {
        let s = NPieceString::new(3, 0.25, PI).unwrap().scaling_f(&QUAD).unwrap();
        assert!(s > 0.0 && s < 1.0);
        // x -> 0: f -> 1
        let s0 = NPieceString::new(3, 1e-9, PI).unwrap().scaling_f(&QUAD).unwrap();
        assert!((s0 - 1.0).abs() < 1e-3, "{s0}");
        // x -> 1: f -> 0
        let s1 = NPieceString::new(3, 0.999999, PI).unwrap().scaling_f(&QUAD).unwrap();
        assert!(s1.abs() < 1e-4);
        // N = 1 rejected
        assert!(NPieceString::new(1, 0.5, PI).unwrap().scaling_f(&QUAD).is_err());
    }

    #[test]
    fn scaling_close_to_empirical_fit() {
        let s = NPieceString::new(2, 0.25, PI).unwrap().scaling_f(&QUAD).unwrap();
        let fit = scaling_fit(0.25);
        assert!((s - fit).abs() / fit < 0.06, "f_2(0.25) = {s}, fit = {fit}");
    }

    #[test]
    fn finite_t_riemann_limit() {
        let cfg = NPieceString::new(3, 0.4, PI).unwrap();
        let cold = cfg.energy_finite_t(1e-3).unwrap();
        let zero = cfg.energy_zero_t(&QUAD).unwrap();
        assert!(
            (cold.value - zero.value).abs() < 1e-4 * zero.value.abs().max(1.0),
            "{} vs {}",
            cold.value,
            zero.value
        );
    }

    #[test]
    fn finite_t_extreme_formula_termwise() {
        // at x -> 0 each n >= 1 term equals 2 ln|2^N sinh^N(q/2) / (2 sinh(Nq/2))|
        let cfg = NPieceString::new(4, 0.0, PI).unwrap();
        let n = 4.0f64;
        for k in 1..=6 {
            let q = 0.37 * k as f64;
            let direct = 2.0
                * ((n - 1.0) * std::f64::consts::LN_2 + n * (0.5 * q).sinh().ln()
                    - (0.5 * n * q).sinh().ln());
            assert!((cfg.log_ratio(q) - direct).abs() < 1e-11);
        }
        // and the summed energy at exact x = 0 is rejected (zero-mode divergence)
        assert!(cfg.energy_finite_t(1.0).is_err());
    }

    #[test]
    fn fit_exponent_near_five_halves() {
        let cfg_points: Vec<(f64, f64)> = (1..=9)
            .map(|i| {
                let x = 0.05 * i as f64;
                let f = NPieceString::new(3, x, PI).unwrap().scaling_f(&QUAD).unwrap();
                (x, f)
            })
            .collect();
        let (p, max_resid) = fit_scaling_exponent(&cfg_points);
        assert!((p - 2.5).abs() < 0.25, "best-fit exponent {p}");
        assert!(max_resid < 0.05);
    }

    // ---- junction-matrix oracle ----

    /// Build the 2x2 junction matrix at real reduced frequency p and raise it
    /// to the N-th power by repeated multiplication.
    fn matrix_trace(alpha: f64, p: f64, n: u32) -> Complex64 {
        let a = Complex64::new((-p).cos(), (-p).sin()) - alpha * alpha;
        let b = alpha * (Complex64::new((-p).cos(), (-p).sin()) - 1.0);
        // rows of Lambda
        let mut m = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                     [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        let lam = [[a, b], [b.conj(), a.conj()]];
        for _ in 0..n {
            let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = m[i][0] * lam[0][j] + m[i][1] * lam[1][j];
                }
            }
            m = out;
        }
        // include the overall [(1+x)^2/(4x)]^N normalization via 1/(1-alpha^2)^N
        let scale = (1.0 - alpha * alpha).powi(-(n as i32));
        (m[0][0] + m[1][1]) * scale
    }

    /// Closed form of the same trace through the eigenvalue angle.
    fn trace_closed(alpha: f64, p: f64, n: u32) -> f64 {
        let y = (p.cos() - alpha * alpha) / (1.0 - alpha * alpha);
        if y.abs() <= 1.0 {
            2.0 * ((n as f64) * y.acos()).cos()
        } else if y > 1.0 {
            2.0 * ((n as f64) * y.acosh()).cosh()
        } else {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            2.0 * sign * ((n as f64) * (-y).acosh()).cosh()
        }
    }

    #[test]
    fn matrix_power_matches_eigenvalue_form() {
        for &alpha in &[0.2, 0.6, 0.9] {
            for &n in &[1u32, 2, 3, 5] {
                let mut p = 0.05;
                while p < 6.3 {
                    let t = matrix_trace(alpha, p, n);
                    assert!(t.im.abs() < 1e-9, "trace not real at p = {p}");
                    let c = trace_closed(alpha, p, n);
                    assert!(
                        (t.re - c).abs() < 1e-8 * c.abs().max(1.0),
                        "alpha={alpha}, N={n}, p={p}: {} vs {c}",
                        t.re
                    );
                    p += 0.17;
                }
            }
        }
    }

    #[test]
    fn n1_dispersion_matches_equal_two_piece() {
        // det[M_2 - 1] = 2 - tr M vanishes exactly where the two-piece string
        // with equal piece lengths has its (doubly degenerate) modes.
        let alpha: f64 = 0.5;
        let x = (1.0 - alpha) / (1.0 + alpha);
        let l = PI;
        let two = crate::twopiece::TwoPieceString::new(x, 1.0, l).unwrap();
        let spec = two.find_spectrum(20.0).unwrap();
        for &w in &spec.degenerate_frequencies {
            let p = w * l; // N = 1: p = omega L
            let det_m1 = 2.0 - trace_closed(alpha, p, 1);
            assert!(det_m1.abs() < 1e-9, "omega = {w}: det = {det_m1}");
        }
    }
}
