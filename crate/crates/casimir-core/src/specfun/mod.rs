//! Special-function kernel: Hurwitz zeta at s = -1, the Airy pair with
//! derivatives, the Dedekind eta function and the Jacobi theta_3 function.
//!
//! Everything here is a pure function of its arguments; all truncations are
//! driven by tail bounds against a [`PrecisionPolicy`] rather than fixed
//! term counts.

mod dd;

pub mod airy;

pub use airy::{airy, airy_scaled, airy_with, AiryScaled, AiryValues};

use num_complex::Complex64;
use thiserror::Error;

/// Accuracy contract shared by the series/product evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    /// Target relative error of a returned value.
    pub target_rel_error: f64,
    /// Hard cap on series/product terms before giving up.
    pub max_terms: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            target_rel_error: 1e-10,
            max_terms: 1_000_000,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(target_rel_error: f64, max_terms: usize) -> Result<Self, SpecFunError> {
        if !(target_rel_error > 0.0) || max_terms == 0 {
            return Err(SpecFunError::Domain {
                what: "precision policy requires target_rel_error > 0 and max_terms >= 1".into(),
            });
        }
        Ok(PrecisionPolicy { target_rel_error, max_terms })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecFunError {
    #[error("domain error: {what}")]
    Domain { what: String },
    /// A value exceeded the representable range (e.g. Bi for large argument).
    #[error("saturation: result not representable in f64 at x = {x}")]
    Saturation { x: f64 },
    #[error("convergence failure: {what}")]
    Convergence { what: String },
}

/// Hurwitz zeta at s = -1: the analytic continuation evaluates to the
/// closed form -(a^2 - a + 1/6)/2 for 0 < a <= 1.
pub fn hurwitz_zeta_neg1(a: f64) -> Result<f64, SpecFunError> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(SpecFunError::Domain {
            what: format!("hurwitz_zeta_neg1 requires 0 < a <= 1, got {a}"),
        });
    }
    Ok(-0.5 * (a * a - a + 1.0 / 6.0))
}

/// Dedekind eta: e^{pi i tau/12} prod_{n>=1} (1 - e^{2 pi i n tau}).
///
/// The product is truncated once the first omitted factor deviates from 1 by
/// less than the policy's target relative error; the achieved truncation
/// order M is returned alongside the value.
pub fn dedekind_eta(tau: Complex64, policy: &PrecisionPolicy) -> Result<(Complex64, usize), SpecFunError> {
    if !(tau.im > 0.0) {
        return Err(SpecFunError::Domain {
            what: format!("dedekind_eta requires Im(tau) > 0, got {}", tau.im),
        });
    }
    // |1 - factor_{M+1}| = |q|^{M+1} = e^{-2 pi (M+1) Im tau}
    let needed = (1.0 / policy.target_rel_error).ln() / (2.0 * std::f64::consts::PI * tau.im);
    if needed > policy.max_terms as f64 {
        return Err(SpecFunError::Convergence {
            what: format!(
                "dedekind_eta product needs ~{needed:.0} factors (max_terms = {}); Im(tau) too small",
                policy.max_terms
            ),
        });
    }
    let m = needed.ceil().max(1.0) as usize;
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    let q = (2.0 * i_pi * tau).exp();
    let mut prod = (i_pi * tau / 12.0).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 1..=m {
        qn *= q;
        prod *= Complex64::new(1.0, 0.0) - qn;
    }
    Ok((prod, m))
}

/// Jacobi theta_3 in the convention theta_3(v|x) = sum_n e^{i x n^2 + 2 pi i v n},
/// which converges for Im(x) > 0. For real v the symmetric sum reduces to
/// 1 + 2 sum_{n>=1} e^{i x n^2} cos(2 pi v n).
pub fn jacobi_theta3(v: f64, x: Complex64, policy: &PrecisionPolicy) -> Result<Complex64, SpecFunError> {
    if !(x.im > 0.0) {
        return Err(SpecFunError::Domain {
            what: format!("jacobi_theta3 requires Im(x) > 0, got {}", x.im),
        });
    }
    // |term_n| = e^{-Im(x) n^2}
    let m = ((1.0 / policy.target_rel_error).ln() / x.im).sqrt().ceil().max(1.0) as usize;
    if m > policy.max_terms {
        return Err(SpecFunError::Convergence {
            what: format!("jacobi_theta3 needs ~{m} terms (max_terms = {})", policy.max_terms),
        });
    }
    let i = Complex64::new(0.0, 1.0);
    let mut sum = Complex64::new(1.0, 0.0);
    for n in 1..=m {
        let nf = n as f64;
        let term = (i * x * nf * nf).exp() * 2.0 * (2.0 * std::f64::consts::PI * v * nf).cos();
        sum += term;
    }
    Ok(sum)
}

/// theta_3(0 | i y) - 1 for y > 0, computed without the cancellation of
/// forming the full sum and subtracting one: 2 sum_{n>=1} e^{-y n^2}.
pub fn theta3_im_minus_one(y: f64, policy: &PrecisionPolicy) -> Result<f64, SpecFunError> {
    if !(y > 0.0) {
        return Err(SpecFunError::Domain {
            what: format!("theta3_im_minus_one requires y > 0, got {y}"),
        });
    }
    let m = ((1.0 / policy.target_rel_error).ln() / y).sqrt().ceil().max(1.0) as usize;
    if m > policy.max_terms {
        return Err(SpecFunError::Convergence {
            what: format!("theta3 tail needs ~{m} terms (max_terms = {})", policy.max_terms),
        });
    }
    let mut sum = 0.0;
    for n in 1..=m {
        let nf = n as f64;
        sum += (-y * nf * nf).exp();
    }
    Ok(2.0 * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn hurwitz_closed_form_anchors() {
        // a = 1 recovers the Riemann value -1/12
        assert!((hurwitz_zeta_neg1(1.0).unwrap() + 1.0 / 12.0).abs() < 1e-16);
        // a = 1/2
        assert!((hurwitz_zeta_neg1(0.5).unwrap() - 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn hurwitz_domain() {
        assert!(hurwitz_zeta_neg1(0.0).is_err());
        assert!(hurwitz_zeta_neg1(-0.3).is_err());
        assert!(hurwitz_zeta_neg1(1.0 + 1e-12).is_err());
    }

    proptest::proptest! {
        #[test]
        fn hurwitz_reflection_symmetry(a in 1e-9f64..1.0) {
            let lhs = hurwitz_zeta_neg1(a).unwrap();
            let rhs = hurwitz_zeta_neg1(1.0 - a).unwrap();
            proptest::prop_assert!((lhs - rhs).abs() < 1e-15);
        }

        #[test]
        fn theta3_minus_one_positive(y in 1e-3f64..50.0) {
            let v = theta3_im_minus_one(y, &PrecisionPolicy::default()).unwrap();
            proptest::prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn eta_at_i() {
        // Independent anchor: eta(i) = Gamma(1/4) / (2 pi^{3/4}).
        const GAMMA_QUARTER: f64 = 3.6256099082219083;
        let expected = GAMMA_QUARTER / (2.0 * std::f64::consts::PI.powf(0.75));
        let (v, m) = dedekind_eta(Complex64::new(0.0, 1.0), &PrecisionPolicy::default()).unwrap();
        assert!((v.re - 0.7682254223260566).abs() < 1e-12);
        assert!((v.re - expected).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
        assert!(m >= 3);
    }

    #[test]
    fn eta_large_imag_single_term() {
        let t = 80.0;
        let (v, _) = dedekind_eta(Complex64::new(0.0, t), &PrecisionPolicy::default()).unwrap();
        let expected = (-std::f64::consts::PI * t / 12.0).exp();
        assert!((v.re - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn eta_complex_argument_magnitude() {
        let (v, _) = dedekind_eta(Complex64::new(0.3, 2.0), &PrecisionPolicy::default()).unwrap();
        assert!((v.norm() - 0.5923854855798529).abs() < 1e-12);
        assert!(v.norm() < 1.0);
    }

    #[test]
    fn eta_domain_and_convergence_errors() {
        let p = PrecisionPolicy::default();
        assert!(matches!(
            dedekind_eta(Complex64::new(0.5, 0.0), &p),
            Err(SpecFunError::Domain { .. })
        ));
        let tight = PrecisionPolicy::new(1e-10, 10).unwrap();
        assert!(matches!(
            dedekind_eta(Complex64::new(0.0, 1e-3), &tight),
            Err(SpecFunError::Convergence { .. })
        ));
    }

    #[test]
    fn theta3_anchors() {
        let p = PrecisionPolicy::default();
        // huge imaginary part: only the n = 0 term survives
        let v = jacobi_theta3(0.0, Complex64::new(0.0, 1e6), &p).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        // x = i
        let v = jacobi_theta3(0.0, Complex64::new(0.0, 1.0), &p).unwrap();
        assert!((v.re - 1.7726372048266522).abs() < 1e-12);
        // positivity of theta3 - 1 on the imaginary axis
        for &y in &[0.3, 1.0, 7.0] {
            assert!(theta3_im_minus_one(y, &p).unwrap() > 0.0);
        }
        // the dedicated tail form agrees with the full sum
        let tail = theta3_im_minus_one(1.0, &p).unwrap();
        assert!((tail - (v.re - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn theta3_monotone_in_y() {
        let p = PrecisionPolicy::default();
        let mut prev = f64::MAX;
        let mut y = 0.5;
        while y <= 20.0 {
            let v = jacobi_theta3(0.0, Complex64::new(0.0, y), &p).unwrap().re;
            assert!(v < prev, "theta3(0|iy) not decreasing at y = {y}");
            prev = v;
            y += 0.5;
        }
    }

    #[test]
    fn eta_positive_real_monotone_on_imag_axis() {
        let p = PrecisionPolicy::default();
        let mut prev = f64::MAX;
        let mut y = 1.0;
        while y <= 10.0 {
            let (v, _) = dedekind_eta(Complex64::new(0.0, y), &p).unwrap();
            assert!(v.im.abs() < 1e-14);
            assert!(v.re > 0.0);
            assert!(v.re < prev, "eta(iy) not decreasing at y = {y}");
            prev = v.re;
            y += 0.5;
        }
    }
}
