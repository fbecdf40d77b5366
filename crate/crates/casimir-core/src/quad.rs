//! Adaptive quadrature shared by all physics modules.
//!
//! The workhorse is a 7-15 Gauss-Kronrod rule with greatest-error-first
//! interval subdivision. Semi-infinite integrals are truncated where the
//! integrand falls below `tail_cut` (the caller supplies the exponential
//! decay rate so the discarded tail can be bounded), and periodic integrands
//! use the trapezoidal rule with doubling, which converges geometrically for
//! smooth periodic functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

/// Tolerances and budgets for the semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Truncate a semi-infinite range once |integrand| drops below this.
    pub tail_cut: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            tail_cut: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<(), QuadError> {
        if self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.tail_cut > 0.0 && self.max_subdivisions > 0 {
            Ok(())
        } else {
            Err(QuadError::BadSettings)
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature settings must all be positive")]
    BadSettings,
    #[error("quadrature did not converge: error {achieved:.3e} > tolerance {required:.3e} after {subdivisions} subdivisions")]
    NonConvergence {
        achieved: f64,
        required: f64,
        subdivisions: usize,
    },
    #[error("integrand tail fails to decay: |f({at:.6e})| = {value:.6e} still above cutoff")]
    TailNonDecay { at: f64, value: f64 },
}

/// Value and accounting of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-index nodes.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss-Kronrod panel: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kron += WGK[j] * (f1 + f2);
        if !j.is_multiple_of(2) {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let kron_val = kron * h;
    let gauss_val = gauss * h;

    // QUADPACK-style scaled error estimate via the mean-deviation integral.
    let mean = kron_val / (b - a);
    let mut resasc = WGK[7] * (fv[7] - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    resasc *= h.abs();
    let raw = (kron_val - gauss_val).abs();
    let err = if resasc != 0.0 && raw != 0.0 {
        resasc * 1.0f64.min((200.0 * raw / resasc).powf(1.5))
    } else {
        raw
    };
    (kron_val, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integration over a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult, QuadError> {
    settings.validate()?;
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0, subdivisions: 0 });
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total_value = v;
    let mut total_error = e;
    let mut evaluations = 15usize;
    let mut subdivisions = 0usize;

    loop {
        let tol = settings.abs_tol.max(settings.rel_tol * total_value.abs());
        if total_error <= tol {
            break;
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(QuadError::NonConvergence {
                achieved: total_error,
                required: tol,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty while error > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution; accept its estimate
            total_error -= worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        evaluations += 30;
        subdivisions += 1;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }

    Ok(QuadResult { value: total_value, abs_error: total_error, evaluations, subdivisions })
}

/// Integration of an exponentially decaying integrand on [a, infinity).
///
/// `decay_rate` is a lower bound on the asymptotic rate r in |f| ~ C e^{-r t};
/// the cutoff point is pushed out until |f| < tail_cut, and the discarded
/// tail is charged to the error budget as |f(B)|/r.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_rate: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult, QuadError> {
    settings.validate()?;
    assert!(decay_rate > 0.0, "decay_rate must be positive");
    let span = (1.0 / settings.tail_cut).ln() / decay_rate;
    let mut b = a + span.max(1.0 / decay_rate);
    let hard_limit = a + 60.0 * span.max(1.0 / decay_rate);
    loop {
        let tail = f(b).abs();
        if tail < settings.tail_cut {
            break;
        }
        b = a + (b - a) * 1.5;
        if b > hard_limit {
            return Err(QuadError::TailNonDecay { at: b, value: f(b).abs() });
        }
    }
    let mut result = integrate(&f, a, b, settings)?;
    result.abs_error += f(b).abs() / decay_rate + settings.tail_cut / decay_rate;
    Ok(result)
}

/// Trapezoidal rule with doubling for a smooth function of the given period,
/// integrated over one period starting at 0.
pub fn integrate_periodic<F: Fn(f64) -> f64>(
    f: F,
    period: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult, QuadError> {
    settings.validate()?;
    let mut n = 16usize;
    let mut sum: f64 = (0..n).map(|i| f(i as f64 * period / n as f64)).sum();
    let mut value = sum * period / n as f64;
    let mut evaluations = n;
    loop {
        let m = 2 * n;
        let odd: f64 = (0..n).map(|i| f((2 * i + 1) as f64 * period / m as f64)).sum();
        sum += odd;
        let new_value = sum * period / m as f64;
        evaluations += n;
        let diff = (new_value - value).abs();
        value = new_value;
        n = m;
        if diff <= settings.abs_tol.max(settings.rel_tol * value.abs()) {
            return Ok(QuadResult { value, abs_error: diff, evaluations, subdivisions: 0 });
        }
        if n > 1 << 22 {
            return Err(QuadError::NonConvergence {
                achieved: diff,
                required: settings.abs_tol.max(settings.rel_tol * value.abs()),
                subdivisions: n,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &s).unwrap();
        assert!((r.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn log_integrand_bose_sum() {
        // int_0^inf ln(1 - e^{-c x}) dx = -pi^2/(6c); the same structure as the
        // string-energy integrands.
        let s = QuadratureSettings::default();
        for &c in &[1.0, 2.0, 5.0] {
            let r = integrate_to_infinity(
                move |x: f64| if x == 0.0 { 0.0 } else { (-(-c * x).exp()).ln_1p() },
                0.0,
                c,
                &s,
            )
            .unwrap();
            let expected = -std::f64::consts::PI.powi(2) / (6.0 * c);
            assert!((r.value - expected).abs() < 1e-8, "c = {c}: {} vs {expected}", r.value);
        }
    }

    #[test]
    fn gaussian_tail() {
        let s = QuadratureSettings::default();
        let r = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, 1.0, &s).unwrap();
        assert!((r.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn tail_nondecay_detected() {
        let s = QuadratureSettings::default();
        let err = integrate_to_infinity(|x: f64| 1.0 + 0.0 * x, 0.0, 1.0, &s);
        assert!(matches!(err, Err(QuadError::TailNonDecay { .. })));
    }

    #[test]
    fn periodic_trapezoid_geometric_convergence() {
        let s = QuadratureSettings::default();
        // int_0^{2pi} e^{cos t} dt = 2 pi I_0(1)
        let r = integrate_periodic(|t: f64| t.cos().exp(), 2.0 * std::f64::consts::PI, &s).unwrap();
        let expected = 2.0 * std::f64::consts::PI * 1.2660658777520084;
        assert!((r.value - expected).abs() < 1e-10);
        assert!(r.evaluations < 1000);
    }

    #[test]
    fn error_estimate_is_honest() {
        let s = QuadratureSettings { rel_tol: 1e-12, abs_tol: 1e-14, ..Default::default() };
        let r = integrate(|x: f64| (10.0 * x).sin() / (1.0 + x * x), 0.0, 3.0, &s).unwrap();
        let exact = integrate(|x: f64| (10.0 * x).sin() / (1.0 + x * x), 0.0, 1.5, &s).unwrap().value
            + integrate(|x: f64| (10.0 * x).sin() / (1.0 + x * x), 1.5, 3.0, &s).unwrap().value;
        assert!((r.value - exact).abs() <= 1e-12);
    }
}
