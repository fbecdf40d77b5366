//! Compensated double-double arithmetic for series that suffer catastrophic
//! cancellation in plain f64 (the Airy power series combines two sums that
//! agree to ~e^{2ξ} before subtracting).
//!
//! A value is stored as an unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2,
//! giving roughly 31 significant digits. Only the operations the Airy series
//! needs are implemented.

/// Double-double value: `hi + lo` with the usual non-overlap invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum of two doubles (Knuth two-sum).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free sum when |a| >= |b| (Dekker fast two-sum).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Error-free product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[cfg_attr(not(test), allow(dead_code))]
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }

    #[cfg_attr(not(test), allow(dead_code))]
    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd { hi: s1, lo: s2 }
    }

    /// Division by a plain double (Newton-corrected quotient).
    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let r = ((self.hi - p1) - p2) + self.lo;
        let q2 = r / b;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd { hi: s1, lo: s2 }
    }

    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_low_bits() {
        // 1e16 + 1 - 1e16 loses the 1 in plain f64 with these magnitudes
        let a = Dd::from_f64(1e17);
        let b = Dd::from_f64(1.0);
        let s = a.add(b).sub(a);
        assert_eq!(s.to_f64(), 1.0);
    }

    #[test]
    fn mul_is_exacter_than_f64() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; the 2^-60 term survives in dd
        let x = Dd::from_f64(1.0 + (0.5f64).powi(30));
        let sq = x.mul(x);
        let expected_lo = (0.5f64).powi(60);
        let diff = sq.sub(Dd::from_f64(1.0 + (0.5f64).powi(29)));
        assert!((diff.to_f64() - expected_lo).abs() < 1e-24);
    }

    #[test]
    fn div_roundtrip() {
        let x = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);
        let y = x.div_f64(7.0).mul_f64(7.0);
        assert!((y.to_f64() - x.to_f64()).abs() < 1e-30);
        assert!((y.sub(x)).abs_f64() < 1e-30);
    }
}
