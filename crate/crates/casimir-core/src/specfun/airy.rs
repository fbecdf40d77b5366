//! Airy functions Ai, Bi and first derivatives on the real line.
//!
//! Evaluation strategy:
//!
//! * `|x| <= 9`: Maclaurin series, accumulated in double-double arithmetic.
//!   The series for Ai combines two sums that agree to a factor ~e^{2ξ}
//!   (ξ = (2/3)|x|^{3/2}) before subtracting, which destroys plain f64 beyond
//!   |x| ≈ 3.5; the compensated accumulation keeps the full target accuracy
//!   out to the crossover.
//! * `x > 9`: asymptotic expansions in ξ, truncated at the smallest term.
//! * `x < -9`: oscillatory asymptotic expansions with phase ζ - π/4.
//!
//! The crossover at |x| = 9 is validated by matching both branches to better
//! than 1e-10 relative on the overlap band [8, 10]. Below ξ ≈ 18 the
//! asymptotic series cannot reach 1e-10 (its optimal-truncation floor is
//! ~e^{-2ξ}), which is why the series branch carries the mid-range.
//!
//! Working range is |x| <= 1e4. Bi overflows f64 near x ≈ 104; that is
//! reported as a saturation error rather than returning infinity. For very
//! large negative x the phase ζ is computed in f64, so the relative error
//! degrades like |x|^{3/2}·eps (≈1e-10 at x = -1e4).

use super::dd::Dd;
use super::{PrecisionPolicy, SpecFunError};

/// Ai, Bi and derivatives at a common point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

/// Exponentially scaled values for x >= 0:
/// Ai = ai * e^{-xi}, Bi = bi * e^{+xi} (same for the primes), xi = (2/3)x^{3/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryScaled {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
    pub xi: f64,
}

const CROSSOVER: f64 = 9.0;
const LN_MAX: f64 = 709.0;

// Ai(0), -Ai'(0) and sqrt(3) to double-double precision.
const C1: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const C2: Dd = Dd { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };
const SQRT3: Dd = Dd { hi: 1.7320508075688772, lo: 1.0035084221806903e-16 };

const SQRT_PI: f64 = 1.7724538509055159;

pub fn airy(x: f64) -> Result<AiryValues, SpecFunError> {
    airy_with(x, &PrecisionPolicy::default())
}

pub fn airy_with(x: f64, policy: &PrecisionPolicy) -> Result<AiryValues, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::Domain {
            what: "airy argument must be finite".into(),
        });
    }
    if x.abs() <= CROSSOVER {
        Ok(airy_series(x, policy)?)
    } else if x > 0.0 {
        let s = airy_asymptotic_scaled(x);
        let ln_bi = s.xi + s.bi.abs().ln();
        if ln_bi > LN_MAX {
            return Err(SpecFunError::Saturation { x });
        }
        let em = (-s.xi).exp();
        let ep = s.xi.exp();
        Ok(AiryValues {
            ai: s.ai * em,
            bi: s.bi * ep,
            ai_prime: s.ai_prime * em,
            bi_prime: s.bi_prime * ep,
        })
    } else {
        Ok(airy_oscillatory(x))
    }
}

/// Scaled evaluation for nonnegative argument; usable far beyond the Bi
/// overflow point since no exponential is formed.
pub fn airy_scaled(x: f64) -> Result<AiryScaled, SpecFunError> {
    if !(x >= 0.0) {
        return Err(SpecFunError::Domain {
            what: format!("airy_scaled requires x >= 0, got {x}"),
        });
    }
    let xi = 2.0 / 3.0 * x.powf(1.5);
    if x <= CROSSOVER {
        let v = airy_series(x, &PrecisionPolicy::default())?;
        let ep = xi.exp();
        Ok(AiryScaled {
            ai: v.ai * ep,
            bi: v.bi / ep,
            ai_prime: v.ai_prime * ep,
            bi_prime: v.bi_prime / ep,
            xi,
        })
    } else {
        Ok(airy_asymptotic_scaled(x))
    }
}

/// Maclaurin series in double-double arithmetic.
///
/// Ai = c1 f - c2 g, Bi = sqrt(3)(c1 f + c2 g), with
/// f = sum x^{3k} / prod (3j)(3j-1), g = sum x^{3k+1} / prod (3j)(3j+1).
fn airy_series(x: f64, policy: &PrecisionPolicy) -> Result<AiryValues, SpecFunError> {
    if x == 0.0 {
        return Ok(AiryValues {
            ai: C1.to_f64(),
            bi: SQRT3.mul(C1).to_f64(),
            ai_prime: -C2.to_f64(),
            bi_prime: SQRT3.mul(C2).to_f64(),
        });
    }
    let x_dd = Dd::from_f64(x);
    let x3 = x_dd.mul(x_dd).mul(x_dd);

    // f and g sums
    let mut uf = Dd::from_f64(1.0);
    let mut f = uf;
    let mut ug = x_dd;
    let mut g = ug;
    // derivative sums: f' starts at k = 1, g' at k = 0
    let mut ufp = x_dd.mul(x_dd).div_f64(2.0);
    let mut fp = ufp;
    let mut ugp = Dd::from_f64(1.0);
    let mut gp = ugp;

    let mut k: usize = 1;
    loop {
        let kf = k as f64;
        uf = uf.mul(x3).div_f64((3.0 * kf) * (3.0 * kf - 1.0));
        f = f.add(uf);
        ug = ug.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        g = g.add(ug);
        ugp = ugp.mul(x3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        gp = gp.add(ugp);
        if k >= 2 {
            ufp = ufp.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp = fp.add(ufp);
        }
        let biggest = uf.abs_f64().max(ug.abs_f64()).max(ugp.abs_f64());
        let scale = f.abs_f64().max(g.abs_f64()).max(1.0);
        if biggest < 1e-34 * scale {
            break;
        }
        k += 1;
        if k > policy.max_terms {
            return Err(SpecFunError::Convergence {
                what: format!("airy series did not converge within {} terms at x = {x}", policy.max_terms),
            });
        }
    }

    let c1f = C1.mul(f);
    let c2g = C2.mul(g);
    let c1fp = C1.mul(fp);
    let c2gp = C2.mul(gp);
    Ok(AiryValues {
        ai: c1f.sub(c2g).to_f64(),
        bi: SQRT3.mul(c1f.add(c2g)).to_f64(),
        ai_prime: c1fp.sub(c2gp).to_f64(),
        bi_prime: SQRT3.mul(c1fp.add(c2gp)).to_f64(),
    })
}

/// Coefficient streams of the large-|x| expansions:
/// u_0 = 1, u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)), v_k = u_k (6k+1)/(1-6k).
struct AsymptoticTerms {
    u: f64,
    k: usize,
}

impl AsymptoticTerms {
    fn new() -> Self {
        AsymptoticTerms { u: 1.0, k: 0 }
    }
    /// Advance to the next k and return (u_k, v_k).
    fn next(&mut self) -> (f64, f64) {
        self.k += 1;
        let k = self.k as f64;
        self.u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
        let v = self.u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        (self.u, v)
    }
}

/// Asymptotic expansion for x > crossover, returned in scaled form.
fn airy_asymptotic_scaled(x: f64) -> AiryScaled {
    let xi = 2.0 / 3.0 * x.powf(1.5);
    let x4 = x.powf(0.25);

    let mut s_ai = 1.0;
    let mut s_bi = 1.0;
    let mut s_aip = 1.0;
    let mut s_bip = 1.0;
    let mut terms = AsymptoticTerms::new();
    let mut pow = 1.0;
    let mut prev = f64::MAX;
    let mut sign = 1.0;
    loop {
        let (u, v) = terms.next();
        pow /= xi;
        sign = -sign;
        let tu = u * pow;
        let tv = v * pow;
        if tu.abs() >= prev {
            break; // smallest term reached; stop before divergence
        }
        s_ai += sign * tu;
        s_bi += tu;
        s_aip += sign * tv;
        s_bip += tv;
        prev = tu.abs();
        if tu.abs() < 1e-18 || terms.k > 200 {
            break;
        }
    }

    AiryScaled {
        ai: s_ai / (2.0 * SQRT_PI * x4),
        bi: s_bi / (SQRT_PI * x4),
        ai_prime: -x4 * s_aip / (2.0 * SQRT_PI),
        bi_prime: x4 * s_bip / SQRT_PI,
        xi,
    }
}

/// Oscillatory expansion for x < -crossover.
fn airy_oscillatory(x: f64) -> AiryValues {
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let z4 = z.powf(0.25);
    let phi = zeta - std::f64::consts::FRAC_PI_4;
    let (sin_phi, cos_phi) = phi.sin_cos();

    // Split the u/v streams into even (1/ζ^{2k}) and odd (1/ζ^{2k+1}) parts.
    let mut p = 1.0; // Σ (-1)^k u_{2k} ζ^{-2k}
    let mut q = 0.0; // Σ (-1)^k u_{2k+1} ζ^{-2k-1}
    let mut r = 1.0; // Σ (-1)^k v_{2k} ζ^{-2k}
    let mut s = 0.0; // Σ (-1)^k v_{2k+1} ζ^{-2k-1}
    let mut terms = AsymptoticTerms::new();
    let mut pow = 1.0;
    let mut prev = f64::MAX;
    loop {
        let j = terms.k; // coefficient index about to be produced is j+1
        let (u, v) = terms.next();
        pow /= zeta;
        let tu = u * pow;
        let tv = v * pow;
        if tu.abs() >= prev {
            break;
        }
        // (-1)^k with k = (j+1)/2 for odd j+1, k = (j+1)/2 for even j+1
        let idx = j + 1;
        let sgn = if (idx / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if !idx.is_multiple_of(2) {
            q += sgn * tu;
            s += sgn * tv;
        } else {
            p += sgn * tu;
            r += sgn * tv;
        }
        prev = tu.abs();
        if tu.abs() < 1e-18 || terms.k > 200 {
            break;
        }
    }

    AiryValues {
        ai: (cos_phi * p + sin_phi * q) / (SQRT_PI * z4),
        bi: (-sin_phi * p + cos_phi * q) / (SQRT_PI * z4),
        ai_prime: z4 * (sin_phi * r - cos_phi * s) / SQRT_PI,
        bi_prime: z4 * (cos_phi * r + sin_phi * s) / SQRT_PI,
    }
}
