//! Two-piece closed string: dispersion relation, eigenfrequency spectrum,
//! and the Casimir energy under three regularizations.
//!
//! The string consists of two pieces with tension ratio x = T_I/T_II in
//! (0, 1] and length ratio s = L_II/L_I, with the transverse sound speed
//! equal to c on both pieces. Transverse eigenfrequencies are the roots of
//!
//!   F(x) sin^2(omega L / 2) + sin(omega L_I) sin(omega L_II) = 0,
//!   F(x) = 4x / (1 - x)^2,
//!
//! and the Casimir energy is the zero-point sum relative to the uniform
//! string of the same total length. Tangency roots (where the dispersion
//! function touches zero without crossing) carry multiplicity two; the
//! contour method integrates along the imaginary frequency axis and needs no
//! explicit multiplicity bookkeeping, which makes it the cross-check oracle
//! for the spectrum-based methods.
//!
//! Everything scales as 1/L: halving the total length doubles every energy.
//! The tension ratio enters only through F(x), so x and 1/x are equivalent
//! and x <= 1 is assumed. Temperatures are in energy units (k_B = 1).

use serde::Serialize;
use thiserror::Error;

use crate::quad::{self, QuadError, QuadratureSettings};
use crate::specfun::hurwitz_zeta_neg1;

use std::f64::consts::PI;

/// Geometry and tension parameters of the two-piece string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPieceString {
    /// Tension ratio T_I/T_II in (0, 1]; 0 is the exact extreme limit.
    pub x: f64,
    /// Length ratio L_II/L_I > 0.
    pub s: f64,
    /// Total length L_I + L_II.
    pub l_total: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TwoPieceError {
    #[error("domain error: {what}")]
    Domain { what: String },
    #[error("length ratio s = {s} is not an integer; branch classification requires integer s")]
    NonIntegerRatio { s: f64 },
    #[error("spectrum inconsistent with branch structure: {what}")]
    SpectrumMismatch { what: String },
    #[error("root bracketing failure near omega*L_I = {near}")]
    BracketingFailure { near: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

impl crate::ClassifyError for TwoPieceError {
    fn class(&self) -> crate::ErrorClass {
        match self {
            TwoPieceError::Quad(q) => crate::ClassifyError::class(q),
            TwoPieceError::SpectrumMismatch { .. } | TwoPieceError::BracketingFailure { .. } => {
                crate::ErrorClass::Convergence
            }
            _ => crate::ErrorClass::Domain,
        }
    }
}

/// Regularization used to produce an energy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cutoff,
    Contour,
    Zeta,
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Cutoff => "cutoff",
            Method::Contour => "contour",
            Method::Zeta => "zeta",
            Method::ClosedForm => "closed_form",
        };
        f.write_str(s)
    }
}

/// A computed Casimir energy with its method tag and error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub method: Method,
    pub abs_error_est: f64,
    /// Temperature in energy units; 0 for the vacuum result.
    pub temperature: f64,
}

/// Parity of the integer length ratio, which fixes the branch structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SParity {
    Odd,
    Even,
}

/// Classified eigenfrequency spectrum for integer length ratio.
///
/// Degenerate-branch roots are tangencies of the dispersion function and
/// count with multiplicity two. The beta parameters classify the
/// nondegenerate families: omega L_I = pi(n + beta), pi(n + 1 - beta) for
/// odd s (beta in (0, 1/2]); omega L_I = pi(2n + beta), pi(2n + 2 - beta)
/// for even s (beta in (0, 1]). A self-paired family (beta = 1/2 resp. 1)
/// appears as a tangency and contributes one beta.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSpectrum {
    pub degenerate_frequencies: Vec<f64>,
    pub beta_params: Vec<f64>,
    pub s_parity: SParity,
    pub s_int: u32,
    pub omega_max: f64,
    l_i: f64,
}

/// Cutoff-regularization parameters: the exponential suppression scale and
/// the mode budget for the truncated raw sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSettings {
    pub alpha: f64,
    pub n_max: usize,
}

impl CutoffSettings {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self, TwoPieceError> {
        if !(alpha > 0.0) || n_max == 0 {
            return Err(TwoPieceError::Domain {
                what: "cutoff requires alpha > 0 and n_max >= 1".into(),
            });
        }
        Ok(CutoffSettings { alpha, n_max })
    }
}

/// Raw cutoff sum together with a truncation health flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCutoffEnergy {
    pub value: f64,
    /// False when omega_max * alpha < 20 and the truncation contaminates the
    /// small-alpha expansion.
    pub truncation_ok: bool,
}

impl TwoPieceString {
    pub fn new(x: f64, s: f64, l_total: f64) -> Result<Self, TwoPieceError> {
        if !(0.0..=1.0).contains(&x) || x.is_nan() {
            return Err(TwoPieceError::Domain {
                what: format!("tension ratio x must lie in [0, 1] (x <-> 1/x symmetry), got {x}"),
            });
        }
        if !(s > 0.0) || !(l_total > 0.0) {
            return Err(TwoPieceError::Domain {
                what: format!("require s > 0 and L > 0, got s = {s}, L = {l_total}"),
            });
        }
        Ok(TwoPieceString { x, s, l_total })
    }

    /// Length of piece I.
    pub fn l_i(&self) -> f64 {
        self.l_total / (1.0 + self.s)
    }

    /// Length of piece II.
    pub fn l_ii(&self) -> f64 {
        self.s * self.l_total / (1.0 + self.s)
    }

    /// F(x) = 4x/(1-x)^2; infinite in the uniform limit x = 1.
    pub fn tension_factor(&self) -> f64 {
        if self.x == 1.0 {
            f64::INFINITY
        } else {
            4.0 * self.x / ((1.0 - self.x) * (1.0 - self.x))
        }
    }

    /// Dispersion function at a real frequency. For x = 1 the returned value
    /// is sin^2(omega L / 2) (same zero set as the diverging full expression)
    /// and the flag is set.
    pub fn dispersion(&self, omega: f64) -> (f64, bool) {
        let u = omega * self.l_i();
        if self.x == 1.0 {
            let half = 0.5 * (1.0 + self.s) * u;
            (half.sin().powi(2), true)
        } else {
            (self.dispersion_u(u), false)
        }
    }

    /// Dispersion in the reduced variable u = omega * L_I.
    fn dispersion_u(&self, u: f64) -> f64 {
        let f = self.tension_factor();
        let half = 0.5 * (1.0 + self.s) * u;
        if f.is_infinite() {
            half.sin().powi(2)
        } else {
            f * half.sin().powi(2) + u.sin() * (self.s * u).sin()
        }
    }

    /// d/du of the dispersion function in the reduced variable.
    fn dispersion_du(&self, u: f64) -> f64 {
        let f = self.tension_factor();
        let sp1 = 1.0 + self.s;
        if f.is_infinite() {
            0.5 * sp1 * (sp1 * u).sin()
        } else {
            f * 0.5 * sp1 * (sp1 * u).sin()
                + u.cos() * (self.s * u).sin()
                + self.s * u.sin() * (self.s * u).cos()
        }
    }

    /// Find and classify all eigenfrequencies in (0, omega_max].
    ///
    /// Requires integer s. A uniform scan with step pi/(4 L_I (1+s)) in omega
    /// (four samples per shortest sine half-period) brackets every simple
    /// root for bisection; tangencies sit at exact multiples of pi/2 in
    /// u = omega L_I and are detected by a vanishing derivative there.
    pub fn find_spectrum(&self, omega_max: f64) -> Result<DispersionSpectrum, TwoPieceError> {
        if !(omega_max > 0.0) {
            return Err(TwoPieceError::Domain {
                what: format!("omega_max must be positive, got {omega_max}"),
            });
        }
        let s_round = self.s.round();
        if (self.s - s_round).abs() > 1e-9 || s_round < 1.0 {
            return Err(TwoPieceError::NonIntegerRatio { s: self.s });
        }
        let s_int = s_round as u32;
        let parity = if s_int % 2 == 1 { SParity::Odd } else { SParity::Even };
        let period = match parity {
            SParity::Odd => PI,
            SParity::Even => 2.0 * PI,
        };
        let l_i = self.l_i();
        let u_max = omega_max * l_i;
        if u_max < period * (1.0 + 1e-12) {
            return Err(TwoPieceError::Domain {
                what: format!(
                    "omega_max * L_I = {u_max:.6} does not cover one branch period ({period:.6}); raise omega_max"
                ),
            });
        }

        // For x = 1 the evaluated form is the reduced sin^2, which is O(1).
        let scale = if self.x == 1.0 { 2.0 } else { self.tension_factor().max(1.0) + 1.0 };
        let zero_snap = 1e-12 * scale;
        let dscale = scale * (1.0 + self.s);

        // Tangency candidates: all multiples of pi/2 in u.
        let mut tangencies: Vec<f64> = Vec::new();
        let mut k = 1usize;
        loop {
            let u = k as f64 * 0.5 * PI;
            if u > u_max * (1.0 + 1e-12) {
                break;
            }
            let d = self.dispersion_u(u);
            let dp = self.dispersion_du(u);
            if d.abs() <= zero_snap && dp.abs() <= 1e-8 * dscale {
                tangencies.push(u);
            }
            k += 1;
        }

        // Simple roots by sign-change scan + bisection, skipping the snapped
        // tangency neighborhoods.
        let step = PI / (4.0 * (1.0 + self.s));
        let n_steps = (u_max / step).ceil() as usize;
        let mut simple: Vec<f64> = Vec::new();
        let mut prev_u = 0.0f64;
        let mut prev_d = 0.0f64; // dispersion vanishes at omega = 0
        for i in 1..=n_steps {
            let u = (i as f64 * step).min(u_max);
            let d = self.dispersion_u(u);
            if prev_d.abs() > zero_snap && d.abs() > zero_snap && prev_d * d < 0.0 {
                let root = self.bisect_root(prev_u, u)?;
                simple.push(root);
            } else if d.abs() <= zero_snap && self.dispersion_du(u).abs() > 1e-8 * dscale {
                // a simple root landing exactly on a grid point
                if u > 1e-12 {
                    simple.push(u);
                }
            }
            prev_u = u;
            prev_d = d;
            if u >= u_max {
                break;
            }
        }

        self.classify(s_int, parity, period, l_i, u_max, tangencies, simple, omega_max)
    }

    fn bisect_root(&self, mut a: f64, mut b: f64) -> Result<f64, TwoPieceError> {
        let mut fa = self.dispersion_u(a);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.dispersion_u(mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        Ok(0.5 * (a + b))
    }

    #[allow(clippy::too_many_arguments)]
    fn classify(
        &self,
        s_int: u32,
        parity: SParity,
        period: f64,
        l_i: f64,
        u_max: f64,
        tangencies: Vec<f64>,
        simple: Vec<f64>,
        omega_max: f64,
    ) -> Result<DispersionSpectrum, TwoPieceError> {
        let cls_eps = 1e-7;
        let mut degenerate_u: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        for &u in &tangencies {
            let r = u / PI;
            let r_round = r.round();
            let on_integer = (r - r_round).abs() < cls_eps;
            match parity {
                SParity::Odd => {
                    if on_integer {
                        degenerate_u.push(u);
                    } else if u < period {
                        // self-paired family at beta = 1/2
                        let frac = r - r.floor();
                        if (frac - 0.5).abs() > cls_eps {
                            return Err(TwoPieceError::SpectrumMismatch {
                                what: format!("odd-s tangency at u/pi = {r} is neither integer nor half-integer"),
                            });
                        }
                        betas.push(0.5);
                    }
                }
                SParity::Even => {
                    if on_integer && (r_round as i64) % 2 == 0 {
                        degenerate_u.push(u);
                    } else if u < period {
                        if !on_integer {
                            return Err(TwoPieceError::SpectrumMismatch {
                                what: format!("even-s tangency at u/pi = {r} is not at an integer"),
                            });
                        }
                        // odd-integer r: self-paired family at beta = 1
                        betas.push(1.0);
                    }
                }
            }
        }

        for &u in &simple {
            if u >= period * (1.0 - 1e-12) {
                continue; // later periods validated below
            }
            let r = u / PI;
            match parity {
                SParity::Odd => {
                    debug_assert!(r < 1.0 + 1e-12);
                    if r < 0.5 {
                        betas.push(r);
                    }
                }
                SParity::Even => {
                    if r < 1.0 {
                        betas.push(r);
                    }
                }
            }
        }
        betas.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let expected = match parity {
            SParity::Odd => (s_int as usize - 1) / 2,
            SParity::Even => s_int as usize,
        };
        if betas.len() != expected {
            return Err(TwoPieceError::SpectrumMismatch {
                what: format!(
                    "found {} beta parameters for s = {s_int}, expected {expected} (betas: {betas:?})",
                    betas.len()
                ),
            });
        }

        // Validate that every simple root in later periods is predicted by the
        // branch model; a miss signals a bracketing failure in the scan.
        let period_r = period / PI; // 1 for odd s, 2 for even s
        for &u in &simple {
            let r = u / PI;
            let frac = r - period_r * (r / period_r).floor();
            let ok = betas.iter().any(|&b| {
                (frac - b).abs() < 1e-6 || (frac - (period_r - b)).abs() < 1e-6
            });
            if !ok {
                return Err(TwoPieceError::BracketingFailure { near: u });
            }
        }

        // Residual invariant on every stored root.
        let res_scale = if self.x == 1.0 { 1.0 } else { self.tension_factor().max(1.0) };
        for &u in degenerate_u.iter().chain(simple.iter()) {
            let d = self.dispersion_u(u);
            if d.abs() > 1e-9 * res_scale {
                return Err(TwoPieceError::SpectrumMismatch {
                    what: format!("root residual {d:.3e} too large at u = {u}"),
                });
            }
        }

        let _ = u_max;
        Ok(DispersionSpectrum {
            degenerate_frequencies: degenerate_u.iter().map(|u| u / l_i).collect(),
            beta_params: betas,
            s_parity: parity,
            s_int,
            omega_max,
            l_i,
        })
    }

    /// Closed-form Casimir energy from the classified spectrum (the
    /// small-cutoff limit of the regularized mode sum; the divergent cutoff
    /// term cancels against the uniform reference).
    pub fn energy_cutoff(&self, spectrum: &DispersionSpectrum) -> Result<EnergyEstimate, TwoPieceError> {
        self.check_spectrum(spectrum)?;
        let s = spectrum.s_int as f64;
        let l = self.l_total;
        let value = match spectrum.s_parity {
            SParity::Odd => {
                let sum: f64 = spectrum
                    .beta_params
                    .iter()
                    .map(|&b| b * b + (1.0 - b) * (1.0 - b))
                    .sum();
                PI * s * (s - 1.0) / (12.0 * l) - PI * (s + 1.0) / (4.0 * l) * sum
            }
            SParity::Even => {
                let sum: f64 = spectrum
                    .beta_params
                    .iter()
                    .map(|&b| b * b + (2.0 - b) * (2.0 - b))
                    .sum();
                PI * s * (2.0 * s + 1.0) / (6.0 * l) - PI * (s + 1.0) / (8.0 * l) * sum
            }
        };
        let beta_tol = 1e-11;
        let abs_error_est = PI * (s + 1.0) / l * spectrum.beta_params.len().max(1) as f64 * beta_tol;
        Ok(EnergyEstimate { value, method: Method::Cutoff, abs_error_est, temperature: 0.0 })
    }

    /// Zeta-regularized energy assembled from the analytically continued
    /// Hurwitz values of each branch, minus the uniform-string reference
    /// -pi/(6L). Algebraically identical to the cutoff closed form.
    pub fn energy_zeta(&self, spectrum: &DispersionSpectrum) -> Result<EnergyEstimate, TwoPieceError> {
        self.check_spectrum(spectrum)?;
        let l_i = spectrum.l_i;
        let e_i_ii = match spectrum.s_parity {
            SParity::Odd => {
                // degenerate branch omega L_I = pi n, multiplicity 2
                let mut e = -PI / (12.0 * l_i);
                for &b in &spectrum.beta_params {
                    e += PI / (2.0 * l_i)
                        * (hurwitz_zeta_neg1(b).map_err(wrap_specfun)?
                            + hurwitz_zeta_neg1(1.0 - b).map_err(wrap_specfun)?);
                }
                e
            }
            SParity::Even => {
                // degenerate branch omega L_I = 2 pi n, multiplicity 2
                let mut e = -PI / (6.0 * l_i);
                for &b in &spectrum.beta_params {
                    e += PI / l_i
                        * (hurwitz_zeta_neg1(0.5 * b).map_err(wrap_specfun)?
                            + hurwitz_zeta_neg1(1.0 - 0.5 * b).map_err(wrap_specfun)?);
                }
                e
            }
        };
        let value = e_i_ii + PI / (6.0 * self.l_total);
        let beta_tol = 1e-11;
        let s = spectrum.s_int as f64;
        let abs_error_est = PI * (s + 1.0) / self.l_total * spectrum.beta_params.len().max(1) as f64 * beta_tol;
        Ok(EnergyEstimate { value, method: Method::Zeta, abs_error_est, temperature: 0.0 })
    }

    fn check_spectrum(&self, spectrum: &DispersionSpectrum) -> Result<(), TwoPieceError> {
        let s_round = self.s.round();
        if (self.s - s_round).abs() > 1e-9 {
            return Err(TwoPieceError::NonIntegerRatio { s: self.s });
        }
        if spectrum.s_int as f64 != s_round {
            return Err(TwoPieceError::SpectrumMismatch {
                what: format!("spectrum built for s = {}, config has s = {}", spectrum.s_int, self.s),
            });
        }
        let expected = match spectrum.s_parity {
            SParity::Odd => (spectrum.s_int as usize - 1) / 2,
            SParity::Even => spectrum.s_int as usize,
        };
        if spectrum.beta_params.len() != expected {
            return Err(TwoPieceError::SpectrumMismatch {
                what: format!(
                    "parity/count mismatch: {} betas for s = {}",
                    spectrum.beta_params.len(),
                    spectrum.s_int
                ),
            });
        }
        Ok(())
    }

    /// Raw regularized zero-point sum (1/2) sum omega_n e^{-alpha omega_n}
    /// over the degeneracy-resolved spectrum, reconstructed from the branch
    /// parameters up to the spectrum's omega_max.
    pub fn energy_cutoff_raw(
        &self,
        spectrum: &DispersionSpectrum,
        cut: &CutoffSettings,
    ) -> Result<RawCutoffEnergy, TwoPieceError> {
        self.check_spectrum(spectrum)?;
        let l_i = spectrum.l_i;
        let omega_max = spectrum.omega_max;
        let mut modes: Vec<f64> = Vec::new();
        // tangency roots: multiplicity two
        for &w in &spectrum.degenerate_frequencies {
            modes.push(w);
            modes.push(w);
        }
        let push_line = |modes: &mut Vec<f64>, offset: f64, stride: f64| {
            let mut n = 0usize;
            loop {
                let u = (offset + stride * n as f64) * PI;
                let w = u / l_i;
                if w > omega_max || n >= 10_000_000 {
                    break;
                }
                if u > 1e-12 {
                    modes.push(w);
                }
                n += 1;
            }
        };
        match spectrum.s_parity {
            SParity::Odd => {
                for &b in &spectrum.beta_params {
                    push_line(&mut modes, b, 1.0);
                    push_line(&mut modes, 1.0 - b, 1.0);
                }
            }
            SParity::Even => {
                for &b in &spectrum.beta_params {
                    push_line(&mut modes, b, 2.0);
                    push_line(&mut modes, 2.0 - b, 2.0);
                }
            }
        }
        modes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if modes.len() > cut.n_max {
            modes.truncate(cut.n_max);
        }
        // Neumaier-compensated sum keeps the alpha-expansion fit clean even
        // with ~1e6 modes.
        let mut value = 0.0f64;
        let mut comp = 0.0f64;
        for &w in &modes {
            let term = 0.5 * w * (-cut.alpha * w).exp();
            let t = value + term;
            comp += if value.abs() >= term.abs() { (value - t) + term } else { (term - t) + value };
            value = t;
        }
        Ok(RawCutoffEnergy { value: value + comp, truncation_ok: omega_max * cut.alpha >= 20.0 })
    }

    /// Casimir energy by contour integration along the imaginary frequency
    /// axis. Valid for any real s > 0; the uniform string gives exactly 0.
    pub fn energy_contour(&self, settings: &QuadratureSettings) -> Result<EnergyEstimate, TwoPieceError> {
        if self.x == 1.0 {
            return Ok(EnergyEstimate { value: 0.0, method: Method::Contour, abs_error_est: 0.0, temperature: 0.0 });
        }
        let l_i = self.l_i();
        let s = self.s;
        let f = self.tension_factor();
        let integrand = move |a: f64| contour_integrand(f, s, a);
        let rate = 2.0f64.min(2.0 * s).min(1.0 + s);
        let res = quad::integrate_to_infinity(integrand, 0.0, rate, settings)?;
        Ok(EnergyEstimate {
            value: res.value / (2.0 * PI * l_i),
            method: Method::Contour,
            abs_error_est: res.abs_error / (2.0 * PI * l_i),
            temperature: 0.0,
        })
    }

    /// Finite-temperature Casimir energy as a Matsubara sum with the zero
    /// mode at half weight. The sum is extended past `n_start` until the last
    /// term is below 1e-14 of the partial sum.
    pub fn energy_contour_t(&self, temperature: f64, n_start: usize) -> Result<EnergyEstimate, TwoPieceError> {
        if !(temperature > 0.0) {
            return Err(TwoPieceError::Domain {
                what: format!("temperature must be positive, got {temperature}"),
            });
        }
        if self.x == 1.0 {
            return Ok(EnergyEstimate {
                value: 0.0,
                method: Method::Contour,
                abs_error_est: 0.0,
                temperature,
            });
        }
        let l_i = self.l_i();
        let f = self.tension_factor();
        let s = self.s;
        let xi_step = 2.0 * PI * temperature;
        let mut sum = 0.5 * contour_integrand(f, s, 0.0);
        let mut n = 1usize;
        let hard_cap = 100_000_000usize;
        let mut last = f64::MAX;
        loop {
            let term = contour_integrand(f, s, xi_step * n as f64 * l_i);
            // terms must decay for x in (0,1], s > 0
            debug_assert!(term.abs() <= last.abs() * (1.0 + 1e-9) || term.abs() < 1e-300);
            last = term;
            sum += term;
            if n >= n_start && term.abs() < 1e-14 * sum.abs().max(1e-300) {
                break;
            }
            n += 1;
            if n > hard_cap {
                return Err(TwoPieceError::Quad(QuadError::NonConvergence {
                    achieved: term.abs(),
                    required: 1e-14 * sum.abs(),
                    subdivisions: n,
                }));
            }
        }
        let value = temperature * sum;
        Ok(EnergyEstimate {
            value,
            method: Method::Contour,
            abs_error_est: (1e-14 * sum.abs() + last.abs()) * temperature,
            temperature,
        })
    }
}

fn wrap_specfun(e: crate::specfun::SpecFunError) -> TwoPieceError {
    TwoPieceError::Domain { what: e.to_string() }
}

/// ln of the ratio of dispersion functions on the imaginary axis,
/// as a function of a = xi * L_I. Decays like e^{-min(2, 2s, 1+s) a}.
fn contour_integrand(f: f64, s: f64, a: f64) -> f64 {
    if a == 0.0 {
        let g0 = 4.0 * s / ((1.0 + s) * (1.0 + s));
        return if f == 0.0 { g0.ln() } else { ((f + g0) / (f + 1.0)).ln() };
    }
    if a < 1.0 {
        let u = -(-2.0 * a).exp_m1(); // 1 - e^{-2a}
        let v = -(-2.0 * s * a).exp_m1();
        let w = -(-(1.0 + s) * a).exp_m1();
        let g = u * v / (w * w);
        if f == 0.0 {
            g.ln()
        } else {
            ((f + g) / (f + 1.0)).ln()
        }
    } else {
        // ln1p form: G - 1 assembled from exponentially small pieces
        let u = (-2.0 * a).exp();
        let v = (-2.0 * s * a).exp();
        let w = (-(1.0 + s) * a).exp();
        let num = -u - v + u * v + 2.0 * w - w * w;
        let denom = (1.0 - w) * (1.0 - w);
        if f == 0.0 {
            (num / denom).ln_1p()
        } else {
            (num / (denom * (f + 1.0))).ln_1p()
        }
    }
}

/// Closed form of the Casimir energy in the extreme tension-ratio limit:
/// E = -pi/(24 L) (s + 1/s - 2). Invariant under s -> 1/s and zero at s = 1.
pub fn energy_x0_closed(s: f64, l_total: f64) -> f64 {
    assert!(s > 0.0 && l_total > 0.0, "require s > 0 and L > 0");
    -PI / (24.0 * l_total) * (s + 1.0 / s - 2.0)
}
