//! Jacobi theta functions of a complex argument `v` and period ratio `tau`.
//!
//! Four series are supported:
//!
//! * `Plain`: `2 Σ (-1)^n q^((n+1/2)^2) sin((2n+1)πv)` (odd, vanishes at `v = 0`)
//! * `One`:   `2 Σ q^((n+1/2)^2) cos((2n+1)πv)`
//! * `Two`:   `1 + 2 Σ (-1)^n q^(n^2) cos(2nπv)`
//! * `Three`: `1 + 2 Σ q^(n^2) cos(2nπv)`
//!
//! with `q = exp(iπτ)`. Arguments are first reduced to `|Re v| <= 1/2`,
//! `|Im v| <= Im τ / 2` and the quasi-periodicity factor is reapplied in log form,
//! so callers that only need ratios can cancel it exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Terms whose log-magnitude is below this are treated as zero.
const LOG_UNDERFLOW: f64 = -745.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaIndex {
    Plain,
    One,
    Two,
    Three,
}

impl ThetaIndex {
    pub const ALL: [ThetaIndex; 4] = [ThetaIndex::Plain, ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three];

    pub fn from_index(idx: u8) -> Option<Self> {
        Self::ALL.get(idx as usize).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn half_integer(self) -> bool {
        matches!(self, ThetaIndex::Plain | ThetaIndex::One)
    }

    /// Sign picked up under `v -> v + 1`.
    fn unit_shift_sign(self) -> f64 {
        match self {
            ThetaIndex::Plain | ThetaIndex::One => -1.0,
            ThetaIndex::Two | ThetaIndex::Three => 1.0,
        }
    }

    /// Sign picked up under `v -> v + τ`, besides the common exponential factor.
    fn tau_shift_sign(self) -> f64 {
        match self {
            ThetaIndex::Plain | ThetaIndex::Two => -1.0,
            ThetaIndex::One | ThetaIndex::Three => 1.0,
        }
    }
}

/// Truncation policy shared by every series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            abs_tol: 0.0,
            rel_tol: 1e-17,
            max_terms: 64,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::InvalidConfig(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::InvalidConfig(
                "at least one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if self.max_terms < 4 {
            return Err(Error::InvalidConfig("max_terms must be at least 4".into()));
        }
        Ok(())
    }

    fn threshold(&self, sum: Complex64) -> f64 {
        self.abs_tol + self.rel_tol * sum.norm()
    }
}

/// Tracks the "two consecutive small terms" stopping rule.
struct Stopper<'a> {
    cfg: &'a SeriesConfig,
    quiet: usize,
}

impl<'a> Stopper<'a> {
    fn new(cfg: &'a SeriesConfig) -> Self {
        Stopper { cfg, quiet: 0 }
    }

    /// Feed one term per tracked sum; returns true once the series may stop.
    fn update(&mut self, pairs: &[(Complex64, Complex64)]) -> bool {
        let small = pairs.iter().all(|(term, sum)| term.norm() <= self.cfg.threshold(*sum));
        if small {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= 2
    }
}

/// Value and first v-derivative of the series at an already reduced argument.
fn series(idx: ThetaIndex, v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<(Complex64, Complex64)> {
    let mut stop = Stopper::new(cfg);
    let (mut val, mut der) = if idx.half_integer() {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    };
    let alternating = matches!(idx, ThetaIndex::Plain | ThetaIndex::Two);
    let start = if idx.half_integer() { 0 } else { 1 };
    for n in start..start + cfg.max_terms {
        let k = if idx.half_integer() { 2 * n + 1 } else { 2 * n } as f64;
        // exponent of q: k^2/4 for both families
        let expo = I * PI * tau * (k * k / 4.0);
        let growth = k * PI * v.im.abs();
        if expo.re + growth < LOG_UNDERFLOW {
            return Ok((val, der));
        }
        let sign = if alternating && n % 2 == 1 { -1.0 } else { 1.0 };
        let c = 2.0 * sign * expo.exp();
        let x = k * PI * v;
        let (tv, td) = match idx {
            ThetaIndex::Plain => (c * x.sin(), c * k * PI * x.cos()),
            _ => (c * x.cos(), -c * k * PI * x.sin()),
        };
        val += tv;
        der += td;
        if stop.update(&[(tv, val), (td, der)]) {
            return Ok((val, der));
        }
    }
    Err(Error::SeriesDivergence {
        max_terms: cfg.max_terms,
    })
}

/// Magnitude of the leading series term, used as the scale for the zero guard.
fn leading_scale(idx: ThetaIndex, tau: Complex64) -> f64 {
    if idx.half_integer() {
        2.0 * (-PI * tau.im / 4.0).exp()
    } else {
        1.0
    }
}

/// A reduced argument `v = v0 + a + bτ` with integer `a`, `b`.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    v0: Complex64,
    a: i64,
    b: i64,
}

fn reduce(v: Complex64, tau: Complex64) -> Reduced {
    let b = (v.im / tau.im).round();
    let v1 = v - b * tau;
    let a = v1.re.round();
    Reduced {
        v0: v1 - a,
        a: a as i64,
        b: b as i64,
    }
}

fn parity_sign(s: f64, n: i64) -> f64 {
    if s < 0.0 && n.rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Evaluation of one or more theta functions at a common argument.
///
/// Values are kept as `sign * exp(log_factor) * mantissa`, where the factor is
/// shared by all four functions.
#[derive(Debug, Clone)]
pub struct ThetaPoint {
    red: Reduced,
    log_factor: Complex64,
    mant: [Option<(Complex64, Complex64)>; 4],
    tau: Complex64,
}

impl ThetaPoint {
    pub fn new(indices: &[ThetaIndex], v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<Self> {
        let red = reduce(v, tau);
        let b = red.b as f64;
        let log_factor = -I * PI * tau * (b * b) - 2.0 * PI * I * b * red.v0;
        let mut mant = [None; 4];
        for &idx in indices {
            mant[idx.index()] = Some(series(idx, red.v0, tau, cfg)?);
        }
        Ok(ThetaPoint {
            red,
            log_factor,
            mant,
            tau,
        })
    }

    pub fn all(v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<Self> {
        Self::new(&ThetaIndex::ALL, v, tau, cfg)
    }

    fn get(&self, idx: ThetaIndex) -> (Complex64, Complex64) {
        self.mant[idx.index()].expect("theta index was not evaluated")
    }

    fn sign(&self, idx: ThetaIndex) -> f64 {
        parity_sign(idx.unit_shift_sign(), self.red.a) * parity_sign(idx.tau_shift_sign(), self.red.b)
    }

    /// The series value at the reduced argument, times the sign of the shift.
    pub fn mantissa(&self, idx: ThetaIndex) -> Complex64 {
        self.sign(idx) * self.get(idx).0
    }

    /// Logarithm of the common quasi-periodicity factor.
    pub fn log_factor(&self) -> Complex64 {
        self.log_factor
    }

    pub fn value(&self, idx: ThetaIndex) -> Complex64 {
        self.log_factor.exp() * self.mantissa(idx)
    }

    pub fn derivative(&self, idx: ThetaIndex) -> Complex64 {
        let (m, d) = self.get(idx);
        let shift = 2.0 * PI * I * self.red.b as f64;
        self.sign(idx) * self.log_factor.exp() * (d - shift * m)
    }

    /// `θ_a(v) / θ_b(v)`; the common factor cancels exactly.
    pub fn ratio(&self, a: ThetaIndex, b: ThetaIndex) -> Complex64 {
        self.mantissa(a) / self.mantissa(b)
    }

    /// Logarithmic derivative, guarded against zeros of the function.
    pub fn dlog(&self, idx: ThetaIndex) -> Result<Complex64> {
        let (m, d) = self.get(idx);
        let threshold = 1e-12 * leading_scale(idx, self.tau);
        if m.norm() < threshold {
            return Err(Error::NearZeroDenominator {
                magnitude: m.norm(),
                threshold,
            });
        }
        Ok(d / m - 2.0 * PI * I * self.red.b as f64)
    }
}

pub fn theta_eval(idx: ThetaIndex, v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<Complex64> {
    cfg.validate()?;
    Ok(ThetaPoint::new(&[idx], v, tau, cfg)?.value(idx))
}

pub fn theta_derivative(idx: ThetaIndex, v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<Complex64> {
    cfg.validate()?;
    Ok(ThetaPoint::new(&[idx], v, tau, cfg)?.derivative(idx))
}

pub fn theta_dlog(idx: ThetaIndex, v: Complex64, tau: Complex64, cfg: &SeriesConfig) -> Result<Complex64> {
    cfg.validate()?;
    ThetaPoint::new(&[idx], v, tau, cfg)?.dlog(idx)
}

/// Values at `v = 0`: the three even functions, and the first and third
/// derivatives of the odd one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nullwerte {
    pub theta1: Complex64,
    pub theta2: Complex64,
    pub theta3: Complex64,
    pub d1: Complex64,
    pub d3: Complex64,
}

impl Nullwerte {
    pub fn get(&self, idx: ThetaIndex) -> Complex64 {
        match idx {
            ThetaIndex::Plain => Complex64::new(0.0, 0.0),
            ThetaIndex::One => self.theta1,
            ThetaIndex::Two => self.theta2,
            ThetaIndex::Three => self.theta3,
        }
    }
}

pub fn theta_nullwerte(tau: Complex64, cfg: &SeriesConfig) -> Result<Nullwerte> {
    cfg.validate()?;
    if tau.im <= 0.0 {
        return Err(Error::InvalidPeriodRatio { tau });
    }
    let zero = Complex64::new(0.0, 0.0);
    let theta2 = series(ThetaIndex::Two, zero, tau, cfg)?.0;
    let theta3 = series(ThetaIndex::Three, zero, tau, cfg)?.0;

    // half-integer family: 2 Σ q^((n+1/2)^2) * (1, (-1)^n k π, -(-1)^n (k π)^3)
    let mut theta1 = zero;
    let mut d1 = zero;
    let mut d3 = zero;
    let mut stop = Stopper::new(cfg);
    let mut done = false;
    for n in 0..cfg.max_terms {
        let k = (2 * n + 1) as f64;
        let expo = I * PI * tau * (k * k / 4.0);
        if expo.re < LOG_UNDERFLOW {
            done = true;
            break;
        }
        let c = 2.0 * expo.exp();
        let s = if n % 2 == 1 { -1.0 } else { 1.0 };
        let kp = k * PI;
        let (t1, td1, td3) = (c, s * c * kp, -s * c * kp * kp * kp);
        theta1 += t1;
        d1 += td1;
        d3 += td3;
        if stop.update(&[(t1, theta1), (td1, d1), (td3, d3)]) {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::SeriesDivergence {
            max_terms: cfg.max_terms,
        });
    }
    Ok(Nullwerte {
        theta1,
        theta2,
        theta3,
        d1,
        d3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Straight two-sided partial sums, no reduction and no early exit.
    fn brute(idx: ThetaIndex, v: Complex64, tau: Complex64, terms: i64) -> Complex64 {
        let mut s = c(0.0, 0.0);
        for n in -terms..=terms {
            let nf = n as f64;
            let t = match idx {
                ThetaIndex::Plain => {
                    let sg = if n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                    -I * sg * (I * PI * tau * (nf + 0.5).powi(2) + (2.0 * nf + 1.0) * PI * I * v).exp()
                }
                ThetaIndex::One => (I * PI * tau * (nf + 0.5).powi(2) + (2.0 * nf + 1.0) * PI * I * v).exp(),
                ThetaIndex::Two => {
                    let sg = if n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
                    sg * (I * PI * tau * nf * nf + 2.0 * nf * PI * I * v).exp()
                }
                ThetaIndex::Three => (I * PI * tau * nf * nf + 2.0 * nf * PI * I * v).exp(),
            };
            s += t;
        }
        s
    }

    #[test]
    fn plain_vanishes_at_origin() {
        let v = theta_eval(ThetaIndex::Plain, c(0.0, 0.0), c(0.3, 1.1), &SeriesConfig::default()).unwrap();
        assert_eq!(v, c(0.0, 0.0));
    }

    #[test]
    fn small_nome_limit() {
        let v = theta_eval(ThetaIndex::Three, c(0.0, 0.0), c(0.0, 40.0), &SeriesConfig::default()).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn matches_brute_force_sums() {
        let cfg = SeriesConfig::default();
        let tau = c(0.0, 1.0);
        let v = c(0.3, 0.0);
        let got = theta_eval(ThetaIndex::One, v, tau, &cfg).unwrap();
        assert!((got - brute(ThetaIndex::One, v, tau, 200)).norm() < 1e-14);

        for &tau in &[c(0.3, 1.1), c(0.5, 0.8660254037844386), c(0.1, 0.4)] {
            for &v in &[c(0.17, 0.05), c(-0.41, -0.2), c(1.7, 0.9), c(-2.3, 1.4)] {
                for idx in ThetaIndex::ALL {
                    let got = theta_eval(idx, v, tau, &cfg).unwrap();
                    let want = brute(idx, v, tau, 200);
                    let err = (got - want).norm() / want.norm().max(1.0);
                    assert!(err < 1e-12, "{idx:?} v={v} tau={tau}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let cfg = SeriesConfig::default();
        let tau = c(0.3, 1.1);
        let h = 1e-5;
        for &v in &[c(0.2, 0.1), c(0.9, -0.7), c(-1.3, 1.5)] {
            for idx in ThetaIndex::ALL {
                let d = theta_derivative(idx, v, tau, &cfg).unwrap();
                let fd = (theta_eval(idx, v + h, tau, &cfg).unwrap() - theta_eval(idx, v - h, tau, &cfg).unwrap())
                    / (2.0 * h);
                assert!((d - fd).norm() < 1e-7 * d.norm().max(1.0), "{idx:?} {v}");
            }
        }
    }

    #[test]
    fn nullwerte_jacobi_identity_and_brute_force() {
        let cfg = SeriesConfig::default();
        for &tau in &[c(0.0, 1.0), c(0.3, 1.1), c(-0.4, 0.5), c(0.1, 3.0)] {
            let nw = theta_nullwerte(tau, &cfg).unwrap();
            let jac = PI * nw.theta1 * nw.theta2 * nw.theta3;
            assert!((nw.d1 - jac).norm() < 1e-12 * jac.norm(), "tau={tau}");
            let z = c(0.0, 0.0);
            assert!((nw.theta2 - brute(ThetaIndex::Two, z, tau, 200)).norm() < 1e-14);
            assert!((nw.theta3 - brute(ThetaIndex::Three, z, tau, 200)).norm() < 1e-14);
            let d = theta_derivative(ThetaIndex::Plain, z, tau, &cfg).unwrap();
            assert!((d - nw.d1).norm() < 1e-14 * d.norm());
        }
    }

    #[test]
    fn nullwert_derivative_leading_term() {
        let tau = c(0.2, 6.0);
        let nw = theta_nullwerte(tau, &SeriesConfig::default()).unwrap();
        let lead = 2.0 * PI * (I * PI * tau / 4.0).exp();
        assert!((nw.d1 - lead).norm() < 1e-6 * lead.norm());
    }

    #[test]
    fn third_derivative_matches_differences() {
        let cfg = SeriesConfig::default();
        let tau = c(0.3, 1.1);
        let nw = theta_nullwerte(tau, &cfg).unwrap();
        let h = 1e-3;
        let d = |v: f64| theta_derivative(ThetaIndex::Plain, c(v, 0.0), tau, &cfg).unwrap();
        let fd = (d(h) - 2.0 * d(0.0) + d(-h)) / (h * h);
        assert!((fd - nw.d3).norm() < 1e-5 * nw.d3.norm());
    }

    #[test]
    fn dlog_even_functions_vanish_at_origin() {
        let cfg = SeriesConfig::default();
        for idx in [ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
            let d = theta_dlog(idx, c(0.0, 0.0), c(0.3, 1.1), &cfg).unwrap();
            assert_eq!(d, c(0.0, 0.0));
        }
    }

    #[test]
    fn dlog_plain_has_unit_residue() {
        let cfg = SeriesConfig::default();
        for &eps in &[1e-4, 1e-5, 1e-6] {
            let v = c(eps, 0.5 * eps);
            let d = theta_dlog(ThetaIndex::Plain, v, c(0.3, 1.1), &cfg).unwrap();
            assert!((d * v - 1.0).norm() < 1e-6);
        }
    }

    #[test]
    fn dlog_near_zero_is_rejected() {
        let r = theta_dlog(ThetaIndex::Plain, c(1.0, 0.0), c(0.3, 1.1), &SeriesConfig::default());
        assert!(matches!(r, Err(Error::NearZeroDenominator { .. })));
    }

    #[test]
    fn dlog_shifts() {
        let cfg = SeriesConfig::default();
        let tau = c(0.3, 1.1);
        let v = c(0.21, 0.13);
        for idx in ThetaIndex::ALL {
            let a = theta_dlog(idx, v, tau, &cfg).unwrap();
            let b = theta_dlog(idx, v + 1.0, tau, &cfg).unwrap();
            assert!((a - b).norm() < 1e-12);
            // v -> v + τ adds -2πi
            let t = theta_dlog(idx, v + tau, tau, &cfg).unwrap();
            assert!((t - a + 2.0 * PI * I).norm() < 1e-11, "{idx:?}");
        }
    }

    #[test]
    fn parity() {
        let cfg = SeriesConfig::default();
        let tau = c(0.3, 1.1);
        let v = c(0.37, -0.22);
        let p = theta_eval(ThetaIndex::Plain, v, tau, &cfg).unwrap();
        let m = theta_eval(ThetaIndex::Plain, -v, tau, &cfg).unwrap();
        assert!((p + m).norm() < 1e-15);
        for idx in [ThetaIndex::One, ThetaIndex::Two, ThetaIndex::Three] {
            let p = theta_eval(idx, v, tau, &cfg).unwrap();
            let m = theta_eval(idx, -v, tau, &cfg).unwrap();
            assert!((p - m).norm() < 1e-15);
        }
    }

    #[test]
    fn large_nome_stays_within_term_budget() {
        // |q| = 0.9
        let tau = c(0.0, -(0.9f64.ln()) / PI);
        let cfg = SeriesConfig {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_terms: 64,
        };
        for idx in ThetaIndex::ALL {
            theta_eval(idx, c(0.3, tau.im / 2.0), tau, &cfg).unwrap();
        }
        theta_nullwerte(tau, &cfg).unwrap();
    }

    #[test]
    fn config_validation() {
        assert!(SeriesConfig::default().validate().is_ok());
        let bad = SeriesConfig {
            abs_tol: 0.0,
            rel_tol: 0.0,
            max_terms: 64,
        };
        assert!(bad.validate().is_err());
        let few = SeriesConfig {
            max_terms: 3,
            ..SeriesConfig::default()
        };
        assert!(few.validate().is_err());
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = SeriesConfig {
            abs_tol: 0.0,
            rel_tol: 1e-17,
            max_terms: 4,
        };
        let r = theta_eval(ThetaIndex::Three, c(0.1, 0.0), c(0.0, 0.05), &cfg);
        assert!(matches!(r, Err(Error::SeriesDivergence { .. })));
    }
}
