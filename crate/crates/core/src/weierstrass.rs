//! σ, σ_λ, ζ, ℘ and ℘′ through theta functions.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{constants_with_nullwerte, HalfPeriod, Lattice, LatticeConstants};
use crate::theta::{Nullwerte, SeriesConfig, ThetaIndex, ThetaPoint};

/// Relative (to the shortest period) distance below which a point counts as a pole.
pub const NEAR_POLE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Finite,
    AtPole { translate: Complex64 },
    NearPole { translate: Complex64 },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Finite => "Finite",
            Status::AtPole { .. } => "AtPole",
            Status::NearPole { .. } => "NearPole",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub status: Status,
}

impl EvalResult {
    pub fn finite(value: Complex64) -> Self {
        EvalResult {
            value,
            status: Status::Finite,
        }
    }

    pub fn pole(status: Status) -> Self {
        EvalResult {
            value: Complex64::new(f64::NAN, f64::NAN),
            status,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.status == Status::Finite
    }

    /// The value, or `PoleProximity` for any pole status.
    pub fn value_at(&self, u: Complex64) -> Result<Complex64> {
        match self.status {
            Status::Finite => Ok(self.value),
            Status::AtPole { translate } | Status::NearPole { translate } => {
                Err(Error::PoleProximity { point: u, translate })
            }
        }
    }
}

/// σ and the three auxiliary sigma functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSet {
    pub sigma: Complex64,
    pub aux: [Complex64; 3],
}

impl SigmaSet {
    pub fn aux(&self, h: HalfPeriod) -> Complex64 {
        self.aux[h.index()]
    }
}

/// A lattice together with its cached constants and series policy.
///
/// Every evaluator in the crate hangs off this type.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    lattice: Lattice,
    constants: LatticeConstants,
    nullwerte: Nullwerte,
    cfg: SeriesConfig,
    /// sign of the simplified theta form of Δ_{λ,μ}, indexed [λ][μ]
    pub(crate) theta_signs: [[f64; 3]; 3],
}

impl Weierstrass {
    pub fn new(lattice: Lattice, cfg: SeriesConfig) -> Result<Self> {
        let (constants, nullwerte) = constants_with_nullwerte(&lattice, &cfg)?;
        let mut w = Weierstrass {
            lattice,
            constants,
            nullwerte,
            cfg,
            theta_signs: [[1.0; 3]; 3],
        };
        w.theta_signs = w.probe_theta_signs()?;
        Ok(w)
    }

    pub fn from_tau(omega1: Complex64, tau: Complex64, cfg: SeriesConfig) -> Result<Self> {
        Self::new(Lattice::from_tau(omega1, tau)?, cfg)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn constants(&self) -> &LatticeConstants {
        &self.constants
    }

    pub fn nullwerte(&self) -> &Nullwerte {
        &self.nullwerte
    }

    pub fn cfg(&self) -> &SeriesConfig {
        &self.cfg
    }

    pub fn e(&self, h: HalfPeriod) -> Complex64 {
        self.constants.e(h)
    }

    pub fn eta(&self, h: HalfPeriod) -> Complex64 {
        self.constants.eta(h)
    }

    /// `e_a − e_b` straight from the theta constants, without the
    /// cancellation of subtracting two stored roots. Zero when `a == b`.
    pub fn e_diff(&self, a: HalfPeriod, b: HalfPeriod) -> Complex64 {
        let Ok(third) = HalfPeriod::third(a, b) else {
            return Complex64::new(0.0, 0.0);
        };
        let c = (std::f64::consts::PI / (2.0 * self.lattice.omega1)).powi(2);
        let d = c * self.nullwerte.get(third.theta()).powi(4);
        if a < b {
            d
        } else {
            -d
        }
    }

    pub fn omega(&self, h: HalfPeriod) -> Complex64 {
        self.lattice.half_period(h)
    }

    /// Status of `u` with respect to poles on the classes `site + Λ`.
    pub fn classify(&self, u: Complex64, sites: &[Complex64]) -> Status {
        let scale = self.lattice.min_period();
        let mut worst = Status::Finite;
        for &s in sites {
            let (translate, d) = self.lattice.nearest_translate(u, s);
            if d <= 64.0 * f64::EPSILON * scale.max(u.norm()) {
                return Status::AtPole { translate };
            }
            if d < NEAR_POLE * scale && worst == Status::Finite {
                worst = Status::NearPole { translate };
            }
        }
        worst
    }

    /// `PoleProximity` unless `u` is clear of every class `site + Λ`.
    pub fn guard(&self, u: Complex64, sites: &[Complex64]) -> Result<()> {
        match self.classify(u, sites) {
            Status::Finite => Ok(()),
            Status::AtPole { translate } | Status::NearPole { translate } => {
                Err(Error::PoleProximity { point: u, translate })
            }
        }
    }

    pub(crate) fn v(&self, u: Complex64) -> Complex64 {
        u / (2.0 * self.lattice.omega1)
    }

    pub(crate) fn thetas(&self, indices: &[ThetaIndex], u: Complex64) -> Result<ThetaPoint> {
        ThetaPoint::new(indices, self.v(u), self.lattice.tau, &self.cfg)
    }

    fn gauss_log(&self, u: Complex64) -> Complex64 {
        self.eta(HalfPeriod::One) * u * u / (2.0 * self.lattice.omega1)
    }

    pub fn sigma(&self, u: Complex64) -> Result<Complex64> {
        let t = self.thetas(&[ThetaIndex::Plain], u)?;
        let pre = 2.0 * self.lattice.omega1 / self.nullwerte.d1;
        Ok(pre * (self.gauss_log(u) + t.log_factor()).exp() * t.mantissa(ThetaIndex::Plain))
    }

    pub fn sigma_aux(&self, h: HalfPeriod, u: Complex64) -> Result<Complex64> {
        let idx = h.theta();
        let t = self.thetas(&[idx], u)?;
        Ok((self.gauss_log(u) + t.log_factor()).exp() * t.mantissa(idx) / self.nullwerte.get(idx))
    }

    pub fn sigma_set(&self, u: Complex64) -> Result<SigmaSet> {
        let t = self.thetas(&ThetaIndex::ALL, u)?;
        let f = (self.gauss_log(u) + t.log_factor()).exp();
        let aux = HalfPeriod::ALL.map(|h| {
            let idx = h.theta();
            f * t.mantissa(idx) / self.nullwerte.get(idx)
        });
        Ok(SigmaSet {
            sigma: 2.0 * self.lattice.omega1 / self.nullwerte.d1 * f * t.mantissa(ThetaIndex::Plain),
            aux,
        })
    }

    /// `σ_λ/σ` for λ = 1, 2, 3 from one theta evaluation; the exponential factors cancel.
    pub(crate) fn sigma_ratios(&self, u: Complex64) -> Result<[Complex64; 3]> {
        let t = self.thetas(&ThetaIndex::ALL, u)?;
        let pre = self.nullwerte.d1 / (2.0 * self.lattice.omega1);
        Ok(HalfPeriod::ALL.map(|h| {
            let idx = h.theta();
            pre / self.nullwerte.get(idx) * t.ratio(idx, ThetaIndex::Plain)
        }))
    }

    fn origin_status(&self, u: Complex64) -> Status {
        self.classify(u, &[Complex64::new(0.0, 0.0)])
    }

    /// `σ_λ(u)/σ(u)`, a square root of `℘(u) − e_λ`.
    pub fn sigma_ratio(&self, h: HalfPeriod, u: Complex64) -> Result<EvalResult> {
        let st = self.origin_status(u);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        Ok(EvalResult::finite(self.sigma_ratios(u)?[h.index()]))
    }

    pub fn zeta(&self, u: Complex64) -> Result<EvalResult> {
        let st = self.origin_status(u);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let r = self.lattice.reduce(u);
        let w1 = self.lattice.omega1;
        let t = self.thetas(&[ThetaIndex::Plain], r.u0)?;
        let eta1 = self.eta(HalfPeriod::One);
        let eta3 = self.eta(HalfPeriod::Three);
        let z = eta1 * r.u0 / w1
            + t.dlog(ThetaIndex::Plain)? / (2.0 * w1)
            + 2.0 * (r.n as f64) * eta1
            + 2.0 * (r.m as f64) * eta3;
        Ok(EvalResult::finite(z))
    }

    pub fn wp(&self, u: Complex64) -> Result<EvalResult> {
        self.wp_via(HalfPeriod::One, u)
    }

    /// `e_λ + (σ_λ/σ)^2`; every λ gives the same function.
    pub fn wp_via(&self, h: HalfPeriod, u: Complex64) -> Result<EvalResult> {
        let st = self.origin_status(u);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let r = self.sigma_ratios(u)?[h.index()];
        Ok(EvalResult::finite(self.e(h) + r * r))
    }

    pub fn wp_prime(&self, u: Complex64) -> Result<EvalResult> {
        let st = self.origin_status(u);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let [r1, r2, r3] = self.sigma_ratios(u)?;
        Ok(EvalResult::finite(-2.0 * r1 * r2 * r3))
    }

    /// `℘″ = 6℘² − g2/2`, evaluated as `2Σ(℘ − e_λ)(℘ − e_μ)` with
    /// `℘ − e_λ = (σ_λ/σ)²`, which does not cancel near the half-periods.
    pub fn wp_second(&self, u: Complex64) -> Result<EvalResult> {
        let st = self.origin_status(u);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let [a, b, c] = self.sigma_ratios(u)?.map(|r| r * r);
        Ok(EvalResult::finite(2.0 * (a * b + b * c + c * a)))
    }
}
