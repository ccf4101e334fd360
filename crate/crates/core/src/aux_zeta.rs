//! Auxiliary zeta functions ζ_λ = (log σ_λ)′ = ζ(u + ω_λ) − η_λ.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{disc_radius, for_shell, HalfPeriod};
use crate::weierstrass::{EvalResult, Status, Weierstrass};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Index box half-width used by the partial-fraction route.
pub const PARTIAL_FRACTION_RADIUS: u32 = 200;

/// Fraction of `Im τ` the reduced `v` may occupy before the q-series route
/// hands over to the shift route.
const QSERIES_STRIP: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaRoute {
    /// `ζ(u + ω_λ) − η_λ`
    Shift,
    /// `η1 u/ω1 + θ_λ′/(2ω1 θ_λ)` at `v = u/2ω1`
    Theta,
    /// Lambert-type series in the nome
    QSeries,
    /// Sum over the shifted lattice `Λ + ω_λ`
    PartialFraction,
}

impl ZetaRoute {
    pub const ALL: [ZetaRoute; 4] = [
        ZetaRoute::Shift,
        ZetaRoute::Theta,
        ZetaRoute::QSeries,
        ZetaRoute::PartialFraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ZetaRoute::Shift => "shift",
            ZetaRoute::Theta => "theta",
            ZetaRoute::QSeries => "qseries",
            ZetaRoute::PartialFraction => "partial-fraction",
        }
    }
}

impl FromStr for ZetaRoute {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ZetaRoute::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown zeta route '{s}'"))
    }
}

/// Which of the two equivalent q-series shapes to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QForm {
    Exp,
    Cos,
}

impl Weierstrass {
    pub fn zeta_aux(&self, h: HalfPeriod, u: Complex64, route: ZetaRoute) -> Result<EvalResult> {
        let st = self.classify(u, &[self.omega(h)]);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let value = match route {
            ZetaRoute::Shift => self.zeta_aux_shift(h, u)?,
            ZetaRoute::Theta => self.zeta_aux_theta(h, u)?,
            ZetaRoute::QSeries => self.zeta_aux_qseries(h, u, QForm::Exp)?,
            ZetaRoute::PartialFraction => self.zeta_aux_partial_fraction(h, u, PARTIAL_FRACTION_RADIUS)?,
        };
        Ok(EvalResult::finite(value))
    }

    fn zeta_aux_shift(&self, h: HalfPeriod, u: Complex64) -> Result<Complex64> {
        let z = self.zeta(u + self.omega(h))?;
        Ok(z.value_at(u)? - self.eta(h))
    }

    /// Theta route without lattice reduction; the theta layer supplies the
    /// quasi-periodicity shift, so this path exercises the Legendre relation.
    fn zeta_aux_theta(&self, h: HalfPeriod, u: Complex64) -> Result<Complex64> {
        let idx = h.theta();
        let w1 = self.lattice().omega1;
        let t = self.thetas(&[idx], u)?;
        Ok(self.eta(HalfPeriod::One) * u / w1 + t.dlog(idx)? / (2.0 * w1))
    }

    /// q-series route in either form. Points outside the convergence strip
    /// fall back to the shift route.
    pub fn zeta_aux_qseries(&self, h: HalfPeriod, u: Complex64, form: QForm) -> Result<Complex64> {
        let l = self.lattice();
        let r = l.reduce(u);
        let v = self.v(r.u0);
        if v.im.abs() >= QSERIES_STRIP * l.tau.im {
            return self.zeta_aux_shift(h, u);
        }
        let w1 = l.omega1;
        let x = 2.0 * PI * v;
        let cfg = self.cfg();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut quiet = 0;
        let mut converged = false;
        for n in 1..=cfg.max_terms {
            let k = match h {
                HalfPeriod::One => 2 * n,
                _ => 2 * n - 1,
            } as f64;
            let qk = (I * PI * l.tau * k).exp();
            let term = match (h, form) {
                (HalfPeriod::Three, QForm::Exp) => {
                    let a = qk * (I * x).exp();
                    let b = qk * (-I * x).exp();
                    -(PI * I / w1) * (a / (1.0 - a) - b / (1.0 - b))
                }
                (_, QForm::Exp) => {
                    let a = qk * (I * x).exp();
                    let b = qk * (-I * x).exp();
                    (PI * I / w1) * (a / (1.0 + a) - b / (1.0 + b))
                }
                (HalfPeriod::Three, QForm::Cos) => {
                    (2.0 * PI / w1) * qk * x.sin() / (1.0 - 2.0 * qk * x.cos() + qk * qk)
                }
                (_, QForm::Cos) => -(2.0 * PI / w1) * qk * x.sin() / (1.0 + 2.0 * qk * x.cos() + qk * qk),
            };
            sum += term;
            if term.norm() <= cfg.abs_tol + cfg.rel_tol * sum.norm() {
                quiet += 1;
                if quiet >= 2 {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !converged {
            return Err(Error::SeriesDivergence {
                max_terms: cfg.max_terms,
            });
        }
        let mut z = self.eta(HalfPeriod::One) * r.u0 / w1 + sum;
        if h == HalfPeriod::One {
            z -= PI / (2.0 * w1) * (PI * v).tan();
        }
        Ok(z + 2.0 * (r.n as f64) * self.eta(HalfPeriod::One) + 2.0 * (r.m as f64) * self.eta(HalfPeriod::Three))
    }

    /// `−e_λ u + Σ (1/(u − W) + 1/W + u/W²)` over `W ∈ Λ + ω_λ`.
    ///
    /// Only the points inside a disc fitting in the index box `|n|, |m| <= radius`
    /// are summed; this keeps the truncation symmetric so the slowly decaying
    /// odd terms cancel.
    pub fn zeta_aux_partial_fraction(&self, h: HalfPeriod, u: Complex64, radius: u32) -> Result<Complex64> {
        let l = self.lattice();
        let om = self.omega(h);
        let r = radius.max(1) as i64;
        let cut = disc_radius(l, r) - om.norm();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut last = Complex64::new(0.0, 0.0);
        for s in 0..=r {
            let mut shell = Complex64::new(0.0, 0.0);
            for_shell(s, |n, m| {
                let w = l.point(n, m) + om;
                if w.norm() <= cut {
                    shell += 1.0 / (u - w) + 1.0 / w + u / (w * w);
                }
            });
            sum += shell;
            last = shell;
        }
        if last.norm() > 1e-3 * sum.norm().max(1.0) {
            return Err(Error::SeriesDivergence {
                max_terms: radius as usize,
            });
        }
        Ok(sum - self.e(h) * u)
    }

    /// `ζ_λ(u + 2ω_λ′) − ζ_λ(u) − 2η_λ′`, evaluated on the unreduced theta route.
    pub fn zeta_aux_quasiperiod_check(&self, h: HalfPeriod, shift: HalfPeriod, u: Complex64) -> Result<Complex64> {
        let step = 2.0 * self.omega(shift);
        self.guard(u, &[self.omega(h)])?;
        self.guard(u + step, &[self.omega(h)])?;
        let a = self.zeta_aux_theta(h, u + step)?;
        let b = self.zeta_aux_theta(h, u)?;
        Ok(a - b - 2.0 * self.eta(shift))
    }
}
