//! Zeta differences `Δ_λ = ζ_λ − ζ` and `Δ_{λ,μ} = ζ_λ − ζ_μ`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::HalfPeriod;
use crate::theta::ThetaIndex;
use crate::weierstrass::{EvalResult, Status, Weierstrass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaRoute {
    ZetaDiff,
    WpQuotient,
    SigmaQuotient,
    ThetaQuotient,
}

impl DeltaRoute {
    pub const ALL: [DeltaRoute; 4] = [
        DeltaRoute::ZetaDiff,
        DeltaRoute::WpQuotient,
        DeltaRoute::SigmaQuotient,
        DeltaRoute::ThetaQuotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeltaRoute::ZetaDiff => "zeta-diff",
            DeltaRoute::WpQuotient => "wp-quotient",
            DeltaRoute::SigmaQuotient => "sigma-quotient",
            DeltaRoute::ThetaQuotient => "theta-quotient",
        }
    }
}

impl FromStr for DeltaRoute {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DeltaRoute::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown delta route '{s}'"))
    }
}

/// Lattice constants recovered from zeta differences at a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaConstants {
    pub e: [Complex64; 3],
    pub g2: Complex64,
    pub g3: Complex64,
    pub disc: Complex64,
    pub ksq: Complex64,
    pub kpsq: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl Weierstrass {
    /// Δ_λ(u); simple poles on `Λ` and `Λ + ω_λ`.
    pub fn delta(&self, h: HalfPeriod, u: Complex64, route: DeltaRoute) -> Result<EvalResult> {
        let st = self.classify(u, &[ZERO, self.omega(h)]);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let u0 = self.lattice().reduce(u).u0;
        let (mu, nu) = h.others();
        let value = match route {
            DeltaRoute::ZetaDiff => {
                self.zeta(u0 + self.omega(h))?.value_at(u)? - self.eta(h) - self.zeta(u0)?.value_at(u)?
            }
            DeltaRoute::WpQuotient => {
                let p = self.wp(u0)?.value_at(u)?;
                let d = self.wp_prime(u0)?.value_at(u)?;
                0.5 * d / (p - self.e(h))
            }
            DeltaRoute::SigmaQuotient => {
                let s = self.sigma_set(u0)?;
                -s.aux(mu) * s.aux(nu) / (s.aux(h) * s.sigma)
            }
            DeltaRoute::ThetaQuotient => {
                let nw = self.nullwerte();
                let t = self.thetas(&ThetaIndex::ALL, u0)?;
                let (a, b, c) = (h.theta(), mu.theta(), nu.theta());
                let pre = nw.get(a) * nw.d1 / (2.0 * self.lattice().omega1 * nw.get(b) * nw.get(c));
                -pre * t.ratio(b, a) * t.ratio(c, ThetaIndex::Plain)
            }
        };
        Ok(EvalResult::finite(value))
    }

    /// Δ′_λ = ((℘ − e_λ)² − (e_λ − e_μ)(e_λ − e_ν)) / (℘ − e_λ).
    pub fn delta_prime(&self, h: HalfPeriod, u: Complex64) -> Result<EvalResult> {
        let st = self.classify(u, &[ZERO, self.omega(h)]);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let (mu, nu) = h.others();
        let r = self.sigma_ratios(u)?[h.index()];
        let p = r * r;
        let c = (self.e(h) - self.e(mu)) * (self.e(h) - self.e(nu));
        Ok(EvalResult::finite(p - c / p))
    }

    /// Δ_{λ,μ}(u); simple poles on `Λ + ω_λ` and `Λ + ω_μ`.
    pub fn delta2(&self, a: HalfPeriod, b: HalfPeriod, u: Complex64, route: DeltaRoute) -> Result<EvalResult> {
        let nu = HalfPeriod::third(a, b)?;
        let st = self.classify(u, &[self.omega(a), self.omega(b)]);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        let u0 = self.lattice().reduce(u).u0;
        // the quotient routes are 0/0 or ∞/∞ on Λ, where Δ_{λ,μ} ~ (e_μ − e_λ)(u − Ω)
        if matches!(
            route,
            DeltaRoute::WpQuotient | DeltaRoute::SigmaQuotient | DeltaRoute::ThetaQuotient
        ) {
            if let Status::AtPole { translate } | Status::NearPole { translate } = self.classify(u, &[ZERO]) {
                return Ok(EvalResult::finite((self.e(b) - self.e(a)) * (u - translate)));
            }
        }
        let value = match route {
            DeltaRoute::ZetaDiff => {
                let za = self.zeta(u0 + self.omega(a))?.value_at(u)?;
                let zb = self.zeta(u0 + self.omega(b))?.value_at(u)?;
                za - zb - self.eta(a) + self.eta(b)
            }
            DeltaRoute::WpQuotient => {
                // 2(e_λ − e_μ)(℘ − e_ν)/℘′, with ℘ − e_ν = (σ_ν/σ)² and ℘′ = −2σ1σ2σ3/σ³
                let r = self.sigma_ratios(u0)?;
                let num = r[nu.index()] * r[nu.index()];
                let den = -2.0 * r[0] * r[1] * r[2];
                if num == ZERO {
                    ZERO
                } else {
                    2.0 * (self.e(a) - self.e(b)) * num / den
                }
            }
            DeltaRoute::SigmaQuotient => {
                let (wa, wb, wn) = (self.omega(a), self.omega(b), self.omega(nu));
                let k = self.sigma(wa - wb)? / (self.sigma(wa)? * self.sigma(wb)?);
                k * self.sigma(u0 - wn)? * self.sigma(u0)? / (self.sigma(u0 + wa)? * self.sigma(u0 + wb)?)
            }
            DeltaRoute::ThetaQuotient => {
                let nw = self.nullwerte();
                let t = self.thetas(&ThetaIndex::ALL, u0)?;
                let (ia, ib, iv) = (a.theta(), b.theta(), nu.theta());
                let eps = self.theta_signs[a.index()][b.index()];
                let pre = eps * PI / (2.0 * self.lattice().omega1) * nw.get(iv) * nw.get(iv);
                pre * t.ratio(iv, ia) * t.ratio(ThetaIndex::Plain, ib)
            }
        };
        Ok(EvalResult::finite(value))
    }

    /// Δ′_{λ,μ} = 2(e_λ − e_μ)(1 − ℘″/(4(℘ − e_λ)(℘ − e_μ))).
    pub fn delta2_prime(&self, a: HalfPeriod, b: HalfPeriod, u: Complex64) -> Result<EvalResult> {
        let nu = HalfPeriod::third(a, b)?;
        let st = self.classify(u, &[self.omega(a), self.omega(b)]);
        if st != Status::Finite {
            return Ok(EvalResult::pole(st));
        }
        if self.classify(u, &[ZERO]) != Status::Finite {
            // ℘(u + ω_μ) − ℘(u + ω_λ) is regular here
            let pb = self.wp(u + self.omega(b))?.value_at(u)?;
            let pa = self.wp(u + self.omega(a))?.value_at(u)?;
            return Ok(EvalResult::finite(pb - pa));
        }
        // with ℘″ = 2Σ(℘ − e_λ)(℘ − e_μ) the bracket reduces to 1 − N/A − N/B
        let r = self.sigma_ratios(u)?;
        let sq = |h: HalfPeriod| r[h.index()] * r[h.index()];
        let (pa, pb, pn) = (sq(a), sq(b), sq(nu));
        Ok(EvalResult::finite((self.e(a) - self.e(b)) * (1.0 - pn / pa - pn / pb)))
    }

    /// e_λ, g2, g3, disc and the moduli from Δ-values at `u` alone.
    pub fn constants_from_deltas(&self, u: Complex64) -> Result<DeltaConstants> {
        let mut sites = vec![ZERO];
        sites.extend(HalfPeriod::ALL.map(|h| self.omega(h)));
        self.guard(u, &sites)?;
        let mut d = [ZERO; 3];
        for h in HalfPeriod::ALL {
            d[h.index()] = self.delta(h, u, DeltaRoute::SigmaQuotient)?.value_at(u)?;
        }
        let d2 = |a: usize, b: usize| d[a] - d[b];
        let e1 = (d2(0, 1) * d[2] + d2(0, 2) * d[1]) / 3.0;
        let e2 = (d2(1, 2) * d[0] + d2(1, 0) * d[2]) / 3.0;
        let e3 = (d2(2, 0) * d[1] + d2(2, 1) * d[0]) / 3.0;
        let g2 = 2.0 / 3.0
            * (d2(2, 1).powi(2) * d[0].powi(2) + d2(0, 2).powi(2) * d[1].powi(2) + d2(0, 1).powi(2) * d[2].powi(2));
        let disc = 16.0 * (d[0] * d[1] * d[2] * d2(0, 1) * d2(1, 2) * d2(2, 0)).powi(2);
        Ok(DeltaConstants {
            e: [e1, e2, e3],
            g2,
            g3: 4.0 * e1 * e2 * e3,
            disc,
            ksq: d[0] * d2(1, 2) / (d[1] * d2(0, 2)),
            kpsq: d[2] * d2(0, 1) / (d[1] * d2(0, 2)),
        })
    }

    /// Fixes the ±1 in the simplified theta form of Δ_{λ,μ} by comparison with
    /// the zeta-difference route at a generic point.
    pub(crate) fn probe_theta_signs(&self) -> Result<[[f64; 3]; 3]> {
        let l = self.lattice();
        let probe = 0.29 * l.omega1 + 0.17 * l.omega3;
        let mut signs = [[1.0; 3]; 3];
        for a in HalfPeriod::ALL {
            for b in HalfPeriod::ALL {
                if a == b {
                    continue;
                }
                let z = self.delta2(a, b, probe, DeltaRoute::ZetaDiff)?.value_at(probe)?;
                let t = self.delta2(a, b, probe, DeltaRoute::ThetaQuotient)?.value_at(probe)?;
                // theta_signs is still all +1 at this point
                signs[a.index()][b.index()] = if (z / t).re < 0.0 { -1.0 } else { 1.0 };
            }
        }
        Ok(signs)
    }

    /// The sign found by [`probe_theta_signs`](Self::probe_theta_signs).
    pub fn theta_sign(&self, a: HalfPeriod, b: HalfPeriod) -> Result<f64> {
        HalfPeriod::third(a, b)?;
        Ok(self.theta_signs[a.index()][b.index()])
    }
}
