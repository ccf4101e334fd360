//! Period lattices and their per-lattice constants.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::theta::{theta_nullwerte, Nullwerte, SeriesConfig, ThetaIndex};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Lattices with a larger nome are rejected.
pub const Q_MAX: f64 = 0.9;

/// One of the three half-periods ω1, ω2, ω3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfPeriod {
    One,
    Two,
    Three,
}

impl HalfPeriod {
    pub const ALL: [HalfPeriod; 3] = [HalfPeriod::One, HalfPeriod::Two, HalfPeriod::Three];

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(HalfPeriod::One),
            2 => Some(HalfPeriod::Two),
            3 => Some(HalfPeriod::Three),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The other two indices in cyclic order, so (λ, μ, ν) is an even permutation.
    pub fn others(self) -> (HalfPeriod, HalfPeriod) {
        match self {
            HalfPeriod::One => (HalfPeriod::Two, HalfPeriod::Three),
            HalfPeriod::Two => (HalfPeriod::Three, HalfPeriod::One),
            HalfPeriod::Three => (HalfPeriod::One, HalfPeriod::Two),
        }
    }

    /// The remaining index of a distinct pair.
    pub fn third(a: HalfPeriod, b: HalfPeriod) -> Result<HalfPeriod> {
        if a == b {
            return Err(Error::IdenticalIndices(a.number()));
        }
        Ok(HalfPeriod::ALL
            .into_iter()
            .find(|&h| h != a && h != b)
            .expect("three indices"))
    }

    /// The theta function whose zeros sit at `u ≡ ω_λ`.
    pub fn theta(self) -> ThetaIndex {
        match self {
            HalfPeriod::One => ThetaIndex::One,
            HalfPeriod::Two => ThetaIndex::Three,
            HalfPeriod::Three => ThetaIndex::Two,
        }
    }
}

impl fmt::Display for HalfPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub omega3: Complex64,
    pub tau: Complex64,
    pub q: Complex64,
}

/// `u = u0 + 2nω1 + 2mω3` with `u0` in the centred fundamental cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    pub u0: Complex64,
    pub n: i64,
    pub m: i64,
}

impl Lattice {
    pub fn new(omega1: Complex64, omega3: Complex64) -> Result<Self> {
        if omega1 == Complex64::new(0.0, 0.0) || omega3 == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroPeriod);
        }
        if !(omega1.is_finite() && omega3.is_finite()) {
            return Err(Error::ZeroPeriod);
        }
        let tau = omega3 / omega1;
        if tau.im.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidPeriodRatio { tau });
        }
        let q = (I * PI * tau).exp();
        if q.norm() > Q_MAX {
            return Err(Error::ConvergencePolicy {
                q_abs: q.norm(),
                q_max: Q_MAX,
            });
        }
        Ok(Lattice {
            omega1,
            omega2: -(omega1 + omega3),
            omega3,
            tau,
            q,
        })
    }

    pub fn from_tau(omega1: Complex64, tau: Complex64) -> Result<Self> {
        Self::new(omega1, omega1 * tau)
    }

    pub fn half_period(&self, h: HalfPeriod) -> Complex64 {
        match h {
            HalfPeriod::One => self.omega1,
            HalfPeriod::Two => self.omega2,
            HalfPeriod::Three => self.omega3,
        }
    }

    /// `Ω = 2nω1 + 2mω3`.
    pub fn point(&self, n: i64, m: i64) -> Complex64 {
        2.0 * (n as f64) * self.omega1 + 2.0 * (m as f64) * self.omega3
    }

    /// Real coordinates `(s, t)` with `u = 2ω1 s + 2ω3 t`.
    pub fn coords(&self, u: Complex64) -> (f64, f64) {
        let w = u / (2.0 * self.omega1);
        let t = w.im / self.tau.im;
        (w.re - t * self.tau.re, t)
    }

    pub fn reduce(&self, u: Complex64) -> Reduction {
        let (s, t) = self.coords(u);
        let n = s.round();
        let m = t.round();
        let mut u0 = u - self.point(n as i64, m as i64);
        // exact lattice points reduce to exactly zero
        if u0.norm() <= 4.0 * f64::EPSILON * u.norm() {
            u0 = Complex64::new(0.0, 0.0);
        }
        Reduction {
            u0,
            n: n as i64,
            m: m as i64,
        }
    }

    /// Closest point of the class `site + Λ` to `u`, and its distance.
    pub fn nearest_translate(&self, u: Complex64, site: Complex64) -> (Complex64, f64) {
        let r = self.reduce(u - site);
        let mut best = (u, f64::INFINITY);
        for a in -1..=1 {
            for b in -1..=1 {
                let p = self.point(a, b);
                let d = (r.u0 - p).norm();
                if d < best.1 {
                    best = (site + self.point(r.n + a, r.m + b), d);
                }
            }
        }
        best
    }

    pub fn min_period(&self) -> f64 {
        (2.0 * self.omega1).norm().min((2.0 * self.omega3).norm())
    }

    /// ω1 real and ω3 purely imaginary.
    pub fn is_rectangular(&self) -> bool {
        let tol = 1e-14 * self.omega1.norm().max(self.omega3.norm());
        self.omega1.im.abs() <= tol && self.omega3.re.abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConstants {
    pub e: [Complex64; 3],
    pub eta: [Complex64; 3],
    pub g2: Complex64,
    pub g3: Complex64,
    pub disc: Complex64,
    pub ksq: Complex64,
    pub kpsq: Complex64,
}

impl LatticeConstants {
    pub fn e(&self, h: HalfPeriod) -> Complex64 {
        self.e[h.index()]
    }

    pub fn eta(&self, h: HalfPeriod) -> Complex64 {
        self.eta[h.index()]
    }

    /// Builds the full set from e-values; η is left at zero.
    pub fn from_e(e: [Complex64; 3]) -> Self {
        let [e1, e2, e3] = e;
        let g2 = -4.0 * (e1 * e2 + e2 * e3 + e3 * e1);
        let g3 = 4.0 * e1 * e2 * e3;
        let disc = 16.0 * ((e1 - e2) * (e2 - e3) * (e3 - e1)).powi(2);
        LatticeConstants {
            e,
            eta: [Complex64::new(0.0, 0.0); 3],
            g2,
            g3,
            disc,
            ksq: (e2 - e3) / (e1 - e3),
            kpsq: (e1 - e2) / (e1 - e3),
        }
    }
}

/// Constants from the theta nullwerte, also returning the nullwerte themselves.
pub fn constants_with_nullwerte(lat: &Lattice, cfg: &SeriesConfig) -> Result<(LatticeConstants, Nullwerte)> {
    cfg.validate()?;
    let nw = theta_nullwerte(lat.tau, cfg)?;
    let c = (PI / (2.0 * lat.omega1)).powi(2);
    // e_λ - e_μ = c Θ^4 with Θ the theta function vanishing at the third half-period
    let d = |a: HalfPeriod, b: HalfPeriod| {
        let third = HalfPeriod::third(a, b).expect("distinct");
        c * nw.get(third.theta()).powi(4)
    };
    use HalfPeriod::*;
    let e12 = d(One, Two);
    let e13 = d(One, Three);
    let e23 = d(Two, Three);
    let e1 = (e12 + e13) / 3.0;
    let e2 = (-e12 + e23) / 3.0;
    let e3 = (-e13 - e23) / 3.0;
    let mut k = LatticeConstants::from_e([e1, e2, e3]);
    k.disc = 16.0 * (e12 * e23 * e13).powi(2);
    k.ksq = e23 / e13;
    k.kpsq = e12 / e13;

    let eta1 = -nw.d3 / (12.0 * lat.omega1 * nw.d1);
    let eta3 = (eta1 * lat.omega3 - I * PI / 2.0) / lat.omega1;
    k.eta = [eta1, -eta1 - eta3, eta3];
    Ok((k, nw))
}

pub fn constants(lat: &Lattice, cfg: &SeriesConfig) -> Result<LatticeConstants> {
    Ok(constants_with_nullwerte(lat, cfg)?.0)
}

/// `(g2, g3)` by direct summation of `60 Σ Ω^-4` and `140 Σ Ω^-6`.
///
/// Points are visited shell by shell over the index box `max(|n|,|m|) <= radius`,
/// keeping only those inside the largest disc contained in the box; a square
/// cut-off leaves an `O(radius^-2)` tail in the `g2` sum that a disc does not.
pub fn eisenstein_invariants(lat: &Lattice, shell_radius: u32) -> (Complex64, Complex64) {
    let r = shell_radius.max(1) as i64;
    let cutoff = disc_radius(lat, r);
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    for shell in 1..=r {
        let mut t4 = Complex64::new(0.0, 0.0);
        let mut t6 = Complex64::new(0.0, 0.0);
        for_shell(shell, |n, m| {
            let w = lat.point(n, m);
            if w.norm() <= cutoff {
                let w2 = w * w;
                let inv4 = (w2 * w2).inv();
                t4 += inv4;
                t6 += inv4 / w2;
            }
        });
        s4 += t4;
        s6 += t6;
    }
    (60.0 * s4, 140.0 * s6)
}

/// Radius of the largest origin-centred disc inside the index box of half-width `r`.
pub(crate) fn disc_radius(lat: &Lattice, r: i64) -> f64 {
    // distance from the origin to the lines s = ±r and t = ±r
    let a = 2.0 * lat.omega1;
    let b = 2.0 * lat.omega3;
    let area = (a.re * b.im - a.im * b.re).abs();
    let rf = r as f64;
    (rf * area / b.norm()).min(rf * area / a.norm())
}

/// Calls `f(n, m)` for every index pair with `max(|n|, |m|) == shell`.
pub(crate) fn for_shell(shell: i64, mut f: impl FnMut(i64, i64)) {
    if shell == 0 {
        f(0, 0);
        return;
    }
    for n in -shell..=shell {
        f(n, shell);
        f(n, -shell);
    }
    for m in -shell + 1..shell {
        f(shell, m);
        f(-shell, m);
    }
}

/// JSON view of a lattice and its constants.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub omega1: Complex64,
    pub omega3: Complex64,
    pub tau: Complex64,
    pub q: Complex64,
    pub e: [Complex64; 3],
    pub eta: [Complex64; 3],
    pub g2: Complex64,
    pub g3: Complex64,
    pub disc: Complex64,
    pub ksq: Complex64,
    pub kpsq: Complex64,
}

impl ConstantsReport {
    pub fn new(lat: &Lattice, k: &LatticeConstants) -> Self {
        ConstantsReport {
            omega1: lat.omega1,
            omega3: lat.omega3,
            tau: lat.tau,
            q: lat.q,
            e: k.e,
            eta: k.eta,
            g2: k.g2,
            g3: k.g3,
            disc: k.disc,
            ksq: k.ksq,
            kpsq: k.kpsq,
        }
    }
}
