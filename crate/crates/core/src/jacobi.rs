//! Jacobian elliptic functions attached to a lattice, with modulus
//! `k² = (e2 − e3)/(e1 − e3)` and argument scale `√(e1 − e3)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::aux_zeta::ZetaRoute;
use crate::error::{Error, Result};
use crate::lattice::HalfPeriod;
use crate::theta::ThetaIndex;
use crate::weierstrass::Weierstrass;
use crate::zeta_diff::DeltaRoute;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiParams {
    pub k: Complex64,
    pub kprime: Complex64,
    pub ksq: Complex64,
    pub kpsq: Complex64,
    #[serde(rename = "K")]
    pub big_k: Complex64,
    #[serde(rename = "E")]
    pub big_e: Complex64,
    pub scale: Complex64,
}

/// `K(k)` and `E(k)` from the arithmetic-geometric mean of `1` and `k′`.
pub fn complete_integrals(ksq: Complex64, kprime: Complex64) -> (Complex64, Complex64) {
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = kprime;
    let mut sum = 0.5 * ksq;
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        if c.norm() <= f64::EPSILON * a.norm() {
            break;
        }
        let an = 0.5 * (a + b);
        let mut bn = (a * b).sqrt();
        if (an - bn).norm() > (an + bn).norm() {
            bn = -bn;
        }
        pow *= 2.0;
        let cn = 0.5 * (a - b);
        sum += pow * cn * cn;
        a = an;
        b = bn;
    }
    let big_k = PI / (2.0 * a);
    (big_k, big_k * (1.0 - sum))
}

/// Values of the Jacobian functions at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnCnDn {
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
}

impl Weierstrass {
    pub fn jacobi_params(&self) -> Result<JacobiParams> {
        let k = self.constants();
        let [e1, e2, e3] = k.e;
        let s = e1.norm().max(e2.norm()).max(e3.norm());
        if (e1 - e2).norm().min((e2 - e3).norm()).min((e1 - e3).norm()) <= 1e-12 * s {
            return Err(Error::DegenerateLattice);
        }
        let kprime = k.kpsq.sqrt();
        let (big_k, big_e) = complete_integrals(k.ksq, kprime);
        Ok(JacobiParams {
            k: k.ksq.sqrt(),
            kprime,
            ksq: k.ksq,
            kpsq: k.kpsq,
            big_k,
            big_e,
            scale: (e1 - e3).sqrt(),
        })
    }

    pub(crate) fn scale(&self) -> Complex64 {
        (self.e(HalfPeriod::One) - self.e(HalfPeriod::Three)).sqrt()
    }

    /// `sn = s·σ/σ3`, `cn = σ1/σ3`, `dn = σ2/σ3` at `u = x/s`, `s = √(e1 − e3)`.
    pub fn sn_cn_dn(&self, x: Complex64) -> Result<SnCnDn> {
        let s = self.scale();
        let u = x / s;
        self.guard(u, &[self.omega(HalfPeriod::Three)])?;
        let nw = *self.nullwerte();
        let t = self.thetas(&ThetaIndex::ALL, u)?;
        let i3 = HalfPeriod::Three.theta();
        let w1 = self.lattice().omega1;
        let q = |h: HalfPeriod| t.ratio(h.theta(), i3) * nw.get(i3) / nw.get(h.theta());
        Ok(SnCnDn {
            sn: s * 2.0 * w1 * nw.get(i3) / nw.d1 * t.ratio(ThetaIndex::Plain, i3),
            cn: q(HalfPeriod::One),
            dn: q(HalfPeriod::Two),
        })
    }

    pub(crate) fn all_deltas(&self, u: Complex64) -> Result<([Complex64; 3], [[Complex64; 3]; 3])> {
        let mut sites = vec![ZERO];
        sites.extend(HalfPeriod::ALL.map(|h| self.omega(h)));
        self.guard(u, &sites)?;
        let mut d = [ZERO; 3];
        let mut d2 = [[ZERO; 3]; 3];
        for a in HalfPeriod::ALL {
            d[a.index()] = self.delta(a, u, DeltaRoute::ZetaDiff)?.value_at(u)?;
            for b in HalfPeriod::ALL {
                if a != b {
                    d2[a.index()][b.index()] = self.delta2(a, b, u, DeltaRoute::ZetaDiff)?.value_at(u)?;
                }
            }
        }
        Ok((d, d2))
    }

    /// The six rows of the square-root identities: Δ-products, e-quotients,
    /// the Jacobian side and the σ-quotient that fixes the branch.
    pub(crate) fn jacobi_quotient_rows(&self, u: Complex64) -> Result<[[Complex64; 4]; 6]> {
        let (d, d2) = self.all_deltas(u)?;
        let p = self.jacobi_params()?;
        let s = p.scale;
        let x = s * u;
        let j = self.sn_cn_dn(x)?;
        let shifted = self.sn_cn_dn(p.big_k - x)?.sn;
        let r = self.sigma_ratios(u)?;
        let e = self.constants().e;
        let (d1, d2_, d3) = (d[0], d[1], d[2]);
        let dd = |a: usize, b: usize| d2[a][b];
        let ed = |a: usize, b: usize| e[a] - e[b];
        Ok([
            [d1 * d2_, ed(0, 2) * ed(1, 2) / (dd(0, 2) * dd(1, 2)), s / j.sn, r[2]],
            [
                d1 * d3,
                ed(0, 1) * ed(2, 1) / (dd(0, 1) * dd(2, 1)),
                s * j.dn / j.sn,
                r[1],
            ],
            [
                d2_ * d3,
                ed(1, 0) * ed(2, 0) / (dd(1, 0) * dd(2, 0)),
                s * j.cn / j.sn,
                r[0],
            ],
            [
                d2_ / d1,
                ed(0, 2) / ed(1, 2) * dd(1, 2) / dd(0, 2),
                shifted,
                r[0] / r[1],
            ],
            [d3 / d2_, ed(1, 0) / ed(2, 0) * dd(2, 0) / dd(1, 0), j.dn, r[1] / r[2]],
            [
                d1 / d3,
                ed(2, 1) / ed(0, 1) * dd(0, 1) / dd(2, 1),
                1.0 / j.cn,
                r[2] / r[0],
            ],
        ])
    }

    /// Residuals of the six square-root identities with roots taken on the
    /// branch of the corresponding σ-quotient.
    pub fn check_square_roots(&self, u: Complex64) -> Result<[f64; 6]> {
        let rows = self.jacobi_quotient_rows(u)?;
        Ok(rows.map(|[lsq, msq, target, reference]| {
            let l = aligned_sqrt(lsq, reference);
            let m = aligned_sqrt(msq, reference);
            rel(l, target).max(rel(m, target)).max(rel(reference, target))
        }))
    }

    /// The same six identities squared; free of branch choices.
    pub fn check_squared_quotients(&self, u: Complex64) -> Result<[f64; 6]> {
        let rows = self.jacobi_quotient_rows(u)?;
        Ok(rows.map(|[lsq, msq, target, _]| {
            let t = target * target;
            rel(lsq, t).max(rel(msq, t))
        }))
    }

    /// Δ_λ against `(e_μ − e_ν)/Δ_{μ,ν}` and the Jacobian quotient.
    pub fn check_delta_quotients(&self, u: Complex64) -> Result<[f64; 3]> {
        let (d, d2) = self.all_deltas(u)?;
        let p = self.jacobi_params()?;
        let s = p.scale;
        let x = s * u;
        let j = self.sn_cn_dn(x)?;
        let shifted = self.sn_cn_dn(p.big_k - x)?.sn;
        let e = self.constants().e;
        let jac = [-s * j.dn / (j.sn * j.cn), -s * shifted / j.sn, -s * j.cn * j.dn / j.sn];
        let mut out = [0.0; 3];
        for h in HalfPeriod::ALL {
            let (mu, nu) = h.others();
            let i = h.index();
            let via_e = (e[mu.index()] - e[nu.index()]) / d2[mu.index()][nu.index()];
            out[i] = rel(d[i], via_e).max(rel(d[i], jac[i]));
        }
        Ok(out)
    }

    /// `(E(s u), Z(s u))` with `s = √(e1 − e3)`.
    pub fn jacobi_e_z(&self, u: Complex64) -> Result<(Complex64, Complex64)> {
        let s = self.scale();
        let z3 = self.zeta_aux(HalfPeriod::Three, u, ZetaRoute::Theta)?.value_at(u)?;
        let e = (z3 + self.e(HalfPeriod::One) * u) / s;
        let z = (z3 - self.eta(HalfPeriod::One) * u / self.lattice().omega1) / s;
        Ok((e, z))
    }

    /// `(E(s u), Z(s u), Π(s u, s a))` with `s = √(e1 − e3)`.
    pub fn jacobi_e_z_pi(&self, u: Complex64, a: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let w3 = self.omega(HalfPeriod::Three);
        let (e, z) = self.jacobi_e_z(u)?;
        if u == ZERO {
            return Ok((e, z, ZERO));
        }
        for p in [u - a, u + a] {
            self.guard(p, &[w3])?;
        }
        let za = self.zeta_aux(HalfPeriod::Three, a, ZetaRoute::Theta)?.value_at(a)?;
        Ok((e, z, 0.5 * self.log_sigma3_ratio(u, a)? + za * u))
    }

    /// `Π(s u, s a)` on an unspecified sheet: the logarithm is taken at `u`
    /// alone, without continuation from the origin. Differs from the value
    /// of [`jacobi_e_z_pi`](Self::jacobi_e_z_pi) by a multiple of `πi`.
    pub fn jacobi_pi_any_branch(&self, u: Complex64, a: Complex64) -> Result<Complex64> {
        let w3 = self.omega(HalfPeriod::Three);
        for p in [u - a, u + a] {
            self.guard(p, &[w3])?;
        }
        let za = self.zeta_aux(HalfPeriod::Three, a, ZetaRoute::Theta)?.value_at(a)?;
        Ok(0.5 * self.log_sigma3_ratio_at(u, a)? + za * u)
    }

    /// A logarithm of `σ3(z − a)/σ3(z + a)`, branch unspecified.
    fn log_sigma3_ratio_at(&self, z: Complex64, a: Complex64) -> Result<Complex64> {
        let idx = HalfPeriod::Three.theta();
        let lo = self.thetas(&[idx], z - a)?;
        let hi = self.thetas(&[idx], z + a)?;
        let (ml, mh) = (lo.mantissa(idx), hi.mantissa(idx));
        if ml.norm() < 1e-300 || mh.norm() < 1e-300 {
            return Err(Error::BranchAmbiguity { point: z });
        }
        let gauss = -2.0 * self.eta(HalfPeriod::One) * z * a / self.lattice().omega1;
        Ok(gauss + lo.log_factor() - hi.log_factor() + (ml / mh).ln())
    }

    /// `log(σ3(u − a)/σ3(u + a))`, continued along `t u`, `t ∈ [0, 1]`, from
    /// its value 0 at `t = 0`.
    fn log_sigma3_ratio(&self, u: Complex64, a: Complex64) -> Result<Complex64> {
        let raw = |t: f64| match self.log_sigma3_ratio_at(t * u, a) {
            Err(Error::BranchAmbiguity { .. }) => Err(Error::BranchAmbiguity { point: u }),
            r => r,
        };
        // None when one step jumps by more than 1, so the path needs refining
        let walk = |steps: usize| -> Result<Option<Complex64>> {
            let mut prev = ZERO;
            for k in 1..=steps {
                let r = raw(k as f64 / steps as f64)?;
                let turns = ((prev - r).im / (2.0 * PI)).round();
                let cur = r + 2.0 * PI * I * turns;
                if (cur - prev).norm() > 1.0 {
                    return Ok(None);
                }
                prev = cur;
            }
            Ok(Some(prev))
        };
        let mut steps = 32usize;
        while steps <= 1 << 16 {
            if let Some(v) = walk(steps)? {
                return Ok(v);
            }
            steps *= 2;
        }
        Err(Error::BranchAmbiguity { point: u })
    }
}

/// `±√z`, whichever is closer to `reference`.
pub fn aligned_sqrt(z: Complex64, reference: Complex64) -> Complex64 {
    let r = z.sqrt();
    if (r - reference).norm() <= (r + reference).norm() {
        r
    } else {
        -r
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::SeriesConfig;
    use crate::weierstrass::tests::{c, generic, lattices, points};

    fn rectangular() -> Vec<Weierstrass> {
        let cfg = SeriesConfig::default();
        [c(0.0, 1.0), c(0.0, 2.0), c(0.0, 0.6), c(0.0, 3.0)]
            .into_iter()
            .map(|t| Weierstrass::from_tau(c(0.5, 0.0), t, cfg).unwrap())
            .collect()
    }

    /// Adaptive Simpson on a real interval for a complex integrand.
    fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> Complex64,
            a: f64,
            b: f64,
            fa: Complex64,
            fm: Complex64,
            fb: Complex64,
            whole: Complex64,
            tol: f64,
            depth: u32,
        ) -> Complex64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).norm() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    #[test]
    fn complete_integrals_at_zero_modulus() {
        let (k, e) = complete_integrals(c(0.0, 0.0), c(1.0, 0.0));
        assert!((k - PI / 2.0).norm() < 1e-15);
        assert!((e - PI / 2.0).norm() < 1e-15);
    }

    #[test]
    fn complete_integrals_complex_modulus_to_full_precision() {
        // reference values computed to 30 digits
        let ksq = c(0.3, 0.25);
        let (k, e) = complete_integrals(ksq, (1.0 - ksq).sqrt());
        let k_ref = c(1.686_729_791_291_935_4, 0.139_598_841_550_476_77);
        let e_ref = c(1.452_324_460_465_457_3, -0.110_887_493_509_645_32);
        assert!((k - k_ref).norm() < 4e-16 * k_ref.norm(), "{k}");
        assert!((e - e_ref).norm() < 4e-16 * e_ref.norm(), "{e}");
    }

    #[test]
    fn complete_integrals_match_quadrature() {
        for w in lattices() {
            let p = w.jacobi_params().unwrap();
            let f = |t: f64| 1.0 / (1.0 - p.ksq * t.sin().powi(2)).sqrt();
            let g = |t: f64| (1.0 - p.ksq * t.sin().powi(2)).sqrt();
            let k = simpson(&f, 0.0, PI / 2.0, 1e-14);
            let e = simpson(&g, 0.0, PI / 2.0, 1e-14);
            assert!((k - p.big_k).norm() < 1e-10, "{} vs {}", k, p.big_k);
            assert!((e - p.big_e).norm() < 1e-10, "{} vs {}", e, p.big_e);
        }
    }

    #[test]
    fn params_invariants() {
        for w in lattices() {
            let p = w.jacobi_params().unwrap();
            assert!((p.k * p.k + p.kprime * p.kprime - 1.0).norm() < 1e-13);
            let d = w.e(HalfPeriod::One) - w.e(HalfPeriod::Three);
            assert!((p.scale * p.scale - d).norm() < 1e-14 * d.norm());
        }
        for w in rectangular() {
            let p = w.jacobi_params().unwrap();
            assert!((p.big_k - p.scale * w.lattice().omega1).norm() < 1e-12);
        }
    }

    #[test]
    fn normalisation_and_parity() {
        let w = generic();
        let j = w.sn_cn_dn(c(0.0, 0.0)).unwrap();
        assert!(j.sn.norm() < 1e-300 && (j.cn - 1.0).norm() < 1e-15 && (j.dn - 1.0).norm() < 1e-15);
        let x = c(0.3, 0.2);
        let a = w.sn_cn_dn(x).unwrap();
        let b = w.sn_cn_dn(-x).unwrap();
        assert!((a.sn + b.sn).norm() < 1e-14 && (a.cn - b.cn).norm() < 1e-14 && (a.dn - b.dn).norm() < 1e-14);
    }

    #[test]
    fn pythagorean_identities_and_derivatives() {
        let h = 1e-5;
        for w in lattices() {
            let p = w.jacobi_params().unwrap();
            for u in points(&w) {
                let x = p.scale * u;
                let j = w.sn_cn_dn(x).unwrap();
                assert!((j.sn * j.sn + j.cn * j.cn - 1.0).norm() < 1e-11);
                assert!((j.dn * j.dn + p.ksq * j.sn * j.sn - 1.0).norm() < 1e-11);
                // sn′ = cn dn, cn′ = −sn dn, dn′ = −k² sn cn
                let jp = w.sn_cn_dn(x + h).unwrap();
                let jm = w.sn_cn_dn(x - h).unwrap();
                let s = (j.sn.norm() + j.cn.norm() + j.dn.norm()).max(1.0);
                assert!(((jp.sn - jm.sn) / (2.0 * h) - j.cn * j.dn).norm() < 1e-6 * s * s);
                assert!(((jp.cn - jm.cn) / (2.0 * h) + j.sn * j.dn).norm() < 1e-6 * s * s);
                assert!(((jp.dn - jm.dn) / (2.0 * h) + p.ksq * j.sn * j.cn).norm() < 1e-6 * s * s);
            }
        }
    }

    #[test]
    fn quarter_period_and_periodicity() {
        for w in rectangular() {
            let p = w.jacobi_params().unwrap();
            let j = w.sn_cn_dn(p.big_k).unwrap();
            assert!((j.sn - 1.0).norm() < 1e-12 && j.cn.norm() < 1e-12);
            let x = c(0.37, 0.11);
            let a = w.sn_cn_dn(x).unwrap().sn;
            let b = w.sn_cn_dn(x + 4.0 * p.big_k).unwrap().sn;
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
        }
    }

    #[test]
    fn square_roots_on_rectangular_lattices() {
        for w in rectangular() {
            for u in points(&w) {
                let r = w.check_square_roots(u).unwrap();
                assert!(r.iter().all(|&x| x < 1e-9), "{u}: {r:?}");
                let sq = w.check_squared_quotients(u).unwrap();
                assert!(sq.iter().all(|&x| x < 1e-9), "{u}: {sq:?}");
                let cr = w.check_delta_quotients(u).unwrap();
                assert!(cr.iter().all(|&x| x < 1e-9), "{u}: {cr:?}");
            }
        }
    }

    #[test]
    fn squared_quotients_everywhere() {
        for w in lattices() {
            for u in points(&w) {
                let sq = w.check_squared_quotients(u).unwrap();
                assert!(sq.iter().all(|&x| x < 1e-9), "{u}: {sq:?}");
            }
        }
    }

    #[test]
    fn e_z_pi_basics() {
        let h = 1e-5;
        for w in lattices() {
            let p = w.jacobi_params().unwrap();
            let (e, z, pi) = w.jacobi_e_z_pi(c(0.0, 0.0), c(0.2, 0.1)).unwrap();
            assert!(e.norm() < 1e-15 && z.norm() < 1e-15);
            assert_eq!(pi, c(0.0, 0.0));
            for u in points(&w) {
                let fe = |x| w.jacobi_e_z_pi(x, c(0.0, 0.0)).unwrap().0;
                let fd = (fe(u + h) - fe(u - h)) / (2.0 * h);
                let dn = w.sn_cn_dn(p.scale * u).unwrap().dn;
                let want = dn * dn * p.scale;
                assert!((fd - want).norm() < 1e-6 * want.norm().max(1.0));
            }
        }
        for w in rectangular() {
            let z = w.jacobi_e_z_pi(w.lattice().omega1, c(0.0, 0.0)).unwrap().1;
            assert!(z.norm() < 1e-9);
        }
    }

    #[test]
    fn pi_matches_quadrature_and_derivative() {
        let w = generic();
        let p = w.jacobi_params().unwrap();
        let l = *w.lattice();
        let a = 0.23 * l.omega1 + 0.11 * l.omega3;
        let ja = w.sn_cn_dn(p.scale * a).unwrap();
        let pref = p.ksq * ja.sn * ja.cn * ja.dn;
        let integrand = |x: Complex64| {
            let s = w.sn_cn_dn(x).unwrap().sn;
            pref * s * s / (1.0 - p.ksq * ja.sn * ja.sn * s * s)
        };
        for u in [
            0.31 * l.omega1 - 0.2 * l.omega3,
            0.6 * l.omega1 + 0.3 * l.omega3,
            c(0.05, -0.4),
        ] {
            let xu = p.scale * u;
            let f = |t: f64| integrand(t * xu) * xu;
            let quad = simpson(&f, 0.0, 1.0, 1e-13);
            let got = w.jacobi_e_z_pi(u, a).unwrap().2;
            assert!((got - quad).norm() < 1e-9, "{u}: {got} vs {quad}");
            let h = 1e-5;
            let fd = (w.jacobi_e_z_pi(u + h, a).unwrap().2 - w.jacobi_e_z_pi(u - h, a).unwrap().2) / (2.0 * h);
            assert!((fd - integrand(xu) * p.scale).norm() < 1e-6);
        }
    }

    #[test]
    fn sn_pole_is_reported() {
        let w = generic();
        assert!(matches!(
            w.sn_cn_dn(w.jacobi_params().unwrap().scale * w.omega(HalfPeriod::Three)),
            Err(Error::PoleProximity { .. })
        ));
    }
}
