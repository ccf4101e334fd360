//! The registered identities. Each entry compares two independently
//! computed sides; vector-valued sides cover the λ (or pair) variants of one
//! displayed identity at once.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Exclusion, IdentitySpec, Registry, Site, DEFAULT_TOL, PARTIAL_FRACTION_TOL, POLE_GUARD};
use crate::aux_zeta::{QForm, ZetaRoute, PARTIAL_FRACTION_RADIUS};
use crate::error::Result;
use crate::jacobi::aligned_sqrt;
use crate::lattice::HalfPeriod;
use crate::theta::{theta_dlog, ThetaIndex};
use crate::weierstrass::Weierstrass;
use crate::zeta_diff::DeltaRoute;

type C = Complex64;
type H = HalfPeriod;
type V = Result<Vec<C>>;

const ONE: C = C::new(1.0, 0.0);

/// (λ, μ, ν) for λ = 1, 2, 3 with (μ, ν) in cyclic order.
fn cyclic() -> [(H, H, H); 3] {
    H::ALL.map(|h| {
        let (m, n) = h.others();
        (h, m, n)
    })
}

/// The six ordered pairs (λ, μ) with the remaining index ν.
fn pairs() -> Vec<(H, H, H)> {
    let mut v = Vec::with_capacity(6);
    for a in H::ALL {
        for b in H::ALL {
            if a != b {
                v.push((a, b, H::third(a, b).expect("distinct")));
            }
        }
    }
    v
}

fn each<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<Vec<C>>) -> V {
    let mut out = Vec::new();
    for t in items {
        out.extend(f(t)?);
    }
    Ok(out)
}

/// All evaluations at one point.
struct At<'a> {
    w: &'a Weierstrass,
    u: C,
}

impl<'a> At<'a> {
    fn e(&self, h: H) -> C {
        self.w.e(h)
    }

    fn wp(&self) -> Result<C> {
        self.w.wp(self.u)?.value_at(self.u)
    }

    fn wp1(&self) -> Result<C> {
        self.w.wp_prime(self.u)?.value_at(self.u)
    }

    fn wp2(&self) -> Result<C> {
        self.w.wp_second(self.u)?.value_at(self.u)
    }

    fn zeta(&self) -> Result<C> {
        self.w.zeta(self.u)?.value_at(self.u)
    }

    fn sigma(&self) -> Result<C> {
        self.w.sigma(self.u)
    }

    fn sig(&self, h: H) -> Result<C> {
        self.w.sigma_aux(h, self.u)
    }

    fn z(&self, h: H) -> Result<C> {
        self.zr(h, ZetaRoute::Theta)
    }

    fn zr(&self, h: H, r: ZetaRoute) -> Result<C> {
        self.w.zeta_aux(h, self.u, r)?.value_at(self.u)
    }

    fn d(&self, h: H) -> Result<C> {
        self.dr(h, DeltaRoute::ZetaDiff)
    }

    fn dr(&self, h: H, r: DeltaRoute) -> Result<C> {
        self.w.delta(h, self.u, r)?.value_at(self.u)
    }

    fn d2(&self, a: H, b: H) -> Result<C> {
        self.d2r(a, b, DeltaRoute::ZetaDiff)
    }

    fn d2r(&self, a: H, b: H, r: DeltaRoute) -> Result<C> {
        self.w.delta2(a, b, self.u, r)?.value_at(self.u)
    }

    fn dp(&self, h: H) -> Result<C> {
        self.w.delta_prime(h, self.u)?.value_at(self.u)
    }

    fn d2p(&self, a: H, b: H) -> Result<C> {
        self.w.delta2_prime(a, b, self.u)?.value_at(self.u)
    }

    fn wp_at(&self, x: C) -> Result<C> {
        self.w.wp(x)?.value_at(x)
    }

    fn zeta_at(&self, x: C) -> Result<C> {
        self.w.zeta(x)?.value_at(x)
    }

    /// `(1/2ω1) θ′/θ` of theta `idx` at `v = u/2ω1`.
    fn theta_dlog(&self, idx: ThetaIndex) -> Result<C> {
        let l = self.w.lattice();
        let w1 = l.omega1;
        Ok(theta_dlog(idx, self.u / (2.0 * w1), l.tau, self.w.cfg())? / (2.0 * w1))
    }

    /// Derivative by the Cauchy integral on a circle a quarter of the pole guard wide.
    fn deriv(&self, f: impl Fn(C) -> Result<C>) -> Result<C> {
        const N: usize = 32;
        let r = 0.25 * POLE_GUARD * self.w.lattice().min_period();
        let mut acc = C::default();
        for k in 0..N {
            let e = C::from_polar(1.0, 2.0 * PI * k as f64 / N as f64);
            acc += f(self.u + r * e)? / e;
        }
        Ok(acc / (N as f64 * r))
    }

    /// `℘′/(℘ − e_λ)`, the derivative of `log(℘ − e_λ)`, with ℘′ taken
    /// numerically from ℘.
    fn dlog_wp_minus_e(&self) -> Result<[C; 3]> {
        let p1 = self.deriv(|x| self.wp_at(x))?;
        let r = H::ALL.map(|h| self.sig(h).and_then(|s| Ok(s / self.sigma()?)));
        let mut out = [C::default(); 3];
        for h in H::ALL {
            let q = r[h.index()].clone()?;
            out[h.index()] = p1 / (q * q);
        }
        Ok(out)
    }
}

struct Catalog {
    reg: Registry,
    suite: Vec<IdentitySpec>,
}

impl Catalog {
    fn add<L, R>(&mut self, name: &str, arity: usize, tol: f64, exclusions: Vec<Exclusion>, lhs: L, rhs: R)
    where
        L: Fn(&Weierstrass, &[C]) -> V + Send + Sync + 'static,
        R: Fn(&Weierstrass, &[C]) -> V + Send + Sync + 'static,
    {
        let (l, r) = (format!("{name}.lhs"), format!("{name}.rhs"));
        self.reg.insert(l.clone(), Arc::new(lhs));
        self.reg.insert(r.clone(), Arc::new(rhs));
        self.suite.push(IdentitySpec {
            name: name.to_string(),
            arity,
            lhs: l,
            rhs: r,
            tol,
            exclusions,
        });
    }

    fn one_tol<L, R>(&mut self, name: &str, tol: f64, lhs: L, rhs: R)
    where
        L: Fn(&At) -> V + Send + Sync + 'static,
        R: Fn(&At) -> V + Send + Sync + 'static,
    {
        self.add(
            name,
            1,
            tol,
            Exclusion::all_sites(1, 0),
            move |w, p| lhs(&At { w, u: p[0] }),
            move |w, p| rhs(&At { w, u: p[0] }),
        );
    }

    fn one<L, R>(&mut self, name: &str, lhs: L, rhs: R)
    where
        L: Fn(&At) -> V + Send + Sync + 'static,
        R: Fn(&At) -> V + Send + Sync + 'static,
    {
        self.one_tol(name, DEFAULT_TOL, lhs, rhs);
    }
}

fn build() -> Catalog {
    let mut c = Catalog {
        reg: Registry::new(),
        suite: Vec::new(),
    };
    auxiliary_zeta(&mut c);
    first_kind(&mut c);
    second_kind(&mut c);
    constants(&mut c);
    integrals(&mut c);
    jacobian(&mut c);
    two_point(&mut c);
    c
}

pub fn default_registry() -> Registry {
    build().reg
}

/// Every registered identity in a fixed order.
pub fn default_suite() -> Vec<IdentitySpec> {
    build().suite
}

fn auxiliary_zeta(c: &mut Catalog) {
    c.one(
        "zeta_aux_shift_vs_theta",
        |a| each(H::ALL, |h| Ok(vec![a.zr(h, ZetaRoute::Shift)?])),
        |a| each(H::ALL, |h| Ok(vec![a.z(h)?])),
    );
    for (form, tag) in [(QForm::Exp, "exp"), (QForm::Cos, "cos")] {
        for h in H::ALL {
            c.one(
                &format!("prop23_{tag}_zeta{}", h.number()),
                move |a| Ok(vec![a.w.zeta_aux_qseries(h, a.u, form)?]),
                move |a| Ok(vec![a.z(h)?]),
            );
        }
    }
    c.one_tol(
        "zeta_aux_partial_fraction",
        PARTIAL_FRACTION_TOL,
        |a| {
            each(H::ALL, |h| {
                Ok(vec![a.w.zeta_aux_partial_fraction(h, a.u, PARTIAL_FRACTION_RADIUS)?])
            })
        },
        |a| each(H::ALL, |h| Ok(vec![a.z(h)?])),
    );
    // ζ_λ(u + 2ω_μ) = ζ_λ(u) + 2η_μ without argument reduction
    c.one(
        "zeta_aux_quasi_periodicity",
        |a| {
            each(pairs_with_diagonal(), |(h, s)| {
                let base = a.z(h)? + 2.0 * a.w.eta(s);
                Ok(vec![base + a.w.zeta_aux_quasiperiod_check(h, s, a.u)?])
            })
        },
        |a| each(pairs_with_diagonal(), |(h, s)| Ok(vec![a.z(h)? + 2.0 * a.w.eta(s)])),
    );
    c.one(
        "zeta_aux_log_derivative_of_sigma",
        |a| each(H::ALL, |h| Ok(vec![a.z(h)?])),
        |a| each(H::ALL, |h| Ok(vec![a.deriv(|x| a.w.sigma_aux(h, x))? / a.sig(h)?])),
    );
    c.one(
        "wp_minus_e_sigma_square",
        |a| each(H::ALL, |h| Ok(vec![a.wp()? - a.e(h)])),
        |a| each(H::ALL, |h| Ok(vec![(a.sig(h)? / a.sigma()?).powi(2)])),
    );
}

fn pairs_with_diagonal() -> Vec<(H, H)> {
    H::ALL.into_iter().flat_map(|a| H::ALL.map(move |b| (a, b))).collect()
}

fn first_kind(c: &mut Catalog) {
    c.one(
        "delta_wp_quotient",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| each(H::ALL, |h| Ok(vec![0.5 * a.wp1()? / (a.wp()? - a.e(h))])),
    );
    c.one(
        "delta_sigma_quotient",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| {
            each(cyclic(), |(l, m, n)| {
                Ok(vec![-a.sig(m)? * a.sig(n)? / (a.sig(l)? * a.sigma()?)])
            })
        },
    );
    c.one(
        "delta_sigma_shifted_quotient",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| {
            each(cyclic(), |(l, m, n)| {
                let s = |x: C| a.w.sigma(x);
                let (wl, wm, wn) = (a.w.omega(l), a.w.omega(m), a.w.omega(n));
                let k = s(wl)? / (s(wm)? * s(wn)?);
                Ok(vec![k * s(a.u + wm)? * s(a.u + wn)? / (s(a.u - wl)? * s(a.u)?)])
            })
        },
    );
    c.one(
        "delta_product_wp",
        |a| each(cyclic(), |(l, m, _)| Ok(vec![a.d(l)? * a.d(m)?])),
        |a| each(cyclic(), |(_, _, n)| Ok(vec![a.wp()? - a.e(n)])),
    );
    c.one(
        "wp_prime_delta_product",
        |a| Ok(vec![a.wp1()?; 2]),
        |a| {
            let z = a.zeta()?;
            let (mut d, mut t) = (2.0 * ONE, 2.0 * ONE);
            for h in H::ALL {
                d *= a.d(h)?;
                t *= a.z(h)? - z;
            }
            Ok(vec![d, t])
        },
    );
    c.one(
        "delta_ratio_sigma_square",
        |a| each(cyclic(), |(l, m, _)| Ok(vec![a.d(l)? / a.d(m)?])),
        |a| each(cyclic(), |(l, m, _)| Ok(vec![(a.sig(m)? / a.sig(l)?).powi(2)])),
    );
    c.one(
        "delta_sigma_square_chain",
        |a| {
            let s = a.sigma()?;
            let mut v = each(H::ALL, |h| Ok(vec![a.d(h)? * a.sig(h)?.powi(2)]))?;
            v.push(a.d(H::One)? * (a.sig(H::One)? * s).powi(2));
            v.push(a.wp1()? * s.powi(4) / 2.0);
            Ok(v)
        },
        |a| {
            let s = a.sigma()?;
            let k = -a.sig(H::One)? * a.sig(H::Two)? * a.sig(H::Three)? / s;
            let dup = -a.w.sigma(2.0 * a.u)? / 2.0;
            Ok(vec![k, k, k, dup, dup])
        },
    );
    c.one(
        "delta_theta_log_derivative",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| {
            each(H::ALL, |h| {
                Ok(vec![a.theta_dlog(h.theta())? - a.theta_dlog(ThetaIndex::Plain)?])
            })
        },
    );
    c.one(
        "delta_theta_quotient",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| each(H::ALL, |h| Ok(vec![a.dr(h, DeltaRoute::ThetaQuotient)?])),
    );
    c.one(
        "delta_prime_closed_form",
        |a| {
            each(cyclic(), |(l, m, n)| {
                let p = a.wp()?;
                let second = 0.5 * (a.wp2()? - 4.0 * (p - a.e(m)) * (p - a.e(n))) / (p - a.e(l));
                let shifted = p - a.wp_at(a.u + a.w.omega(l))?;
                Ok(vec![a.dp(l)?, second, shifted])
            })
        },
        |a| {
            each(H::ALL, |h| {
                let d = a.deriv(|x| a.w.delta(h, x, DeltaRoute::ZetaDiff)?.value_at(x))?;
                Ok(vec![d; 3])
            })
        },
    );
    c.one(
        "delta_log_derivative_zeta",
        |a| each(H::ALL, |h| Ok(vec![a.dp(h)? / a.d(h)?])),
        |a| each(cyclic(), |(l, m, n)| Ok(vec![a.z(m)? + a.z(n)? - a.z(l)? - a.zeta()?])),
    );
    c.one(
        "delta_half_log_derivative_sum",
        |a| {
            each(cyclic(), |(l, m, _)| {
                Ok(vec![0.5 * a.dp(l)? / a.d(l)? + 0.5 * a.dp(m)? / a.d(m)?])
            })
        },
        |a| each(cyclic(), |(_, _, n)| Ok(vec![a.d(n)?])),
    );
    c.one(
        "wp_second_over_prime",
        |a| Ok(vec![a.wp2()? / a.wp1()?; 4]),
        |a| {
            let z = a.zeta()?;
            let (mut logs, mut ds, mut zs, mut shifted) = (C::default(), C::default(), -3.0 * z, -3.0 * z);
            for h in H::ALL {
                logs += a.dp(h)? / a.d(h)?;
                ds += a.d(h)?;
                zs += a.z(h)?;
                shifted += a.zeta_at(a.u + a.w.omega(h))?;
            }
            Ok(vec![logs, ds, zs, shifted])
        },
    );
    c.one(
        "duplication_zeta",
        |a| Ok(vec![a.wp2()? / a.wp1()?]),
        |a| Ok(vec![2.0 * a.zeta_at(2.0 * a.u)? - 4.0 * a.zeta()?]),
    );
    c.one(
        "duplication_wp_squared",
        |a| Ok(vec![(a.wp2()? / a.wp1()?).powi(2)]),
        |a| Ok(vec![4.0 * (a.wp_at(2.0 * a.u)? + 2.0 * a.wp()?)]),
    );
    c.one(
        "delta_root_form",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?])),
        |a| {
            each(cyclic(), |(l, m, n)| {
                let p = a.wp()?;
                let branch = a.sig(m)? * a.sig(n)? / (a.sig(l)? * a.sigma()?);
                Ok(vec![-aligned_sqrt((p - a.e(m)) * (p - a.e(n)) / (p - a.e(l)), branch)])
            })
        },
    );
}

fn second_kind(c: &mut Catalog) {
    c.one(
        "delta2_definition",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?; 2])),
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d(l)? - a.d(m)?, a.z(l)? - a.z(m)?])),
    );
    c.one(
        "delta2_log_sigma_ratio_derivative",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| {
            each(pairs(), |(l, m, _)| {
                let r = |x: C| Ok(a.w.sigma_aux(l, x)? / a.w.sigma_aux(m, x)?);
                Ok(vec![a.deriv(r)? / r(a.u)?])
            })
        },
    );
    c.one(
        "delta2_wp_quotient",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| {
            each(pairs(), |(l, m, _)| {
                let p = a.wp()?;
                Ok(vec![(a.e(l) - a.e(m)) / 2.0 * a.wp1()? / ((p - a.e(l)) * (p - a.e(m)))])
            })
        },
    );
    c.one(
        "delta2_sigma_difference",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?; 2])),
        |a| {
            each(pairs(), |(l, m, n)| {
                let (sl, sm, sn, s) = (a.sig(l)?, a.sig(m)?, a.sig(n)?, a.sigma()?);
                Ok(vec![
                    sl * sn / (sm * s) - sm * sn / (sl * s),
                    sn / s * (sl / sm - sm / sl),
                ])
            })
        },
    );
    c.one(
        "delta2_theta_forms",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?; 2])),
        |a| {
            each(pairs(), |(l, m, _)| {
                let logs = a.theta_dlog(l.theta())? - a.theta_dlog(m.theta())?;
                let quotients = a.dr(l, DeltaRoute::ThetaQuotient)? - a.dr(m, DeltaRoute::ThetaQuotient)?;
                Ok(vec![logs, quotients])
            })
        },
    );
    c.one(
        "delta2_root_form",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?; 2])),
        |a| {
            each(pairs(), |(l, m, n)| {
                let p = a.wp()?;
                let branch = a.sig(n)? * a.sigma()? / (a.sig(l)? * a.sig(m)?);
                let root = aligned_sqrt((p - a.e(n)) / ((p - a.e(l)) * (p - a.e(m))), branch);
                let k = a.e(m) - a.e(l);
                Ok(vec![k * root, k * branch])
            })
        },
    );
    c.one(
        "delta2_sigma_form",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2r(l, m, DeltaRoute::SigmaQuotient)?])),
    );
    c.one(
        "delta2_delta_product_constant",
        |a| {
            each(pairs(), |(l, m, n)| {
                Ok(vec![a.d2(l, m)? * a.d(n)?, a.d2(l, m)? * a.d(n)?, a.e(l) - a.e(m)])
            })
        },
        |a| {
            each(pairs(), |(l, m, n)| {
                let s = |x: C| a.w.sigma(x);
                let (wl, wm, wn) = (a.w.omega(l), a.w.omega(m), a.w.omega(n));
                let den = (s(wl)? * s(wm)?).powi(2);
                let second = s(wm - wl)? * s(wm + wl)? / den;
                Ok(vec![s(wl - wm)? * s(wn)? / den, second, second])
            })
        },
    );
    c.one(
        "eq14_delta2_times_delta_constant",
        |a| each(cyclic(), |(l, _, n)| Ok(vec![1.0 / a.d(n)?, a.d(l)?, a.d(l)?])),
        |a| {
            each(cyclic(), |(l, m, n)| {
                let k = a.e(m) - a.e(n);
                Ok(vec![
                    a.d2(l, m)? / (a.e(l) - a.e(m)),
                    k / a.d2(m, n)?,
                    k / (a.d(m)? - a.d(n)?),
                ])
            })
        },
    );
    c.one(
        "delta2_times_delta",
        |a| {
            let z = a.zeta()?;
            each(pairs(), |(l, m, n)| {
                Ok(vec![a.d2(l, m)? * a.d(n)?, (a.z(l)? - a.z(m)?) * (a.z(n)? - z)])
            })
        },
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.e(l) - a.e(m); 2])),
    );
    c.one(
        "sigma_square_identity",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.sig(l)?.powi(2) - a.sig(m)?.powi(2)])),
        |a| each(pairs(), |(l, m, _)| Ok(vec![-(a.e(l) - a.e(m)) * a.sigma()?.powi(2)])),
    );
    c.one(
        "delta2_product_wp",
        |a| {
            each(pairs(), |(l, m, n)| {
                let v = (a.e(l) - a.e(n)) * (a.e(m) - a.e(n)) / (a.d2(l, n)? * a.d2(m, n)?);
                Ok(vec![v; 2])
            })
        },
        |a| {
            each(pairs(), |(_, _, n)| {
                Ok(vec![a.wp()? - a.e(n), (a.sig(n)? / a.sigma()?).powi(2)])
            })
        },
    );
    c.one(
        "delta2_ratio_sigma_square",
        |a| {
            each(pairs(), |(l, m, n)| {
                Ok(vec![a.d2(l, n)? / (a.e(l) - a.e(n)) * (a.e(m) - a.e(n)) / a.d2(m, n)?])
            })
        },
        |a| each(pairs(), |(l, m, _)| Ok(vec![(a.sig(m)? / a.sig(l)?).powi(2)])),
    );
    c.one(
        "delta2_triple_product",
        |a| {
            let (e1, e2, e3) = (a.e(H::One), a.e(H::Two), a.e(H::Three));
            Ok(vec![2.0 * (e1 - e2) * (e2 - e3) * (e3 - e1) / a.wp1()?; 3])
        },
        |a| {
            let (d1, d2, d3) = (a.d(H::One)?, a.d(H::Two)?, a.d(H::Three)?);
            let (z1, z2, z3) = (a.z(H::One)?, a.z(H::Two)?, a.z(H::Three)?);
            let pr = a.d2(H::One, H::Two)? * a.d2(H::Two, H::Three)? * a.d2(H::Three, H::One)?;
            Ok(vec![
                pr,
                (d1 - d2) * (d2 - d3) * (d3 - d1),
                (z1 - z2) * (z2 - z3) * (z3 - z1),
            ])
        },
    );
    c.one(
        "delta2_theta_prefactor_form",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| {
            let w = a.w;
            let nw = w.nullwerte();
            let t =
                |x: ThetaIndex| crate::theta::theta_eval(x, a.u / (2.0 * w.lattice().omega1), w.lattice().tau, w.cfg());
            each(pairs(), |(l, m, n)| {
                let (il, im, i_n) = (l.theta(), m.theta(), n.theta());
                let pre =
                    (a.e(m) - a.e(l)) * 2.0 * w.lattice().omega1 * nw.get(il) * nw.get(im) / (nw.get(i_n) * nw.d1);
                Ok(vec![pre * t(i_n)? * t(ThetaIndex::Plain)? / (t(il)? * t(im)?)])
            })
        },
    );
    c.one(
        "delta2_theta_simplified",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2r(l, m, DeltaRoute::ThetaQuotient)?])),
    );
    c.one(
        "delta2_log_derivative_relations",
        |a| {
            each(pairs(), |(l, m, _)| {
                let r = |x: H, y: H| Ok::<_, crate::Error>(a.d2p(x, y)? / a.d2(x, y)?);
                Ok(vec![
                    a.dp(l)? / a.d(l)?,
                    r(l, m)?,
                    (a.e(m) - a.e(l)) / a.d2(l, m)?,
                    a.d2p(l, m)?,
                ])
            })
        },
        |a| {
            let z = a.zeta()?;
            each(pairs(), |(l, m, n)| {
                let r = |x: H, y: H| Ok::<_, crate::Error>(a.d2p(x, y)? / a.d2(x, y)?);
                Ok(vec![
                    -r(m, n)?,
                    z + a.z(n)? - a.z(l)? - a.z(m)?,
                    0.5 * r(l, n)? + 0.5 * r(m, n)?,
                    a.wp_at(a.u + a.w.omega(m))? - a.wp_at(a.u + a.w.omega(l))?,
                ])
            })
        },
    );
    c.one(
        "wp_second_over_prime_delta2",
        |a| Ok(vec![-a.wp2()? / a.wp1()?; 4]),
        |a| {
            let z = a.zeta()?;
            let (mut logs, mut quot, mut zs, mut shifted) = (C::default(), C::default(), 3.0 * z, 3.0 * z);
            for (l, m, _) in cyclic() {
                logs += a.d2p(l, m)? / a.d2(l, m)?;
                quot += (a.e(m) - a.e(l)) / a.d2(l, m)?;
                zs -= a.z(l)?;
                shifted -= a.zeta_at(a.u + a.w.omega(l))?;
            }
            Ok(vec![logs, quot, zs, shifted])
        },
    );
    c.one(
        "delta2_wp_prime_quotient",
        |a| each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?])),
        |a| {
            each(pairs(), |(l, m, n)| {
                Ok(vec![2.0 * (a.e(l) - a.e(m)) * (a.wp()? - a.e(n)) / a.wp1()?])
            })
        },
    );
    c.one(
        "delta2_prime_closed_form",
        |a| {
            each(pairs(), |(l, m, _)| {
                let d = a.deriv(|x| a.w.delta2(l, m, x, DeltaRoute::ZetaDiff)?.value_at(x))?;
                Ok(vec![d; 4])
            })
        },
        |a| {
            let g2 = a.w.constants().g2;
            each(pairs(), |(l, m, n)| {
                let (p, el, em, en) = (a.wp()?, a.e(l), a.e(m), a.e(n));
                let k = el - em;
                Ok(vec![
                    k * ((el - en) / (el - p) + (em - en) / (em - p) - 1.0),
                    k * (g2 / 4.0 + 2.0 * el * em + 2.0 * en * p - p * p) / ((p - el) * (p - em)),
                    2.0 * k * (1.0 - a.wp2()? / (4.0 * (p - el) * (p - em))),
                    a.d2p(l, m)?,
                ])
            })
        },
    );
}

/// `v + |e1 − e3|^weight` componentwise. e2 vanishes on the square lattice,
/// g3 there and g2 on the rhombic one, so these sides are compared against
/// the lattice scale instead of their own size.
fn offset(w: &Weierstrass, v: Vec<C>, weight: i32) -> Vec<C> {
    let s = (w.e(H::One) - w.e(H::Three)).norm().powi(weight);
    v.into_iter().map(|x| x + s).collect()
}

fn constants(c: &mut Catalog) {
    c.one(
        "half_period_differences_theta",
        |a| {
            let nw = a.w.nullwerte();
            let k = (PI / (2.0 * a.w.lattice().omega1)).powi(2);
            each([(H::One, H::Two), (H::One, H::Three), (H::Two, H::Three)], |(l, m)| {
                let n = H::third(l, m)?;
                Ok(vec![k * nw.get(n.theta()).powi(4)])
            })
        },
        |a| {
            each([(H::One, H::Two), (H::One, H::Three), (H::Two, H::Three)], |(l, m)| {
                let n = H::third(l, m)?;
                Ok(vec![a.d2(l, m)? * a.d(n)?])
            })
        },
    );
    c.one(
        "e_from_deltas",
        |a| Ok(offset(a.w, each(H::ALL, |h| Ok(vec![a.e(h); 2]))?, 1)),
        |a| {
            let v = each(cyclic(), |(l, m, n)| {
                let (dl, dm, dn) = (a.d(l)?, a.d(m)?, a.d(n)?);
                Ok(vec![
                    (a.d2(l, m)? * dn + a.d2(l, n)? * dm) / 3.0,
                    (dl * dm + dl * dn - 2.0 * dm * dn) / 3.0,
                ])
            })?;
            Ok(offset(a.w, v, 1))
        },
    );
    c.one(
        "g2_from_deltas",
        |a| Ok(offset(a.w, vec![a.w.constants().g2; 3], 2)),
        |a| {
            let (d1, d2, d3) = (a.d(H::One)?, a.d(H::Two)?, a.d(H::Three)?);
            let (d12, d23, d31) = (a.d2(H::One, H::Two)?, a.d2(H::Two, H::Three)?, a.d2(H::Three, H::One)?);
            let k = 2.0 / 3.0;
            let sq = |x: C| x * x;
            let v = vec![
                k * (sq(a.d2(H::Three, H::Two)? * d1) + sq(a.d2(H::One, H::Three)? * d2) + sq(d12 * d3)),
                k * (sq(d12 * d3) + sq(d23 * d1) + sq(d31 * d2)),
                2.0 * k * (sq(d1 * d2) + sq(d2 * d3) + sq(d3 * d1) - d1 * d2 * d3 * (d1 + d2 + d3)),
            ];
            Ok(offset(a.w, v, 2))
        },
    );
    c.one(
        "g3_from_deltas",
        |a| Ok(offset(a.w, vec![a.w.constants().g3; 2], 3)),
        |a| {
            let d = |h: H| a.d(h);
            let dd = |x: H, y: H| a.d2(x, y);
            let (o, t, r) = (H::One, H::Two, H::Three);
            let first = (dd(o, t)? * d(r)? + dd(o, r)? * d(t)?)
                * (dd(t, o)? * d(r)? + dd(t, r)? * d(o)?)
                * (dd(r, t)? * d(o)? + dd(r, o)? * d(t)?);
            // the same product started from λ = 2
            let (l, m, n) = (t, r, o);
            let second = (dd(l, m)? * d(n)? + dd(l, n)? * d(m)?)
                * (dd(m, n)? * d(l)? + dd(m, l)? * d(n)?)
                * (dd(n, l)? * d(m)? + dd(n, m)? * d(l)?);
            Ok(offset(a.w, vec![4.0 / 27.0 * first, 4.0 / 27.0 * second], 3))
        },
    );
    c.one(
        "discriminant_from_deltas",
        |a| {
            let k = a.w.constants();
            Ok(vec![k.disc, k.disc, k.g2.powi(3) - 27.0 * k.g3 * k.g3])
        },
        |a| {
            let (d1, d2, d3) = (a.d(H::One)?, a.d(H::Two)?, a.d(H::Three)?);
            let pr = a.d2(H::One, H::Two)? * a.d2(H::Two, H::Three)? * a.d2(H::Three, H::One)?;
            let base = d1 * d2 * d3;
            let v = 16.0 * (base * pr).powi(2);
            Ok(vec![v, 16.0 * (base * (d1 - d2) * (d2 - d3) * (d3 - d1)).powi(2), v])
        },
    );
    c.one(
        "moduli_from_deltas",
        |a| {
            let k = a.w.constants();
            Ok(vec![k.ksq, k.ksq, k.kpsq, k.kpsq])
        },
        |a| {
            let (o, t, r) = (H::One, H::Two, H::Three);
            let z = a.zeta()?;
            let (z1, z2, z3) = (a.z(o)?, a.z(t)?, a.z(r)?);
            let den = a.d(t)? * a.d2(o, r)?;
            Ok(vec![
                a.d(o)? * a.d2(t, r)? / den,
                (z1 - z) * (z2 - z3) / ((z2 - z) * (z1 - z3)),
                a.d(r)? * a.d2(o, t)? / den,
                (z3 - z) * (z1 - z2) / ((z2 - z) * (z1 - z3)),
            ])
        },
    );
}

/// Antiderivatives checked by differentiating the logarithmic side.
fn integrals(c: &mut Catalog) {
    c.one(
        "integral_delta_logarithms",
        |a| {
            let mut v = each(H::ALL, |h| Ok(vec![a.d(h)?]))?;
            v.extend(each(pairs(), |(l, m, _)| Ok(vec![a.d2(l, m)?]))?);
            v.extend(each(cyclic(), |(l, m, n)| {
                let p = a.wp()?;
                let branch = a.sig(m)? * a.sig(n)? / (a.sig(l)? * a.sigma()?);
                Ok(vec![aligned_sqrt((p - a.e(m)) * (p - a.e(n)) / (p - a.e(l)), branch)])
            })?);
            v.extend(each(pairs(), |(l, m, n)| {
                let p = a.wp()?;
                let branch = a.sig(n)? * a.sigma()? / (a.sig(l)? * a.sig(m)?);
                Ok(vec![aligned_sqrt((p - a.e(n)) / ((p - a.e(l)) * (p - a.e(m))), branch)])
            })?);
            Ok(v)
        },
        |a| {
            let g = a.dlog_wp_minus_e()?;
            let at = |h: H| g[h.index()];
            let mut v: Vec<C> = H::ALL.iter().map(|&h| 0.5 * at(h)).collect();
            v.extend(pairs().into_iter().map(|(l, m, _)| 0.5 * (at(l) - at(m))));
            v.extend(cyclic().into_iter().map(|(l, _, _)| -0.5 * at(l)));
            v.extend(
                pairs()
                    .into_iter()
                    .map(|(l, m, _)| (at(l) - at(m)) / (2.0 * a.w.e_diff(m, l))),
            );
            Ok(v)
        },
    );
    c.one(
        "integral_reciprocal_deltas",
        |a| {
            let mut v = each(H::ALL, |h| Ok(vec![1.0 / a.d(h)?]))?;
            v.extend(each(pairs(), |(l, m, _)| Ok(vec![1.0 / a.d2(l, m)?]))?);
            Ok(v)
        },
        |a| {
            let g = a.dlog_wp_minus_e()?;
            let at = |h: H| g[h.index()];
            let mut v: Vec<C> = cyclic()
                .into_iter()
                .map(|(_, m, n)| (at(m) - at(n)) / (2.0 * a.w.e_diff(m, n)))
                .collect();
            v.extend(pairs().into_iter().map(|(l, m, n)| at(n) / (2.0 * a.w.e_diff(l, m))));
            Ok(v)
        },
    );
    c.one(
        "integral_wp_over_wp_prime",
        |a| {
            let (p, p1) = (a.wp()?, a.wp1()?);
            let mut v: Vec<C> = pairs().into_iter().map(|(_, _, n)| (p - a.e(n)) / p1).collect();
            v.push(p / p1);
            Ok(v)
        },
        |a| {
            let g = a.dlog_wp_minus_e()?;
            let at = |h: H| g[h.index()];
            let ed = |x: H, y: H| a.w.e_diff(x, y);
            let mut v: Vec<C> = pairs()
                .into_iter()
                .map(|(l, m, _)| (at(l) - at(m)) / (4.0 * ed(l, m)))
                .collect();
            let (l, m, n) = (H::One, H::Two, H::Three);
            v.push(
                (at(l) - at(m)) / (12.0 * ed(l, m))
                    + (at(m) - at(n)) / (12.0 * ed(m, n))
                    + (at(n) - at(l)) / (12.0 * ed(n, l)),
            );
            Ok(v)
        },
    );
    // Near a lattice point the three terms cancel down to O(u⁴), so the
    // rounding error is amplified by about 1/(|e_λ − e_μ|·|u|⁴).
    c.one(
        "integral_reciprocal_wp_prime",
        |a| {
            let p1 = a.wp1()?;
            Ok(vec![1.0 / p1; 2])
        },
        |a| {
            let g = a.dlog_wp_minus_e()?;
            let at = |h: H| g[h.index()];
            let ed = |x: H, y: H| a.w.e_diff(x, y);
            let (l, m, n) = (H::One, H::Two, H::Three);
            Ok(vec![
                (at(l) - at(n)) / (4.0 * ed(l, m) * ed(l, n)) - (at(m) - at(n)) / (4.0 * ed(l, m) * ed(m, n)),
                at(l) / (4.0 * ed(l, m) * ed(l, n))
                    + at(m) / (4.0 * ed(m, n) * ed(m, l))
                    + at(n) / (4.0 * ed(n, l) * ed(n, m)),
            ])
        },
    );
}

fn jacobian(c: &mut Catalog) {
    c.one(
        "jacobi_square_roots",
        |a| {
            let rows = a.w.jacobi_quotient_rows(a.u)?;
            Ok(rows
                .iter()
                .flat_map(|[lsq, msq, _, r]| [aligned_sqrt(*lsq, *r), aligned_sqrt(*msq, *r), *r])
                .collect())
        },
        |a| {
            Ok(a.w
                .jacobi_quotient_rows(a.u)?
                .iter()
                .flat_map(|row| [row[2]; 3])
                .collect())
        },
    );
    c.one(
        "jacobi_squared_quotients",
        |a| {
            Ok(a.w
                .jacobi_quotient_rows(a.u)?
                .iter()
                .flat_map(|row| [row[0], row[1]])
                .collect())
        },
        |a| {
            Ok(a.w
                .jacobi_quotient_rows(a.u)?
                .iter()
                .flat_map(|row| [row[2] * row[2]; 2])
                .collect())
        },
    );
    c.one(
        "delta_jacobi_quotients",
        |a| each(H::ALL, |h| Ok(vec![a.d(h)?; 2])),
        |a| {
            let p = a.w.jacobi_params()?;
            let s = p.scale;
            let x = s * a.u;
            let j = a.w.sn_cn_dn(x)?;
            let shifted = a.w.sn_cn_dn(p.big_k - x)?.sn;
            let jac = [-s * j.dn / (j.sn * j.cn), -s * shifted / j.sn, -s * j.cn * j.dn / j.sn];
            each(cyclic(), |(l, m, n)| {
                Ok(vec![(a.e(m) - a.e(n)) / a.d2(m, n)?, jac[l.index()]])
            })
        },
    );
    c.one(
        "jacobi_pythagorean",
        |a| {
            let p = a.w.jacobi_params()?;
            let j = a.w.sn_cn_dn(p.scale * a.u)?;
            Ok(vec![j.sn * j.sn + j.cn * j.cn, j.dn * j.dn + p.ksq * j.sn * j.sn])
        },
        |_| Ok(vec![ONE; 2]),
    );
    c.one(
        "jacobi_epsilon_derivative",
        |a| Ok(vec![a.deriv(|x| Ok(a.w.jacobi_e_z(x)?.0))?]),
        |a| {
            let s = a.w.jacobi_params()?.scale;
            Ok(vec![s * a.w.sn_cn_dn(s * a.u)?.dn.powi(2)])
        },
    );
    c.one(
        "jacobi_zeta_relation",
        |a| Ok(vec![a.w.jacobi_e_z(a.u)?.1]),
        |a| {
            let p = a.w.jacobi_params()?;
            Ok(vec![a.w.jacobi_e_z(a.u)?.0 - p.big_e / p.big_k * p.scale * a.u])
        },
    );
    let w3 = Site::Half(H::Three);
    c.add(
        "jacobi_pi_derivative",
        2,
        DEFAULT_TOL,
        vec![
            Exclusion::new(1, 0, w3),
            Exclusion::new(0, 1, w3),
            Exclusion::new(1, 1, w3),
            Exclusion::new(1, -1, w3),
        ],
        |w, p| {
            // circle samples are moved onto the sheet of the path-continued centre value
            let a = p[1];
            let centre = w.jacobi_e_z_pi(p[0], a)?.2;
            let at = At { w, u: p[0] };
            let d = at.deriv(|x| {
                let v = w.jacobi_pi_any_branch(x, a)?;
                Ok(v + C::new(0.0, PI * ((centre - v).im / PI).round()))
            })?;
            Ok(vec![d])
        },
        |w, p| {
            let jp = w.jacobi_params()?;
            let s = jp.scale;
            let x = w.sn_cn_dn(s * p[0])?;
            let y = w.sn_cn_dn(s * p[1])?;
            let k2 = jp.ksq;
            let num = k2 * y.sn * y.cn * y.dn * x.sn * x.sn;
            Ok(vec![s * num / (1.0 - k2 * y.sn * y.sn * x.sn * x.sn)])
        },
    );
}

fn two_point(c: &mut Catalog) {
    let o = Site::Origin;
    let basic = vec![
        Exclusion::new(1, 0, o),
        Exclusion::new(0, 1, o),
        Exclusion::new(1, 1, o),
        Exclusion::new(1, -1, o),
    ];
    c.add(
        "frobenius_stickelberger",
        2,
        DEFAULT_TOL,
        basic.clone(),
        |w, p| Ok(vec![w.wp(p[0])?.value_at(p[0])? - w.wp(p[1])?.value_at(p[1])?]),
        |w, p| {
            let (z, v) = (p[0], p[1]);
            Ok(vec![
                w.sigma(z + v)? * w.sigma(v - z)? / (w.sigma(z)? * w.sigma(v)?).powi(2),
            ])
        },
    );
    c.add(
        "zeta_addition",
        2,
        DEFAULT_TOL,
        basic,
        |w, p| Ok(vec![w.zeta(p[0] + p[1])?.value_at(p[0] + p[1])?]),
        |w, p| {
            let (z, v) = (p[0], p[1]);
            let f = |g: &dyn Fn(C) -> Result<crate::EvalResult>, x: C| g(x)?.value_at(x);
            let zeta = |x| w.zeta(x);
            let wp = |x| w.wp(x);
            let wp1 = |x| w.wp_prime(x);
            let q = 0.5 * (f(&wp1, z)? - f(&wp1, v)?) / (f(&wp, z)? - f(&wp, v)?);
            Ok(vec![f(&zeta, z)? + f(&zeta, v)? + q])
        },
    );
    let mut three = Exclusion::all_sites(1, 0);
    three.extend(Exclusion::all_sites(0, 1));
    three.extend([Exclusion::new(1, 1, o), Exclusion::new(1, -1, o)]);
    // b = ω2, c = ω3 fixed, u and a sampled
    c.add(
        "sigma_three_term",
        2,
        DEFAULT_TOL,
        three,
        |w, p| {
            let s = |x: C| w.sigma(x);
            let (u, a) = (p[0], p[1]);
            let (b, cc) = (w.omega(H::Two), w.omega(H::Three));
            let t1 = s(u + a)? * s(u - a)? * s(b + cc)? * s(b - cc)?;
            let t2 = s(u + b)? * s(u - b)? * s(cc + a)? * s(cc - a)?;
            Ok(vec![t1 + t2])
        },
        |w, p| {
            let s = |x: C| w.sigma(x);
            let (u, a) = (p[0], p[1]);
            let (b, cc) = (w.omega(H::Two), w.omega(H::Three));
            Ok(vec![-s(u + cc)? * s(u - cc)? * s(a + b)? * s(a - b)?])
        },
    );
}
