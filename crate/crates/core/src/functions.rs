//! Evaluation by name, shared by the command line and the C interface.

use num_complex::Complex64;

use crate::aux_zeta::ZetaRoute;
use crate::error::{Error, Result};
use crate::lattice::HalfPeriod;
use crate::weierstrass::{EvalResult, Status, Weierstrass};
use crate::zeta_diff::DeltaRoute;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteKind {
    None,
    Zeta,
    Delta,
}

#[derive(Debug, Clone, Copy)]
pub struct FnInfo {
    pub name: &'static str,
    /// whether the function takes the second argument `a`
    pub needs_a: bool,
    pub route: RouteKind,
    pub summary: &'static str,
}

const fn f(name: &'static str, route: RouteKind, summary: &'static str) -> FnInfo {
    FnInfo {
        name,
        needs_a: false,
        route,
        summary,
    }
}

use RouteKind::{Delta, None as Plain, Zeta};

pub const FUNCTIONS: &[FnInfo] = &[
    f("wp", Plain, "Weierstrass ℘(u)"),
    f("wp_prime", Plain, "℘′(u)"),
    f("wp_second", Plain, "℘″(u) = 6℘² − g2/2"),
    f("zeta", Plain, "Weierstrass ζ(u)"),
    f("sigma", Plain, "Weierstrass σ(u)"),
    f("sigma1", Plain, "σ1(u)"),
    f("sigma2", Plain, "σ2(u)"),
    f("sigma3", Plain, "σ3(u)"),
    f("zeta1", Zeta, "ζ1(u) = ζ(u + ω1) − η1"),
    f("zeta2", Zeta, "ζ2(u) = ζ(u + ω2) − η2"),
    f("zeta3", Zeta, "ζ3(u) = ζ(u + ω3) − η3"),
    f("delta1", Delta, "Δ1 = ζ1 − ζ"),
    f("delta2", Delta, "Δ2 = ζ2 − ζ"),
    f("delta3", Delta, "Δ3 = ζ3 − ζ"),
    f("delta12", Delta, "Δ12 = ζ1 − ζ2"),
    f("delta13", Delta, "Δ13 = ζ1 − ζ3"),
    f("delta21", Delta, "Δ21 = ζ2 − ζ1"),
    f("delta23", Delta, "Δ23 = ζ2 − ζ3"),
    f("delta31", Delta, "Δ31 = ζ3 − ζ1"),
    f("delta32", Delta, "Δ32 = ζ3 − ζ2"),
    f("delta1_prime", Plain, "Δ1′"),
    f("delta2_prime", Plain, "Δ2′"),
    f("delta3_prime", Plain, "Δ3′"),
    f("delta12_prime", Plain, "Δ12′"),
    f("delta13_prime", Plain, "Δ13′"),
    f("delta21_prime", Plain, "Δ21′"),
    f("delta23_prime", Plain, "Δ23′"),
    f("delta31_prime", Plain, "Δ31′"),
    f("delta32_prime", Plain, "Δ32′"),
    f("sn", Plain, "Jacobi sn(x), x = u·√(e1 − e3)"),
    f("cn", Plain, "Jacobi cn(x)"),
    f("dn", Plain, "Jacobi dn(x)"),
    f("E", Plain, "Jacobi epsilon E(x)"),
    f("Z", Plain, "Jacobi zeta Z(x)"),
    FnInfo {
        name: "Pi",
        needs_a: true,
        route: Plain,
        summary: "third kind Π(x, a), both arguments in x-units",
    },
];

pub fn lookup(name: &str) -> Option<&'static FnInfo> {
    FUNCTIONS.iter().find(|f| f.name == name)
}

fn digit(c: u8) -> Option<HalfPeriod> {
    HalfPeriod::from_number(c.wrapping_sub(b'0'))
}

/// Parses `delta<λ>` / `delta<λμ>` with an optional `_prime` suffix.
fn parse_delta(name: &str) -> Option<(HalfPeriod, Option<HalfPeriod>, bool)> {
    let rest = name.strip_prefix("delta")?;
    let (digits, prime) = match rest.strip_suffix("_prime") {
        Some(d) => (d, true),
        None => (rest, false),
    };
    match digits.as_bytes() {
        [a] => Some((digit(*a)?, None, prime)),
        [a, b] if a != b => Some((digit(*a)?, Some(digit(*b)?), prime)),
        _ => None,
    }
}

/// Evaluates the registered function `name` at `u`.
///
/// Jacobian functions take their argument in x-units; `a` is required by
/// `Pi` only. `route` selects a zeta or delta route where one applies.
pub fn evaluate(
    w: &Weierstrass,
    name: &str,
    u: Complex64,
    a: Option<Complex64>,
    route: Option<&str>,
) -> Result<EvalResult> {
    let info = lookup(name).ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
    if route.is_some() && info.route == RouteKind::None {
        return Err(Error::InvalidArgument(format!("{name} takes no route")));
    }
    if a.is_some() && !info.needs_a {
        return Err(Error::InvalidArgument(format!("{name} takes no second argument")));
    }
    let a = match (info.needs_a, a) {
        (true, None) => return Err(Error::InvalidArgument(format!("{name} needs a second argument"))),
        (_, a) => a.unwrap_or_default(),
    };
    let zeta_route = |r: Option<&str>| -> Result<ZetaRoute> {
        r.map_or(Ok(ZetaRoute::Theta), |s| s.parse().map_err(Error::InvalidArgument))
    };
    let delta_route = |r: Option<&str>| -> Result<DeltaRoute> {
        r.map_or(Ok(DeltaRoute::ThetaQuotient), |s| {
            s.parse().map_err(Error::InvalidArgument)
        })
    };

    match name {
        "wp" => return w.wp(u),
        "wp_prime" => return w.wp_prime(u),
        "wp_second" => return w.wp_second(u),
        "zeta" => return w.zeta(u),
        "sigma" => return Ok(EvalResult::finite(w.sigma(u)?)),
        "sigma1" | "sigma2" | "sigma3" => {
            let h = digit(name.as_bytes()[5]).expect("registry name");
            return Ok(EvalResult::finite(w.sigma_aux(h, u)?));
        }
        "zeta1" | "zeta2" | "zeta3" => {
            let h = digit(name.as_bytes()[4]).expect("registry name");
            return w.zeta_aux(h, u, zeta_route(route)?);
        }
        _ => {}
    }
    if let Some((h, other, prime)) = parse_delta(name) {
        return match (other, prime) {
            (None, false) => w.delta(h, u, delta_route(route)?),
            (None, true) => w.delta_prime(h, u),
            (Some(b), false) => w.delta2(h, b, u, delta_route(route)?),
            (Some(b), true) => w.delta2_prime(h, b, u),
        };
    }
    jacobi(w, name, u, a)
}

fn jacobi(w: &Weierstrass, name: &str, x: Complex64, a: Complex64) -> Result<EvalResult> {
    let p = w.jacobi_params()?;
    let u = x / p.scale;
    let w3 = w.omega(HalfPeriod::Three);
    let mut st = w.classify(u, &[w3]);
    if name == "Pi" && st == Status::Finite {
        let ua = a / p.scale;
        st = [
            w.classify(ua, &[w3]),
            w.classify(u - ua, &[w3]),
            w.classify(u + ua, &[w3]),
        ]
        .into_iter()
        .find(|s| *s != Status::Finite)
        .unwrap_or(Status::Finite);
    }
    if st != Status::Finite {
        return Ok(EvalResult::pole(st));
    }
    let value = match name {
        "sn" => w.sn_cn_dn(x)?.sn,
        "cn" => w.sn_cn_dn(x)?.cn,
        "dn" => w.sn_cn_dn(x)?.dn,
        "E" => w.jacobi_e_z(u)?.0,
        "Z" => w.jacobi_e_z(u)?.1,
        "Pi" => w.jacobi_e_z_pi(u, a / p.scale)?.2,
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    Ok(EvalResult::finite(value))
}
