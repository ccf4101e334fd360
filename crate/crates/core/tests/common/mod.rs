#![allow(dead_code)]

use ellipzeta::verify::reference_lattices;
use ellipzeta::{HalfPeriod, SeriesConfig, Weierstrass};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

pub fn reference() -> Vec<(&'static str, Weierstrass)> {
    reference_lattices()
        .into_iter()
        .map(|(name, tau)| {
            (
                name,
                Weierstrass::from_tau(c(0.5, 0.0), tau, SeriesConfig::default()).unwrap(),
            )
        })
        .collect()
}

pub fn rectangular() -> Vec<Weierstrass> {
    [c(0.0, 1.0), c(0.0, 2.0), c(0.0, 0.7)]
        .into_iter()
        .map(|t| Weierstrass::from_tau(c(0.5, 0.0), t, SeriesConfig::default()).unwrap())
        .collect()
}

/// Lattice index (into `reference()`) and cell coordinates.
pub fn lattice_point() -> impl Strategy<Value = (usize, f64, f64)> {
    (0usize..5, -0.5f64..0.5, -0.5f64..0.5)
}

/// `s·2ω1 + t·2ω3`, or `None` within `guard · min_period` of the origin or a half-period.
pub fn cell_point(w: &Weierstrass, s: f64, t: f64, guard: f64) -> Option<Complex64> {
    let l = w.lattice();
    let u = 2.0 * s * l.omega1 + 2.0 * t * l.omega3;
    let r = guard * l.min_period();
    let mut sites = vec![c(0.0, 0.0)];
    sites.extend(HalfPeriod::ALL.map(|h| w.omega(h)));
    sites.iter().all(|&z| l.nearest_translate(u, z).1 >= r).then_some(u)
}
