//! Identity certification: sample points, evaluate both sides, report residuals.

mod catalog;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{HalfPeriod, Lattice};
use crate::theta::SeriesConfig;
use crate::weierstrass::Weierstrass;

pub use catalog::{default_registry, default_suite};

/// Exclusion radius around every excluded locus, as a fraction of the shortest period.
pub const POLE_GUARD: f64 = 0.02;

/// Tolerance for identities that involve the partial-fraction route.
pub const PARTIAL_FRACTION_TOL: f64 = 1e-5;

pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_ATTEMPTS: usize = 100_000;

pub type Evaluator = Arc<dyn Fn(&Weierstrass, &[Complex64]) -> Result<Vec<Complex64>> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Origin,
    Half(HalfPeriod),
}

/// Rejects samples with `z·Z + w·W` within the pole guard of `site + Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exclusion {
    pub z: i32,
    pub w: i32,
    pub site: Site,
}

impl Exclusion {
    pub const fn new(z: i32, w: i32, site: Site) -> Self {
        Exclusion { z, w, site }
    }

    /// `u` away from the origin and the three half-periods.
    pub fn all_sites(z: i32, w: i32) -> Vec<Exclusion> {
        let mut v = vec![Exclusion::new(z, w, Site::Origin)];
        v.extend(HalfPeriod::ALL.map(|h| Exclusion::new(z, w, Site::Half(h))));
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpec {
    pub name: String,
    /// number of independent sample points, 1 or 2
    pub arity: usize,
    pub lhs: String,
    pub rhs: String,
    pub tol: f64,
    pub exclusions: Vec<Exclusion>,
}

#[derive(Clone, Default)]
pub struct Registry {
    map: BTreeMap<String, Evaluator>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, f: Evaluator) {
        self.map.insert(key.into(), f);
    }

    pub fn get(&self, key: &str) -> Option<&Evaluator> {
        self.map.get(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub point: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point2: Option<[f64; 2]>,
    /// `null` in JSON when a side could not be evaluated
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    pub name: String,
    pub samples: usize,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

/// The five lattices the suite is certified on, as `(label, τ)` with ω1 = 1/2.
pub fn reference_lattices() -> Vec<(&'static str, Complex64)> {
    vec![
        ("square", Complex64::new(0.0, 1.0)),
        ("rectangular", Complex64::new(0.0, 2.0)),
        ("rhombic", Complex64::new(0.5, 0.5 * 3f64.sqrt())),
        ("generic", Complex64::new(0.3, 1.1)),
        ("tall", Complex64::new(0.1, 3.0)),
    ]
}

/// `max_k |l_k − r_k| / max(|l_k|, |r_k|, 1e−30)`; NaN on a length mismatch
/// or a non-finite component.
pub fn residual(lhs: &[Complex64], rhs: &[Complex64]) -> f64 {
    if lhs.len() != rhs.len() || lhs.is_empty() {
        return f64::NAN;
    }
    let mut worst: f64 = 0.0;
    for (l, r) in lhs.iter().zip(rhs) {
        let d = (l - r).norm() / l.norm().max(r.norm()).max(1e-30);
        if !d.is_finite() {
            return f64::NAN;
        }
        worst = worst.max(d);
    }
    worst
}

/// Stream id for an identity, so reordering the suite leaves samples unchanged.
fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

struct Sampler<'a> {
    w: &'a Weierstrass,
    rng: ChaCha8Rng,
    radius: f64,
    sites: [Complex64; 4],
}

impl<'a> Sampler<'a> {
    fn new(w: &'a Weierstrass, name: &str, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id(name));
        Sampler {
            w,
            rng,
            radius: POLE_GUARD * w.lattice().min_period(),
            sites: [
                Complex64::new(0.0, 0.0),
                w.omega(HalfPeriod::One),
                w.omega(HalfPeriod::Two),
                w.omega(HalfPeriod::Three),
            ],
        }
    }

    fn uniform(&mut self) -> Complex64 {
        let l = self.w.lattice();
        let s = self.rng.random::<f64>() - 0.5;
        let t = self.rng.random::<f64>() - 0.5;
        2.0 * s * l.omega1 + 2.0 * t * l.omega3
    }

    fn clear(&self, pts: &[Complex64], ex: &[Exclusion]) -> bool {
        ex.iter().all(|e| {
            let z = pts[0] * e.z as f64 + pts.get(1).map_or(Complex64::default(), |w| w * e.w as f64);
            let site = match e.site {
                Site::Origin => self.sites[0],
                Site::Half(h) => self.sites[h.number() as usize],
            };
            self.w.lattice().nearest_translate(z, site).1 >= self.radius
        })
    }

    fn draw(&mut self, arity: usize, ex: &[Exclusion]) -> Result<Vec<Complex64>> {
        for _ in 0..MAX_ATTEMPTS {
            let pts: Vec<_> = (0..arity).map(|_| self.uniform()).collect();
            if self.clear(&pts, ex) {
                return Ok(pts);
            }
        }
        Err(Error::Sampling { attempts: MAX_ATTEMPTS })
    }
}

fn check(reg: &Registry, suite: &[IdentitySpec], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SuiteConfig("samples per identity must be at least 1".into()));
    }
    for s in suite {
        if s.tol.is_nan() || s.tol <= 0.0 {
            return Err(Error::SuiteConfig(format!("{}: tolerance must be positive", s.name)));
        }
        if !(1..=2).contains(&s.arity) {
            return Err(Error::SuiteConfig(format!("{}: arity must be 1 or 2", s.name)));
        }
        for key in [&s.lhs, &s.rhs] {
            if reg.get(key).is_none() {
                return Err(Error::SuiteConfig(format!("{}: unknown evaluator '{key}'", s.name)));
            }
        }
    }
    Ok(())
}

fn run_one(w: &Weierstrass, reg: &Registry, spec: &IdentitySpec, n: usize, seed: u64) -> Result<IdentityReport> {
    let lhs = reg.get(&spec.lhs).expect("checked");
    let rhs = reg.get(&spec.rhs).expect("checked");
    let mut sampler = Sampler::new(w, &spec.name, seed);
    let mut failures = Vec::new();
    let (mut max_rel, mut sum) = (0.0f64, 0.0);
    let mut done = 0;
    let mut rejected = 0;
    while done < n {
        let pts = sampler.draw(spec.arity, &spec.exclusions)?;
        let res = match (lhs(w, &pts), rhs(w, &pts)) {
            (Ok(l), Ok(r)) => residual(&l, &r),
            (Err(Error::PoleProximity { .. }), _) | (_, Err(Error::PoleProximity { .. })) => {
                rejected += 1;
                if rejected > MAX_ATTEMPTS {
                    return Err(Error::Sampling { attempts: rejected });
                }
                continue;
            }
            _ => f64::NAN,
        };
        done += 1;
        if res.is_nan() || max_rel.is_nan() {
            max_rel = f64::NAN;
        } else {
            max_rel = max_rel.max(res);
        }
        sum += res;
        if res.is_nan() || res > spec.tol {
            let pair = |z: Complex64| [z.re, z.im];
            failures.push(Failure {
                point: pair(pts[0]),
                point2: pts.get(1).copied().map(pair),
                residual: res,
            });
        }
    }
    Ok(IdentityReport {
        name: spec.name.clone(),
        samples: n,
        max_rel,
        mean_rel: sum / n as f64,
        passed: failures.is_empty() && max_rel <= spec.tol,
        failures,
    })
}

/// Runs `suite` against `reg` on one lattice. Identities are processed in
/// parallel; each draws from its own seeded stream, so the result depends
/// only on the arguments and comes back in suite order.
pub fn run_suite_with(
    w: &Weierstrass,
    reg: &Registry,
    suite: &[IdentitySpec],
    n: usize,
    seed: u64,
) -> Result<Vec<IdentityReport>> {
    check(reg, suite, n)?;
    suite.par_iter().map(|s| run_one(w, reg, s, n, seed)).collect()
}

/// [`run_suite_with`] against the default registry.
pub fn run_suite(
    lat: &Lattice,
    suite: &[IdentitySpec],
    n: usize,
    seed: u64,
    cfg: SeriesConfig,
) -> Result<Vec<IdentityReport>> {
    let w = Weierstrass::new(*lat, cfg)?;
    run_suite_with(&w, &default_registry(), suite, n, seed)
}

/// The default suite, optionally restricted to names matching a glob.
pub fn select(pattern: Option<&str>) -> Result<Vec<IdentitySpec>> {
    let mut suite = default_suite();
    if let Some(p) = pattern {
        let pat = glob::Pattern::new(p).map_err(|e| Error::SuiteConfig(format!("pattern '{p}': {e}")))?;
        suite.retain(|s| pat.matches(&s.name));
        if suite.is_empty() {
            return Err(Error::SuiteConfig(format!("no identity matches '{p}'")));
        }
    }
    Ok(suite)
}

pub fn report_json(reports: &[IdentityReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
