mod common;

use common::c;
use ellipzeta::verify::{default_suite, report_json, run_suite, IdentityReport, PARTIAL_FRACTION_TOL};
use ellipzeta::{Lattice, SeriesConfig};

fn lattice(tau: num_complex::Complex64) -> Lattice {
    Lattice::from_tau(c(0.5, 0.0), tau).unwrap()
}

fn only(names: &[&str]) -> Vec<ellipzeta::verify::IdentitySpec> {
    default_suite()
        .into_iter()
        .filter(|s| names.contains(&s.name.as_str()))
        .collect()
}

#[test]
fn registry_is_large_and_tolerances_are_pinned() {
    let suite = default_suite();
    assert!(suite.len() >= 30);
    for s in &suite {
        let expected = if s.name == "zeta_aux_partial_fraction" {
            PARTIAL_FRACTION_TOL
        } else {
            1e-9
        };
        assert_eq!(s.tol, expected, "{}", s.name);
    }
}

#[test]
fn report_shape() {
    let r = run_suite(
        &lattice(c(0.3, 1.1)),
        &only(&["frobenius_stickelberger"]),
        10,
        5,
        SeriesConfig::default(),
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
    let first = &v[0];
    for key in ["name", "samples", "maxRel", "meanRel", "passed", "failures"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    assert_eq!(first["samples"], 10);
}

/// Median residual of one identity over 101 samples.
fn median(lat: &Lattice, name: &str, abs_tol: f64) -> f64 {
    let mut suite = only(&[name]);
    suite[0].tol = f64::MIN_POSITIVE;
    let cfg = SeriesConfig {
        abs_tol,
        rel_tol: 0.0,
        max_terms: 64,
    };
    let r: Vec<IdentityReport> = run_suite(lat, &suite, 101, 1, cfg).unwrap();
    // samples with an exactly zero residual are not listed
    let mut v: Vec<f64> = r[0].failures.iter().map(|f| f.residual).collect();
    v.resize(101, 0.0);
    v.sort_by(f64::total_cmp);
    v[50]
}

// Theta series converge like q^{n²}, so on the reference lattices the θ-route
// residuals sit at the rounding floor after one or two tolerance steps. The
// q-series identities converge geometrically and show the scaling clearly on
// a lattice with |q| ≈ 0.28.
#[test]
fn residuals_scale_with_series_tolerance() {
    let lat = lattice(c(0.0, 0.4));
    let tols: Vec<f64> = (1..=9).map(|e| 10f64.powi(-e)).collect();
    for name in ["prop23_exp_zeta1", "prop23_cos_zeta1"] {
        let m: Vec<f64> = tols.iter().map(|&t| median(&lat, name, t)).collect();
        for pair in m.windows(2) {
            assert!(pair[0] >= 5.0 * pair[1], "{name}: {m:?}");
        }
    }
    // zeta2, zeta3: single steps can stall where the stopping rule lands on
    // the same term, so check the mean reduction per decade over 8 decades
    for name in [
        "prop23_exp_zeta2",
        "prop23_exp_zeta3",
        "prop23_cos_zeta2",
        "prop23_cos_zeta3",
    ] {
        let first = median(&lat, name, tols[0]);
        let last = median(&lat, name, tols[8]);
        let per_decade = (first / last).powf(1.0 / 8.0);
        assert!(per_decade >= 5.0, "{name}: {per_decade}");
    }
}
