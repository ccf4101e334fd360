mod common;

use std::f64::consts::PI;

use common::{c, rel};
use ellipzeta::theta::{theta_derivative, theta_eval, theta_nullwerte};
use ellipzeta::{Error, SeriesConfig, ThetaIndex};
use num_complex::Complex64;
use proptest::prelude::*;

use ThetaIndex::{One, Plain, Three, Two};

/// Direct bilateral sums, for comparison with the library's series.
fn brute(idx: ThetaIndex, v: Complex64, tau: Complex64) -> Complex64 {
    let i = c(0.0, 1.0);
    let mut s = c(0.0, 0.0);
    for n in -40i32..=40 {
        let nf = n as f64;
        let term = match idx {
            Plain => {
                let k = nf + 0.5;
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                -i * sign * (i * PI * tau * k * k + 2.0 * i * PI * k * v).exp()
            }
            One => {
                let k = nf + 0.5;
                (i * PI * tau * k * k + 2.0 * i * PI * k * v).exp()
            }
            Two => (if n % 2 == 0 { 1.0 } else { -1.0 }) * (i * PI * tau * nf * nf + 2.0 * i * PI * nf * v).exp(),
            Three => (i * PI * tau * nf * nf + 2.0 * i * PI * nf * v).exp(),
        };
        s += term;
    }
    s
}

#[test]
fn series_match_bilateral_sums() {
    let cfg = SeriesConfig::default();
    for tau in [c(0.0, 1.0), c(0.3, 1.1), c(-0.4, 0.7)] {
        for v in [c(0.1, 0.05), c(-0.37, 0.2), c(0.25, -0.3)] {
            for idx in ThetaIndex::ALL {
                let a = theta_eval(idx, v, tau, &cfg).unwrap();
                let b = brute(idx, v, tau);
                assert!(rel(a, b) < 1e-13, "{idx:?} {v} {tau}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn jacobi_quartic_and_derivative_product() {
    let cfg = SeriesConfig::default();
    for tau in [c(0.0, 1.0), c(0.3, 1.1), c(0.5, 0.866), c(0.1, 3.0)] {
        let nw = theta_nullwerte(tau, &cfg).unwrap();
        let (t2, t3, t4) = (nw.get(One), nw.get(Three), nw.get(Two));
        assert!(rel(t3.powi(4), t2.powi(4) + t4.powi(4)) < 1e-14, "{tau}");
        assert!(rel(nw.d1, PI * t2 * t3 * t4) < 1e-14, "{tau}");
    }
}

#[test]
fn config_is_validated() {
    let bad = SeriesConfig {
        abs_tol: 0.0,
        rel_tol: 0.0,
        max_terms: 64,
    };
    assert!(matches!(
        theta_eval(Three, c(0.1, 0.0), c(0.0, 1.0), &bad),
        Err(Error::InvalidConfig(_))
    ));
    let short = SeriesConfig {
        max_terms: 2,
        ..SeriesConfig::default()
    };
    assert!(matches!(
        theta_eval(Three, c(0.1, 0.0), c(0.0, 1.0), &short),
        Err(Error::InvalidConfig(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodicity_and_derivative(vr in -1.0f64..1.0, vi in -0.6f64..0.6, tr in -0.5f64..0.5, ti in 0.7f64..2.0) {
        let cfg = SeriesConfig::default();
        let (v, tau) = (c(vr, vi), c(tr, ti));
        for idx in ThetaIndex::ALL {
            let a = theta_eval(idx, v, tau, &cfg).unwrap();
            let b = theta_eval(idx, v + 1.0, tau, &cfg).unwrap();
            let sign = if matches!(idx, Plain | One) { -1.0 } else { 1.0 };
            prop_assert!(rel(b, sign * a) < 1e-12);
            // derivative against a central difference
            let h = 1e-5;
            let fd = (theta_eval(idx, v + h, tau, &cfg).unwrap() - theta_eval(idx, v - h, tau, &cfg).unwrap()) / (2.0 * h);
            let d = theta_derivative(idx, v, tau, &cfg).unwrap();
            prop_assert!((fd - d).norm() < 1e-6 * (1.0 + d.norm()));
        }
    }
}
