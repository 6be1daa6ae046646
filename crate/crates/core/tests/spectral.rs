use std::f64::consts::PI;

use heatcorner::asymfit::{fit_power_series, geometric_grid, WeightPolicy};
use heatcorner::geometry::RotationalProfile;
use heatcorner::spectral::{fd_eigenvalues_richardson, partial_theta, radial_spectrum, DiskSpectra, TraceSample};
use heatcorner::Error;
use proptest::prelude::*;

/// `J_n(x) = (1/2π) ∫_0^{2π} cos(nτ − x sin τ) dτ`; the trapezoid rule is
/// exponentially accurate on this periodic integrand once `N` exceeds `x`.
fn bessel_j(n: u32, x: f64, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    (0..nodes).map(|i| (f64::from(n) * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() / nodes as f64
}

/// First `count` positive zeros of `J_n`, by scanning and bisection.
fn bessel_zeros(n: u32, count: usize) -> Vec<f64> {
    let nodes = 64 + 4 * (count as f64 * PI + f64::from(n)) as usize;
    let f = |x: f64| bessel_j(n, x, nodes);
    let mut out = Vec::with_capacity(count);
    let step = 0.05;
    let mut a = 0.5;
    let mut fa = f(a);
    while out.len() < count {
        let b = a + step;
        let fb = f(b);
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    out
}

#[test]
fn oracle_reproduces_tabulated_zeros() {
    let z0 = bessel_zeros(0, 2);
    let z1 = bessel_zeros(1, 1);
    assert!((z0[0] - 2.404_825_557_695_773).abs() < 1e-13);
    assert!((z0[1] - 5.520_078_110_286_311).abs() < 1e-13);
    assert!((z1[0] - 3.831_705_970_207_512).abs() < 1e-13);
}

#[test]
fn flat_disk_spectra_are_bessel_zero_squares() {
    let flat = RotationalProfile::flat(1.0);
    for nu in [0u32, 1, 2, 5] {
        let spec = radial_spectrum(&flat, 1.0, f64::from(nu), 20, 1e-9).unwrap();
        for (m, (l, j)) in spec.eigenvalues.iter().zip(bessel_zeros(nu, 20)).enumerate() {
            assert!(((l - j * j) / (j * j)).abs() < 1e-8, "nu={nu} m={} {l} vs {}", m + 1, j * j);
        }
    }
    let s0 = radial_spectrum(&flat, 1.0, 0.0, 1, 1e-9).unwrap();
    let s1 = radial_spectrum(&flat, 1.0, 1.0, 1, 1e-9).unwrap();
    assert!((s0.eigenvalues[0] - 5.7832).abs() < 1e-4);
    assert!((s1.eigenvalues[0] - 14.6820).abs() < 1e-4);
}

#[test]
fn partial_theta_against_two_hundred_zeros() {
    let flat = RotationalProfile::flat(1.0);
    let t = 0.05;
    let oracle: f64 = bessel_zeros(0, 200).iter().rev().map(|j| (-j * j * t).exp()).sum();
    let spec = radial_spectrum(&flat, 1.0, 0.0, 30, 1e-9).unwrap();
    let s = partial_theta(&spec, t, false).unwrap();
    assert!(s.tail_estimate >= 0.0);
    assert!((s.value - oracle).abs() <= s.tail_estimate + 1e-12 * oracle, "{} vs {oracle}", s.value);

    let short = radial_spectrum(&flat, 1.0, 0.0, 3, 1e-9).unwrap();
    match partial_theta(&short, 1e-3, false) {
        Err(Error::Truncation { minimal_count }) => {
            assert!(minimal_count > 3);
            let enough = radial_spectrum(&flat, 1.0, 0.0, minimal_count, 1e-9).unwrap();
            assert!(partial_theta(&enough, 1e-3, false).is_ok());
        }
        other => panic!("expected truncation, got {other:?}"),
    }
}

#[test]
fn partial_theta_decays_monotonically() {
    let spec = radial_spectrum(&RotationalProfile::flat(1.0), 1.0, 2.0, 10, 1e-9).unwrap();
    let vals: Vec<f64> =
        [0.1, 0.2, 0.5, 1.0, 2.0, 5.0].iter().map(|&t| partial_theta(&spec, t, true).unwrap().value).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
    assert!(vals[5] < 1e-50);
}

#[test]
fn flat_spectrum_scales_with_radius() {
    let a = radial_spectrum(&RotationalProfile::flat(1.0), 1.0, 1.0, 8, 1e-10).unwrap();
    let b = radial_spectrum(&RotationalProfile::flat(1.0), 0.5, 1.0, 8, 1e-10).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((y - 4.0 * x).abs() < 1e-9 * y);
    }
}

#[test]
fn shooting_and_finite_volume_agree_on_bump() {
    let bump = RotationalProfile::bump(-1.5, 1.2).unwrap();
    for nu in [0.0, 0.05, 0.7, 3.0] {
        let s = radial_spectrum(&bump, 1.0, nu, 4, 1e-10).unwrap();
        let fd = fd_eigenvalues_richardson(&bump, 1.0, nu, 4, 800).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&fd) {
            assert!(((a - b) / a).abs() < 1e-6, "nu={nu}: {a} vs {b}");
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] < w[1]) && s.eigenvalues[0] > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn eigenvalues_increase_with_angular_order(nu in 0.0f64..6.0, dnu in 0.05f64..2.0) {
        let sphere = RotationalProfile::sphere(1.0, 1.2).unwrap();
        let lo = radial_spectrum(&sphere, 1.0, nu, 5, 1e-10).unwrap();
        let hi = radial_spectrum(&sphere, 1.0, nu + dnu, 5, 1e-10).unwrap();
        for (a, b) in lo.eigenvalues.iter().zip(&hi.eigenvalues) {
            prop_assert!(a < b);
        }
    }
}

#[test]
fn rotation_trace_is_even_in_the_angle() {
    let sphere = RotationalProfile::sphere(1.0, 1.2).unwrap();
    let spectra = DiskSpectra::disk(&sphere, 1.0, 0.02).unwrap();
    let t = [0.02, 0.05, 0.1];
    for phi in [1.0, 2.0 * PI / 3.0, 2.9] {
        let a = spectra.donnelly(phi, &t).unwrap();
        let b = spectra.donnelly(2.0 * PI - phi, &t).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value - y.value).abs() <= 1e-12 * x.value.abs());
        }
    }
    let exact = spectra.donnelly_rational(1, 3, &t).unwrap();
    let float = spectra.donnelly(2.0 * PI / 3.0, &t).unwrap();
    for (x, y) in exact.iter().zip(&float) {
        assert!((x.value - y.value).abs() <= 1e-12 * x.value.abs());
    }
}

#[test]
fn order_two_cone_is_half_the_half_turn() {
    let bump = RotationalProfile::bump(1.5, 1.2).unwrap();
    let spectra = DiskSpectra::disk(&bump, 1.0, 0.02).unwrap();
    let t = geometric_grid(0.02, 0.1, 5);
    let cone = spectra.cone_routes(2, &t).unwrap();
    let half = spectra.donnelly(PI, &t).unwrap();
    for ((r, m), h) in cone.rotation_sum.iter().zip(&cone.mode_filter).zip(&half) {
        assert!((r.value - 0.5 * h.value).abs() <= 1e-14 * h.value.abs());
        assert!((r.value - m.value).abs() <= 1e-12 * r.value.abs());
    }
}

#[test]
fn too_short_spectra_refuse_small_times() {
    let spectra = DiskSpectra::disk(&RotationalProfile::flat(1.0), 1.0, 0.05).unwrap();
    assert!(matches!(spectra.heat_trace(&[1e-4]), Err(Error::Truncation { .. })));
}

#[test]
fn sector_trace_scales_with_radius() {
    let gamma = PI / 3.0;
    let big = DiskSpectra::sector(gamma, 1.0, 0.01).unwrap();
    let small = DiskSpectra::sector(gamma, 0.5, 0.0025).unwrap();
    let t = [0.01, 0.02, 0.05];
    let a = big.heat_trace(&t).unwrap();
    let b = small.heat_trace(&t.map(|x| x / 4.0)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.value - y.value).abs() <= 1e-9 * x.value, "{} vs {}", x.value, y.value);
    }
}

#[test]
fn right_angle_sector_apex_term() {
    let gamma = PI / 2.0;
    let spectra = DiskSpectra::sector(gamma, 1.0, 1e-3).unwrap();
    let t = geometric_grid(1e-3, 1e-2, 20);
    let z = spectra.heat_trace(&t).unwrap();
    let (area, perimeter) = (0.5 * gamma, 2.0 + gamma);
    let reduced: Vec<TraceSample> = z
        .iter()
        .map(|s| TraceSample {
            t: s.t.sqrt(),
            value: s.value - area / (4.0 * PI * s.t) + perimeter / (8.0 * (PI * s.t).sqrt()),
            tail_estimate: s.tail_estimate,
            precision: s.precision + f64::EPSILON * s.value.abs(),
        })
        .collect();
    let fit = fit_power_series(&reduced, 2, WeightPolicy::InversePower).unwrap();
    // arc constant γ/(12π) plus two right angles at the arc ends
    let apex = fit.coefficients[0] - gamma / (12.0 * PI) - 2.0 / 16.0;
    assert!((apex - 1.0 / 16.0).abs() < 1e-3, "apex term {apex}");
}
