use std::f64::consts::PI;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use super::{AngleData, CoefficientKind, CoefficientSource, CoefficientTriple, CurvatureJet, SymmetryCheck};
use crate::error::{Error, Result};

type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().expect("rational in f64 range")
}

/// Exact rational coefficients of the cone-point triple of order `k`.
///
/// `a0`, `a1 = a1_k K`, `a2 = a2_kk K^2 - a2_lap lapK`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeRationals {
    pub a0: Ratio<i128>,
    pub a1_k: Ratio<i128>,
    pub a2_kk: Ratio<i128>,
    pub a2_lap: Ratio<i128>,
}

impl ConeRationals {
    fn halved(&self) -> Self {
        let h = q(1, 2);
        Self { a0: self.a0 * h, a1_k: self.a1_k * h, a2_kk: self.a2_kk * h, a2_lap: self.a2_lap * h }
    }

    fn evaluate(&self, jet: &CurvatureJet) -> [f64; 3] {
        let k = jet.k();
        [to_f64(&self.a0), to_f64(&self.a1_k) * k, to_f64(&self.a2_kk) * (k * k) - to_f64(&self.a2_lap) * jet.lap_k()]
    }
}

/// `k^m - 1/k` as an exact rational.
fn kpow_minus_inv(k: i128, m: u32) -> Q {
    q(k.pow(m + 1) - 1, k)
}

/// Rational coefficients for order `k`; `k` at most 1000.
pub fn cone_rationals(k: u32) -> Result<ConeRationals> {
    if !(2..=1000).contains(&k) {
        return Err(Error::Input(format!("cone order k = {k} must lie in [2, 1000]")));
    }
    let k = i128::from(k);
    let (e1, e3, e5) = (kpow_minus_inv(k, 1), kpow_minus_inv(k, 3), kpow_minus_inv(k, 5));
    Ok(ConeRationals {
        a0: e1 / 12,
        a1_k: e3 / 360 + e1 / 36,
        a2_kk: e5 / 2520 + e3 / 720 + e1 / 180,
        a2_lap: e5 / 15120 + e3 / 1440 + e1 / 180,
    })
}

fn check(jet: &CurvatureJet, phi_is_pi: bool, mode: SymmetryCheck) -> Result<()> {
    match mode {
        SymmetryCheck::Enforce => jet.check_symmetric(phi_is_pi),
        SymmetryCheck::Unchecked => Ok(()),
    }
}

/// Rotation coefficients `b_0, b_1, b_2` for the rotation by `phi`.
pub fn b_coeffs(jet: &CurvatureJet, phi: &AngleData) -> Result<CoefficientTriple> {
    b_coeffs_with(jet, phi, SymmetryCheck::Enforce)
}

pub fn b_coeffs_with(jet: &CurvatureJet, phi: &AngleData, mode: SymmetryCheck) -> Result<CoefficientTriple> {
    check(jet, phi.is_pi(), mode)?;
    let c2 = phi.c2();
    let (c4, c6) = (c2 * c2, c2 * c2 * c2);
    let k = jet.k();
    let b = [1.0 / c2, 2.0 * k / c4, (12.0 / c6 - 2.0 / c4) * k * k - 2.0 / c6 * jet.lap_k()];
    Ok(CoefficientTriple::new(b, CoefficientKind::RotationB, CoefficientSource::ClosedForm))
}

/// Cone-point coefficients `a_0, a_1, a_2` for a cone point of order `k`.
pub fn cone_coeffs(jet: &CurvatureJet, k: u32) -> Result<CoefficientTriple> {
    cone_coeffs_with(jet, k, SymmetryCheck::Enforce)
}

pub fn cone_coeffs_with(jet: &CurvatureJet, k: u32, mode: SymmetryCheck) -> Result<CoefficientTriple> {
    let r = cone_rationals(k)?;
    check(jet, k == 2, mode)?;
    Ok(CoefficientTriple::new(r.evaluate(jet), CoefficientKind::ConeA, CoefficientSource::ClosedForm))
}

/// Corner coefficients `c_0, c_1, c_2` for the angle `π/k`; exactly half the cone values.
pub fn corner_coeffs(jet: &CurvatureJet, k: u32) -> Result<CoefficientTriple> {
    corner_coeffs_with(jet, k, SymmetryCheck::Enforce)
}

pub fn corner_coeffs_with(jet: &CurvatureJet, k: u32, mode: SymmetryCheck) -> Result<CoefficientTriple> {
    let r = cone_rationals(k)?.halved();
    check(jet, k == 2, mode)?;
    Ok(CoefficientTriple::new(r.evaluate(jet), CoefficientKind::CornerC, CoefficientSource::ClosedForm))
}

/// `(π^m − γ^m)/(γ^{m−1} π)`.
fn gamma_ratio(gamma: f64, m: i32) -> f64 {
    (PI.powi(m) - gamma.powi(m)) / (gamma.powi(m - 1) * PI)
}

fn corner_gamma_values(jet: &CurvatureJet, gamma: f64) -> [f64; 3] {
    let (g2, g4, g6) = (gamma_ratio(gamma, 2), gamma_ratio(gamma, 4), gamma_ratio(gamma, 6));
    let k = jet.k();
    [
        g2 / 24.0,
        (g4 / 720.0 + g2 / 72.0) * k,
        (g6 / 5040.0 + g4 / 1440.0 + g2 / 360.0) * k * k - (g6 / 30240.0 + g4 / 2880.0 + g2 / 360.0) * jet.lap_k(),
    ]
}

/// Corner coefficients evaluated through the angle `γ = π/k` in floating point.
pub fn corner_coeffs_gamma_form(jet: &CurvatureJet, k: u32) -> Result<CoefficientTriple> {
    if k < 2 {
        return Err(Error::Input(format!("corner order k = {k} must be at least 2")));
    }
    jet.check_symmetric(k == 2)?;
    let c = corner_gamma_values(jet, PI / f64::from(k));
    Ok(CoefficientTriple::new(c, CoefficientKind::CornerC, CoefficientSource::ClosedForm))
}

/// The `c_2` formula at an arbitrary corner angle `gamma ∈ (0, 2π]`.
///
/// Only proven for `γ = π/k`; elsewhere this is a conjecture and the result
/// is labelled as such.
pub fn c2_general_conjecture(jet: &CurvatureJet, gamma: f64) -> Result<CoefficientTriple> {
    if !(gamma > 0.0 && gamma <= 2.0 * PI) {
        return Err(Error::Input(format!("corner angle {gamma} outside (0, 2pi]")));
    }
    jet.check_isotropic_hessian()?;
    let c = corner_gamma_values(jet, gamma);
    Ok(CoefficientTriple::new(c, CoefficientKind::CornerC, CoefficientSource::Conjecture))
}

/// Flat corner constant `(π² − γ²)/(24γπ)`.
pub fn kac_corner(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 2.0 * PI) {
        return Err(Error::Input(format!("corner angle {gamma} outside (0, 2pi]")));
    }
    Ok((PI * PI - gamma * gamma) / (24.0 * gamma * PI))
}

/// Closed form of `Σ_{j=1}^{k−1} sin(jπ/k)^{−2m}` for `m ∈ {1, 2, 3}`.
pub fn sine_power_sums(k: u32, m: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Input(format!("k = {k} must be at least 2")));
    }
    let k = i128::from(k);
    let (k2, k4, k6) = (k * k, k.pow(4), k.pow(6));
    let s = match m {
        1 => q(k2 - 1, 3),
        2 => q(k4 - 1, 45) + q(2 * (k2 - 1), 9),
        3 => q(2 * (k6 - 1), 945) + q(k4 - 1, 45) + q(8 * (k2 - 1), 45),
        _ => return Err(Error::Input(format!("power m = {m} not in {{1, 2, 3}}"))),
    };
    Ok(to_f64(&s))
}

/// The same sum by direct summation.
#[must_use]
pub fn sine_power_sums_direct(k: u32, m: u32) -> f64 {
    let kf = f64::from(k);
    (1..k).map(|j| (PI * f64::from(j) / kf).sin().powi(-2 * m as i32)).sum()
}
