use super::{check_unit, AngleData, CurvatureJet, SeriesValue, SymmetryCheck};
use crate::error::{Error, Result};

fn dot(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[0] + x[1] * y[1]
}

fn wedge(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[1] - x[1] * y[0]
}

/// Length `ℓ_u(r)` of the Jacobi field and the density `θ_u(r) = ℓ_u(r)/r`.
pub fn ell_theta_series(jet: &CurvatureJet, u: [f64; 2], r: f64) -> Result<(SeriesValue, SeriesValue)> {
    check_unit(u)?;
    let k = jet.k();
    let c3 = -k / 6.0;
    let c4 = -jet.dk(u) / 12.0;
    let c5 = k * k / 120.0 - jet.hess(u, u) / 40.0;
    let theta = 1.0 + r * r * (c3 + r * (c4 + r * c5));
    Ok((SeriesValue::new(r * theta, 5, 6), SeriesValue::new(theta, 4, 5)))
}

/// `u_0(p, exp_p(ru))`.
pub fn u0_series(jet: &CurvatureJet, u: [f64; 2], r: f64) -> Result<SeriesValue> {
    check_unit(u)?;
    let k = jet.k();
    let c2 = k / 12.0;
    let c3 = jet.dk(u) / 24.0;
    let c4 = k * k / 160.0 + jet.hess(u, u) / 80.0;
    Ok(SeriesValue::new(1.0 + r * r * (c2 + r * (c3 + r * c4)), 4, 5))
}

/// `u_1(p, exp_p(ru))`.
pub fn u1_series(jet: &CurvatureJet, u: [f64; 2], r: f64) -> Result<SeriesValue> {
    check_unit(u)?;
    let k = jet.k();
    let c1 = jet.dk(u) / 6.0;
    let c2 = k * k / 30.0 - jet.lap_k() / 120.0 + jet.hess(u, u) / 20.0;
    Ok(SeriesValue::new(k / 3.0 + r * (c1 + r * c2), 2, 3))
}

/// `u_2(p, p)`.
#[must_use]
pub fn u2_diagonal(jet: &CurvatureJet) -> f64 {
    (jet.k() * jet.k() - jet.lap_k()) / 15.0
}

/// Homogeneous pieces of the squared distance in normal coordinates.
///
/// `f_ij` is the part of degree `i` in `x` and `j` in `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dist2Components {
    pub f20: f64,
    pub f11: f64,
    pub f02: f64,
    pub f22: f64,
    pub f32: f64,
    pub f23: f64,
    pub f42: f64,
    pub f33: f64,
    pub f24: f64,
}

impl Dist2Components {
    /// Bidegree `(i, j)` part; zero for every pair not listed in the struct.
    #[must_use]
    pub fn bidegree(&self, i: u32, j: u32) -> f64 {
        match (i, j) {
            (2, 0) => self.f20,
            (1, 1) => self.f11,
            (0, 2) => self.f02,
            (2, 2) => self.f22,
            (3, 2) => self.f32,
            (2, 3) => self.f23,
            (4, 2) => self.f42,
            (3, 3) => self.f33,
            (2, 4) => self.f24,
            _ => 0.0,
        }
    }

    /// Total-degree `n` part.
    #[must_use]
    pub fn homogeneous(&self, n: u32) -> f64 {
        (0..=n).map(|i| self.bidegree(i, n - i)).sum()
    }

    #[must_use]
    pub fn total(&self) -> f64 {
        self.f20 + self.f11 + self.f02 + self.f22 + self.f32 + self.f23 + self.f42 + self.f33 + self.f24
    }
}

/// Components of `dist(exp_p x, exp_p y)^2`.
#[must_use]
pub fn dist2_components(jet: &CurvatureJet, x: [f64; 2], y: [f64; 2]) -> Dist2Components {
    let k = jet.k();
    let w2 = wedge(x, y).powi(2);
    Dist2Components {
        f20: dot(x, x),
        f11: -2.0 * dot(x, y),
        f02: dot(y, y),
        f22: -k / 3.0 * w2,
        f32: -jet.dk(x) / 12.0 * w2,
        f23: -jet.dk(y) / 12.0 * w2,
        f42: w2 * (-k * k * dot(x, x) / 45.0 - jet.hess(x, x) / 60.0),
        f33: w2 * (4.0 * k * k * dot(x, y) / 45.0 - jet.hess(x, y) / 60.0),
        f24: w2 * (-k * k * dot(y, y) / 45.0 - jet.hess(y, y) / 60.0),
    }
}

/// `dist(exp_p x, exp_p y)^2` through total degree six.
#[must_use]
pub fn dist2_series(jet: &CurvatureJet, x: [f64; 2], y: [f64; 2]) -> SeriesValue {
    let d = [x[0] - y[0], x[1] - y[1]];
    let s = [x[0] + y[0], x[1] + y[1]];
    let k = jet.k();
    let w2 = wedge(x, y).powi(2);
    let quad = dot(x, x) - 4.0 * dot(x, y) + dot(y, y);
    let hsum = jet.hess(x, x) + jet.hess(x, y) + jet.hess(y, y);
    let value = dot(d, d) - k / 3.0 * w2 - jet.dk(s) / 12.0 * w2 - k * k / 45.0 * quad * w2 - hsum / 60.0 * w2;
    SeriesValue::new(value, 6, 7)
}

/// `dist(exp_p(ru), exp_p(rv))` through `r^6`.
pub fn dist_pair_series(jet: &CurvatureJet, u: [f64; 2], v: [f64; 2], r: f64) -> Result<SeriesValue> {
    check_unit(u)?;
    check_unit(v)?;
    let d = [u[0] - v[0], u[1] - v[1]];
    let c = dot(d, d).sqrt();
    if c < 1e-8 {
        return Err(Error::Input("directions coincide (C = 0)".into()));
    }
    let cs = dot(u, v);
    let s2 = wedge(u, v).powi(2);
    let k = jet.k();
    let dk = jet.dk([u[0] + v[0], u[1] + v[1]]);
    let hsum = jet.hess(u, u) + jet.hess(u, v) + jet.hess(v, v);
    let c3 = c * c * c;
    let t3 = -s2 / (6.0 * c) * k;
    let t4 = -s2 / (24.0 * c) * dk;
    let t5 = -((s2 * s2 / (72.0 * c3) + s2 * (2.0 - 4.0 * cs) / (90.0 * c)) * k * k + s2 / (120.0 * c) * hsum);
    let t6 = -s2 * s2 / (144.0 * c3) * k * dk;
    let value = r * (c + r * r * (t3 + r * (t4 + r * (t5 + r * t6))));
    Ok(SeriesValue::new(value, 6, 7))
}

fn check(jet: &CurvatureJet, phi: &AngleData, mode: SymmetryCheck) -> Result<()> {
    match mode {
        SymmetryCheck::Enforce => jet.check_symmetric(phi.is_pi()),
        SymmetryCheck::Unchecked => Ok(()),
    }
}

/// `d_u(r) = dist(exp_p(ru), exp_p(D^φ u r))` at a symmetric point.
pub fn du_series(jet: &CurvatureJet, phi: &AngleData, r: f64) -> Result<SeriesValue> {
    du_series_with(jet, phi, r, SymmetryCheck::Enforce)
}

pub fn du_series_with(jet: &CurvatureJet, phi: &AngleData, r: f64, mode: SymmetryCheck) -> Result<SeriesValue> {
    check(jet, phi, mode)?;
    if phi.is_pi() {
        return Ok(SeriesValue::new(2.0 * r, 6, 7));
    }
    let c = phi.c();
    let (s, cs) = (phi.sin_phi(), phi.cos_phi());
    let s2 = s * s;
    let k = jet.k();
    let t3 = -s2 / (6.0 * c) * k;
    let t5 = -((s2 * s2 / (72.0 * c * c * c) + s2 * (2.0 - 4.0 * cs) / (90.0 * c)) * k * k
        - s2 * (2.0 + cs) / (240.0 * c) * jet.lap_k());
    Ok(SeriesValue::new(r * (c + r * r * (t3 + r * r * t5)), 6, 7))
}

/// `(u_0, u_1, u_2)` between `exp_p(ru)` and its rotation, in powers of `d = d_u(r)`.
pub fn offdiag_u_series(
    jet: &CurvatureJet,
    phi: &AngleData,
    u: [f64; 2],
    d: f64,
) -> Result<(SeriesValue, SeriesValue, SeriesValue)> {
    offdiag_u_series_with(jet, phi, u, d, SymmetryCheck::Enforce)
}

pub fn offdiag_u_series_with(
    jet: &CurvatureJet,
    phi: &AngleData,
    u: [f64; 2],
    d: f64,
    mode: SymmetryCheck,
) -> Result<(SeriesValue, SeriesValue, SeriesValue)> {
    check_unit(u)?;
    check(jet, phi, mode)?;
    let c2 = phi.c2();
    let k = jet.k();
    let huu = jet.hess(u, u);
    let d2 = d * d;
    let u0 = 1.0 + k * d2 / 12.0 + (huu / (24.0 * c2) + k * k / 160.0 - huu / 120.0) * d2 * d2;
    let u1 = k / 3.0 + (huu / (6.0 * c2) + k * k / 30.0 - huu / 30.0 - jet.lap_k() / 120.0) * d2;
    Ok((SeriesValue::new(u0, 4, 5), SeriesValue::new(u1, 2, 3), SeriesValue::new(u2_diagonal(jet), 0, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::AngleRepr;
    use approx::assert_relative_eq;

    fn generic() -> CurvatureJet {
        CurvatureJet::new(0.7, [0.3, -0.2], [[0.5, 0.1], [0.1, -0.4]]).unwrap()
    }

    #[test]
    fn flat_cases() {
        let z = CurvatureJet::zero();
        let u = [0.6, 0.8];
        let (l, t) = ell_theta_series(&z, u, 0.3).unwrap();
        assert_eq!((l.value, t.value), (0.3, 1.0));
        assert_eq!((l.remainder_exponent, t.remainder_exponent), (6, 5));
        assert_eq!(u0_series(&z, u, 0.4).unwrap().value, 1.0);
        assert_eq!(u1_series(&z, u, 0.4).unwrap().value, 0.0);
        assert_eq!(u2_diagonal(&z), 0.0);
        let r = 0.37;
        assert_eq!(dist2_series(&z, [r, 0.0], [0.0, r]).value, 2.0 * r * r);
        let v = [-0.8, 0.6];
        let d = dist_pair_series(&z, u, v, r).unwrap().value;
        assert_relative_eq!(d, 2f64.sqrt() * r, max_relative = 1e-15);
        let a = AngleData::new(AngleRepr::pi_fraction(2, 3).unwrap()).unwrap();
        assert_relative_eq!(du_series(&z, &a, r).unwrap().value, 3f64.sqrt() * r, max_relative = 1e-15);
        let (a0, a1, a2) = offdiag_u_series(&z, &a, u, 0.2).unwrap();
        assert_eq!((a0.value, a1.value, a2.value), (1.0, 0.0, 0.0));
    }

    #[test]
    fn constant_curvature_values() {
        let s = CurvatureJet::constant(1.0);
        let u = [1.0, 0.0];
        let (l, _) = ell_theta_series(&s, u, 0.2).unwrap();
        assert_relative_eq!(l.value, 0.2 - 0.2f64.powi(3) / 6.0 + 0.2f64.powi(5) / 120.0, max_relative = 1e-15);
        let u0 = u0_series(&s, u, 0.1).unwrap().value;
        assert_relative_eq!(u0, 1.000_833_958_333_333_3, max_relative = 1e-15);
        assert_eq!(u1_series(&s, u, 0.0).unwrap().value, 1.0 / 3.0);
        assert_eq!(u2_diagonal(&s), 1.0 / 15.0);
        assert_eq!(u2_diagonal(&CurvatureJet::symmetric(0.0, 1.0)), -1.0 / 15.0);
        let d2 = dist2_series(&s, [0.1, 0.0], [0.0, 0.1]).value;
        assert_relative_eq!(d2, 0.02 - 1e-4 / 3.0 - 0.02 / 45.0 * 1e-4, max_relative = 1e-14);
        let exact = (0.1f64.cos().powi(2)).acos().powi(2);
        assert!((d2 - exact).abs() < 1e-9);
    }

    #[test]
    fn pair_r3_coefficient_at_right_angle() {
        let s = CurvatureJet::constant(1.0);
        let r = 0.1;
        let full = dist_pair_series(&s, [1.0, 0.0], [0.0, 1.0], r).unwrap().value;
        let lead = 2f64.sqrt() * r;
        let t5 = (1.0 / (72.0 * 2f64.sqrt().powi(3)) + 2.0 / (90.0 * 2f64.sqrt())) * r.powi(5);
        assert_relative_eq!(full - lead + t5, -1e-3 / (6.0 * 2f64.sqrt()), max_relative = 1e-12);
        // Spherical law of cosines; the truncation leaves an r^7 remainder.
        let exact = (0.1f64.cos().powi(2)).acos();
        assert!((full - exact).abs() < 1e-8);
    }

    #[test]
    fn components_structure() {
        let j = generic();
        let x = [0.11, -0.07];
        let y = [0.05, 0.09];
        let c = dist2_components(&j, x, y);
        assert_relative_eq!(c.total(), dist2_series(&j, x, y).value, max_relative = 1e-14);
        assert_eq!(c.homogeneous(3), 0.0);
        for k in 2..7 {
            assert_eq!(c.bidegree(1, k), 0.0);
            assert_eq!(c.bidegree(k, 1), 0.0);
            assert_eq!(c.bidegree(k + 1, 0), 0.0);
        }
        let c0 = dist2_components(&j, x, [0.0, 0.0]);
        assert_eq!(c0.total(), x[0] * x[0] + x[1] * x[1]);
        let sw = dist2_series(&j, y, x).value;
        assert_relative_eq!(sw, dist2_series(&j, x, y).value, max_relative = 1e-14);
    }

    #[test]
    fn pair_series_is_root_of_dist2() {
        let j = generic();
        let (u, v) = ([0.6, 0.8], [-0.28, 0.96]);
        let mut prev = f64::INFINITY;
        for r in [0.08, 0.04, 0.02] {
            let d = dist_pair_series(&j, u, v, r).unwrap().value;
            let d2 = dist2_series(&j, [r * u[0], r * u[1]], [r * v[0], r * v[1]]).value;
            let rel = (d * d - d2).abs() / (r * r);
            assert!(rel < prev / 20.0 || rel < 1e-15);
            prev = rel;
        }
        assert!(dist_pair_series(&j, u, u, 0.1).is_err());
    }

    #[test]
    fn du_matches_pair_series_on_sphere() {
        let s = CurvatureJet::symmetric(1.0, 0.6);
        let phi = 2.0 * std::f64::consts::PI / 3.0;
        let a = AngleData::new(AngleRepr::pi_fraction(2, 3).unwrap()).unwrap();
        let u = [0.3f64.cos(), 0.3f64.sin()];
        let v = [(0.3 + phi).cos(), (0.3 + phi).sin()];
        for r in [0.01, 0.05, 0.2] {
            let a1 = du_series(&s, &a, r).unwrap().value;
            let a2 = dist_pair_series(&s, u, v, r).unwrap().value;
            assert_relative_eq!(a1, a2, max_relative = 1e-14);
        }
        let pi = AngleData::new(AngleRepr::pi_fraction(1, 1).unwrap()).unwrap();
        assert_eq!(du_series(&s, &pi, 0.3).unwrap().value, 0.6);
        let bad = CurvatureJet::new(1.0, [0.1, 0.0], [[0.0; 2]; 2]).unwrap();
        assert!(matches!(du_series(&bad, &a, 0.1), Err(Error::Symmetry(_))));
        let aniso = CurvatureJet::new(1.0, [0.0, 0.0], [[0.2, 0.0], [0.0, 0.1]]).unwrap();
        assert!(du_series(&aniso, &a, 0.1).is_err());
        assert!(du_series(&aniso, &pi, 0.1).is_ok());
        assert!(du_series_with(&aniso, &a, 0.1, SymmetryCheck::Unchecked).is_ok());
    }

    #[test]
    fn offdiag_constant_terms() {
        let s = CurvatureJet::symmetric(1.0, 0.4);
        let a = AngleData::new(AngleRepr::pi_fraction(1, 2).unwrap()).unwrap();
        let (u0, u1, u2) = offdiag_u_series(&s, &a, [1.0, 0.0], 0.0).unwrap();
        assert_eq!((u0.value, u1.value), (1.0, 1.0 / 3.0));
        assert_relative_eq!(u2.value, 1.0 / 15.0 - 0.4 / 15.0, max_relative = 1e-15);
        let pi = AngleData::new(AngleRepr::pi_fraction(1, 1).unwrap()).unwrap();
        let (u0, _, _) = offdiag_u_series(&CurvatureJet::constant(1.0), &pi, [1.0, 0.0], 0.1).unwrap();
        assert_relative_eq!(u0.value, 1.0 + 1e-2 / 12.0 + 1e-4 / 160.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_non_unit() {
        assert!(ell_theta_series(&generic(), [1.0, 1.0], 0.1).is_err());
        assert!(u0_series(&generic(), [0.5, 0.0], 0.1).is_err());
    }
}
