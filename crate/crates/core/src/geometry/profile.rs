use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansions::CurvatureJet;

/// Surface of revolution family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    Flat,
    Sphere {
        #[serde(rename = "K")]
        k: f64,
    },
    Hyperbolic {
        #[serde(rename = "K")]
        k: f64,
    },
    /// `f(r) = r + a3 r^3 + a5 r^5 + …`; `coeffs = [a3, a5, …]`.
    PolyOdd {
        coeffs: Vec<f64>,
    },
}

/// Metric `dr² + f(r)² dθ²` with `f` odd, `f(0) = 0`, `f'(0) = 1`.
///
/// Internally `f(r) = r G(r²)` and every quantity is evaluated from the
/// polynomial `G(s)`; the sine and sinh presets use their Taylor series
/// truncated far below double precision on the valid disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationalProfile {
    kind: ProfileKind,
    valid_radius: f64,
    g: Vec<f64>,
    p: Vec<f64>,
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

/// Value and the first `N-1` derivatives of a polynomial in `s`.
pub(crate) fn derivs<const N: usize>(c: &[f64], s: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for (n, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in (n..c.len()).rev() {
            let fall: f64 = (0..n).map(|j| (i - j) as f64).product();
            acc = acc * s + c[i] * fall;
        }
        *o = acc;
    }
    out
}

fn series_coeffs(k: f64, s_max: f64) -> Vec<f64> {
    // sin(√K r)/(√K r) = Σ (−K s)^n / (2n+1)!
    let mut c = vec![1.0];
    let mut term = 1.0f64;
    for n in 1..80 {
        term *= -k / ((2 * n) as f64 * (2 * n + 1) as f64);
        c.push(term);
        if term.abs() * s_max.powi(n) < 1e-22 {
            break;
        }
    }
    c
}

impl RotationalProfile {
    pub fn new(kind: ProfileKind, valid_radius: f64) -> Result<Self> {
        if !(valid_radius > 0.0 && valid_radius.is_finite()) {
            return Err(Error::Profile(format!("valid radius {valid_radius} must be positive")));
        }
        let s_max = valid_radius * valid_radius;
        let g = match &kind {
            ProfileKind::Flat => vec![1.0],
            ProfileKind::Sphere { k } => {
                if !(*k > 0.0) {
                    return Err(Error::Profile("sphere curvature must be positive".into()));
                }
                if valid_radius * k.sqrt() >= std::f64::consts::PI {
                    return Err(Error::Profile("sphere valid radius reaches the antipode".into()));
                }
                series_coeffs(*k, s_max)
            }
            ProfileKind::Hyperbolic { k } => {
                if !(*k < 0.0) {
                    return Err(Error::Profile("hyperbolic curvature must be negative".into()));
                }
                series_coeffs(*k, s_max)
            }
            ProfileKind::PolyOdd { coeffs } => {
                if coeffs.iter().any(|a| !a.is_finite()) {
                    return Err(Error::Profile("non-finite profile coefficient".into()));
                }
                let mut g = vec![1.0];
                g.extend_from_slice(coeffs);
                while g.len() > 1 && *g.last().unwrap() == 0.0 {
                    g.pop();
                }
                g
            }
        };
        // P(s) = (G(s)^2 − 1)/s
        let mut g2 = vec![0.0; 2 * g.len() - 1];
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                g2[i + j] += a * b;
            }
        }
        let p = if g2.len() > 1 { g2[1..].to_vec() } else { vec![0.0] };
        let prof = Self { kind, valid_radius, g, p };
        let n = 4000;
        for i in 1..=n {
            let r = valid_radius * f64::from(i) / f64::from(n);
            if prof.g_of_s(r * r) <= 0.0 {
                return Err(Error::Profile(format!("f(r) is not positive at r = {r}")));
            }
        }
        Ok(prof)
    }

    #[must_use]
    pub fn flat(valid_radius: f64) -> Self {
        Self::new(ProfileKind::Flat, valid_radius).expect("flat profile is always valid")
    }

    pub fn sphere(k: f64, valid_radius: f64) -> Result<Self> {
        Self::new(ProfileKind::Sphere { k }, valid_radius)
    }

    pub fn hyperbolic(k: f64, valid_radius: f64) -> Result<Self> {
        Self::new(ProfileKind::Hyperbolic { k }, valid_radius)
    }

    pub fn poly_odd(coeffs: Vec<f64>, valid_radius: f64) -> Result<Self> {
        Self::new(ProfileKind::PolyOdd { coeffs }, valid_radius)
    }

    /// `f = sin r + δ r^5/120`: `K(0) = 1`, `lapK(0) = 2δ/3`.
    pub fn bump(delta: f64, valid_radius: f64) -> Result<Self> {
        let mut c = series_coeffs(1.0, valid_radius * valid_radius);
        c.remove(0);
        c[1] += delta / 120.0;
        Self::poly_odd(c, valid_radius)
    }

    #[must_use]
    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    #[must_use]
    pub fn valid_radius(&self) -> f64 {
        self.valid_radius
    }

    /// Coefficients of `G(s)` with `f(r) = r G(r²)`.
    #[must_use]
    pub fn g_coeffs(&self) -> &[f64] {
        &self.g
    }

    /// Default convexity radius for distance computations.
    #[must_use]
    pub fn convexity_radius(&self) -> f64 {
        match self.kind {
            ProfileKind::Sphere { k } => (0.8 * std::f64::consts::FRAC_PI_2 / k.sqrt()).min(self.valid_radius),
            ProfileKind::Flat | ProfileKind::Hyperbolic { .. } => self.valid_radius,
            ProfileKind::PolyOdd { .. } => 0.4 * self.valid_radius,
        }
    }

    pub(crate) fn check_r(&self, r: f64) -> Result<()> {
        if !(0.0..=self.valid_radius * (1.0 + 1e-12)).contains(&r) {
            return Err(Error::Domain { at: r, msg: format!("radius outside [0, {}]", self.valid_radius) });
        }
        Ok(())
    }

    pub(crate) fn g_of_s(&self, s: f64) -> f64 {
        horner(&self.g, s)
    }

    /// `f(r)`.
    #[must_use]
    pub fn f(&self, r: f64) -> f64 {
        r * self.g_of_s(r * r)
    }

    /// `(f, f', f'')` at `r`.
    #[must_use]
    pub fn f_derivs(&self, r: f64) -> [f64; 3] {
        let s = r * r;
        let [g, gs, gss] = derivs::<3>(&self.g, s);
        [r * g, g + 2.0 * s * gs, r * (6.0 * gs + 4.0 * s * gss)]
    }

    /// `f'/f`, or `None` at the vertex.
    #[must_use]
    pub fn log_derivative(&self, r: f64) -> Option<f64> {
        (r > 0.0).then(|| {
            let [f, fp, _] = self.f_derivs(r);
            fp / f
        })
    }

    /// `(K, dK/ds, d²K/ds²)` with `s = r²`.
    fn k_of_s(&self, s: f64) -> [f64; 3] {
        let [g, g1, g2, g3, g4] = derivs::<5>(&self.g, s);
        let n = -(6.0 * g1 + 4.0 * s * g2);
        let n1 = -(10.0 * g2 + 4.0 * s * g3);
        let n2 = -(14.0 * g3 + 4.0 * s * g4);
        let k = n / g;
        let k1 = (n1 - k * g1) / g;
        let k2 = (n2 - 2.0 * k1 * g1 - k * g2) / g;
        [k, k1, k2]
    }

    /// Gauss curvature `K(r) = −f''/f`.
    pub fn curvature(&self, r: f64) -> Result<f64> {
        self.check_r(r)?;
        Ok(self.k_of_s(r * r)[0])
    }

    /// `(K, K', K'')` in `r`.
    pub fn curvature_derivs(&self, r: f64) -> Result<[f64; 3]> {
        self.check_r(r)?;
        let s = r * r;
        let [k, k1, k2] = self.k_of_s(s);
        Ok([k, 2.0 * r * k1, 2.0 * k1 + 4.0 * s * k2])
    }

    /// Jet at the vertex: `gradK = 0`, `hessK = −(lapK/2) I`.
    #[must_use]
    pub fn vertex_jet(&self) -> CurvatureJet {
        let [k, k1, _] = self.k_of_s(0.0);
        CurvatureJet::symmetric(k, -4.0 * k1)
    }

    /// Jet at `(r0, 0)` in the frame `{∂_r, f⁻¹∂_θ}`.
    pub fn point_jet(&self, r0: f64) -> Result<CurvatureJet> {
        if r0 <= 0.0 {
            return Err(Error::Input("point_jet needs r0 > 0; use vertex_jet".into()));
        }
        if r0 >= self.valid_radius {
            return Err(Error::Domain { at: r0, msg: "point_jet outside the valid radius".into() });
        }
        let [k, kp, kpp] = self.curvature_derivs(r0)?;
        let lf = self.log_derivative(r0).expect("r0 > 0");
        CurvatureJet::new(k, [kp, 0.0], [[kpp, 0.0], [0.0, lf * kp]])
    }

    /// `(G, G'/r, P, P'/r)` with `P = (G² − 1)/r²`, all smooth in `r²`.
    pub(crate) fn metric_terms(&self, s: f64) -> [f64; 4] {
        let [g, gs] = derivs::<2>(&self.g, s);
        let [p, ps] = derivs::<2>(&self.p, s);
        [g, 2.0 * gs, p, 2.0 * ps]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn presets_match_closed_forms() {
        let s = RotationalProfile::sphere(1.0, 2.5).unwrap();
        let h = RotationalProfile::hyperbolic(-2.0, 2.0).unwrap();
        for r in [0.0, 0.1, 0.7, 1.9] {
            assert_relative_eq!(s.f(r), r.sin(), max_relative = 1e-14, epsilon = 1e-300);
            let q = 2f64.sqrt();
            assert_relative_eq!(h.f(r), (q * r).sinh() / q, max_relative = 1e-14, epsilon = 1e-300);
            assert_relative_eq!(s.curvature(r).unwrap(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(h.curvature(r).unwrap(), -2.0, max_relative = 1e-12);
        }
        let fl = RotationalProfile::flat(1.0);
        assert_eq!(fl.curvature(0.5).unwrap(), 0.0);
        assert_eq!(fl.vertex_jet(), CurvatureJet::zero());
        assert!(fl.curvature(1.5).is_err());
    }

    #[test]
    fn vertex_jet_of_sphere() {
        let j = RotationalProfile::sphere(1.0, 1.0).unwrap().vertex_jet();
        assert_relative_eq!(j.k(), 1.0, max_relative = 1e-15);
        assert!(j.lap_k().abs() < 1e-14);
        assert_eq!(j.grad_k(), [0.0, 0.0]);
    }

    #[test]
    fn bump_curvature_series() {
        let delta = 0.01;
        let a3 = -1.0 / 6.0;
        let a5 = 1.0 / 120.0 + delta / 120.0;
        let p = RotationalProfile::poly_odd(vec![a3, a5], 0.5).unwrap();
        assert_relative_eq!(p.curvature(0.0).unwrap(), -6.0 * a3, max_relative = 1e-15);
        let k2 = 6.0 * a3 * a3 - 20.0 * a5;
        // Independent series division of −f''/f for the quintic.
        let r: f64 = 1e-3;
        let f = r + a3 * r.powi(3) + a5 * r.powi(5);
        let fpp = 6.0 * a3 * r + 20.0 * a5 * r.powi(3);
        let k_direct = -fpp / f;
        assert_relative_eq!(k_direct, 1.0 + k2 * r * r, max_relative = 1e-11);
        assert_relative_eq!(p.vertex_jet().lap_k(), -4.0 * k2, max_relative = 1e-12);
        let b = RotationalProfile::bump(1.5, 1.0).unwrap();
        assert_relative_eq!(b.vertex_jet().lap_k(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(b.vertex_jet().k(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn point_jet_gradient_matches_difference() {
        let b = RotationalProfile::bump(1.5, 1.0).unwrap();
        let r0 = 0.3;
        let j = b.point_jet(r0).unwrap();
        let h = 1e-5;
        let fd = (b.curvature(r0 + h).unwrap() - b.curvature(r0 - h).unwrap()) / (2.0 * h);
        assert!((j.grad_k()[0] - fd).abs() < 1e-8);
        let fd2 = (b.curvature_derivs(r0 + h).unwrap()[1] - b.curvature_derivs(r0 - h).unwrap()[1]) / (2.0 * h);
        assert!((j.hess_k()[0][0] - fd2).abs() < 1e-7);
        let s = RotationalProfile::sphere(1.0, 1.0).unwrap().point_jet(0.4).unwrap();
        assert_relative_eq!(s.k(), 1.0, max_relative = 1e-13);
        assert!(s.grad_k()[0].abs() < 1e-12 && s.lap_k().abs() < 1e-11);
        assert!(b.point_jet(0.0).is_err());
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(RotationalProfile::sphere(1.0, 3.2).is_err());
        assert!(RotationalProfile::poly_odd(vec![-1.0], 1.5).is_err());
        assert!(RotationalProfile::sphere(-1.0, 1.0).is_err());
    }

    #[test]
    fn metric_terms_consistent() {
        let b = RotationalProfile::bump(-1.5, 1.0).unwrap();
        for r in [0.05f64, 0.4, 0.9] {
            let [g, _, p, _] = b.metric_terms(r * r);
            assert_relative_eq!(g, b.f(r) / r, max_relative = 1e-15);
            assert_relative_eq!(p, (g * g - 1.0) / (r * r), max_relative = 1e-9);
        }
    }
}
