//! Geodesics integrated as a Hamiltonian flow in Cartesian normal
//! coordinates about the vertex, where the metric is
//! `g = G² I + (1 − G²) x̂ x̂ᵀ` and the inverse metric is smooth at the pole.

use nalgebra::{Matrix2, SVector, Vector2};
use serde::{Deserialize, Serialize};

use super::RotationalProfile;
use crate::error::{Error, Result};
use crate::ode::{integrate, Outcome, Rhs};

const RTOL: f64 = 1e-14;
const ATOL: f64 = 1e-17;

/// Geodesic polar coordinates about the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePointPolar {
    pub r: f64,
    pub theta: f64,
}

impl SurfacePointPolar {
    #[must_use]
    pub fn new(r: f64, theta: f64) -> Self {
        Self { r, theta }
    }

    /// Normal coordinates `r (cos θ, sin θ)`.
    #[must_use]
    pub fn cartesian(&self) -> [f64; 2] {
        [self.r * self.theta.cos(), self.r * self.theta.sin()]
    }

    #[must_use]
    pub fn from_cartesian(x: [f64; 2]) -> Self {
        Self { r: x[0].hypot(x[1]), theta: x[1].atan2(x[0]) }
    }
}

/// Position, polar velocity and arc length along a unit-speed geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub position: SurfacePointPolar,
    pub r_dot: f64,
    pub theta_dot: f64,
    pub s: f64,
}

struct Flow<'a> {
    profile: &'a RotationalProfile,
}

impl Flow<'_> {
    /// `(a, b, a'/r, b'/r)` for `H = ½[a|p|² + b (x·p)²]`.
    fn coeffs(&self, s: f64) -> [f64; 4] {
        let [g, gr, p, pr] = self.profile.metric_terms(s);
        let ig2 = 1.0 / (g * g);
        let ig3 = ig2 / g;
        [ig2, p * ig2, -2.0 * gr * ig3, pr * ig2 - 2.0 * p * gr * ig3]
    }

    fn velocity(&self, x: Vector2<f64>, p: Vector2<f64>) -> Vector2<f64> {
        let [a, b, _, _] = self.coeffs(x.norm_squared());
        a * p + b * x.dot(&p) * x
    }
}

impl Rhs<4> for Flow<'_> {
    fn eval(&self, _t: f64, y: &SVector<f64, 4>, dy: &mut SVector<f64, 4>) {
        let x = Vector2::new(y[0], y[1]);
        let p = Vector2::new(y[2], y[3]);
        let [a, b, ar, br] = self.coeffs(x.norm_squared());
        let xp = x.dot(&p);
        let xd = a * p + b * xp * x;
        let pd = -0.5 * (ar * p.norm_squared() + br * xp * xp) * x - b * xp * p;
        *dy = SVector::<f64, 4>::new(xd[0], xd[1], pd[0], pd[1]);
    }

    fn stop(&self, _t: f64, y: &SVector<f64, 4>) -> bool {
        y[0].hypot(y[1]) > self.profile.valid_radius()
    }
}

/// Orthonormal frame `{e_r, e_θ}` at a point, as Euclidean vectors in normal coordinates.
fn frame(profile: &RotationalProfile, start: SurfacePointPolar) -> (Vector2<f64>, Vector2<f64>, f64) {
    let er = Vector2::new(start.theta.cos(), start.theta.sin());
    let eperp = Vector2::new(-er[1], er[0]);
    let g = profile.metric_terms(start.r * start.r)[0];
    (er, eperp, g)
}

fn shoot_raw(
    profile: &RotationalProfile,
    start: SurfacePointPolar,
    direction: f64,
    length: f64,
) -> Result<(Vector2<f64>, Vector2<f64>)> {
    let (er, eperp, g) = frame(profile, start);
    let x0 = start.r * er;
    let p0 = direction.cos() * er + g * direction.sin() * eperp;
    let flow = Flow { profile };
    let y0 = SVector::<f64, 4>::new(x0[0], x0[1], p0[0], p0[1]);
    match integrate::<_, 4, 5>(&flow, 0.0, length, y0, RTOL, ATOL)? {
        Outcome::Done(y) => Ok((Vector2::new(y[0], y[1]), Vector2::new(y[2], y[3]))),
        Outcome::Stopped(s, _) => Err(Error::Domain { at: s, msg: "geodesic left the valid radius".into() }),
    }
}

/// Full state at arc length `length` along the unit-speed geodesic from
/// `start` whose initial direction makes angle `direction` with `∂_r`
/// (at the vertex, with the ray `θ = start.theta`).
pub fn geodesic_state(
    profile: &RotationalProfile,
    start: SurfacePointPolar,
    direction: f64,
    length: f64,
) -> Result<GeodesicState> {
    profile.check_r(start.r)?;
    let (x, p) = shoot_raw(profile, start, direction, length)?;
    let v = Flow { profile }.velocity(x, p);
    let r2 = x.norm_squared();
    let position = SurfacePointPolar::from_cartesian([x[0], x[1]]);
    let (r_dot, theta_dot) =
        if r2 > 0.0 { (x.dot(&v) / r2.sqrt(), (x[0] * v[1] - x[1] * v[0]) / r2) } else { (1.0, 0.0) };
    Ok(GeodesicState { position, r_dot, theta_dot, s: length })
}

/// Endpoint of the unit-speed geodesic of length `length`.
pub fn geodesic_shoot(
    profile: &RotationalProfile,
    start: SurfacePointPolar,
    direction: f64,
    length: f64,
) -> Result<SurfacePointPolar> {
    profile.check_r(start.r)?;
    if length < 0.0 {
        return Err(Error::Input("geodesic length must be non-negative".into()));
    }
    let (sn, cs) = direction.sin_cos();
    if sn == 0.0 || start.r == 0.0 {
        // Radial geodesics are exact.
        let (theta, signed) = if start.r == 0.0 {
            (start.theta + direction, length)
        } else {
            (start.theta, start.r + cs.signum() * length)
        };
        let (r, theta) = if signed >= 0.0 { (signed, theta) } else { (-signed, theta + std::f64::consts::PI) };
        if r > profile.valid_radius() {
            let exit = if start.r == 0.0 || cs > 0.0 {
                profile.valid_radius() - start.r
            } else {
                start.r + profile.valid_radius()
            };
            return Err(Error::Domain { at: exit, msg: "geodesic left the valid radius".into() });
        }
        return Ok(SurfacePointPolar { r, theta });
    }
    let (x, _) = shoot_raw(profile, start, direction, length)?;
    Ok(SurfacePointPolar::from_cartesian([x[0], x[1]]))
}

/// Riemannian distance between two points inside the convexity radius.
pub fn geodesic_distance(profile: &RotationalProfile, q: SurfacePointPolar, w: SurfacePointPolar) -> Result<f64> {
    geodesic_distance_within(profile, q, w, profile.convexity_radius())
}

/// As [`geodesic_distance`] with an explicit convexity radius.
pub fn geodesic_distance_within(
    profile: &RotationalProfile,
    q: SurfacePointPolar,
    w: SurfacePointPolar,
    convexity_radius: f64,
) -> Result<f64> {
    for pt in [q, w] {
        if pt.r > convexity_radius {
            return Err(Error::Convexity(format!("point at r = {} beyond convexity radius {convexity_radius}", pt.r)));
        }
    }
    let xq = Vector2::from(q.cartesian());
    let xw = Vector2::from(w.cartesian());
    let delta = xw - xq;
    if delta.norm() == 0.0 {
        return Ok(0.0);
    }
    if q.r == 0.0 {
        return Ok(w.r);
    }
    if w.r == 0.0 {
        return Ok(q.r);
    }
    let (er, eperp, g) = frame(profile, q);
    let mut alpha = (g * delta.dot(&eperp)).atan2(delta.dot(&er));
    let mut len = (delta.dot(&er)).hypot(g * delta.dot(&eperp));
    let flow = Flow { profile };
    let scale = xq.norm().max(xw.norm());
    let end = |a: f64, l: f64| shoot_raw(profile, q, a, l);
    let (mut x, mut p) = end(alpha, len)?;
    let mut res = x - xw;
    for _ in 0..40 {
        if res.norm() <= 1e-15 * scale {
            return Ok(len);
        }
        let h = 1e-6;
        let (xa, _) = end(alpha + h, len)?;
        let (xb, _) = end(alpha - h, len)?;
        let da = (xa - xb) / (2.0 * h);
        let ds = flow.velocity(x, p);
        let jac = Matrix2::from_columns(&[da, ds]);
        let step = jac.lu().solve(&(-res)).ok_or_else(|| Error::Convexity("singular shooting Jacobian".into()))?;
        let mut t = 1.0;
        loop {
            let (a1, l1) = (alpha + t * step[0], len + t * step[1]);
            if l1 > 0.0 {
                if let Ok((x1, p1)) = end(a1, l1) {
                    let r1 = x1 - xw;
                    if r1.norm() < res.norm() || r1.norm() <= 1e-15 * scale {
                        alpha = a1;
                        len = l1;
                        x = x1;
                        p = p1;
                        res = r1;
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                if res.norm() <= 1e-13 * scale {
                    return Ok(len);
                }
                return Err(Error::Convexity(format!("shooting stalled with residual {:e}", res.norm())));
            }
        }
    }
    if res.norm() <= 1e-13 * scale {
        Ok(len)
    } else {
        Err(Error::Convexity(format!("shooting did not converge (residual {:e})", res.norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn radial_from_vertex_is_exact() {
        let s = RotationalProfile::sphere(1.0, 1.2).unwrap();
        let e = geodesic_shoot(&s, SurfacePointPolar::new(0.0, 0.4), 0.0, 0.9).unwrap();
        assert_eq!((e.r, e.theta), (0.9, 0.4));
        assert!(geodesic_shoot(&s, SurfacePointPolar::new(0.0, 0.0), 0.0, 1.5).is_err());
    }

    #[test]
    fn flat_lines() {
        let f = RotationalProfile::flat(2.0);
        let start = SurfacePointPolar::new(0.5, 0.3);
        let alpha = 1.1;
        let e = geodesic_shoot(&f, start, alpha, 0.8).unwrap();
        let dir = 0.3 + alpha;
        let x = [0.5 * 0.3f64.cos() + 0.8 * dir.cos(), 0.5 * 0.3f64.sin() + 0.8 * dir.sin()];
        let c = e.cartesian();
        assert!((c[0] - x[0]).abs() < 1e-10 && (c[1] - x[1]).abs() < 1e-10);
    }

    #[test]
    fn clairaut_invariant() {
        let b = RotationalProfile::bump(1.5, 1.2).unwrap();
        let start = SurfacePointPolar::new(0.4, 0.0);
        let alpha: f64 = 0.9;
        let c0 = b.f(0.4) * alpha.sin();
        for s in [0.1, 0.3, 0.6] {
            let st = geodesic_state(&b, start, alpha, s).unwrap();
            let f = b.f(st.position.r);
            assert!((f * f * st.theta_dot - c0).abs() < 1e-10);
            let g = st.r_dot.powi(2) + (f * st.theta_dot).powi(2);
            assert!((g - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exits_domain() {
        let b = RotationalProfile::bump(1.5, 1.0).unwrap();
        let e = geodesic_shoot(&b, SurfacePointPolar::new(0.5, 0.0), 0.3, 2.0);
        assert!(matches!(e, Err(Error::Domain { .. })));
    }

    #[test]
    fn sphere_distances() {
        let s = RotationalProfile::sphere(1.0, 1.5).unwrap();
        let q = SurfacePointPolar::new(0.7, 0.2);
        let w = SurfacePointPolar::new(0.4, 1.3);
        let d = geodesic_distance(&s, q, w).unwrap();
        let exact = (0.7f64.cos() * 0.4f64.cos() + 0.7f64.sin() * 0.4f64.sin() * 1.1f64.cos()).acos();
        assert!((d - exact).abs() < 1e-12);
        assert_eq!(geodesic_distance(&s, q, q).unwrap(), 0.0);
        let d2 = geodesic_distance(&s, w, q).unwrap();
        assert!((d - d2).abs() < 1e-12);
        let far = SurfacePointPolar::new(1.4, 0.0);
        assert!(matches!(geodesic_distance(&s, q, far), Err(Error::Convexity(_))));
    }

    #[test]
    fn flat_law_of_cosines() {
        let f = RotationalProfile::flat(1.0);
        let q = SurfacePointPolar::new(0.3, 0.0);
        let w = SurfacePointPolar::new(0.8, 2.0);
        let d = geodesic_distance(&f, q, w).unwrap();
        let exact = (0.09f64 + 0.64 - 2.0 * 0.24 * 2f64.cos()).sqrt();
        assert_relative_eq!(d, exact, max_relative = 1e-12);
        let opp = geodesic_distance(&f, q, SurfacePointPolar::new(0.3, PI)).unwrap();
        assert_relative_eq!(opp, 0.6, max_relative = 1e-12);
    }
}
