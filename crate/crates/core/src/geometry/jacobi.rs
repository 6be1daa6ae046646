use nalgebra::SVector;

use super::RotationalProfile;
use crate::error::{Error, Result};
use crate::expansions::CurvatureJet;
use crate::ode::{integrate_to, Rhs};
use crate::quad::gauss_legendre;
use crate::tolerances::ODE_STEP_TOL;

struct Jacobi<F: Fn(f64) -> f64> {
    k: F,
}

impl<F: Fn(f64) -> f64> Rhs<2> for Jacobi<F> {
    fn eval(&self, r: f64, y: &SVector<f64, 2>, dy: &mut SVector<f64, 2>) {
        dy[0] = y[1];
        dy[1] = -(self.k)(r) * y[0];
    }
}

fn solve(k: impl Fn(f64) -> f64, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Input("negative radius".into()));
    }
    let y =
        integrate_to::<_, 2, 3>(&Jacobi { k }, 0.0, r, SVector::<f64, 2>::new(0.0, 1.0), 1e-14, ODE_STEP_TOL * 1e-4)?;
    Ok(y[0].abs())
}

/// `|J(r)|` for `J'' = −K J`, `J(0) = 0`, `J'(0) = 1`, along a radial geodesic.
pub fn jacobi_length(profile: &RotationalProfile, r: f64) -> Result<f64> {
    profile.check_r(r)?;
    solve(|rho| profile.curvature(rho.min(profile.valid_radius())).unwrap_or(f64::NAN), r)
}

/// As [`jacobi_length`] with `K(ρu) = K + dK(u)ρ + ½∇²K(u,u)ρ²` rebuilt from a jet.
pub fn jacobi_length_jet(jet: &CurvatureJet, u: [f64; 2], r: f64) -> Result<f64> {
    crate::expansions::ell_theta_series(jet, u, 0.0)?;
    let (k0, k1, k2) = (jet.k(), jet.dk(u), 0.5 * jet.hess(u, u));
    solve(|rho| k0 + rho * (k1 + rho * k2), r)
}

/// Minakshisundaram–Pleijel recursion for `u_1(p, exp_p(ru))` at the vertex,
/// with `u_0 = θ^{−1/2}` and the polar Laplacian applied to the radial `u_0`.
pub fn u1_recursion_oracle(profile: &RotationalProfile, r: f64) -> Result<f64> {
    profile.check_r(r)?;
    let g = profile.g_coeffs();
    let eval = |s: f64| super::derivs::<3>(g, s);
    // −Δu0 / u0 = [u0'' + (f'/f) u0'] / u0, written without the 1/r factor.
    let lap_ratio = |rho: f64| {
        let s = rho * rho;
        let [th, ts, tss] = eval(s);
        let th1 = 2.0 * rho * ts;
        let th2 = 2.0 * ts + 4.0 * s * tss;
        let u0 = th.powf(-0.5);
        let u0pp = 0.75 * th.powf(-2.5) * th1 * th1 - 0.5 * th.powf(-1.5) * th2;
        let rfp_over_f = (th + 2.0 * s * ts) / th;
        let radial = -rfp_over_f * th.powf(-1.5) * ts;
        (u0pp + radial) / u0
    };
    let (x, w) = gauss_legendre(24);
    let integral: f64 = x.iter().zip(&w).map(|(xi, wi)| 0.5 * wi * lap_ratio(0.5 * r * (xi + 1.0))).sum();
    let u0r = eval(r * r)[0].powf(-0.5);
    Ok(u0r * integral)
}

/// `‖dF‖²_g − 4F` at `x` for the truncated squared-distance series `F = F^y`
/// of the vertex jet, with the exact metric of the profile.
pub fn hamilton_jacobi_residual(profile: &RotationalProfile, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    let rx = x[0].hypot(x[1]);
    profile.check_r(rx)?;
    let jet = profile.vertex_jet();
    let f = crate::expansions::dist2_series(&jet, x, y).value;
    let k = jet.k();
    let w = x[0] * y[1] - x[1] * y[0];
    let dw = [y[1], -y[0]];
    let w2 = w * w;
    let q = x[0] * x[0] + x[1] * x[1] - 4.0 * (x[0] * y[0] + x[1] * y[1]) + y[0] * y[0] + y[1] * y[1];
    let s = [x[0] + y[0], x[1] + y[1]];
    let hs = jet.hess(x, x) + jet.hess(x, y) + jet.hess(y, y);
    let h = jet.hess_k();
    let coef = -k / 3.0 - jet.dk(s) / 12.0 - k * k / 45.0 * q - hs / 60.0;
    let mut grad = [0.0; 2];
    for i in 0..2 {
        let dhs = 2.0 * (h[i][0] * x[0] + h[i][1] * x[1]) + (h[i][0] * y[0] + h[i][1] * y[1]);
        let dq = 2.0 * x[i] - 4.0 * y[i];
        grad[i] = 2.0 * (x[i] - y[i])
            + 2.0 * w * dw[i] * coef
            + w2 * (-jet.grad_k()[i] / 12.0 - k * k / 45.0 * dq - dhs / 60.0);
    }
    let [gg, _, p, _] = profile.metric_terms(rx * rx);
    let xp = x[0] * grad[0] + x[1] * grad[1];
    let norm2 = (grad[0] * grad[0] + grad[1] * grad[1] + p * xp * xp) / (gg * gg);
    Ok(norm2 - 4.0 * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_closed_forms() {
        let f = RotationalProfile::flat(1.0);
        assert_relative_eq!(jacobi_length(&f, 0.7).unwrap(), 0.7, max_relative = 1e-13);
        let s = RotationalProfile::sphere(1.0, 1.5).unwrap();
        for r in [0.1, 0.5, 1.4] {
            assert!((jacobi_length(&s, r).unwrap() - r.sin()).abs() < 1e-12);
        }
        let b = RotationalProfile::bump(1.5, 1.0).unwrap();
        assert!((jacobi_length(&b, 0.9).unwrap() - b.f(0.9)).abs() < 1e-12);
        let j = CurvatureJet::constant(1.0);
        assert!((jacobi_length_jet(&j, [1.0, 0.0], 0.8).unwrap() - 0.8f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn recursion_oracle_limits() {
        let f = RotationalProfile::flat(1.0);
        assert_eq!(u1_recursion_oracle(&f, 0.3).unwrap(), 0.0);
        let s = RotationalProfile::sphere(1.0, 1.0).unwrap();
        assert_relative_eq!(u1_recursion_oracle(&s, 1e-6).unwrap(), 1.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn recursion_oracle_on_sphere_closed_form() {
        // On the unit sphere u0 = (r / sin r)^{1/2}; check against a direct
        // finite-difference evaluation of the recursion integrand.
        let s = RotationalProfile::sphere(1.0, 1.2).unwrap();
        let r = 0.8;
        let u0 = |x: f64| if x == 0.0 { 1.0 } else { (x / x.sin()).sqrt() };
        let h = 1e-4;
        let integrand = |x: f64| {
            let x = x.max(2.0 * h);
            let d1 = (u0(x + h) - u0(x - h)) / (2.0 * h);
            let d2 = (u0(x + h) - 2.0 * u0(x) + u0(x - h)) / (h * h);
            (d2 + x.cos() / x.sin() * d1) / u0(x)
        };
        let n = 4000;
        let mut acc = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            acc += integrand(t * r) / n as f64;
        }
        let direct = u0(r) * acc;
        assert!((u1_recursion_oracle(&s, r).unwrap() - direct).abs() < 1e-5);
    }

    #[test]
    fn hamilton_jacobi_small_on_sphere() {
        let s = RotationalProfile::sphere(1.0, 1.0).unwrap();
        let res = hamilton_jacobi_residual(&s, [0.05, 0.01], [-0.02, 0.04]).unwrap();
        assert!(res.abs() < 1e-11);
        let flat = RotationalProfile::flat(1.0);
        assert!(hamilton_jacobi_residual(&flat, [0.3, 0.1], [0.2, -0.4]).unwrap().abs() < 1e-15);
    }
}
