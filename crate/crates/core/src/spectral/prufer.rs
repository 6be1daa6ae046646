//! Prüfer-phase shooting for the separated radial Dirichlet problem
//! `−(1/f)(f u')' + (ν²/f²) u = λ u`, `u(R) = 0`, `u ~ r^ν` at the vertex.
//!
//! With `tan ϑ = σ f u / (f u')` and `σ = √λ` the phase obeys
//! `ϑ' = σ − ν²/(σ f²) sin²ϑ + (f'/f) sinϑ cosϑ`; eigenvalue `m` is the
//! root of `ϑ(R; σ) = mπ`. The σ-derivative of the phase is integrated
//! alongside for Newton steps.

use std::f64::consts::PI;

use nalgebra::SVector;

use crate::error::{Error, Result};
use crate::geometry::RotationalProfile;
use crate::ode::{integrate_to, Rhs};

const PHASE_TOL: f64 = 1e-13;
const MAX_NEWTON: usize = 60;

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

/// Radial problem of one angular order on `[0, R]`.
pub(crate) struct RadialProblem {
    g: Vec<f64>,
    gs: Vec<f64>,
    nu: f64,
    radius: f64,
}

struct Phase<'a> {
    p: &'a RadialProblem,
    sigma: f64,
}

impl Rhs<2> for Phase<'_> {
    fn eval(&self, r: f64, y: &SVector<f64, 2>, dy: &mut SVector<f64, 2>) {
        let s = r * r;
        let g = horner(&self.p.g, s);
        let gs = horner(&self.p.gs, s);
        let f = r * g;
        let lf = 1.0 / r + 2.0 * r * gs / g;
        let (sn, cs) = y[0].sin_cos();
        let a = self.p.nu * self.p.nu / (self.sigma * f * f);
        dy[0] = self.sigma - a * sn * sn + lf * sn * cs;
        let dth = -2.0 * a * sn * cs + lf * (cs * cs - sn * sn);
        let dsig = 1.0 + a / self.sigma * sn * sn;
        dy[1] = dth * y[1] + dsig;
    }
}

impl RadialProblem {
    pub(crate) fn new(profile: &RotationalProfile, radius: f64, nu: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= profile.valid_radius() * (1.0 + 1e-15)) {
            return Err(Error::Domain { at: radius, msg: "outer radius beyond the valid radius".into() });
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::Input(format!("angular order {nu} must be a finite non-negative number")));
        }
        let g = profile.g_coeffs().to_vec();
        let gs: Vec<f64> = g.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect();
        Ok(Self { g, gs, nu, radius })
    }

    pub(crate) fn nu(&self) -> f64 {
        self.nu
    }

    /// `ϑ(R)` and `∂ϑ(R)/∂σ`.
    pub(crate) fn phase(&self, sigma: f64) -> Result<(f64, f64)> {
        let nu = self.nu;
        let big_r = self.radius;
        let r0 = (1e-3 * (nu + 1.0).sqrt() / sigma).clamp(1e-6 * big_r, 1e-2 * big_r);
        // Two-term Frobenius start u = r^ν (1 + c1 r²).
        let g1 = self.g.get(1).copied().unwrap_or(0.0);
        let c1 = -sigma * sigma / (4.0 * (nu + 1.0)) - 0.5 * g1 * nu;
        let dc1 = -sigma / (2.0 * (nu + 1.0));
        let r2 = r0 * r0;
        let a = sigma * r0 * (1.0 + c1 * r2);
        let b = nu + (nu + 2.0) * c1 * r2;
        let da = r0 * (1.0 + c1 * r2) + sigma * r0 * r2 * dc1;
        let db = (nu + 2.0) * r2 * dc1;
        let th0 = a.atan2(b);
        let chi0 = (b * da - a * db) / (a * a + b * b);
        let y = integrate_to::<_, 2, 3>(
            &Phase { p: self, sigma },
            r0,
            big_r,
            SVector::<f64, 2>::new(th0, chi0),
            PHASE_TOL,
            PHASE_TOL,
        )?;
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Solver(format!("non-finite Prüfer phase at ν = {nu}, σ = {sigma}")));
        }
        Ok((y[0], y[1]))
    }

    /// Number of eigenvalues `≤ σ²`.
    pub(crate) fn count_below(&self, sigma: f64) -> Result<usize> {
        Ok((self.phase(sigma)?.0 / PI).floor().max(0.0) as usize)
    }

    /// `σ_m` with `ϑ(R; σ_m) = mπ`, given `lo < σ_m ≤ hi`.
    fn root(&self, m: usize, mut lo: f64, mut hi: f64, guess: f64, tol: f64) -> Result<f64> {
        let target = m as f64 * PI;
        let mut sigma = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
        for _ in 0..MAX_NEWTON {
            let (th, chi) = self.phase(sigma)?;
            let res = th - target;
            if res < 0.0 {
                lo = lo.max(sigma);
            } else {
                hi = hi.min(sigma);
            }
            let step = -res / chi;
            let mut next = sigma + step;
            if !(chi > 0.0) || !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - sigma).abs();
            sigma = next;
            if moved <= 4.0 * f64::EPSILON * sigma || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(sigma);
            }
            if moved <= 1e-3 * tol * sigma && res.abs() < 1e-9 {
                return Ok(sigma);
            }
        }
        Err(Error::Solver(format!("eigenvalue {m} of order ν = {} did not converge (bracket [{lo}, {hi}])", self.nu)))
    }

    /// The first `count` values `σ_m = √λ_m`, bracketed below `hi`.
    pub(crate) fn sigmas(&self, count: usize, sigma_hi: f64, tol: f64) -> Result<Vec<f64>> {
        let (th_hi, _) = self.phase(sigma_hi)?;
        if ((th_hi / PI).floor() as usize) < count {
            return Err(Error::Solver(format!(
                "upper bracket σ = {sigma_hi} holds fewer than {count} eigenvalues at ν = {}",
                self.nu
            )));
        }
        let mut out: Vec<f64> = Vec::with_capacity(count);
        for m in 1..=count {
            let lo = out.last().copied().unwrap_or(0.0);
            let guess = match out.len() {
                0 => sigma_hi * PI / th_hi.max(PI),
                1 => {
                    let done = (m - 1) as f64 * PI;
                    lo + (sigma_hi - lo) * PI / (th_hi - done).max(PI)
                }
                n => 2.0 * out[n - 1] - out[n - 2],
            };
            out.push(self.root(m, lo, sigma_hi, guess, tol)?);
        }
        Ok(out)
    }

    /// Upper bracket holding at least `count` eigenvalues.
    pub(crate) fn bracket(&self, count: usize) -> Result<f64> {
        let mut sigma = ((count as f64 + 0.5 * self.nu + 1.0) * PI / self.radius).max(1.0);
        for _ in 0..60 {
            if self.count_below(sigma)? >= count {
                return Ok(sigma);
            }
            sigma *= 1.5;
        }
        Err(Error::Solver(format!("could not bracket {count} eigenvalues at ν = {}", self.nu)))
    }
}
