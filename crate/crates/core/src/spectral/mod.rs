//! Dirichlet spectra of the separated radial problems on rotational disks
//! and sectors, and the heat traces assembled from them.

mod fd;
mod prufer;
mod trace;
mod wedge;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use fd::{fd_eigenvalues, fd_eigenvalues_richardson};
pub use trace::{cone_trace_contribution, donnelly_trace_I, flat_sector_trace, ConeRoutes, DiskSpectra};
pub use wedge::{reflection_erf_reduction, wedge_image_corner, WedgeImageSample};

use crate::error::{Error, Result};
use crate::geometry::RotationalProfile;
use crate::tolerances::{EIGEN_PRECISION_REL, TAIL_REFUSE_FRACTION};
use prufer::RadialProblem;

/// Relative agreement demanded between shooting and the finite-volume check.
pub const FD_CROSS_CHECK_REL: f64 = 1e-6;

/// Parameters of the tail bound `Σ_{λ > σ₀²} e^{−λt}`.
///
/// The omitted `√λ` are assumed to start at `sigma_start` or above and to
/// be spaced by at least `slope`; `effective_radius = π/slope`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailParams {
    pub sigma_start: f64,
    pub slope: f64,
    pub effective_radius: f64,
}

impl TailParams {
    fn new(sigma_start: f64, slope: f64) -> Self {
        Self { sigma_start, slope, effective_radius: PI / slope }
    }

    /// Upper bound on the omitted part of `Σ_m e^{−λ_m t}`.
    #[must_use]
    pub fn bound(&self, t: f64) -> f64 {
        let s = self.sigma_start;
        let rt = t.sqrt();
        (-s * s * t).exp() + PI.sqrt() / (2.0 * self.slope * rt) * libm::erfc(s * rt)
    }
}

/// Dirichlet eigenvalues of one angular order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub nu: f64,
    pub eigenvalues: Vec<f64>,
    pub tail: TailParams,
}

/// One sample of a trace-type function of `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t: f64,
    pub value: f64,
    pub tail_estimate: f64,
    /// Bound on the error from eigenvalue precision and summation rounding.
    #[serde(default)]
    pub precision: f64,
}

impl ModeSpectrum {
    fn from_sigmas(nu: f64, sigmas: &[f64], sigma_start: f64, radius: f64) -> Self {
        let mut slope = PI / radius;
        if let [.., a, b] = sigmas {
            slope = slope.min(b - a);
        }
        Self {
            nu,
            eigenvalues: sigmas.iter().map(|s| s * s).collect(),
            tail: TailParams::new(sigma_start, 0.9 * slope),
        }
    }

    #[must_use]
    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ e^{−λt}` over the stored eigenvalues, without any refusal.
    #[must_use]
    pub fn theta_unchecked(&self, t: f64) -> TraceSample {
        let value = neumaier(self.eigenvalues.iter().rev().map(|l| (-l * t).exp()));
        let slope: f64 = self.eigenvalues.iter().map(|l| l * t * (-l * t).exp()).sum();
        let precision = EIGEN_PRECISION_REL * slope + f64::EPSILON * self.count() as f64 * value;
        TraceSample { t, value, tail_estimate: self.tail.bound(t), precision }
    }
}

/// First `count` Dirichlet eigenvalues of `−(1/f)(f u')' + (ν²/f²) u` on `[0, R]`.
///
/// Each eigenvalue is a Prüfer-phase root; the lowest ones are re-derived with
/// the finite-volume scheme and must agree to [`FD_CROSS_CHECK_REL`].
pub fn radial_spectrum(
    profile: &RotationalProfile,
    radius: f64,
    nu: f64,
    count: usize,
    tol: f64,
) -> Result<ModeSpectrum> {
    if count == 0 {
        return Err(Error::Input("count must be at least 1".into()));
    }
    let problem = RadialProblem::new(profile, radius, nu)?;
    let hi = problem.bracket(count)?;
    let sigmas = problem.sigmas(count, hi, tol)?;
    let spec = ModeSpectrum::from_sigmas(nu, &sigmas, *sigmas.last().expect("count ≥ 1"), radius);
    cross_check(profile, radius, &spec)?;
    Ok(spec)
}

fn cross_check(profile: &RotationalProfile, radius: f64, spec: &ModeSpectrum) -> Result<()> {
    let n = spec.count().min(3);
    let top = spec.eigenvalues[n - 1].sqrt() * radius;
    let cells = ((40.0 * top) as usize).clamp(400, 16_000);
    let fd = fd_eigenvalues_richardson(profile, radius, spec.nu, n, cells)?;
    for (m, (a, b)) in spec.eigenvalues.iter().zip(&fd).enumerate() {
        if ((a - b) / a).abs() > FD_CROSS_CHECK_REL {
            return Err(Error::Solver(format!(
                "ν = {}: eigenvalue {} is {a} by shooting but {b} by finite volumes",
                spec.nu,
                m + 1
            )));
        }
    }
    Ok(())
}

/// `Σ_m e^{−λ_m t}` with the Weyl tail bound; refuses when the bound exceeds
/// [`TAIL_REFUSE_FRACTION`] of the value unless `force` is set.
pub fn partial_theta(spec: &ModeSpectrum, t: f64, force: bool) -> Result<TraceSample> {
    if !(t > 0.0) {
        return Err(Error::Input(format!("time {t} must be positive")));
    }
    let s = spec.theta_unchecked(t);
    if !force && s.tail_estimate > TAIL_REFUSE_FRACTION * s.value {
        let mut tail = spec.tail;
        let mut extra = 0;
        while tail.bound(t) > TAIL_REFUSE_FRACTION * s.value && extra < 1_000_000 {
            tail.sigma_start += tail.slope;
            extra += 1;
        }
        return Err(Error::Truncation { minimal_count: spec.count() + extra });
    }
    Ok(s)
}

/// Compensated summation in iteration order.
pub(crate) fn neumaier(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
