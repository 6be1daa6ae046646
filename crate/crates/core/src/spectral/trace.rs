//! Heat traces of rotational disks and flat sectors assembled from the
//! angular modes.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::prufer::RadialProblem;
use super::{cross_check, neumaier, ModeSpectrum, TraceSample};
use crate::error::{Error, Result};
use crate::geometry::RotationalProfile;
use crate::tolerances::{EIGEN_REL_TOL, SPECTRAL_CUTOFF, TAIL_REFUSE_FRACTION};

const BATCH: usize = 8;

/// All angular modes `ν_n = n·step`, `n ≥ first`, with every eigenvalue below
/// a common cutoff.
#[derive(Debug, Clone)]
pub struct DiskSpectra {
    radius: f64,
    f_max: f64,
    step: f64,
    first: usize,
    lambda_cut: f64,
    t_min: f64,
    modes: Vec<ModeSpectrum>,
}

/// Both evaluations of the cone-point trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeRoutes {
    pub rotation_sum: Vec<TraceSample>,
    pub mode_filter: Vec<TraceSample>,
}

impl DiskSpectra {
    /// Cutoff `λ` so that `e^{−λ t_min}` sits below the spectral cutoff with margin.
    #[must_use]
    pub fn lambda_cut_for(t_min: f64) -> f64 {
        ((1.0 / SPECTRAL_CUTOFF).ln() + 3.0) / t_min
    }

    /// Full-disk modes `ν = 0, 1, 2, …` on `[0, R]`.
    pub fn disk(profile: &RotationalProfile, radius: f64, t_min: f64) -> Result<Self> {
        Self::build(profile, radius, 1.0, 0, t_min)
    }

    /// Flat sector of opening `gamma`: modes `ν = nπ/γ`, `n ≥ 1`.
    pub fn sector(gamma: f64, radius: f64, t_min: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 2.0 * PI) {
            return Err(Error::Input(format!("sector angle {gamma} must lie in (0, 2π)")));
        }
        Self::build(&RotationalProfile::flat(radius), radius, PI / gamma, 1, t_min)
    }

    fn build(profile: &RotationalProfile, radius: f64, step: f64, first: usize, t_min: f64) -> Result<Self> {
        if !(t_min > 0.0) {
            return Err(Error::Input(format!("t_min = {t_min} must be positive")));
        }
        let lambda_cut = Self::lambda_cut_for(t_min);
        let sigma_cut = lambda_cut.sqrt();
        let f_max = (1..=2000).map(|i| profile.f(radius * f64::from(i) / 2000.0)).fold(0.0, f64::max);
        let mode = |n: usize| -> Result<Option<ModeSpectrum>> {
            let nu = n as f64 * step;
            let problem = RadialProblem::new(profile, radius, nu)?;
            let count = problem.count_below(sigma_cut)?;
            if count == 0 {
                return Ok(None);
            }
            let sigmas = problem.sigmas(count, sigma_cut, EIGEN_REL_TOL)?;
            Ok(Some(ModeSpectrum::from_sigmas(problem.nu(), &sigmas, sigma_cut, radius)))
        };
        let mut modes = Vec::new();
        let mut n = first;
        'outer: loop {
            let batch: Vec<Result<Option<ModeSpectrum>>> = (n..n + BATCH).into_par_iter().map(mode).collect();
            for m in batch {
                match m? {
                    Some(spec) => modes.push(spec),
                    None => break 'outer,
                }
            }
            n += BATCH;
        }
        if modes.is_empty() {
            return Err(Error::Truncation { minimal_count: 1 });
        }
        for spec in modes.iter().take(2) {
            cross_check(profile, radius, spec)?;
        }
        Ok(Self { radius, f_max, step, first, lambda_cut, t_min, modes })
    }

    #[must_use]
    pub fn modes(&self) -> &[ModeSpectrum] {
        &self.modes
    }

    #[must_use]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[must_use]
    pub fn lambda_cut(&self) -> f64 {
        self.lambda_cut
    }

    /// Index of the first mode.
    #[must_use]
    pub fn first_mode(&self) -> usize {
        self.first
    }

    /// Bound on `Σ_{n ≥ N} θ_n(t)` over the omitted modes, from
    /// `θ_n ≤ θ_b e^{−(ν_n² − ν_b²) t / max f²}`.
    fn angular_tail(&self, t: f64, theta_base: f64) -> f64 {
        let nu_b = self.modes[0].nu;
        let n_end = (self.first + self.modes.len()) as f64;
        let a = t.sqrt() * self.step / self.f_max;
        let shift = nu_b * nu_b * t / (self.f_max * self.f_max);
        let lead = (shift - (n_end * a).powi(2)).exp();
        let integral = (shift.exp()) * PI.sqrt() / (2.0 * a) * libm::erfc(n_end * a);
        theta_base * (lead + integral)
    }

    /// `Σ_n w(n) θ_n(t)` in ascending `n`, with the combined tail bound.
    pub fn weighted_trace(&self, weight: impl Fn(usize) -> f64 + Sync, t_grid: &[f64]) -> Result<Vec<TraceSample>> {
        let w_max = (0..self.first + self.modes.len() + 1).map(&weight).fold(0.0f64, |a, w| a.max(w.abs()));
        t_grid
            .iter()
            .map(|&t| {
                if !(t > 0.0) {
                    return Err(Error::Input(format!("time {t} must be positive")));
                }
                let thetas: Vec<TraceSample> = self.modes.iter().map(|m| m.theta_unchecked(t)).collect();
                let value = neumaier(thetas.iter().enumerate().map(|(i, s)| weight(self.first + i) * s.value));
                let mode_tails: f64 =
                    thetas.iter().enumerate().map(|(i, s)| weight(self.first + i).abs() * s.tail_estimate).sum();
                let base = thetas[0].value + thetas[0].tail_estimate;
                let tail = mode_tails + w_max * self.angular_tail(t, base);
                let scale = neumaier(thetas.iter().enumerate().map(|(i, s)| weight(self.first + i).abs() * s.value));
                let precision =
                    thetas.iter().enumerate().map(|(i, s)| weight(self.first + i).abs() * s.precision).sum::<f64>()
                        + f64::EPSILON * thetas.len() as f64 * scale;
                if tail > TAIL_REFUSE_FRACTION * value.abs().max(1e-300) && tail > 1e-12 * scale {
                    return Err(Error::Truncation { minimal_count: self.needed_count(t) });
                }
                Ok(TraceSample { t, value, tail_estimate: tail, precision })
            })
            .collect()
    }

    fn needed_count(&self, t: f64) -> usize {
        let per_mode = self.modes[0].count() as f64 * (self.t_min / t).sqrt();
        (per_mode.ceil() as usize).max(self.modes[0].count() + 1)
    }

    /// Twisted trace `I(t) = θ_0 + 2 Σ_{n≥1} cos(nφ) θ_n` of the rotation by `phi`.
    pub fn donnelly(&self, phi: f64, t_grid: &[f64]) -> Result<Vec<TraceSample>> {
        self.require_disk()?;
        let phi = phi.rem_euclid(2.0 * PI);
        if phi == 0.0 {
            return Err(Error::Input("the identity rotation has no fixed-point trace".into()));
        }
        self.weighted_trace(|n| if n == 0 { 1.0 } else { 2.0 * (n as f64 * phi).cos() }, t_grid)
    }

    /// `I(t)` for the rotation by `2πj/k`, with the cosines reduced exactly.
    pub fn donnelly_rational(&self, j: u32, k: u32, t_grid: &[f64]) -> Result<Vec<TraceSample>> {
        self.require_disk()?;
        if k == 0 || j.is_multiple_of(k) {
            return Err(Error::Input(format!("2π·{j}/{k} is the identity rotation")));
        }
        let (j, k) = (u64::from(j), u64::from(k));
        self.weighted_trace(
            |n| {
                if n == 0 {
                    1.0
                } else {
                    let r = (j * n as u64) % k;
                    2.0 * (2.0 * PI * r as f64 / k as f64).cos()
                }
            },
            t_grid,
        )
    }

    /// Cone-point trace of order `k` by both routes.
    pub fn cone_routes(&self, k: u32, t_grid: &[f64]) -> Result<ConeRoutes> {
        self.require_disk()?;
        if k < 2 {
            return Err(Error::Input(format!("cone order {k} must be at least 2")));
        }
        let per_rotation: Vec<Vec<TraceSample>> =
            (1..k).map(|j| self.donnelly_rational(j, k, t_grid)).collect::<Result<_>>()?;
        let kf = f64::from(k);
        let rotation_sum = (0..t_grid.len())
            .map(|i| TraceSample {
                t: t_grid[i],
                value: neumaier(per_rotation.iter().map(|v| v[i].value)) / kf,
                tail_estimate: per_rotation.iter().map(|v| v[i].tail_estimate).sum::<f64>() / kf,
                precision: per_rotation.iter().map(|v| v[i].precision).sum::<f64>() / kf,
            })
            .collect();
        let kk = k as usize;
        let mode_filter = self.weighted_trace(
            |n| {
                let hit = if n % kk == 0 { 1.0 } else { 0.0 };
                if n == 0 {
                    1.0 - 1.0 / kf
                } else {
                    2.0 * (hit - 1.0 / kf)
                }
            },
            t_grid,
        )?;
        Ok(ConeRoutes { rotation_sum, mode_filter })
    }

    /// Heat trace `Σ_n θ_n`.
    pub fn heat_trace(&self, t_grid: &[f64]) -> Result<Vec<TraceSample>> {
        self.weighted_trace(|_| 1.0, t_grid)
    }

    fn require_disk(&self) -> Result<()> {
        if self.first != 0 || self.step != 1.0 {
            return Err(Error::Input("rotation traces need full-disk modes".into()));
        }
        Ok(())
    }
}

fn t_min_of(t_grid: &[f64]) -> Result<f64> {
    let t = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    if t_grid.is_empty() || !(t > 0.0) {
        return Err(Error::Input("time grid must be non-empty and positive".into()));
    }
    Ok(t)
}

/// `I(t) = ∫ H(t, q, Φq) dq` of the rotation by `phi` about the vertex, on the disk of radius `R`.
#[allow(non_snake_case)]
pub fn donnelly_trace_I(
    profile: &RotationalProfile,
    radius: f64,
    phi: f64,
    t_grid: &[f64],
) -> Result<Vec<TraceSample>> {
    DiskSpectra::disk(profile, radius, t_min_of(t_grid)?)?.donnelly(phi, t_grid)
}

/// Cone-point contribution `(1/k) Σ_{j=1}^{k−1} I(t; 2πj/k)`.
pub fn cone_trace_contribution(
    profile: &RotationalProfile,
    radius: f64,
    k: u32,
    t_grid: &[f64],
) -> Result<Vec<TraceSample>> {
    Ok(DiskSpectra::disk(profile, radius, t_min_of(t_grid)?)?.cone_routes(k, t_grid)?.rotation_sum)
}

/// Dirichlet heat trace of the flat sector of opening `gamma` and radius `R`.
pub fn flat_sector_trace(gamma: f64, radius: f64, t_grid: &[f64]) -> Result<Vec<TraceSample>> {
    DiskSpectra::sector(gamma, radius, t_min_of(t_grid)?)?.heat_trace(t_grid)
}
