//! Method of images on the flat wedge of opening `γ = π/k`.
//!
//! The dihedral group of order `2k` has `k − 1` non-trivial rotations (by
//! `2πj/k`, sign `+`) and `k` reflections (in the lines at angle `jγ`,
//! sign `−`). For an image at distance `ρ D(θ)` from `q = (ρ, θ)` the radial
//! integral over `[0, ε]` is `(ε²/8πt) h(D²ε²/4t)` with `h(x) = (1 − e^{−x})/x`;
//! only the angle is integrated numerically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::TraceSample;
use crate::error::{Error, Result};
use crate::quad::adaptive_gk;

const QUAD_TOL: f64 = 1e-13;

/// Rotation images, reflection images and their signed total at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeImageSample {
    pub rotation: TraceSample,
    pub reflection: TraceSample,
    pub total: TraceSample,
}

fn h(x: f64) -> f64 {
    if x < 1e-300 {
        1.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// `∫_{W_ε} Σ_{i=1}^{2k−1} (−1)^i G(t, |q − Ψ_i q|) dq` for the flat wedge of
/// opening `π/k`, split into rotation and reflection images.
pub fn wedge_image_corner(k: u32, eps: f64, t_grid: &[f64]) -> Result<Vec<WedgeImageSample>> {
    if k < 2 {
        return Err(Error::Input(format!("wedge order {k} must be at least 2")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Input(format!("wedge radius {eps} must be positive")));
    }
    let gamma = PI / f64::from(k);
    t_grid
        .iter()
        .map(|&t| {
            if !(t > 0.0) {
                return Err(Error::Input(format!("time {t} must be positive")));
            }
            let pref = eps * eps / (8.0 * PI * t);
            let x = eps * eps / (4.0 * t);
            let mut rot = (0.0, 0.0);
            for j in 1..k {
                let d2 = (2.0 * (PI * f64::from(j) / f64::from(k)).sin()).powi(2);
                let (v, e) = adaptive_gk(|_| pref * h(d2 * x), 0.0, gamma, QUAD_TOL * pref * gamma);
                rot = (rot.0 + v, rot.1 + e);
            }
            let mut refl = (0.0, 0.0);
            for j in 0..k {
                let beta = f64::from(j) * gamma;
                let (v, e) = adaptive_gk(
                    |th| {
                        let d = 2.0 * (th - beta).sin();
                        pref * h(d * d * x)
                    },
                    0.0,
                    gamma,
                    QUAD_TOL * pref.min(1.0 / t.sqrt()).max(1e-300),
                );
                refl = (refl.0 - v, refl.1 + e);
            }
            let rotation = TraceSample { t, value: rot.0, tail_estimate: rot.1, precision: 0.0 };
            let reflection = TraceSample { t, value: refl.0, tail_estimate: refl.1, precision: 0.0 };
            let total = TraceSample { t, value: rot.0 + refl.0, tail_estimate: rot.1 + refl.1, precision: 0.0 };
            Ok(WedgeImageSample { rotation, reflection, total })
        })
        .collect()
}

/// Reflection-image sum reduced to one error-function integral:
/// `−(1/(8√(πt))) ∫_{−ε}^{ε} erf(√(ε² − x²)/√t) dx`.
#[must_use]
pub fn reflection_erf_reduction(eps: f64, t: f64) -> f64 {
    let rt = t.sqrt();
    let (v, _) = adaptive_gk(|x| libm::erf((eps * eps - x * x).max(0.0).sqrt() / rt), -eps, eps, 1e-14 * eps);
    -v / (8.0 * (PI * t).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_part_is_half_cone_constant() {
        for k in 2..=6u32 {
            let s = wedge_image_corner(k, 1.0, &[1e-3]).unwrap()[0];
            let kf = f64::from(k);
            assert!((s.rotation.value - (kf * kf - 1.0) / (24.0 * kf)).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn reflections_match_erf_reduction() {
        for (k, t) in [(2u32, 1e-3), (3, 1e-2), (5, 0.2)] {
            let s = wedge_image_corner(k, 1.0, &[t]).unwrap()[0];
            let oracle = reflection_erf_reduction(1.0, t);
            assert!((s.reflection.value - oracle).abs() < 1e-10 * oracle.abs(), "k={k} t={t}");
        }
    }
}
