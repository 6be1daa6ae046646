//! Closed-form series and heat coefficients.
//!
//! Conventions: the Laplacian is the positive one, `lapK = -(K_xx + K_yy)`,
//! and every direction-dependent quantity is evaluated in an orthonormal
//! frame at the base point.

mod angle;
mod coeffs;
mod series;

pub use angle::{parse_angle, AngleData, AngleRepr};
pub use coeffs::{
    b_coeffs, b_coeffs_with, c2_general_conjecture, cone_coeffs, cone_coeffs_with, cone_rationals, corner_coeffs,
    corner_coeffs_gamma_form, corner_coeffs_with, kac_corner, sine_power_sums, sine_power_sums_direct, ConeRationals,
};
pub use series::{
    dist2_components, dist2_series, dist_pair_series, du_series, du_series_with, ell_theta_series, offdiag_u_series,
    offdiag_u_series_with, u0_series, u1_series, u2_diagonal, Dist2Components,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::SYMMETRY_REL_TOL;

/// Curvature data at a point: `K`, its gradient, Hessian and Laplacian.
///
/// The Laplacian is derived from the Hessian on construction and is never
/// stored independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JetRepr", into = "JetRepr")]
pub struct CurvatureJet {
    k: f64,
    grad_k: [f64; 2],
    hess_k: [[f64; 2]; 2],
    lap_k: f64,
}

#[derive(Serialize, Deserialize)]
struct JetRepr {
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "gradK")]
    grad_k: [f64; 2],
    #[serde(rename = "hessK")]
    hess_k: [[f64; 2]; 2],
}

impl TryFrom<JetRepr> for CurvatureJet {
    type Error = Error;
    fn try_from(r: JetRepr) -> Result<Self> {
        Self::new(r.k, r.grad_k, r.hess_k)
    }
}

impl From<CurvatureJet> for JetRepr {
    fn from(j: CurvatureJet) -> Self {
        JetRepr { k: j.k, grad_k: j.grad_k, hess_k: j.hess_k }
    }
}

/// Whether symmetry preconditions on a jet are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCheck {
    Enforce,
    Unchecked,
}

impl CurvatureJet {
    /// Builds a jet; the Hessian must be symmetric.
    pub fn new(k: f64, grad_k: [f64; 2], hess_k: [[f64; 2]; 2]) -> Result<Self> {
        let all = [k, grad_k[0], grad_k[1], hess_k[0][0], hess_k[0][1], hess_k[1][0], hess_k[1][1]];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite curvature jet entry".into()));
        }
        if hess_k[0][1] != hess_k[1][0] {
            return Err(Error::Input("hessK must be symmetric".into()));
        }
        let lap_k = -(hess_k[0][0] + hess_k[1][1]);
        Ok(Self { k, grad_k, hess_k, lap_k })
    }

    /// The flat jet.
    #[must_use]
    pub fn zero() -> Self {
        Self { k: 0.0, grad_k: [0.0; 2], hess_k: [[0.0; 2]; 2], lap_k: 0.0 }
    }

    /// Jet of a rotationally symmetric point: `gradK = 0`, `hessK = -(lapK/2) I`.
    #[must_use]
    pub fn symmetric(k: f64, lap_k: f64) -> Self {
        let h = -0.5 * lap_k;
        Self { k, grad_k: [0.0; 2], hess_k: [[h, 0.0], [0.0, h]], lap_k: -(h + h) }
    }

    /// Constant curvature `K`.
    #[must_use]
    pub fn constant(k: f64) -> Self {
        Self::symmetric(k, 0.0)
    }

    #[must_use]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[must_use]
    pub fn grad_k(&self) -> [f64; 2] {
        self.grad_k
    }

    #[must_use]
    pub fn hess_k(&self) -> [[f64; 2]; 2] {
        self.hess_k
    }

    #[must_use]
    pub fn lap_k(&self) -> f64 {
        self.lap_k
    }

    /// `dK(x) = gradK . x`.
    #[must_use]
    pub fn dk(&self, x: [f64; 2]) -> f64 {
        self.grad_k[0] * x[0] + self.grad_k[1] * x[1]
    }

    /// `Hess K(x, y)`.
    #[must_use]
    pub fn hess(&self, x: [f64; 2], y: [f64; 2]) -> f64 {
        let h = &self.hess_k;
        x[0] * (h[0][0] * y[0] + h[0][1] * y[1]) + x[1] * (h[1][0] * y[0] + h[1][1] * y[1])
    }

    /// Multiplies the metric by `lambda^2`.
    #[must_use]
    pub fn scaled(&self, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        let (l3, l4) = (l2 * lambda, l2 * l2);
        let h = self.hess_k;
        let hess_k = [[h[0][0] / l4, h[0][1] / l4], [h[1][0] / l4, h[1][1] / l4]];
        Self {
            k: self.k / l2,
            grad_k: [self.grad_k[0] / l3, self.grad_k[1] / l3],
            hess_k,
            lap_k: -(hess_k[0][0] + hess_k[1][1]),
        }
    }

    /// Checks `gradK = 0`, and `hessK ∝ I` unless `phi_is_pi`.
    pub fn check_symmetric(&self, phi_is_pi: bool) -> Result<()> {
        let scale = 1f64.max(self.k * self.k).max(self.lap_k.abs());
        let gscale = 1f64.max(self.k.abs().powf(1.5)).max(self.lap_k.abs().powf(0.75));
        let g = self.grad_k[0].hypot(self.grad_k[1]);
        if g > SYMMETRY_REL_TOL * gscale {
            return Err(Error::Symmetry(format!("gradK = 0 violated (|gradK| = {g:e})")));
        }
        if !phi_is_pi {
            let half = -0.5 * self.lap_k;
            let dev =
                (self.hess_k[0][0] - half).abs().max((self.hess_k[1][1] - half).abs()).max(self.hess_k[0][1].abs());
            if dev > SYMMETRY_REL_TOL * scale {
                return Err(Error::Symmetry(format!("hessK = -(lapK/2) I violated (deviation {dev:e})")));
            }
        }
        Ok(())
    }

    /// Checks only that `hessK` is a multiple of the identity.
    pub fn check_isotropic_hessian(&self) -> Result<()> {
        let scale = 1f64.max(self.hess_k[0][0].abs()).max(self.hess_k[1][1].abs());
        let dev = (self.hess_k[0][0] - self.hess_k[1][1]).abs().max(self.hess_k[0][1].abs());
        if dev > SYMMETRY_REL_TOL * scale {
            return Err(Error::Symmetry(format!("hessK not a multiple of identity ({dev:e})")));
        }
        Ok(())
    }
}

/// Which family a coefficient triple belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    RotationB,
    ConeA,
    CornerC,
}

/// Where a coefficient triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    ClosedForm,
    Fitted,
    Conjecture,
}

/// The `t^0, t^1, t^2` coefficients of one contribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTriple {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    kind: CoefficientKind,
    source: CoefficientSource,
}

impl CoefficientTriple {
    #[must_use]
    pub fn new(c: [f64; 3], kind: CoefficientKind, source: CoefficientSource) -> Self {
        Self { c0: c[0], c1: c[1], c2: c[2], kind, source }
    }

    #[must_use]
    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    #[must_use]
    pub fn source(&self) -> CoefficientSource {
        self.source
    }

    #[must_use]
    pub fn as_array(&self) -> [f64; 3] {
        [self.c0, self.c1, self.c2]
    }
}

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Highest power kept.
    pub order: u32,
    /// Smallest power not represented.
    pub remainder_exponent: u32,
}

impl SeriesValue {
    pub(crate) fn new(value: f64, order: u32, remainder_exponent: u32) -> Self {
        debug_assert!(remainder_exponent > order);
        Self { value, order, remainder_exponent }
    }
}

pub(crate) fn check_unit(u: [f64; 2]) -> Result<()> {
    let n = u[0].hypot(u[1]);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Input(format!("direction is not a unit vector (|u| = {n})")));
    }
    Ok(())
}
