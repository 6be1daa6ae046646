//! Verification suites: each compares a closed form with an independent
//! numerical route and returns one [`Check`] per comparison.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymfit::{fit_power_series, geometric_grid, remainder_order, FitResult, RemainderFit, WeightPolicy};
use crate::error::{Error, Result};
use crate::expansions::{
    b_coeffs, cone_coeffs, corner_coeffs, corner_coeffs_gamma_form, dist2_series, dist_pair_series, ell_theta_series,
    kac_corner, sine_power_sums, sine_power_sums_direct, u0_series, u1_series, AngleData, AngleRepr, CurvatureJet,
};
use crate::geometry::{
    geodesic_distance, geodesic_shoot, hamilton_jacobi_residual, jacobi_length_jet, u1_recursion_oracle, ProfileKind,
    RotationalProfile, SurfacePointPolar,
};
use crate::spectral::{reflection_erf_reduction, wedge_image_corner, DiskSpectra, TraceSample};
use crate::tolerances as tol;

/// The named suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Dist,
    Ell,
    U1,
    B,
    Cone,
    Kac,
    Trig,
    Hj,
    Consistency,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Dist,
        Suite::Ell,
        Suite::U1,
        Suite::B,
        Suite::Cone,
        Suite::Kac,
        Suite::Trig,
        Suite::Hj,
        Suite::Consistency,
    ];

    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Suite::Dist => "dist",
            Suite::Ell => "ell",
            Suite::U1 => "u1",
            Suite::B => "b",
            Suite::Cone => "cone",
            Suite::Kac => "kac",
            Suite::Trig => "trig",
            Suite::Hj => "hj",
            Suite::Consistency => "consistency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

/// How `measured` is compared with `target` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured − target| ≤ tolerance`
    AbsWithin,
    /// `|measured − target| ≤ tolerance·|target|`
    RelWithin,
    /// `measured ≥ target`
    AtLeast,
    /// `measured ≤ tolerance`
    AtMost,
}

impl Comparison {
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Comparison::AbsWithin => "abs_within",
            Comparison::RelWithin => "rel_within",
            Comparison::AtLeast => "at_least",
            Comparison::AtMost => "at_most",
        }
    }
}

/// One measured quantity against its target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub parameters: String,
    #[serde(with = "lenient_f64")]
    pub measured: f64,
    #[serde(with = "lenient_f64")]
    pub target: f64,
    #[serde(with = "lenient_f64")]
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitResult>,
}

impl Check {
    #[must_use]
    pub fn new(
        suite: Suite,
        name: impl Into<String>,
        parameters: impl Into<String>,
        measured: f64,
        target: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let pass = match comparison {
            Comparison::AbsWithin => (measured - target).abs() <= tolerance,
            Comparison::RelWithin => (measured - target).abs() <= tolerance * target.abs(),
            Comparison::AtLeast => measured >= target,
            Comparison::AtMost => measured <= tolerance,
        };
        Self {
            suite,
            name: name.into(),
            parameters: parameters.into(),
            measured,
            target,
            tolerance,
            comparison,
            pass,
            fit: None,
        }
    }

    fn with_fit(mut self, fit: &FitResult) -> Self {
        self.fit = Some(fit.clone());
        self
    }
}

/// JSON numbers, with non-finite values written as `"inf"`, `"-inf"`, `"nan"`.
mod lenient_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(serde::de::Error::custom(format!("expected a number, got '{t}'"))),
            },
        }
    }
}

/// Acceptance thresholds; defaults are the values in [`crate::tolerances`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub consistency_rel: f64,
    pub trig_rel: f64,
    pub dist_min_slope: f64,
    pub slope_min_r2: f64,
    pub ell_min_slope: f64,
    pub u0_min_slope: f64,
    pub u1_min_slope: f64,
    pub hj_min_slope: f64,
    pub fit_c0_rel: f64,
    pub fit_c1_rel: f64,
    pub fit_c2_rel: f64,
    pub boundary_rel: f64,
    pub sector_const_abs: f64,
    pub wedge_rot_abs: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            consistency_rel: tol::CONSISTENCY_REL_TOL,
            trig_rel: tol::TRIG_REL_TOL,
            dist_min_slope: tol::DIST_MIN_SLOPE,
            slope_min_r2: tol::SLOPE_MIN_R2,
            ell_min_slope: tol::ELL_MIN_SLOPE,
            u0_min_slope: tol::U0_MIN_SLOPE,
            u1_min_slope: tol::U1_MIN_SLOPE,
            hj_min_slope: tol::HJ_MIN_SLOPE,
            fit_c0_rel: tol::FIT_C0_REL,
            fit_c1_rel: tol::FIT_C1_REL,
            fit_c2_rel: tol::FIT_C2_REL,
            boundary_rel: tol::BOUNDARY_REL,
            sector_const_abs: tol::SECTOR_CONST_ABS,
            wedge_rot_abs: tol::WEDGE_ROT_ABS,
        }
    }
}

impl Thresholds {
    /// Applies `name → value` overrides; unknown names are configuration errors.
    pub fn apply(&mut self, overrides: &BTreeMap<String, f64>) -> Result<()> {
        for (key, &v) in overrides {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("tolerance '{key}' must be finite and non-negative")));
            }
            let slot = match key.as_str() {
                "consistency_rel" => &mut self.consistency_rel,
                "trig_rel" => &mut self.trig_rel,
                "dist_min_slope" => &mut self.dist_min_slope,
                "slope_min_r2" => &mut self.slope_min_r2,
                "ell_min_slope" => &mut self.ell_min_slope,
                "u0_min_slope" => &mut self.u0_min_slope,
                "u1_min_slope" => &mut self.u1_min_slope,
                "hj_min_slope" => &mut self.hj_min_slope,
                "fit_c0_rel" => &mut self.fit_c0_rel,
                "fit_c1_rel" => &mut self.fit_c1_rel,
                "fit_c2_rel" => &mut self.fit_c2_rel,
                "boundary_rel" => &mut self.boundary_rel,
                "sector_const_abs" => &mut self.sector_const_abs,
                "wedge_rot_abs" => &mut self.wedge_rot_abs,
                other => return Err(Error::Config(format!("unknown tolerance '{other}'"))),
            };
            *slot = v;
        }
        Ok(())
    }
}

/// Inputs shared by the suites. Fields a suite does not use are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteParams {
    /// Surface; each suite has its own default when absent.
    pub surface: Option<ProfileKind>,
    pub valid_radius: Option<f64>,
    /// Outer radius of the disk for spectral suites.
    pub radius: f64,
    pub k: Vec<u32>,
    pub kmin: u32,
    pub kmax: u32,
    pub phi: Vec<AngleRepr>,
    pub gamma: AngleRepr,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub per_decade: usize,
    pub jets: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            surface: None,
            valid_radius: None,
            radius: 1.0,
            k: Vec::new(),
            kmin: 2,
            kmax: 20,
            phi: Vec::new(),
            gamma: AngleRepr::PiFraction { num: 1, den: 3 },
            t_min: None,
            t_max: None,
            per_decade: 20,
            jets: 100,
            seed: 0,
            thresholds: Thresholds::default(),
        }
    }
}

const DEFAULT_PHI: [(i64, i64); 3] = [(1, 1), (2, 3), (1, 2)];
/// Boundary leakage `exp(−C²R²/((4+C²)t))` at `t_max` is held below `e^{−24}`.
const WINDOW_EXPONENT: f64 = 24.0;
/// Configurations whose leakage exponent would drop below this are refused.
const WINDOW_EXPONENT_MIN: f64 = 12.0;
const WINDOW_RATIO: f64 = 5.0;
const MAX_EIGENVALUES: f64 = 2.0e5;
const SECTOR_WINDOWS: [f64; 3] = [0.04, 0.02, 0.01];
const SECTOR_RATIO: f64 = 10.0;

impl SuiteParams {
    fn profile(&self, default: ProfileKind, default_valid: f64) -> Result<RotationalProfile> {
        let kind = self.surface.clone().unwrap_or(default);
        let valid = self.valid_radius.unwrap_or(default_valid);
        RotationalProfile::new(kind, valid).map_err(|e| Error::Config(e.to_string()))
    }

    fn spectral_profile(&self) -> Result<RotationalProfile> {
        let p = self.profile(ProfileKind::Sphere { k: 1.0 }, 1.2 * self.radius)?;
        if p.valid_radius() < self.radius {
            return Err(Error::Config(format!(
                "disk radius {} exceeds the valid radius {}",
                self.radius,
                p.valid_radius()
            )));
        }
        Ok(p)
    }

    fn angles(&self) -> Result<Vec<AngleData>> {
        if self.phi.is_empty() {
            return DEFAULT_PHI.iter().map(|&(n, d)| AngleData::new(AngleRepr::pi_fraction(n, d)?)).collect();
        }
        self.phi.iter().map(|&a| AngleData::canonical(a).map_err(|e| Error::Config(e.to_string()))).collect()
    }

    fn orders(&self, default: &[u32]) -> Vec<u32> {
        if self.k.is_empty() {
            default.to_vec()
        } else {
            self.k.clone()
        }
    }

    /// Fit window for a rotation with `C²` on the disk of radius `R`.
    fn window(&self, c2: f64, radius: f64) -> (f64, f64) {
        let auto_max = c2 * radius * radius / (WINDOW_EXPONENT * (4.0 + c2));
        let t_max = self.t_max.map_or(auto_max, |t| t * (radius / self.radius).powi(2));
        let t_min = self.t_min.map_or(t_max / WINDOW_RATIO, |t| t * (radius / self.radius).powi(2));
        (t_min, t_max)
    }
}

/// Rejects configurations that cannot succeed, before any long computation.
pub fn preflight(suite: Suite, p: &SuiteParams) -> Result<()> {
    if p.per_decade < 2 {
        return Err(Error::Config("grid needs at least two points per decade".into()));
    }
    match suite {
        Suite::Consistency | Suite::Trig => {
            if p.kmin < 2 || p.kmax < p.kmin || p.kmax > 1000 {
                return Err(Error::Config(format!("k range [{}, {}] must lie within [2, 1000]", p.kmin, p.kmax)));
            }
            if suite == Suite::Consistency && p.jets == 0 {
                return Err(Error::Config("consistency needs at least one jet".into()));
            }
        }
        Suite::Kac => {
            if p.orders(&[2, 3, 4]).iter().any(|&k| !(2..=1000).contains(&k)) {
                return Err(Error::Config("corner orders must lie in [2, 1000]".into()));
            }
            let g = p.gamma.radians();
            if !(g > 0.0 && g < 2.0 * PI) {
                return Err(Error::Config(format!("sector angle {} outside (0, 2pi)", p.gamma)));
            }
        }
        Suite::B | Suite::Cone => {
            if !(p.radius > 0.0 && p.radius.is_finite()) {
                return Err(Error::Config("disk radius must be positive".into()));
            }
            let profile = p.spectral_profile()?;
            let c2s: Vec<f64> = if suite == Suite::B {
                p.angles()?.iter().map(AngleData::c2).collect()
            } else {
                let ks = p.orders(&[3]);
                if ks.iter().any(|&k| !(2..=1000).contains(&k)) {
                    return Err(Error::Config("cone orders must lie in [2, 1000]".into()));
                }
                ks.iter().map(|&k| AngleData::order(k).map(|a| a.c2())).collect::<Result<_>>()?
            };
            let f_max = (1..=200).map(|i| profile.f(p.radius * f64::from(i) / 200.0)).fold(0.0, f64::max);
            for c2 in c2s {
                let (t_min, t_max) = p.window(c2, p.radius);
                if !(t_min > 0.0 && t_min < t_max) {
                    return Err(Error::Config(format!("fit window [{t_min}, {t_max}] is empty")));
                }
                let exponent = c2 * p.radius * p.radius / ((4.0 + c2) * t_max);
                if exponent < WINDOW_EXPONENT_MIN {
                    return Err(Error::Config(format!(
                        "t_max = {t_max} lets the boundary leak in (exponent {exponent:.1} < {WINDOW_EXPONENT_MIN})"
                    )));
                }
                let eigen = f_max * f_max * DiskSpectra::lambda_cut_for(t_min / 4.0) / 4.0;
                if eigen > MAX_EIGENVALUES {
                    return Err(Error::Config(format!(
                        "t_min = {t_min} needs about {eigen:.0} eigenvalues (limit {MAX_EIGENVALUES:.0})"
                    )));
                }
                if geometric_grid(t_min, t_max, p.per_decade).len() < 6 {
                    return Err(Error::Config("fit window holds fewer than six grid points".into()));
                }
            }
        }
        Suite::Dist | Suite::Ell | Suite::U1 | Suite::Hj => {}
    }
    Ok(())
}

/// Runs one suite.
pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<Vec<Check>> {
    preflight(suite, p)?;
    match suite {
        Suite::Consistency => consistency(p),
        Suite::Trig => trig(p),
        Suite::Kac => kac(p),
        Suite::Dist => dist(p),
        Suite::Ell => ell(p),
        Suite::U1 => u1(p),
        Suite::Hj => hj(p),
        Suite::B => b_suite(p),
        Suite::Cone => cone(p),
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Symmetric jets (`gradK = 0`, isotropic Hessian) with `K, lapK ∈ [−2, 2]`.
#[must_use]
pub fn random_symmetric_jets(count: usize, seed: u64) -> Vec<CurvatureJet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| CurvatureJet::symmetric(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect()
}

fn consistency(p: &SuiteParams) -> Result<Vec<Check>> {
    let jets = random_symmetric_jets(p.jets, p.seed);
    let tol_rel = p.thresholds.consistency_rel;
    let mut out = Vec::new();
    for k in p.kmin..=p.kmax {
        let (mut cone_dev, mut corner_dev) = (0.0f64, 0.0f64);
        for jet in &jets {
            let cone = cone_coeffs(jet, k)?.as_array();
            let corner = corner_coeffs(jet, k)?.as_array();
            // a₂ mixes K² and lapK terms that may cancel; measure against their sum
            let kk = cone_coeffs(&CurvatureJet::symmetric(jet.k(), 0.0), k)?.as_array();
            let lap = cone_coeffs(&CurvatureJet::symmetric(0.0, jet.lap_k()), k)?.as_array();
            let mut sum = [0.0; 3];
            for j in 1..k {
                let b = b_coeffs(jet, &AngleData::rotation(j, k)?)?.as_array();
                for (s, v) in sum.iter_mut().zip(b) {
                    *s += v;
                }
            }
            for i in 0..3 {
                let scale = kk[i].abs() + if i == 2 { lap[i].abs() } else { 0.0 };
                let avg = sum[i] / f64::from(k);
                let dev = (cone[i] - avg).abs() / scale.max(cone[i].abs()).max(avg.abs());
                cone_dev = cone_dev.max(if dev.is_nan() { 0.0 } else { dev });
                corner_dev = corner_dev.max(rel_dev(corner[i], 0.5 * cone[i]));
            }
        }
        let params = format!("k={k};jets={};seed={}", jets.len(), p.seed);
        out.push(Check::new(
            Suite::Consistency,
            "cone_equals_rotation_sum",
            &params,
            cone_dev,
            0.0,
            tol_rel,
            Comparison::AtMost,
        ));
        out.push(Check::new(
            Suite::Consistency,
            "corner_equals_half_cone",
            &params,
            corner_dev,
            0.0,
            tol_rel,
            Comparison::AtMost,
        ));
    }
    Ok(out)
}

fn trig(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in p.kmin..=p.kmax {
        for m in 1..=3 {
            let closed = sine_power_sums(k, m)?;
            let direct = sine_power_sums_direct(k, m);
            out.push(Check::new(
                Suite::Trig,
                "sine_power_sum",
                format!("k={k};m={m}"),
                rel_dev(closed, direct),
                0.0,
                p.thresholds.trig_rel,
                Comparison::AtMost,
            ));
        }
    }
    Ok(out)
}

fn kac(p: &SuiteParams) -> Result<Vec<Check>> {
    let th = &p.thresholds;
    let mut out = Vec::new();
    let zero = CurvatureJet::zero();
    for k in p.orders(&[2, 3, 4]) {
        let gamma = PI / f64::from(k);
        let c0 = corner_coeffs(&zero, k)?.c0;
        let params = format!("k={k}");
        out.push(Check::new(
            Suite::Kac,
            "kac_equals_corner_c0",
            &params,
            rel_dev(kac_corner(gamma)?, c0),
            0.0,
            th.consistency_rel,
            Comparison::AtMost,
        ));
        let gamma_form = corner_coeffs_gamma_form(&CurvatureJet::symmetric(1.0, 0.5), k)?.as_array();
        let exact = corner_coeffs(&CurvatureJet::symmetric(1.0, 0.5), k)?.as_array();
        let dev = gamma_form.iter().zip(exact).map(|(a, b)| rel_dev(*a, b)).fold(0.0, f64::max);
        out.push(Check::new(
            Suite::Kac,
            "gamma_form_equals_rational_form",
            &params,
            dev,
            0.0,
            th.consistency_rel,
            Comparison::AtMost,
        ));
        let t = 1e-3;
        let w = wedge_image_corner(k, 1.0, &[t])?[0];
        out.push(Check::new(
            Suite::Kac,
            "wedge_rotation_constant",
            format!("k={k};eps=1;t={t}"),
            w.rotation.value,
            c0,
            th.wedge_rot_abs,
            Comparison::AbsWithin,
        ));
        let oracle = reflection_erf_reduction(1.0, t);
        out.push(Check::new(
            Suite::Kac,
            "wedge_reflection_erf_reduction",
            format!("k={k};eps=1;t={t}"),
            rel_dev(w.reflection.value, oracle),
            0.0,
            1e-10,
            Comparison::AtMost,
        ));
    }
    let gamma = p.gamma.radians();
    let target = gamma / (12.0 * PI) + 2.0 * kac_corner(PI / 2.0)? + kac_corner(gamma)?;
    for fit in sector_constant_fits(gamma, 1.0, p.per_decade)? {
        out.push(
            Check::new(
                Suite::Kac,
                "sector_constant",
                format!("gamma={};R=1;t_max={}", p.gamma, fit.window.t_max),
                fit.coefficients[0],
                target,
                p.thresholds.sector_const_abs,
                Comparison::AbsWithin,
            )
            .with_fit(&fit),
        );
    }
    Ok(out)
}

/// Constant term of `Z(t) − A/(4πt) + L/(8√(πt))` for the flat sector, fitted
/// in powers of `√t` on shrinking windows.
pub fn sector_constant_fits(gamma: f64, radius: f64, per_decade: usize) -> Result<Vec<FitResult>> {
    let scale = radius * radius;
    let t_min = SECTOR_WINDOWS.iter().fold(f64::INFINITY, |a, &b| a.min(b)) * scale / SECTOR_RATIO;
    let spectra = DiskSpectra::sector(gamma, radius, t_min)?;
    let area = 0.5 * gamma * radius * radius;
    let perimeter = 2.0 * radius + gamma * radius;
    SECTOR_WINDOWS
        .iter()
        .map(|&w| {
            let grid = geometric_grid(w * scale / SECTOR_RATIO, w * scale, per_decade);
            let z = spectra.heat_trace(&grid)?;
            let reduced: Vec<TraceSample> = z
                .iter()
                .map(|s| TraceSample {
                    t: s.t.sqrt(),
                    value: s.value - area / (4.0 * PI * s.t) + perimeter / (8.0 * (PI * s.t).sqrt()),
                    tail_estimate: s.tail_estimate,
                    precision: s.precision + f64::EPSILON * s.value.abs(),
                })
                .collect();
            let mut fit = fit_power_series(&reduced, 2, WeightPolicy::InversePower)?;
            fit.window.t_min = w * scale / SECTOR_RATIO;
            fit.window.t_max = w * scale;
            Ok(fit)
        })
        .collect()
}

fn log_grid(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| hi * (lo / hi).powf(i as f64 / (n - 1) as f64)).collect()
}

fn slope_checks(suite: Suite, name: &str, params: &str, fit: &RemainderFit, min_slope: f64, min_r2: f64) -> [Check; 2] {
    [
        Check::new(suite, format!("{name}_slope"), params, fit.slope, min_slope, 0.0, Comparison::AtLeast),
        Check::new(suite, format!("{name}_r2"), params, fit.r2, min_r2, 0.0, Comparison::AtLeast),
    ]
}

/// Residuals of the squared-distance series against the boundary-value
/// distance at the vertex of `profile`, for `x = r a`, `y = r b`.
pub fn vertex_dist2_residuals(profile: &RotationalProfile, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let jet = profile.vertex_jet();
    let (na, nb) = (1.0 / 10f64.sqrt(), 3.0 / 10f64.sqrt());
    let theta = 2.0 * PI / 3.0;
    radii
        .iter()
        .map(|&r| {
            let q = SurfacePointPolar::new(r * na, 0.0);
            let w = SurfacePointPolar::new(r * nb, theta);
            let d = geodesic_distance(profile, q, w)?;
            Ok((r, (dist2_series(&jet, q.cartesian(), w.cartesian()).value - d * d).abs()))
        })
        .collect()
}

/// The same off the vertex, at `(r0, 0)`, with both points placed by the
/// exponential map there.
pub fn offvertex_dist2_residuals(profile: &RotationalProfile, r0: f64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let jet = profile.point_jet(r0)?;
    let p = SurfacePointPolar::new(r0, 0.0);
    let (ax, ay) = (0.3f64, 2.0f64);
    radii
        .iter()
        .map(|&r| {
            let (lx, ly) = (0.6 * r, 0.8 * r);
            let x = [lx * ax.cos(), lx * ax.sin()];
            let y = [ly * ay.cos(), ly * ay.sin()];
            let ex = geodesic_shoot(profile, p, ax, lx)?;
            let ey = geodesic_shoot(profile, p, ay, ly)?;
            let d = geodesic_distance(profile, ex, ey)?;
            Ok((r, (dist2_series(&jet, x, y).value - d * d).abs()))
        })
        .collect()
}

fn dist(p: &SuiteParams) -> Result<Vec<Check>> {
    let th = &p.thresholds;
    let radii = log_grid(0.2, 0.01, 20);
    let sphere = p.profile(ProfileKind::Sphere { k: 1.0 }, 1.2)?;
    let mut out = Vec::new();
    let fit = remainder_order(&vertex_dist2_residuals(&sphere, &radii)?)?;
    out.extend(slope_checks(
        Suite::Dist,
        "vertex_dist2",
        "r=[0.01,0.2];|x|:|y|=1:3;angle=2pi/3",
        &fit,
        th.dist_min_slope,
        th.slope_min_r2,
    ));
    let bump = RotationalProfile::bump(1.5, 1.2)?;
    let fit = remainder_order(&offvertex_dist2_residuals(&bump, 0.3, &radii)?)?;
    out.extend(slope_checks(
        Suite::Dist,
        "offvertex_dist2",
        "bump(1.5);r0=0.3;r=[0.01,0.2]",
        &fit,
        th.dist_min_slope,
        th.slope_min_r2,
    ));
    let jet = sphere.vertex_jet();
    let (u, v) = ([1.0, 0.0], [0.0, 1.0]);
    let pairs: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let d = geodesic_distance(&sphere, SurfacePointPolar::new(r, 0.0), SurfacePointPolar::new(r, 0.5 * PI))?;
            Ok((r, (dist_pair_series(&jet, u, v, r)?.value - d).abs()))
        })
        .collect::<Result<_>>()?;
    let fit = remainder_order(&pairs)?;
    out.extend(slope_checks(
        Suite::Dist,
        "pair_distance",
        "angle=pi/2;r=[0.01,0.2]",
        &fit,
        th.dist_min_slope,
        th.slope_min_r2,
    ));
    Ok(out)
}

/// A jet with every component non-zero.
#[must_use]
pub fn generic_jet() -> CurvatureJet {
    CurvatureJet::new(0.8, [0.3, -0.2], [[0.5, 0.1], [0.1, -0.3]]).expect("finite symmetric jet")
}

fn ell(p: &SuiteParams) -> Result<Vec<Check>> {
    let th = &p.thresholds;
    let jet = generic_jet();
    let u = [0.6, 0.8];
    let radii = log_grid(0.1, 0.01, 12);
    let mut ell_res = Vec::new();
    let mut u0_res = Vec::new();
    for &r in &radii {
        let j = jacobi_length_jet(&jet, u, r)?;
        let (l, _) = ell_theta_series(&jet, u, r)?;
        let z = u0_series(&jet, u, r)?.value;
        ell_res.push((r, (l.value - j).abs()));
        u0_res.push((r, (z * z * (j / r) - 1.0).abs()));
    }
    let params = "generic jet;u=(0.6,0.8);r=[0.01,0.1]";
    let mut out = Vec::new();
    out.extend(slope_checks(Suite::Ell, "ell", params, &remainder_order(&ell_res)?, th.ell_min_slope, th.slope_min_r2));
    out.extend(slope_checks(
        Suite::Ell,
        "u0_density",
        params,
        &remainder_order(&u0_res)?,
        th.u0_min_slope,
        th.slope_min_r2,
    ));
    Ok(out)
}

fn u1(p: &SuiteParams) -> Result<Vec<Check>> {
    let profile = p.profile(RotationalProfile::bump(1.5, 1.2)?.kind().clone(), 1.2)?;
    let jet = profile.vertex_jet();
    let radii = log_grid(0.1, 0.01, 12);
    let pairs: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| Ok((r, (u1_series(&jet, [1.0, 0.0], r)?.value - u1_recursion_oracle(&profile, r)?).abs())))
        .collect::<Result<_>>()?;
    let fit = remainder_order(&pairs)?;
    Ok(slope_checks(Suite::U1, "u1", "vertex;r=[0.01,0.1]", &fit, p.thresholds.u1_min_slope, p.thresholds.slope_min_r2)
        .to_vec())
}

fn hj(p: &SuiteParams) -> Result<Vec<Check>> {
    let profile = p.profile(ProfileKind::Sphere { k: 1.0 }, 1.2)?;
    let radii = log_grid(0.2, 0.01, 12);
    let pairs: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| Ok((r, hamilton_jacobi_residual(&profile, [0.6 * r, 0.2 * r], [-0.3 * r, 0.5 * r])?.abs())))
        .collect::<Result<_>>()?;
    let fit = remainder_order(&pairs)?;
    Ok(slope_checks(
        Suite::Hj,
        "hamilton_jacobi",
        "x=r(0.6,0.2);y=r(-0.3,0.5)",
        &fit,
        p.thresholds.hj_min_slope,
        p.thresholds.slope_min_r2,
    )
    .to_vec())
}

fn coefficient_checks(
    suite: Suite,
    label: &str,
    params: &str,
    fit: &FitResult,
    target: [f64; 3],
    th: &Thresholds,
) -> Vec<Check> {
    let rel = [th.fit_c0_rel, th.fit_c1_rel, th.fit_c2_rel];
    (0..3)
        .map(|j| {
            let name = format!("{label}{j}");
            let c = if target[j] == 0.0 {
                // zero targets are judged on the scale of the leading coefficient
                Check::new(
                    suite,
                    name,
                    params,
                    fit.coefficients[j],
                    0.0,
                    rel[j] * target[0].abs(),
                    Comparison::AbsWithin,
                )
            } else {
                Check::new(suite, name, params, fit.coefficients[j], target[j], rel[j], Comparison::RelWithin)
            };
            c.with_fit(fit)
        })
        .collect()
}

fn route_checks(suite: Suite, label: &str, params: &str, fit: &FitResult) -> Vec<Check> {
    (0..3)
        .map(|j| {
            Check::new(
                suite,
                format!("{label}{j}_sequential"),
                params,
                (fit.sequential[j] - fit.coefficients[j]).abs(),
                0.0,
                fit.uncertainties[j],
                Comparison::AbsWithin,
            )
        })
        .collect()
}

fn fit_window(spectra: &DiskSpectra, window: (f64, f64), per_decade: usize, phi: &AngleData) -> Result<FitResult> {
    let grid = geometric_grid(window.0, window.1, per_decade);
    let samples = match phi.repr() {
        AngleRepr::PiFraction { num, den } if num > 0 && den <= i64::from(u32::MAX / 2) => {
            spectra.donnelly_rational(num as u32, 2 * den as u32, &grid)?
        }
        _ => spectra.donnelly(phi.phi(), &grid)?,
    };
    fit_power_series(&samples, 2, WeightPolicy::InversePower)
}

fn b_suite(p: &SuiteParams) -> Result<Vec<Check>> {
    let profile = p.spectral_profile()?;
    let jet = profile.vertex_jet();
    let angles = p.angles()?;
    let th = &p.thresholds;
    let mut out = Vec::new();
    let t_min_all = |radius: f64| angles.iter().map(|a| p.window(a.c2(), radius).0).fold(f64::INFINITY, f64::min);
    let full = DiskSpectra::disk(&profile, p.radius, t_min_all(p.radius))?;
    let half = DiskSpectra::disk(&profile, 0.5 * p.radius, t_min_all(0.5 * p.radius))?;
    for a in &angles {
        let target = b_coeffs(&jet, a)?.as_array();
        let fit = fit_window(&full, p.window(a.c2(), p.radius), p.per_decade, a)?;
        let params = format!("surface={};R={};phi={}", surface_label(&profile), p.radius, a.repr());
        out.extend(coefficient_checks(Suite::B, "b", &params, &fit, target, th));
        out.extend(route_checks(Suite::B, "b", &params, &fit));
        let fit_half = fit_window(&half, p.window(a.c2(), 0.5 * p.radius), p.per_decade, a)?;
        for j in 0..3 {
            let delta = (fit.coefficients[j] - fit_half.coefficients[j]).abs();
            let params = format!("{params};R'={}", 0.5 * p.radius);
            out.push(
                Check::new(
                    Suite::B,
                    format!("b{j}_boundary_independent"),
                    &params,
                    delta,
                    0.0,
                    fit.uncertainties[j] + fit_half.uncertainties[j],
                    Comparison::AbsWithin,
                )
                .with_fit(&fit_half),
            );
            if j == 2 {
                continue;
            }
            let scale = if target[j] == 0.0 { target[0].abs() } else { target[j].abs() };
            out.push(Check::new(
                Suite::B,
                format!("b{j}_boundary_rel"),
                &params,
                delta / scale,
                0.0,
                th.boundary_rel,
                Comparison::AtMost,
            ));
        }
    }
    Ok(out)
}

fn cone(p: &SuiteParams) -> Result<Vec<Check>> {
    let profile = p.spectral_profile()?;
    let jet = profile.vertex_jet();
    let th = &p.thresholds;
    let ks = p.orders(&[3]);
    let windows: Vec<(f64, f64)> =
        ks.iter().map(|&k| AngleData::order(k).map(|a| p.window(a.c2(), p.radius))).collect::<Result<_>>()?;
    let t_min = windows.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
    let spectra = DiskSpectra::disk(&profile, p.radius, t_min)?;
    let mut out = Vec::new();
    for (&k, &w) in ks.iter().zip(&windows) {
        let grid = geometric_grid(w.0, w.1, p.per_decade);
        let routes = spectra.cone_routes(k, &grid)?;
        let dev = routes
            .rotation_sum
            .iter()
            .zip(&routes.mode_filter)
            .map(|(a, b)| rel_dev(a.value, b.value))
            .fold(0.0, f64::max);
        let params = format!("surface={};R={};k={k}", surface_label(&profile), p.radius);
        out.push(Check::new(Suite::Cone, "routes_agree", &params, dev, 0.0, th.consistency_rel, Comparison::AtMost));
        let fit = fit_power_series(&routes.rotation_sum, 2, WeightPolicy::InversePower)?;
        let target = cone_coeffs(&jet, k)?.as_array();
        out.extend(coefficient_checks(Suite::Cone, "a", &params, &fit, target, th));
        out.extend(route_checks(Suite::Cone, "a", &params, &fit));
    }
    Ok(out)
}

fn surface_label(profile: &RotationalProfile) -> String {
    match profile.kind() {
        ProfileKind::Flat => "flat".into(),
        ProfileKind::Sphere { k } => format!("sphere(K={k})"),
        ProfileKind::Hyperbolic { k } => format!("hyperbolic(K={k})"),
        ProfileKind::PolyOdd { coeffs } => format!("poly_odd({} coeffs)", coeffs.len()),
    }
}
