//! Run configuration: a JSON document whose fields the command-line flags override.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansions::AngleRepr;
use crate::geometry::{ProfileKind, RotationalProfile};
use crate::verify::{Suite, SuiteParams, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Flat,
    Sphere,
    Hyperbolic,
    PolyOdd,
    /// `sin r + δ r⁵/120`
    Bump,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SurfaceKind>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid_radius: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmin: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi: Vec<AngleRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<AngleRepr>,
    /// Disk radius for spectral suites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Grid points per decade.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Number of random jets in the consistency suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jets: Option<usize>,
    #[serde(rename = "K0", default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<String>,
    #[serde(rename = "lapK", default, skip_serializing_if = "Option::is_none")]
    pub lap_k: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tol_overrides: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

/// Everything a run depends on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub task: TaskSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    /// Parses JSON text; errors carry the line, column and offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Pretty JSON with a fixed key order and absent options omitted.
    #[must_use]
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The surface, or `None` when the suite default should be used.
    pub fn profile_kind(&self) -> Result<Option<ProfileKind>> {
        let s = &self.surface;
        let Some(kind) = s.kind else {
            if s.k.is_some() || s.coeffs.is_some() || s.delta.is_some() {
                return Err(Error::Config("surface.kind is required when K, coeffs or delta is given".into()));
            }
            return Ok(None);
        };
        let need = |v: Option<f64>, field: &str| {
            v.ok_or_else(|| Error::Config(format!("surface.{field} is required for {kind:?} surfaces")))
        };
        Ok(Some(match kind {
            SurfaceKind::Flat => ProfileKind::Flat,
            SurfaceKind::Sphere => ProfileKind::Sphere { k: s.k.unwrap_or(1.0) },
            SurfaceKind::Hyperbolic => ProfileKind::Hyperbolic { k: s.k.unwrap_or(-1.0) },
            SurfaceKind::PolyOdd => ProfileKind::PolyOdd {
                coeffs: s
                    .coeffs
                    .clone()
                    .ok_or_else(|| Error::Config("surface.coeffs is required for poly_odd".into()))?,
            },
            SurfaceKind::Bump => {
                let delta = need(s.delta, "delta")?;
                let valid = s.valid_radius.unwrap_or(1.2);
                RotationalProfile::bump(delta, valid).map_err(|e| Error::Config(e.to_string()))?.kind().clone()
            }
        }))
    }

    /// Suite inputs with defaults filled in and tolerance overrides applied.
    pub fn suite_params(&self) -> Result<SuiteParams> {
        let d = SuiteParams::default();
        let t = &self.task;
        let mut thresholds = Thresholds::default();
        thresholds.apply(&t.tol_overrides)?;
        for (name, v) in
            [("radius", t.radius), ("t_min", t.t_min), ("t_max", t.t_max), ("valid_radius", self.surface.valid_radius)]
        {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} = {v} must be positive")));
                }
            }
        }
        Ok(SuiteParams {
            surface: self.profile_kind()?,
            valid_radius: self.surface.valid_radius,
            radius: t.radius.unwrap_or(d.radius),
            k: t.k.clone(),
            kmin: t.kmin.unwrap_or(d.kmin),
            kmax: t.kmax.unwrap_or(d.kmax),
            phi: t.phi.clone(),
            gamma: t.gamma.unwrap_or(d.gamma),
            t_min: t.t_min,
            t_max: t.t_max,
            per_decade: t.grid.unwrap_or(d.per_decade),
            jets: t.jets.unwrap_or(d.jets),
            seed: self.seed,
            thresholds,
        })
    }

    /// Angles given in decimal radians rather than exact multiples of π.
    #[must_use]
    pub fn inexact_angles(&self) -> Vec<String> {
        self.task
            .phi
            .iter()
            .chain(self.task.gamma.iter())
            .filter(|a| !a.is_exact())
            .map(|a| format!("angle {a} given in decimal radians; exact reductions are unavailable"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"seed": 7, "surface": {"kind": "sphere", "K": 1.0},
            "task": {"suite": "b", "phi": ["2pi/3", "pi", 1.5], "tol_overrides": {"fit_c2_rel": 0.2}},
            "output": {"format": "json"}}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        let canon = cfg.canonical_json();
        let again = RunConfig::from_json(&canon).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(canon, again.canonical_json());
        assert_eq!(cfg.inexact_angles().len(), 1);
    }

    #[test]
    fn unknown_field_is_named() {
        let err = RunConfig::from_json("{\n \"task\": {\"sweet\": 1}}").unwrap_err().to_string();
        assert!(err.contains("sweet") && err.contains("line 2"), "{err}");
    }

    #[test]
    fn poly_odd_needs_coeffs() {
        let cfg = RunConfig::from_json(r#"{"surface": {"kind": "poly_odd"}}"#).unwrap();
        assert!(matches!(cfg.suite_params(), Err(Error::Config(_))));
    }
}
