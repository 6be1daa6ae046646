//! Small-`t` coefficient extraction and log-log remainder orders.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::TraceSample;
use crate::tolerances::{FIT_MAX_CONDITION, RESIDUAL_FLOOR};

/// Row weighting of the least-squares design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightPolicy {
    /// Weight `(t_max/t)^{d+1}` on each squared residual.
    #[default]
    InversePower,
    Uniform,
}

/// Options of [`fit_power_series_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub degree: usize,
    pub weights: WeightPolicy,
    /// Fit one extra power and drop it from the report.
    pub absorb_next: bool,
    pub max_condition: f64,
}

impl FitOptions {
    #[must_use]
    pub fn new(degree: usize) -> Self {
        Self { degree, weights: WeightPolicy::InversePower, absorb_next: true, max_condition: FIT_MAX_CONDITION }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

/// Coefficients `c_0 … c_d` of `Σ c_j t^j` with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    /// `stderr + 2·model_spread + tail_propagated`, per coefficient.
    pub uncertainties: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Change of each coefficient when one more power is fitted.
    pub model_spread: Vec<f64>,
    /// Worst-case effect of the samples' tail and precision bounds.
    pub tail_propagated: Vec<f64>,
    /// Sequential-elimination estimates of the same coefficients.
    pub sequential: Vec<f64>,
    pub condition: f64,
    pub residual_norm: f64,
    pub window: FitWindow,
}

/// `n` points geometric in `[t_min, t_max]` at `per_decade` points per decade (at least 2).
#[must_use]
pub fn geometric_grid(t_min: f64, t_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = (t_max / t_min).log10();
    let n = ((per_decade as f64 * decades).ceil() as usize + 1).max(2);
    (0..n).map(|i| t_min * (t_max / t_min).powf(i as f64 / (n - 1) as f64)).collect()
}

struct Solved {
    beta: Vec<f64>,
    stderr: Vec<f64>,
    tail: Vec<f64>,
    condition: f64,
    residual_norm: f64,
}

fn solve(tau: &[f64], y: &[f64], tails: &[f64], w: &[f64], powers: usize) -> Result<Solved> {
    let n = tau.len();
    let a = DMatrix::from_fn(n, powers, |i, j| w[i].sqrt() * tau[i].powi(j as i32));
    let b = DVector::from_fn(n, |i, _| w[i].sqrt() * y[i]);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested Vᵀ");
    // pseudo-inverse rows: β = V Σ⁻¹ Uᵀ b
    let pinv = vt.transpose() * DMatrix::from_diagonal(&sv.map(|s| 1.0 / s)) * u.transpose();
    let mut beta = &pinv * &b;
    // one step of iterative refinement
    let correction = &pinv * (&b - &a * &beta);
    beta += correction;
    let resid = &b - &a * &beta;
    let rss = resid.norm_squared();
    let dof = n.saturating_sub(powers).max(1) as f64;
    let s2 = rss / dof;
    let cov_diag: Vec<f64> =
        (0..powers).map(|j| (0..powers).map(|l| (vt[(l, j)] / sv[l]).powi(2)).sum::<f64>() * s2).collect();
    let tail = (0..powers).map(|j| (0..n).map(|i| (pinv[(j, i)] * w[i].sqrt()).abs() * tails[i]).sum()).collect();
    Ok(Solved {
        beta: beta.iter().copied().collect(),
        stderr: cov_diag.iter().map(|c| c.sqrt()).collect(),
        tail,
        condition,
        residual_norm: rss.sqrt(),
    })
}

/// Value at 0 of the polynomial through `(x_i, y_i)` (Neville).
fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xa, xb) = (x[i], x[i + level]);
            p[i] = (xb * p[i] - xa * p[i + 1]) / (xb - xa);
        }
    }
    p[0]
}

fn sequential(t: &[f64], y: &[f64], degree: usize, powers: usize) -> Vec<f64> {
    let n = t.len();
    let mut rest = y.to_vec();
    let mut out = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let m = powers - j;
        let idx: Vec<usize> = (0..m).map(|i| if m == 1 { 0 } else { (i * (n - 1) + (m - 1) / 2) / (m - 1) }).collect();
        let xs: Vec<f64> = idx.iter().map(|&i| t[i]).collect();
        let ys: Vec<f64> = idx.iter().map(|&i| rest[i]).collect();
        let c = neville_at_zero(&xs, &ys);
        out.push(c);
        for (r, ti) in rest.iter_mut().zip(t) {
            *r = (*r - c) / ti;
        }
    }
    out
}

/// Weighted least-squares fit of `Σ_{j≤d} c_j t^j` with the default options.
pub fn fit_power_series(samples: &[TraceSample], degree: usize, weights: WeightPolicy) -> Result<FitResult> {
    fit_power_series_with(samples, &FitOptions { weights, ..FitOptions::new(degree) })
}

/// Weighted least-squares fit of `Σ_{j≤d} c_j t^j`.
pub fn fit_power_series_with(samples: &[TraceSample], opts: &FitOptions) -> Result<FitResult> {
    let d = opts.degree;
    let n = samples.len();
    if n < 2 * (d + 1) {
        return Err(Error::Fit(format!("{n} samples cannot support a degree-{d} fit (need {})", 2 * (d + 1))));
    }
    if samples
        .iter()
        .any(|s| !(s.t > 0.0) || !s.value.is_finite() || !(s.tail_estimate >= 0.0) || !(s.precision >= 0.0))
    {
        return Err(Error::Fit("samples need positive t, finite values and non-negative error bounds".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.t.total_cmp(&b.t));
    let t_min = sorted[0].t;
    let t_max = sorted[n - 1].t;
    let t: Vec<f64> = sorted.iter().map(|s| s.t).collect();
    let tau: Vec<f64> = t.iter().map(|x| x / t_max).collect();
    let y: Vec<f64> = sorted.iter().map(|s| s.value).collect();
    let tails: Vec<f64> = sorted.iter().map(|s| s.tail_estimate + s.precision).collect();
    let w: Vec<f64> = match opts.weights {
        WeightPolicy::InversePower => tau.iter().map(|x| x.powi(-(d as i32 + 1))).collect(),
        WeightPolicy::Uniform => vec![1.0; n],
    };
    let powers = d + 1 + usize::from(opts.absorb_next);
    let main = solve(&tau, &y, &tails, &w, powers)?;
    if !(main.condition <= opts.max_condition) {
        return Err(Error::Fit(format!(
            "design condition {:.3e} exceeds {:.1e}; widen the window or lower the degree",
            main.condition, opts.max_condition
        )));
    }
    let spread = if n > powers + 1 {
        let more = solve(&tau, &y, &tails, &w, powers + 1)?;
        (0..=d).map(|j| (more.beta[j] - main.beta[j]).abs()).collect()
    } else {
        vec![0.0; d + 1]
    };
    let unscale = |v: &[f64]| -> Vec<f64> { (0..=d).map(|j| v[j] / t_max.powi(j as i32)).collect() };
    let coefficients = unscale(&main.beta);
    let stderr = unscale(&main.stderr);
    let model_spread = unscale(&spread);
    let tail_propagated = unscale(&main.tail);
    let uncertainties = (0..=d).map(|j| stderr[j] + 2.0 * model_spread[j] + tail_propagated[j]).collect();
    Ok(FitResult {
        coefficients,
        uncertainties,
        stderr,
        model_spread,
        tail_propagated,
        sequential: sequential(&t, &y, d, powers),
        condition: main.condition,
        residual_norm: main.residual_norm,
        window: FitWindow { t_min, t_max, points: n },
    })
}

/// Least-squares line through `(log r, log residual)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderFit {
    /// `+∞` when every residual sits at the floor.
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub exact: bool,
    /// Pairs above the floor that entered the fit.
    pub used: usize,
}

/// [`remainder_order_with_floor`] at the default floor.
pub fn remainder_order(pairs: &[(f64, f64)]) -> Result<RemainderFit> {
    remainder_order_with_floor(pairs, RESIDUAL_FLOOR)
}

/// Log-log slope of `|residual|` against `r`; residuals at or below `floor` are excluded.
pub fn remainder_order_with_floor(pairs: &[(f64, f64)], floor: f64) -> Result<RemainderFit> {
    if pairs.len() < 3 {
        return Err(Error::Input("need at least three (r, residual) pairs".into()));
    }
    if pairs.iter().any(|&(r, e)| !(r > 0.0) || !e.is_finite()) {
        return Err(Error::Input("radii must be positive and residuals finite".into()));
    }
    let (lo, hi) = pairs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &(r, _)| (a.min(r), b.max(r)));
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Input(format!("radii span [{lo}, {hi}], less than one decade")));
    }
    let kept: Vec<(f64, f64)> =
        pairs.iter().filter(|&&(_, e)| e.abs() > floor).map(|&(r, e)| (r.ln(), e.abs().ln())).collect();
    if kept.is_empty() {
        return Ok(RemainderFit { slope: f64::INFINITY, intercept: f64::NAN, r2: 1.0, exact: true, used: 0 });
    }
    if kept.len() < 3 {
        return Err(Error::Fit(format!("only {} residuals above the floor {floor:e}", kept.len())));
    }
    let m = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / m;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = kept.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = kept.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(RemainderFit { slope, intercept, r2, exact: false, used: kept.len() })
}
