//! Finite-volume cross-check of the radial spectra.
//!
//! With `u = r^ν w` the problem `−(f u')' + (ν²/f) u = λ f u` becomes
//! `−(p w')' + q w = λ p w`, `p = f r^{2ν}`,
//! `q/p = (ν/r²)((1 − ν) + ν r²/f² − r f'/f)`, and `w` is smooth at the vertex
//! for every `ν`. A cell-centred second-order scheme with zero flux through
//! the vertex and a ghost cell for `w(R) = 0` is symmetrised to a tridiagonal
//! matrix and solved by Sturm-sequence bisection.

use crate::error::{Error, Result};
use crate::geometry::RotationalProfile;

fn tridiagonal(profile: &RotationalProfile, radius: f64, nu: f64, cells: usize) -> (Vec<f64>, Vec<f64>) {
    let h = radius / cells as f64;
    let h2 = h * h;
    let rc: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let fc: Vec<f64> = rc.iter().map(|&r| profile.f(r)).collect();
    let ff: Vec<f64> = (0..=cells).map(|i| profile.f(i as f64 * h)).collect();
    // weight of face j seen from cell i: f_j (r_j/r_i)^{2ν} / f_i
    let face = |j: usize, i: usize| -> f64 {
        if j == 0 {
            return 0.0;
        }
        ff[j] / fc[i] * (2.0 * nu * (j as f64 * h / rc[i]).ln()).exp()
    };
    let mut d = vec![0.0; cells];
    let mut e = vec![0.0; cells.saturating_sub(1)];
    for i in 0..cells {
        let right = if i + 1 == cells { 2.0 * face(i + 1, i) } else { face(i + 1, i) };
        let (r, f) = (rc[i], fc[i]);
        let [_, fp, _] = profile.f_derivs(r);
        let q = nu / (r * r) * ((1.0 - nu) + nu * (r / f).powi(2) - r * fp / f);
        d[i] = (face(i, i) + right) / h2 + q;
        if i + 1 < cells {
            let rf = (i + 1) as f64 * h;
            let geo = (nu * (2.0 * rf.ln() - rc[i].ln() - rc[i + 1].ln())).exp();
            e[i] = -ff[i + 1] / h2 / (fc[i] * fc[i + 1]).sqrt() * geo;
        }
    }
    (d, e)
}

fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut n = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = f64::EPSILON * (d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            n += 1;
        }
    }
    n
}

/// First `count` eigenvalues of the scheme with `cells` cells.
pub fn fd_eigenvalues(
    profile: &RotationalProfile,
    radius: f64,
    nu: f64,
    count: usize,
    cells: usize,
) -> Result<Vec<f64>> {
    if cells < 4 * count.max(1) {
        return Err(Error::Input(format!("{cells} cells cannot resolve {count} eigenvalues")));
    }
    if radius > profile.valid_radius() {
        return Err(Error::Domain { at: radius, msg: "outer radius beyond the valid radius".into() });
    }
    let (d, e) = tridiagonal(profile, radius, nu, cells);
    let upper = d
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let l = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let r = if i < e.len() { e[i].abs() } else { 0.0 };
            di + l + r
        })
        .fold(0.0, f64::max);
    let mut out = Vec::with_capacity(count);
    for m in 1..=count {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(0.0), upper);
        while hi - lo > 4.0 * f64::EPSILON * hi {
            let mid = 0.5 * (lo + hi);
            if count_below(&d, &e, mid) >= m {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Richardson-extrapolated eigenvalues from `cells` and `2·cells`.
pub fn fd_eigenvalues_richardson(
    profile: &RotationalProfile,
    radius: f64,
    nu: f64,
    count: usize,
    cells: usize,
) -> Result<Vec<f64>> {
    let coarse = fd_eigenvalues(profile, radius, nu, count, cells)?;
    let fine = fd_eigenvalues(profile, radius, nu, count, 2 * cells)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}
