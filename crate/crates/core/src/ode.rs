//! Thin wrapper over the adaptive DOP853 integrator.
//!
//! The upstream tableau evaluates the last stage at `x + 0·h` instead of
//! `x + h`, which corrupts non-autonomous problems. Every system is therefore
//! integrated in autonomous form, with the independent variable appended as
//! state component `N` (`M = N + 1`).

use nalgebra::SVector;
use ode_solvers::dop853::Dop853;
use ode_solvers::System;

use crate::error::{Error, Result};

/// Right-hand side `y' = F(x, y)` with an optional early stop.
pub(crate) trait Rhs<const N: usize> {
    fn eval(&self, x: f64, y: &SVector<f64, N>, dy: &mut SVector<f64, N>);

    /// Return true to stop after an accepted step.
    fn stop(&self, _x: f64, _y: &SVector<f64, N>) -> bool {
        false
    }
}

struct Adapter<'a, R, const N: usize> {
    rhs: &'a R,
}

fn head<const N: usize, const M: usize>(y: &SVector<f64, M>) -> SVector<f64, N> {
    SVector::<f64, N>::from_fn(|i, _| y[i])
}

impl<R: Rhs<N>, const N: usize, const M: usize> System<f64, SVector<f64, M>> for Adapter<'_, R, N> {
    fn system(&self, _x: f64, y: &SVector<f64, M>, dy: &mut SVector<f64, M>) {
        let mut d = SVector::<f64, N>::zeros();
        self.rhs.eval(y[N], &head(y), &mut d);
        for i in 0..N {
            dy[i] = d[i];
        }
        dy[N] = 1.0;
    }

    fn solout(&mut self, _x: f64, y: &SVector<f64, M>, _dy: &SVector<f64, M>) -> bool {
        self.rhs.stop(y[N], &head(y))
    }
}

/// Outcome of one integration.
pub(crate) enum Outcome<const N: usize> {
    Done(SVector<f64, N>),
    Stopped(f64, SVector<f64, N>),
}

/// Integrates from `x0` to `x1` with relative/absolute tolerances.
pub(crate) fn integrate<R: Rhs<N>, const N: usize, const M: usize>(
    rhs: &R,
    x0: f64,
    x1: f64,
    y0: SVector<f64, N>,
    rtol: f64,
    atol: f64,
) -> Result<Outcome<N>> {
    assert_eq!(M, N + 1, "state size M must be N + 1");
    if x1 == x0 {
        return Ok(Outcome::Done(y0));
    }
    let adapter = Adapter { rhs };
    let mut z0 = SVector::<f64, M>::zeros();
    for i in 0..N {
        z0[i] = y0[i];
    }
    z0[N] = x0;
    let mut solver = Dop853::from_param(
        adapter,
        x0,
        x1,
        x1 - x0,
        z0,
        rtol,
        atol,
        0.9,
        0.0,
        0.333,
        6.0,
        (x1 - x0).abs(),
        0.0,
        1_000_000,
        u32::MAX,
        ode_solvers::dop_shared::OutputType::Sparse,
    );
    solver.integrate().map_err(|e| Error::Solver(format!("ODE integration: {e}")))?;
    let y = head(solver.y_out().last().expect("integrator records the final state"));
    let x = *solver.x_out().last().expect("integrator records the final state");
    if (x - x1).abs() > 1e-14 * x1.abs().max(1.0) {
        return Ok(Outcome::Stopped(x, y));
    }
    Ok(Outcome::Done(y))
}

/// Integrates and insists on reaching `x1`.
pub(crate) fn integrate_to<R: Rhs<N>, const N: usize, const M: usize>(
    rhs: &R,
    x0: f64,
    x1: f64,
    y0: SVector<f64, N>,
    rtol: f64,
    atol: f64,
) -> Result<SVector<f64, N>> {
    match integrate::<R, N, M>(rhs, x0, x1, y0, rtol, atol)? {
        Outcome::Done(y) => Ok(y),
        Outcome::Stopped(x, _) => Err(Error::Domain { at: x, msg: "integration stopped early".into() }),
    }
}
