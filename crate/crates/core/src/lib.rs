//! Small-time heat coefficients of corners, cone points and rotations on
//! surfaces, together with the numerical machinery used to check them:
//! geodesics and Jacobi fields on surfaces of revolution, Dirichlet spectra
//! of the separated radial problems, and asymptotic coefficient fitting.

pub mod asymfit;
pub mod cli;
pub mod error;
pub mod expansions;
pub mod geometry;
mod ode;
pub mod quad;
pub mod spectral;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
