//! Surfaces of revolution `dr² + f(r)² dθ²`: curvature, jets, geodesics,
//! Jacobi fields and the heat-expansion recursion oracle.

mod geodesic;
mod jacobi;
mod profile;

pub use geodesic::{
    geodesic_distance, geodesic_distance_within, geodesic_shoot, geodesic_state, GeodesicState, SurfacePointPolar,
};
pub use jacobi::{hamilton_jacobi_residual, jacobi_length, jacobi_length_jet, u1_recursion_oracle};
pub(crate) use profile::derivs;
pub use profile::{ProfileKind, RotationalProfile};
