//! Numerical tolerances and acceptance thresholds.
//!
//! The CLI defaults are these values; each can be overridden per run.

/// Relative tolerance on offending jet components for the symmetry preconditions.
pub const SYMMETRY_REL_TOL: f64 = 1e-10;

/// Closed-form identities (cone sum, corner halving): relative.
pub const CONSISTENCY_REL_TOL: f64 = 1e-12;

/// Sine-power sums against direct summation: relative.
pub const TRIG_REL_TOL: f64 = 1e-10;

/// Minimum log-log slope of the squared-distance residual.
pub const DIST_MIN_SLOPE: f64 = 6.5;

/// Minimum coefficient of determination for every slope fit.
pub const SLOPE_MIN_R2: f64 = 0.99;

/// Minimum slope of the Jacobi length residual.
pub const ELL_MIN_SLOPE: f64 = 5.8;

/// Minimum slope of the `u0^2 θ − 1` residual.
pub const U0_MIN_SLOPE: f64 = 4.8;

/// Minimum slope of the `u1` residual against the recursion oracle.
pub const U1_MIN_SLOPE: f64 = 2.8;

/// Fitted zeroth coefficient: relative.
pub const FIT_C0_REL: f64 = 5e-3;

/// Fitted first coefficient: relative.
pub const FIT_C1_REL: f64 = 2e-2;

/// Fitted second coefficient: relative.
pub const FIT_C2_REL: f64 = 0.10;

/// Flat sector constant against 19/72: absolute.
pub const SECTOR_CONST_ABS: f64 = 1e-3;

/// Wedge rotation-image constants: absolute.
pub const WEDGE_ROT_ABS: f64 = 1e-6;

/// Hamilton–Jacobi residual: minimum slope along rays.
pub const HJ_MIN_SLOPE: f64 = 6.5;

/// Floor below which a residual counts as exact in slope fits.
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// Eigenvalue relative tolerance.
pub const EIGEN_REL_TOL: f64 = 1e-9;

/// Assumed relative accuracy of computed eigenvalues, used to bound trace errors.
/// Flat-disk spectra match Bessel zeros to about `2e-13`.
pub const EIGEN_PRECISION_REL: f64 = 1e-12;

/// Per-step local error for geodesic and Jacobi integration.
pub const ODE_STEP_TOL: f64 = 1e-12;

/// Absolute accuracy of boundary-value distances.
pub const DISTANCE_ABS_TOL: f64 = 1e-10;

/// A trace refuses to report once its tail bound exceeds this fraction of the value.
pub const TAIL_REFUSE_FRACTION: f64 = 1e-3;

/// Relative cutoff for spectral truncation: `exp(-λ_max t_min)` against the partial sum.
pub const SPECTRAL_CUTOFF: f64 = 1e-16;

/// Largest accepted condition number of a fit design.
pub const FIT_MAX_CONDITION: f64 = 1e10;

/// Relative change of the fitted `b₀`, `b₁` allowed between the disks of radius `R` and `R/2`.
pub const BOUNDARY_REL: f64 = 1e-2;
