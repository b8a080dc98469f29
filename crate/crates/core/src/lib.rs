//! Closed-form one-dimensional Wasserstein geodesics, their lifts to
//! spherical-shell mixtures in `R^d`, and sliced Wasserstein distances
//! `SW_{p,q}` computed through Radon projections.
//!
//! Along the shell curves `t -> nu_t` every projection is a 1D Wasserstein
//! geodesic, so the curve is an `SW_{p,q}` geodesic, while its full `W_p`
//! distance to `nu_0` only decays like `t^{1/p}`.
//!
//! Modules:
//! - [`measure1d`]: measures on the line, CDFs, quantiles, pushforwards.
//! - [`transport1d`]: optimal maps, interpolation, `W_p` and `W_inf`.
//! - [`families`]: the `mu_t^{alpha,beta}` and `nu_t^{alpha,x}` families,
//!   shell and circle mixtures and their projections.
//! - [`sphere`]: direction sets on the sphere and the constant `C_{d,q}`.
//! - [`sliced`]: `SW_{p,q}`, the radial `W_p` and empirical estimates.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod measure1d;
pub mod quad;
pub mod transport1d;

pub use error::{Error, Result};
pub use exec::Execution;
pub use measure1d::{Measure1D, PiecewiseLinearMap, Quantile, QuantileFn};
pub use transport1d::Order;
pub mod families;
pub mod sliced;
pub mod sphere;

pub use families::{CircleMixture, ShellMixture};
pub use sphere::DirectionSet;
