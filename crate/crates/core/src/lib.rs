//! Betweenness centrality in dense random geometric networks.
//!
//! Three routes to the same quantity:
//!
//! * [`centrality`]: exact discrete betweenness (Brandes) on sampled soft
//!   random geometric graphs from [`rgg`];
//! * [`analytic`]: the closed-form continuum limit for a disk,
//!   `g*(eps) = (2/pi)(1 - eps^2) E(eps)`;
//! * [`quadrature`]: the continuum limit for any convex domain by a periodic
//!   trapezoidal rule over boundary ray distances.
//!
//! [`experiment`] runs the Monte Carlo density-convergence study and [`apps`]
//! holds reference boundary-detection and cluster-head policies.

pub mod analytic;
pub mod apps;
pub mod centrality;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod rgg;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{Circle, DomainSpec, Point};
pub use rgg::{ConnectionModel, Graph};
pub use rng::RngStream;
