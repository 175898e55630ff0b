//! Ordering cones and the numerical machinery built on them: order-interval
//! gauges and their sup-norm isometries, Gerstewitz scalarization with exact
//! subdifferentials, exact penalization of vector programs, box-constrained
//! Lagrange duality with stationarity certificates, and support-function
//! embeddings of polytopes with the Hausdorff metric.

#![allow(clippy::needless_range_loop)]

pub mod cones;
pub mod duality;
pub mod error;
pub mod exec;
pub mod gauge;
pub mod instances;
pub mod lattice;
pub mod numkernel;
pub mod penalty;
pub mod scalarization;
pub mod tolerance;
pub mod vector;

pub use cones::{ConeKind, PolyhedralCone};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gauge::GaugeBody;
pub use scalarization::GerstewitzFn;
pub use tolerance::{SolverLimits, Tolerances};
pub use vector::{AmbientNorm, ExtendedReal, NormKind, Vector};
