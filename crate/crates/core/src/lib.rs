//! Numerical laboratory for the canonical 3-Sasakian structure on the unit
//! sphere `S^{4n+3}` in `H^{n+1}`: the H-connection, its torsion and
//! curvature, an adapted foliated chart, and randomized identity checks.

pub mod calibration;
pub mod chart;
pub mod config;
pub mod curvature;
pub mod error;
pub mod field;
pub mod hconn;
pub mod numerics;
pub mod report;
pub mod sphere;
pub mod suites;

pub use error::GeometryError;
