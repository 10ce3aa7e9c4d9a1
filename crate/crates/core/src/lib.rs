//! Exact-arithmetic analysis of positive steady states for polynomial ODE
//! models of biochemical networks.
//!
//! The pipeline: parse a model, verify or compute its linear conservation
//! laws, Gauss-eliminate the maximum independent set of variables guided by
//! a dependency graph, then count and enclose positive solutions of the
//! reduced system -- at single parameter points, over sampling grids, or
//! across whole 2-D parameter regions via an open cylindrical algebraic
//! decomposition.  Stability of enclosed fixed points is classified with
//! the Routh-Hurwitz criterion on an exactly computed characteristic
//! polynomial.  All arithmetic is exact over the rationals.

pub mod cad2d;
pub mod conservation;
pub mod depgraph;
pub mod elimination;
pub mod fixtures;
pub mod interval;
pub mod model;
pub mod pointsolve;
pub mod poly;
pub mod rat;
pub mod realroots;
pub mod report;
pub mod stability;
pub mod textform;

pub use interval::RatInterval;
pub use poly::{MultiPoly, UniPoly};
pub use rat::Rat;
