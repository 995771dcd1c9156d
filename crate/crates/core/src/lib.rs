//! Computational toolkit for the modular-series side of algebraic
//! independence arguments: exact q-expansions and their differential system,
//! auxiliary-polynomial search over integer lattices, vanishing-order probes
//! for formal curves, and a numerical layer for Green functions, jet
//! estimates, Nevanlinna characteristic functions, and moderate-growth
//! detection.

pub mod auxpoly;
pub mod diskgeom;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mahler;
pub mod nevanlinna;
pub mod polyops;
pub mod quad;
pub mod series;
pub mod serio;
pub mod util;

pub use error::Error;
pub use polyops::{MPoly, VectorField};
pub use series::{OrdQ, TruncSeries, Q};
