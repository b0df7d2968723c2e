//! Elastic flow of curves in the hyperbolic plane.
//!
//! The crate is organised bottom-up: [`geometry`] holds the two conformal models and
//! discrete curve calculus, [`elastica`] synthesises the stationary curves, [`flow`]
//! integrates the gradient flow, [`analysis`] inspects finished runs and [`io`] handles
//! files and figures.

pub mod geometry;
pub mod elastica;
pub mod flow;
pub mod analysis;
pub mod io;
