//! Two-body orbital mechanics built from the inverse-square force.
//!
//! The crate is split into:
//!
//! * [`geom`]: ellipse parameter bundles, polar/Cartesian conversion, planar and
//!   spatial vector products, curvature radius.
//! * [`dynamics`]: the force field, a fixed-step RK4 propagator, first integrals
//!   and recovery of conic elements from a state.
//! * [`analytic`]: the closed-form law of motion along the ellipse (time as a
//!   function of polar angle and its inverse) plus the speed profile.
//! * [`solardata`]: the embedded eccentricity table of the eight planets.
//! * [`cli`]: the `kepler` command-line front end.
//!
//! Polar angles follow the convention `r = p / (1 - eps * cos(theta))` with the
//! attracting body at the origin, so `theta = 0` is the **apoapsis** (largest
//! distance) and `theta = pi` the periapsis. Most textbooks use `1 + eps * cos`;
//! shift by `pi` when comparing.

pub mod analytic;
pub mod check;
pub mod cli;
pub mod dynamics;
mod error;
pub mod geom;
pub mod solardata;

pub use error::{KeplerError, Result};
