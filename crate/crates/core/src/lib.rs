//! Numerical laboratory for the transcendental Hénon map
//!
//! ```text
//! F(z, w) = (exp(-z^2) - delta * w, z),   delta > 2
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`map`]: the map, its inverse, its linear part and the closed-form iterates.
//! * [`regions`]: the sector `S`, the cone ladder `W_n`, the absorbing set `I(C)`
//!   and the quadrant cycle `sigma`.
//! * [`limits`]: the geometric sums `Delta_1`, `Delta_2` with truncation bounds,
//!   the limit functions `h1`, `h2`, the linearizing conjugacy `phi` and the
//!   harmonic diagnostics `u_n`.
//! * [`classify`]: assigns points to one of the four escaping Fatou components.
//! * [`render`]: tile-parallel rendering of real 2-slices to binary PPM.
//! * [`verify`]: seeded property suites with machine-readable reports.
//!
//! Data-parallel loops go through [`Execution`]. With the default `parallel`
//! feature they run on rayon; without it every path is sequential. Results are
//! bit-identical either way.

pub mod classify;
pub mod error;
mod exec;
pub mod limits;
pub mod map;
pub mod regions;
pub mod render;
pub mod rng;
pub mod verify;

pub use num_complex::Complex64;

pub use classify::{classify, classify_grid, ClassificationResult, ClassifyConfig, Status};
pub use error::{Error, Result};
pub use exec::Execution;
pub use limits::{ConjugacyImage, ExtComplex, LimitEstimate};
pub use map::{MapParams, Orbit, Point};
pub use regions::{AbsorbingParams, ConeSchedule, QuadrantLabel, Sign};
