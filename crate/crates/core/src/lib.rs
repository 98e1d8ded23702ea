//! Analysis of the competitive rational planar systems
//!
//! ```text
//! (11,6):   x' = α₁ / (A₁ + y),   y' = γ₂ y / x
//! (11,14):  x' = α₁ / (A₁ + y),   y' = y / (A₂ + x)
//! ```
//!
//! Equilibria and their spectra, parameter regions, trapping rectangles, a
//! certified orbit-fate classifier, the separatrix through the interior
//! saddle, basin rasters, and a census of the competitive special cases of
//! the general linear-fractional planar system.

pub mod basin;
pub mod error;
pub mod plane;
pub mod separatrix;
pub mod systems;
pub mod taxonomy;
pub mod verify;

pub use error::{Error, Result};
pub use plane::{Point, Quadrant};
pub use systems::{SystemId, SystemParams};
