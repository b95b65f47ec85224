//! Numerical toolkit for Bohr-type inequalities on shifted disks.
//!
//! Functions are analytic (or harmonic, `f = h + conj(g)`) on the disk
//! `Ω_γ = {z : |z + γ/(1-γ)| < 1/(1-γ)}` and bounded by 1 there. The crate
//! evaluates the majorant functionals of such functions, the closed forms
//! of their extremal families, and recovers the critical radii and sharp
//! constants numerically.

pub mod error;
pub mod extremal;
pub mod functionals;
pub mod geometry;
pub mod par;
pub mod series;
pub mod solver;

pub use error::{BohrError, Result};
pub use functionals::{evaluate, EvalResult, FunctionalSpec, Input, Variant};
pub use geometry::ShiftedDisk;
pub use series::{CoeffSeries, HarmonicPair};

/// Round-trip float formatting for CSV output.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}
