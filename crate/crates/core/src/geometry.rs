//! The shifted disk `|z + γ/(1-γ)| < 1/(1-γ)`, the affine transport to and
//! from the unit disk, and the Möbius automorphisms that generate the
//! extremal families.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, BohrError, Result};

/// Largest accepted shift parameter; the disk radius `1/(1-γ)` diverges at 1.
pub const GAMMA_MAX: f64 = 1.0 - 1e-6;

/// Boundary band used by every membership test.
pub const BOUNDARY_TOL: f64 = 1e-12;

pub(crate) fn check_gamma(gamma: f64) -> Result<()> {
    check_range("gamma", gamma, 0.0, GAMMA_MAX, true, "[0, 1 - 1e-6]")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// The domain Ω_γ. The point `z = 1` lies on its boundary for every γ and
/// the unit disk is contained in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedDisk {
    pub gamma: f64,
    pub center: Complex64,
    pub radius: f64,
}

impl ShiftedDisk {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let s = 1.0 - gamma;
        Ok(ShiftedDisk {
            gamma,
            center: Complex64::new(-gamma / s, 0.0),
            radius: 1.0 / s,
        })
    }

    pub fn transport(&self) -> AffineTransport {
        AffineTransport { gamma: self.gamma }
    }

    pub fn classify(&self, z: Complex64) -> Membership {
        classify_circle(z, self.center, self.radius)
    }

    /// `|γ + (1-γ)z|`, the unit-disk radius of the transported point.
    pub fn normalized_radius(&self, z: Complex64) -> f64 {
        self.transport().backward(z).norm()
    }

    /// `n` equally spaced points on the boundary circle, starting at `z = 1`.
    pub fn circle_points(&self, n: usize) -> Result<Vec<Complex64>> {
        if n < 2 {
            return Err(BohrError::Domain {
                name: "n",
                value: n as f64,
                expected: "n >= 2",
            });
        }
        Ok((0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                self.center + self.radius * Complex64::new(t.cos(), t.sin())
            })
            .collect())
    }
}

/// Alias matching the operation name used throughout the docs and CLI.
pub fn make_disk(gamma: f64) -> Result<ShiftedDisk> {
    ShiftedDisk::new(gamma)
}

fn classify_circle(z: Complex64, center: Complex64, radius: f64) -> Membership {
    let d = (z - center).norm() - radius;
    if d.abs() <= BOUNDARY_TOL * radius.max(1.0) {
        Membership::Boundary
    } else if d < 0.0 {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

pub fn unit_disk_membership(w: Complex64) -> Membership {
    classify_circle(w, Complex64::new(0.0, 0.0), 1.0)
}

/// `forward: ξ ↦ (ξ-γ)/(1-γ)` maps the unit disk onto Ω_γ; `backward` is its
/// inverse `z ↦ γ + (1-γ)z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransport {
    pub gamma: f64,
}

impl AffineTransport {
    pub fn new(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(AffineTransport { gamma })
    }

    #[inline]
    pub fn forward(&self, xi: Complex64) -> Complex64 {
        (xi - self.gamma) / (1.0 - self.gamma)
    }

    #[inline]
    pub fn backward(&self, z: Complex64) -> Complex64 {
        self.gamma + (1.0 - self.gamma) * z
    }
}

/// Disk automorphism `ψ_a(w) = (a - w)/(1 - a w)` for real `a ∈ [0, 1)`.
/// It is an involution and swaps `0` and `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusAuto {
    pub a: f64,
}

impl MobiusAuto {
    pub fn new(a: f64) -> Result<Self> {
        check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
        Ok(MobiusAuto { a })
    }

    #[inline]
    pub fn apply(&self, w: Complex64) -> Complex64 {
        (self.a - w) / (1.0 - self.a * w)
    }
}

pub fn mobius_auto(a: f64) -> Result<MobiusAuto> {
    MobiusAuto::new(a)
}

/// Writes circle data as CSV with header `gamma,index,re,im`.
pub fn write_circle_csv<W: Write>(out: &mut W, disks: &[ShiftedDisk], n: usize) -> Result<()> {
    let io = |_| BohrError::Domain {
        name: "io",
        value: f64::NAN,
        expected: "writable sink",
    };
    writeln!(out, "gamma,index,re,im").map_err(io)?;
    for disk in disks {
        for (j, z) in disk.circle_points(n)?.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                crate::fmt_f64(disk.gamma),
                j,
                crate::fmt_f64(z.re),
                crate::fmt_f64(z.im)
            )
            .map_err(io)?;
        }
    }
    Ok(())
}
