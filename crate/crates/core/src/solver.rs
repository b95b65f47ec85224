//! Critical radii and constant sharpness from the extremal families.
//!
//! Model assumption: the supremum over the whole admissible class is
//! replaced by the supremum over the Möbius extremal family of each
//! variant. Random admissible inputs elsewhere in the crate only serve as
//! falsification probes.
//!
//! Near the critical radius the family supremum approaches 1 only in the
//! `a → 1` limit, so `sup S - 1` is of order `1-a` and drowns in rounding.
//! The sign tests therefore use the cancellation-free excess ratios from
//! [`crate::extremal`]: `(S-1)/(1-a)` for radii and `(S-1)/(1-a)²` for
//! area multipliers.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, BohrError, Result};
use crate::extremal::{
    bound_excess_normalized, closed_form_lhs, excess_ratio, excess_ratio_normalized, A_CAP,
};
use crate::fmt_f64;
use crate::functionals::{
    t4_proof_constant, t4_statement_constant, AreaScale, FunctionalSpec, Variant,
};
use crate::par::{self, Strategy};

/// Violation threshold.
pub const DELTA: f64 = 1e-9;
/// Coarse grid size over the family parameter.
pub const A_GRID: usize = 129;
/// Golden-section tolerance in `a`.
pub const GOLDEN_TOL: f64 = 1e-12;
/// Search bracket for radii.
pub const RHO_BRACKET: [f64; 2] = [0.01, 0.99];
/// Agreement tolerance when matching an empirical constant to a candidate.
pub const MATCH_TOL: f64 = 1e-3;

/// What is maximized over the family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// The left side itself.
    Lhs,
    /// `(S-1)/(1-a)`.
    Excess,
    /// `(S-1)/(1-a)²`.
    ExcessNormalized,
    /// `(bound-1)/(1-a)²` with the coefficient-bound majorant.
    BoundExcessNormalized,
}

fn objective(spec: &FunctionalSpec, obj: Objective, a: f64, rho: f64) -> Result<f64> {
    let r = match obj {
        Objective::Lhs => closed_form_lhs(spec, a, rho),
        Objective::Excess => excess_ratio(spec, a, rho),
        Objective::ExcessNormalized => excess_ratio_normalized(spec, a, rho),
        Objective::BoundExcessNormalized => bound_excess_normalized(spec, a, rho),
    };
    match r {
        // a divergent series violates any finite bound
        Err(BohrError::Divergent { .. }) => Ok(f64::INFINITY),
        r => r,
    }
}

/// Maximizer and maximum of a function on `[0, A_CAP]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMax {
    pub a: f64,
    pub value: f64,
}

/// Grid search followed by golden-section refinement around the best
/// grid point.
pub fn maximize_over_a(f: impl Fn(f64) -> Result<f64>) -> Result<FamilyMax> {
    let h = A_CAP / (A_GRID - 1) as f64;
    let mut best = FamilyMax {
        a: 0.0,
        value: f64::NEG_INFINITY,
    };
    for i in 0..A_GRID {
        let a = if i == A_GRID - 1 { A_CAP } else { h * i as f64 };
        let v = f(a)?;
        if v > best.value {
            best = FamilyMax { a, value: v };
        }
    }
    if best.value == f64::INFINITY {
        return Ok(best);
    }
    let (mut lo, mut hi) = ((best.a - h).max(0.0), (best.a + h).min(A_CAP));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    for (a, v) in [(x1, f1), (x2, f2)] {
        if v > best.value {
            best = FamilyMax { a, value: v };
        }
    }
    Ok(best)
}

/// Supremum of the closed-form left side over `a ∈ [0, 1-1e-8]`.
pub fn sup_over_family(spec: &FunctionalSpec, rho: f64) -> Result<FamilyMax> {
    check_range("rho", rho, 0.0, 1.0, false, "(0, 1)")?;
    spec.validate()?;
    maximize_over_a(|a| objective(spec, Objective::Lhs, a, rho))
}

/// Whether the variant is violated at `rho`, judged on the excess ratio.
pub fn is_violated(spec: &FunctionalSpec, rho: f64) -> Result<bool> {
    if spec.variant == Variant::RefinedShiftJ {
        // no constant term, the left side never approaches 1 as a -> 1
        return Ok(sup_over_family(spec, rho)?.value > 1.0 + DELTA);
    }
    let m = maximize_over_a(|a| objective(spec, Objective::Excess, a, rho))?;
    Ok(m.value > DELTA)
}

/// A closed-form radius from the registry.
#[derive(Debug, Clone, Copy)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub variant: Variant,
    /// Fixed dilatation bound for corollaries.
    pub fixed_k: Option<f64>,
    pub radius: fn(f64, f64) -> f64,
    /// False when the numerics do not reproduce the stated radius over the
    /// whole parameter range.
    pub confirmed: bool,
    pub note: &'static str,
}

fn r_background(g: f64, _k: f64) -> f64 {
    (1.0 + g) / (3.0 + g)
}
fn r_harmonic(g: f64, k: f64) -> f64 {
    (1.0 + g) / (3.0 + 2.0 * k + g)
}
fn r_third(_g: f64, _k: f64) -> f64 {
    1.0 / 3.0
}
fn r_k(_g: f64, k: f64) -> f64 {
    1.0 / (2.0 * k + 3.0)
}

pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry {
        name: "B",
        variant: Variant::ClassicalB,
        fixed_k: None,
        radius: r_background,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "C",
        variant: Variant::ImprovedAreaC,
        fixed_k: None,
        radius: r_background,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "D",
        variant: Variant::RefinedD,
        fixed_k: None,
        radius: r_background,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "F",
        variant: Variant::HarmonicF,
        fixed_k: None,
        radius: r_harmonic,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "CorA",
        variant: Variant::HarmonicF,
        fixed_k: Some(1.0),
        radius: r_harmonic,
        confirmed: true,
        note: "F at k = 1",
    },
    RegistryEntry {
        name: "G",
        variant: Variant::PowerMG,
        fixed_k: None,
        radius: r_background,
        confirmed: true,
        note: "requires tau > 0",
    },
    RegistryEntry {
        name: "H",
        variant: Variant::QuadAreaH,
        fixed_k: None,
        radius: r_background,
        confirmed: false,
        note: "lambda range not pinned down",
    },
    RegistryEntry {
        name: "J",
        variant: Variant::RefinedShiftJ,
        fixed_k: None,
        radius: r_background,
        confirmed: false,
        note: "family does not attain equality",
    },
    RegistryEntry {
        name: "T1",
        variant: Variant::RefinedT1,
        fixed_k: None,
        radius: r_third,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "T2",
        variant: Variant::HarmonicT2,
        fixed_k: None,
        radius: r_k,
        confirmed: true,
        note: "",
    },
    RegistryEntry {
        name: "T2cor",
        variant: Variant::HarmonicT2,
        fixed_k: Some(1.0),
        radius: r_k,
        confirmed: true,
        note: "T2 at k = 1",
    },
    RegistryEntry {
        name: "T3",
        variant: Variant::HImprovedAreaT3,
        fixed_k: None,
        radius: r_k,
        confirmed: true,
        note: "default constant, area as displayed",
    },
    RegistryEntry {
        name: "T4",
        variant: Variant::FImprovedAreaT4,
        fixed_k: None,
        radius: r_k,
        confirmed: false,
        note: "stated constant exceeds the family limit for larger gamma",
    },
];

/// Registry entry by name, case-insensitive.
pub fn registry_entry(name: &str) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

impl RegistryEntry {
    /// A spec for this entry; fixed-k entries pin `k`.
    pub fn spec(&self, gamma: f64, k: Option<f64>) -> FunctionalSpec {
        let mut s = FunctionalSpec::new(self.variant, gamma);
        if let Some(k) = self.fixed_k.or(k) {
            s = s.with_k(k);
        }
        s
    }
}

/// Stated radius for `spec`, if the registry has one.
pub fn reference_radius(spec: &FunctionalSpec) -> Option<f64> {
    let e = REGISTRY
        .iter()
        .find(|e| e.variant == spec.variant && e.fixed_k.is_none())?;
    Some((e.radius)(spec.gamma(), spec.k()))
}

/// Whether the stated radius for `spec` is reproduced by the numerics.
pub fn is_confirmed(spec: &FunctionalSpec) -> bool {
    let p = &spec.params;
    match spec.variant {
        Variant::ClassicalB
        | Variant::RefinedD
        | Variant::HarmonicF
        | Variant::HarmonicT2
        | Variant::RefinedT1 => true,
        Variant::ImprovedAreaC => p.area_const.is_none(),
        Variant::PowerMG => spec.tau().map(|t| t > 0.0).unwrap_or(false),
        Variant::HImprovedAreaT3 => {
            p.area_const.is_none() && p.area_scale == AreaScale::AsDisplayed
        }
        Variant::QuadAreaH | Variant::RefinedShiftJ | Variant::FImprovedAreaT4 => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub variant: Variant,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub rho_star: f64,
    pub bracket: [f64; 2],
    pub tol: f64,
    pub iterations: usize,
    pub reference: Option<f64>,
    pub abs_err: Option<f64>,
    pub confirmed: bool,
}

/// Largest ρ in the bracket at which the family does not violate `spec`,
/// by bisection to width `tol`.
pub fn critical_radius(spec: &FunctionalSpec, tol: f64) -> Result<RadiusResult> {
    check_range("tol", tol, 1e-10, 1.0, false, ">= 1e-10")?;
    spec.validate()?;
    let [mut lo, mut hi] = RHO_BRACKET;
    let (v_lo, v_hi) = (is_violated(spec, lo)?, is_violated(spec, hi)?);
    if v_lo || !v_hi {
        return Err(BohrError::Bracket {
            lo,
            hi,
            g_lo: if v_lo { 1.0 } else { -1.0 },
            g_hi: if v_hi { 1.0 } else { -1.0 },
        });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_violated(spec, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let rho_star = 0.5 * (lo + hi);
    let reference = reference_radius(spec);
    Ok(RadiusResult {
        variant: spec.variant,
        gamma: spec.gamma(),
        k: spec.params.k,
        m: spec.params.m,
        rho_star,
        bracket: [lo, hi],
        tol,
        iterations,
        reference,
        abs_err: reference.map(|r| (rho_star - r).abs()),
        confirmed: is_confirmed(spec),
    })
}

/// Radii for a batch of specs, in input order.
pub fn radius_sweep(
    specs: &[FunctionalSpec],
    tol: f64,
    strategy: Strategy,
) -> Vec<Result<RadiusResult>> {
    par::map(strategy, specs, |s| critical_radius(s, tol))
}

pub const RADIUS_CSV_HEADER: &str = "variant,gamma,k,rho_star,reference,abs_err,iterations";

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_radius_csv<W: Write>(out: &mut W, rows: &[RadiusResult]) -> std::io::Result<()> {
    writeln!(out, "{RADIUS_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.variant.code(),
            fmt_f64(r.gamma),
            opt(r.k),
            fmt_f64(r.rho_star),
            opt(r.reference),
            opt(r.abs_err),
            r.iterations
        )?;
    }
    Ok(())
}

/// A point of the family where the left side exceeds 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub rho: f64,
    pub a: f64,
    pub lhs: f64,
}

/// Maximizes the left side at `rho` and returns the maximizer when the
/// maximum exceeds 1.
pub fn violation_witness(spec: &FunctionalSpec, rho: f64) -> Result<Witness> {
    let m = sup_over_family(spec, rho)?;
    if m.value > 1.0 {
        Ok(Witness {
            rho,
            a: m.a,
            lhs: m.value,
        })
    } else {
        Err(BohrError::NoWitness { rho, sup: m.value })
    }
}

/// Empirical sharpness of the area multiplier for `T3`/`T4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpKReport {
    pub variant: Variant,
    pub gamma: f64,
    pub k: f64,
    pub rho0: f64,
    /// Largest multiplier for which the extremal family stays at or below 1
    /// at `rho0`.
    pub k_empirical: f64,
    /// The same for the coefficient-bound majorant.
    pub bound_sharp: f64,
    pub statement: f64,
    pub proof_derived: f64,
    /// Which candidate lies within `MATCH_TOL` of `k_empirical`:
    /// "statement", "proof_derived", "both", or none.
    pub supported: Option<String>,
    pub iterations: usize,
}

fn bisect_k(spec: &FunctionalSpec, obj: Objective, rho0: f64, tol: f64) -> Result<(f64, usize)> {
    let violated = |kk: f64| -> Result<bool> {
        let s = spec.with_area_const(kk);
        Ok(maximize_over_a(|a| objective(&s, obj, a, rho0))?.value > DELTA)
    };
    if violated(0.0)? {
        return Err(BohrError::Bracket {
            lo: 0.0,
            hi: 0.0,
            g_lo: 1.0,
            g_hi: 1.0,
        });
    }
    let mut hi = 1.0;
    while !violated(hi)? {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(BohrError::Bracket {
                lo: 0.0,
                hi,
                g_lo: -1.0,
                g_hi: -1.0,
            });
        }
    }
    let mut lo = 0.0;
    let mut it = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if violated(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        it += 1;
    }
    Ok((0.5 * (lo + hi), it))
}

/// Bisects the area multiplier at `ρ₀ = 1/(2k+3)` on the normalized excess
/// `(S-1)/(1-a)²` and compares with both candidate constants.
pub fn sharpest_k(variant: Variant, gamma: f64, k: f64, tol: f64) -> Result<SharpKReport> {
    if !matches!(variant, Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4) {
        return Err(BohrError::Unsupported {
            variant: variant.code(),
            operation: "sharpest K",
        });
    }
    check_range("tol", tol, 1e-12, 1.0, false, "(0, 1)")?;
    let spec = FunctionalSpec::new(variant, gamma).with_k(k);
    spec.validate()?;
    let rho0 = 1.0 / (2.0 * k + 3.0);
    let (k_empirical, iterations) = bisect_k(&spec, Objective::ExcessNormalized, rho0, tol)?;
    let (bound_sharp, _) = bisect_k(&spec, Objective::BoundExcessNormalized, rho0, tol)?;
    let (statement, proof_derived) = match variant {
        Variant::HImprovedAreaT3 => {
            let c = spec.area_constant()?;
            (c, c)
        }
        _ => (t4_statement_constant(k), t4_proof_constant(k)),
    };
    let near = |c: f64| (c - k_empirical).abs() <= MATCH_TOL;
    let supported = match (near(statement), near(proof_derived)) {
        (true, true) => Some("both".to_string()),
        (true, false) => Some("statement".to_string()),
        (false, true) => Some("proof_derived".to_string()),
        (false, false) => None,
    };
    Ok(SharpKReport {
        variant,
        gamma,
        k,
        rho0,
        k_empirical,
        bound_sharp,
        statement,
        proof_derived,
        supported,
        iterations,
    })
}
