//! Closed forms for the Möbius extremal families, the auxiliary functions
//! that appear in the sharpness arguments, and grid checks of their
//! monotonicity claims.
//!
//! For a family member with parameter `a` the left side is `S(a, ρ)`. The
//! interesting regime is `a → 1`, where `S → 1` and naive evaluation of
//! `S - 1` loses every digit. The `excess_*` functions return
//! `(S-1)/(1-a)` and `(S-1)/(1-a)²` from forms in which `1-a` is factored
//! out analytically.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, BohrError, Result};
use crate::functionals::{
    evaluate, t3_constant_expanded, t4_proof_constant, EvalResult, FunctionalSpec, Input, Variant,
    C_AREA_CONSTANT,
};
use crate::par::{self, Strategy};
use crate::series::HarmonicPair;

/// Largest family parameter used where `a = 1` is singular.
pub const A_CAP: f64 = 1.0 - 1e-8;
/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Strictness margin for monotonicity and sign claims.
pub const MONO_MARGIN: f64 = 1e-12;

fn check_a(a: f64) -> Result<()> {
    check_range("a", a, 0.0, 1.0, true, "[0, 1]")
}

fn check_rho(rho: f64) -> Result<()> {
    check_range("rho", rho, 0.0, 1.0, false, "[0, 1)")
}

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(BohrError::Domain {
            name,
            value: x,
            expected: "finite value (singular point)",
        })
    }
}

/// Pieces of the disk-restricted family `α_0 = (a-γ)/(1-aγ)`,
/// `α_n = -c(1-γ) q^(n-1)`, `c = (1-a²)/(1-aγ)²`, `q = a(1-γ)/(1-aγ)`.
struct DiskFamily {
    a: f64,
    u: f64,
    g: f64,
    d: f64,
    q: f64,
}

impl DiskFamily {
    fn new(a: f64, g: f64) -> Self {
        let d = 1.0 - a * g;
        DiskFamily {
            a,
            u: 1.0 - a,
            g,
            d,
            q: a * (1.0 - g) / d,
        }
    }

    fn alpha0(&self) -> f64 {
        ((self.a - self.g) / self.d).abs()
    }

    /// `(|α_0| - 1)/(1-a)`.
    fn alpha0_excess(&self) -> f64 {
        if self.a >= self.g {
            -(1.0 + self.g) / self.d
        } else {
            -(1.0 + self.a) * (1.0 - self.g) / (self.d * self.u)
        }
    }

    /// `c(1-γ)/(1-a)`, the leading coefficient modulus over `1-a`.
    fn lead_over_u(&self) -> f64 {
        (1.0 + self.a) * (1.0 - self.g) / (self.d * self.d)
    }

    fn lead(&self) -> f64 {
        self.u * self.lead_over_u()
    }

    /// `Σ_{n>=1} |α_n| ρ^n / (1-a)`.
    fn majorant_over_u(&self, rho: f64) -> f64 {
        (1.0 + self.a) * (1.0 - self.g) * rho / (self.d * (self.d - self.a * (1.0 - self.g) * rho))
    }

    /// `Σ_{n>=1} |α_n|² ρ^{2n}`.
    fn quadratic(&self, rho: f64) -> f64 {
        let l = self.lead();
        l * l * rho * rho / (1.0 - self.q * self.q * rho * rho)
    }

    /// `Σ n |α_n|² r^{2n}`.
    fn area(&self, r: f64) -> f64 {
        let l = self.lead();
        let y = 1.0 - self.q * self.q * r * r;
        l * l * r * r / (y * y)
    }

    /// `Σ |α_n|^m ρ^n / (1-γ)^{(m-1)n}`.
    fn power(&self, rho: f64, m: u32) -> Result<f64> {
        let mi = m as i32;
        let ratio = self.q.powi(mi) * rho / (1.0 - self.g).powi(mi - 1);
        if ratio >= 1.0 {
            return Err(BohrError::Divergent { rho, ratio });
        }
        let l = self.lead();
        Ok(l.powi(mi) * rho / ((1.0 - self.g).powi(mi - 1) * (1.0 - ratio)))
    }
}

fn weight(c: f64, rho: f64) -> f64 {
    1.0 / (1.0 + c) + rho / (1.0 - rho)
}

/// `W = (1-aρ) - (1+a)(1+k)ρ`, written so that `W(1, 1/(2k+3))` vanishes
/// exactly whenever `(2k+3)ρ` rounds to 1.
pub fn w_split(a: f64, rho: f64, k: f64) -> f64 {
    (1.0 - (2.0 * k + 3.0) * rho) + (1.0 - a) * (2.0 + k) * rho
}

/// Left side of `spec` for the family member with parameter `a`, in closed
/// form. At `a = 1` every variant except `J` (which has no constant term)
/// returns 1.
pub fn closed_form_lhs(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<f64> {
    spec.validate()?;
    check_a(a)?;
    check_rho(rho)?;
    let k = spec.k();
    let s = match spec.variant {
        Variant::RefinedT1
        | Variant::HarmonicT2
        | Variant::HImprovedAreaT3
        | Variant::FImprovedAreaT4 => {
            let one_m = 1.0 - a * a;
            let p = 1.0 - a * rho;
            let lin = one_m * rho / p;
            let ar = 1.0 - a * a * rho * rho;
            match spec.variant {
                Variant::RefinedT1 => a + lin + weight(a, rho) * one_m * one_m * rho * rho / ar,
                Variant::HarmonicT2 => a + (1.0 + k) * lin,
                _ => {
                    a + (1.0 + k) * lin
                        + spec.area_weight()? * one_m * one_m * rho * rho / (ar * ar)
                }
            }
        }
        v => {
            let f = DiskFamily::new(a, spec.gamma());
            let a0 = f.alpha0();
            let m1 = f.u * f.majorant_over_u(rho);
            let r1 = rho * (1.0 - spec.gamma());
            match v {
                Variant::ClassicalB => a0 + m1,
                Variant::ImprovedAreaC => a0 + m1 + spec.area_constant()? * f.area(r1),
                Variant::RefinedD => a0 + m1 + weight(a0, rho) * f.quadratic(rho),
                Variant::HarmonicF => a0 + (1.0 + k) * m1,
                Variant::PowerMG => {
                    a0 + m1 + spec.tau()? * f.power(rho, spec.params.m.unwrap_or(2))?
                }
                Variant::QuadAreaH => {
                    let l = spec
                        .params
                        .lambda
                        .ok_or(BohrError::MissingParameter("lambda"))?;
                    let ar = f.area(r1);
                    a0 + m1 + (C_AREA_CONSTANT - 27.0 * l / 64.0) * ar + l * ar * ar
                }
                Variant::RefinedShiftJ => {
                    let a1 = f.lead();
                    m1 + weight(a1, rho) * f.quadratic(rho) * f.q * f.q
                }
                _ => unreachable!(),
            }
        }
    };
    finite("lhs", s)
}

/// `(S - 1)/(1 - a)` without cancellation. Undefined for `J`.
pub fn excess_ratio(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<f64> {
    spec.validate()?;
    check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
    check_rho(rho)?;
    let k = spec.k();
    let u = 1.0 - a;
    let e = match spec.variant {
        Variant::RefinedT1 => {
            let p = 1.0 - a * rho;
            let f1 = (1.0 - 3.0 * rho + 2.0 * u * rho)
                - weight(a, rho) * u * (1.0 + a).powi(2) * rho * rho / (1.0 + a * rho);
            -f1 / p
        }
        Variant::HarmonicT2 => -w_split(a, rho, k) / (1.0 - a * rho),
        Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4 => {
            let ar = 1.0 - a * a * rho * rho;
            -w_split(a, rho, k) / (1.0 - a * rho)
                + spec.area_weight()? * u * (1.0 + a).powi(2) * rho * rho / (ar * ar)
        }
        Variant::RefinedShiftJ => {
            return Err(BohrError::Unsupported {
                variant: "J",
                operation: "excess ratio",
            })
        }
        v => {
            let f = DiskFamily::new(a, spec.gamma());
            let base = f.alpha0_excess() + f.majorant_over_u(rho);
            let r1 = rho * (1.0 - spec.gamma());
            match v {
                Variant::ClassicalB => base,
                Variant::ImprovedAreaC => base + spec.area_constant()? * f.area(r1) / u,
                Variant::RefinedD => base + weight(f.alpha0(), rho) * f.quadratic(rho) / u,
                Variant::HarmonicF => f.alpha0_excess() + (1.0 + k) * f.majorant_over_u(rho),
                Variant::PowerMG => {
                    base + spec.tau()? * f.power(rho, spec.params.m.unwrap_or(2))? / u
                }
                Variant::QuadAreaH => {
                    let l = spec
                        .params
                        .lambda
                        .ok_or(BohrError::MissingParameter("lambda"))?;
                    let ar = f.area(r1);
                    base + ((C_AREA_CONSTANT - 27.0 * l / 64.0) + l * ar) * ar / u
                }
                _ => unreachable!(),
            }
        }
    };
    finite("excess", e)
}

/// `(S - 1)/(1 - a)²` for `T2`-`T4`, used to probe the area multiplier.
pub fn excess_ratio_normalized(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<f64> {
    spec.validate()?;
    check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
    check_rho(rho)?;
    let k = spec.k();
    let u = 1.0 - a;
    let w_over_u = (1.0 - (2.0 * k + 3.0) * rho) / u + (2.0 + k) * rho;
    let head = -w_over_u / (1.0 - a * rho);
    let e = match spec.variant {
        Variant::HarmonicT2 => head,
        Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4 => {
            let ar = 1.0 - a * a * rho * rho;
            head + spec.area_weight()? * (1.0 + a).powi(2) * rho * rho / (ar * ar)
        }
        v => {
            return Err(BohrError::Unsupported {
                variant: v.code(),
                operation: "normalized excess ratio",
            })
        }
    };
    finite("excess", e)
}

/// Effective area multiplier in the coefficient-bound majorant used by
/// the inequality arguments for `T3`/`T4`.
fn bound_area_weight(spec: &FunctionalSpec) -> Result<f64> {
    let kk = spec.area_constant()?;
    let s2 = (1.0 - spec.gamma()).powi(2);
    Ok(match spec.variant {
        Variant::HImprovedAreaT3 => spec.area_weight()?,
        Variant::FImprovedAreaT4 => kk * (1.0 + spec.k()) / s2,
        _ => kk,
    })
}

/// The majorant obtained by replacing every coefficient with its
/// Schwarz-Pick bound (`1 + ξ` in the inequality arguments).
pub fn bound_lhs(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<f64> {
    spec.validate()?;
    check_a(a)?;
    check_rho(rho)?;
    let k = spec.k();
    let one_m = 1.0 - a * a;
    let lin = one_m * rho / (1.0 - rho);
    let b = match spec.variant {
        Variant::RefinedT1 => {
            a + lin + weight(a, rho) * one_m * one_m * rho * rho / (1.0 - rho * rho)
        }
        Variant::HarmonicT2 => a + (1.0 + k) * lin,
        Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4 => {
            a + (1.0 + k) * lin
                + bound_area_weight(spec)? * one_m * one_m * rho * rho / (1.0 - rho * rho).powi(2)
        }
        v => {
            return Err(BohrError::Unsupported {
                variant: v.code(),
                operation: "bound majorant",
            })
        }
    };
    finite("bound", b)
}

/// `(bound - 1)/(1-a)²` for `T2`-`T4`.
pub fn bound_excess_normalized(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<f64> {
    spec.validate()?;
    check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
    check_rho(rho)?;
    let k = spec.k();
    let u = 1.0 - a;
    let t = (1.0 + k) * rho / (1.0 - rho);
    let head = ((2.0 * k + 3.0) * rho - 1.0) / ((1.0 - rho) * u) - t;
    let e = match spec.variant {
        Variant::HarmonicT2 => head,
        Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4 => {
            head + bound_area_weight(spec)? * (1.0 + a).powi(2) * rho * rho
                / (1.0 - rho * rho).powi(2)
        }
        v => {
            return Err(BohrError::Unsupported {
                variant: v.code(),
                operation: "normalized bound excess",
            })
        }
    };
    finite("bound excess", e)
}

/// The family member as a harmonic pair in the variant's convention.
pub fn family_pair(spec: &FunctionalSpec, a: f64) -> Result<HarmonicPair> {
    let k = spec.k();
    match spec.variant.expansion() {
        crate::series::Expansion::Shifted => HarmonicPair::extremal(spec.gamma(), a, k),
        crate::series::Expansion::Disk => HarmonicPair::extremal_disk(spec.gamma(), a, k),
    }
}

/// Left side of the family member computed from its truncated series.
pub fn series_lhs(spec: &FunctionalSpec, a: f64, rho: f64) -> Result<EvalResult> {
    let p = family_pair(spec, a)?;
    evaluate(spec, Input::Pair(&p), rho)
}

/// Auxiliary functions of the inequality arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofFn {
    /// `ξ(a) = A(1-a²) + B(1-a²)(1-a) + C(1-a²)² - (1-a)` and derivatives.
    XiT1 {
        deriv: u8,
    },
    F1,
    F2,
    W,
    F3,
    /// `ξ(a) = (1+k)(1-a²)ρ/(1-ρ) - (1-a)` and derivatives.
    XiT2 {
        deriv: u8,
    },
    PhiT4,
    /// `F(x)` with `x` read from the `a` slot.
    FxT4,
    F4,
}

impl ProofFn {
    pub fn name(self) -> String {
        match self {
            ProofFn::XiT1 { deriv } => format!("xi_T1{}", "'".repeat(deriv as usize)),
            ProofFn::XiT2 { deriv } => format!("xi_T2{}", "'".repeat(deriv as usize)),
            ProofFn::F1 => "F1".into(),
            ProofFn::F2 => "F2".into(),
            ProofFn::W => "W".into(),
            ProofFn::F3 => "F3".into(),
            ProofFn::PhiT4 => "Phi_T4".into(),
            ProofFn::FxT4 => "Fx_T4".into(),
            ProofFn::F4 => "F4".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProofParams {
    pub a: f64,
    pub rho: f64,
    pub gamma: f64,
    pub k: f64,
    /// Area multiplier; defaults to the constant used in the matching argument.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub area_const: Option<f64>,
}

impl ProofParams {
    pub fn new(a: f64, rho: f64) -> Self {
        ProofParams {
            a,
            rho,
            ..Default::default()
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_area_const(mut self, kk: f64) -> Self {
        self.area_const = Some(kk);
        self
    }
}

pub fn eval_proof_fn(pf: ProofFn, p: &ProofParams) -> Result<f64> {
    check_a(p.a)?;
    check_rho(p.rho)?;
    check_range("gamma", p.gamma, 0.0, 1.0, false, "[0, 1)")?;
    check_range("k", p.k, 0.0, 1.0, true, "[0, 1]")?;
    let (a, r, g, k) = (p.a, p.rho, p.gamma, p.k);
    let v = match pf {
        ProofFn::XiT1 { deriv } => {
            let aa = r / (1.0 - r);
            let bb = r * r / (1.0 - r * r);
            let cc = r.powi(3) / ((1.0 - r) * (1.0 - r * r));
            let om = 1.0 - a * a;
            match deriv {
                0 => aa * om + bb * om * (1.0 - a) + cc * om * om - (1.0 - a),
                1 => {
                    1.0 - 2.0 * a * aa + bb * (3.0 * a * a - 2.0 * a - 1.0)
                        - 4.0 * cc * (a - a.powi(3))
                }
                2 => -2.0 * aa + bb * (6.0 * a - 2.0) - 4.0 * cc * (1.0 - 3.0 * a * a),
                3 => 6.0 * bb + 24.0 * a * cc,
                d => {
                    return Err(BohrError::Domain {
                        name: "deriv",
                        value: d as f64,
                        expected: "0..=3",
                    })
                }
            }
        }
        ProofFn::F1 => {
            1.0 - a * r
                - (1.0 + a) * r
                - weight(a, r) * (1.0 - a * a) * (1.0 + a) * r * r / (1.0 + a * r)
        }
        ProofFn::F2 => (1.0 - a) * w_split(a, r, k),
        ProofFn::W => w_split(a, r, k),
        ProofFn::F3 => {
            let kk = p.area_const.unwrap_or_else(|| t3_constant_expanded(k));
            (1.0 + a) * (1.0 + k) * r / (1.0 - a * r)
                + kk * (1.0 - a) * (1.0 + a).powi(2) * r * r / (1.0 - a * a * r * r).powi(2)
                - 1.0
        }
        ProofFn::XiT2 { deriv } => {
            let t = (1.0 + k) * r / (1.0 - r);
            match deriv {
                0 => t * (1.0 - a * a) - (1.0 - a),
                1 => 1.0 - 2.0 * t * a,
                2 => -2.0 * t,
                d => {
                    return Err(BohrError::Domain {
                        name: "deriv",
                        value: d as f64,
                        expected: "0..=2",
                    })
                }
            }
        }
        ProofFn::PhiT4 => {
            let kk = p.area_const.unwrap_or_else(|| t4_proof_constant(k));
            let om = 1.0 - a * a;
            (1.0 + k) * om * r / (1.0 - r)
                + kk * (1.0 + k) * om * om * r * r / ((1.0 - g).powi(2) * (1.0 - r * r).powi(2))
                - (1.0 - a)
        }
        ProofFn::FxT4 => {
            let kk = p.area_const.unwrap_or_else(|| t4_proof_constant(k));
            let c = 2.0 * kk * (1.0 + k) * (2.0 * k + 3.0).powi(2)
                / ((1.0 - g).powi(2) * (2.0 * k + 4.0).powi(2) * (2.0 * k + 2.0).powi(2));
            1.0 + c * (1.0 - a * a) - 2.0 / (1.0 + a)
        }
        ProofFn::F4 => {
            let kk = p.area_const.unwrap_or_else(|| t3_constant_expanded(k));
            (1.0 + a) * (1.0 + k) * r / (1.0 - a * r)
                + kk * (1.0 - k * k) / (1.0 - g).powi(2) * (1.0 - a) * (1.0 + a).powi(2) * r * r
                    / (1.0 - a * a * r * r).powi(2)
                - 1.0
        }
    };
    finite("proof function", v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    A,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "axis")]
pub enum Claim {
    Increasing(Axis),
    Decreasing(Axis),
    NonPositive,
    NonNegative,
    PositiveSomewhere,
}

/// Product grid over `a` and `ρ`; an axis with `lo == hi` is a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: [f64; 2],
    pub rho: [f64; 2],
    pub n: usize,
    pub base: ProofParams,
}

impl Grid {
    pub fn new(a: [f64; 2], rho: [f64; 2], base: ProofParams) -> Self {
        Grid {
            a,
            rho,
            n: 101,
            base,
        }
    }

    fn axis(range: [f64; 2], n: usize) -> Vec<f64> {
        if range[0] == range[1] || n < 2 {
            return vec![range[0]];
        }
        (0..n)
            .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let aa = Self::axis(self.a, self.n);
        let rr = Self::axis(self.rho, self.n);
        aa.iter()
            .flat_map(|&a| rr.iter().map(move |&r| (a, r)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub name: String,
    pub claim: Claim,
    pub grid: Grid,
    pub pass: bool,
    /// `[a, rho]` of the point closest to breaking the claim.
    pub worst_point: [f64; 2],
    pub worst_value: f64,
    pub min: f64,
    pub max: f64,
    pub failures: usize,
}

fn derivative(pf: ProofFn, p: ProofParams, axis: Axis, lo: f64, hi: f64) -> Result<f64> {
    let x = match axis {
        Axis::A => p.a,
        Axis::Rho => p.rho,
    };
    let at = |x: f64| {
        let mut q = p;
        match axis {
            Axis::A => q.a = x,
            Axis::Rho => q.rho = x,
        }
        eval_proof_fn(pf, &q)
    };
    let h = FD_STEP;
    if x - h < lo {
        Ok((at(x + h)? - at(x)?) / h)
    } else if x + h > hi {
        Ok((at(x)? - at(x - h)?) / h)
    } else {
        Ok((at(x + h)? - at(x - h)?) / (2.0 * h))
    }
}

/// Checks `claim` for `pf` at every grid point. Sign claims look at the
/// function value; monotonicity claims at a finite-difference derivative.
pub fn monotonicity_report(pf: ProofFn, grid: &Grid, claim: Claim) -> Result<MonotonicityReport> {
    monotonicity_report_with(pf, grid, claim, Strategy::default())
}

pub fn monotonicity_report_with(
    pf: ProofFn,
    grid: &Grid,
    claim: Claim,
    strategy: Strategy,
) -> Result<MonotonicityReport> {
    let pts = grid.points();
    let vals = par::map(strategy, &pts, |&(a, r)| {
        let mut p = grid.base;
        p.a = a;
        p.rho = r;
        match claim {
            Claim::Increasing(ax) | Claim::Decreasing(ax) => {
                let (lo, hi) = match ax {
                    Axis::A => (grid.a[0], grid.a[1]),
                    Axis::Rho => (grid.rho[0], grid.rho[1]),
                };
                derivative(pf, p, ax, lo, hi)
            }
            _ => eval_proof_fn(pf, &p),
        }
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    // badness > 0 means the claim fails at that point
    let badness = |v: f64| match claim {
        Claim::Increasing(_) => MONO_MARGIN - v,
        Claim::Decreasing(_) => v + MONO_MARGIN,
        Claim::NonPositive => v - MONO_MARGIN,
        Claim::NonNegative => -v - MONO_MARGIN,
        Claim::PositiveSomewhere => MONO_MARGIN - v,
    };
    let (mut wi, mut wb) = (0, f64::NEG_INFINITY);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut failures = 0;
    for (i, &v) in vals.iter().enumerate() {
        let b = badness(v);
        if b > wb {
            wb = b;
            wi = i;
        }
        if b > 0.0 {
            failures += 1;
        }
        min = min.min(v);
        max = max.max(v);
    }
    let pass = match claim {
        Claim::PositiveSomewhere => failures < vals.len(),
        _ => failures == 0,
    };
    // for the existential claim the interesting point is the best one
    if claim == Claim::PositiveSomewhere {
        wi = vals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
    }
    Ok(MonotonicityReport {
        name: pf.name(),
        claim,
        grid: *grid,
        pass,
        worst_point: [pts[wi].0, pts[wi].1],
        worst_value: vals[wi],
        min,
        max,
        failures,
    })
}
