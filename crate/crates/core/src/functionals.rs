//! Left-hand sides of the Bohr-type inequalities as plain numbers.
//!
//! Each inequality reads `lhs <= 1`; an [`EvalResult`] carries the value,
//! its labelled parts and a certified bound on what the truncation dropped.
//!
//! Two input conventions coexist and are never mixed. The shifted-disk
//! variants (`T1`..`T4`) take series centered at `-γ/(1-γ)` evaluated at
//! normalized radius ρ. The background variants (`B`..`J`) take the Taylor
//! series at the origin of the restriction to the unit disk.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, BohrError, Result};
use crate::geometry::check_gamma;
use crate::series::{check_rho, geom_tail, Bounded, CoeffSeries, Expansion, HarmonicPair};

/// Slack added to certified tails in every pass/fail decision.
pub const PASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "B")]
    ClassicalB,
    #[serde(rename = "C")]
    ImprovedAreaC,
    #[serde(rename = "D")]
    RefinedD,
    #[serde(rename = "F")]
    HarmonicF,
    #[serde(rename = "G")]
    PowerMG,
    #[serde(rename = "H")]
    QuadAreaH,
    #[serde(rename = "J")]
    RefinedShiftJ,
    #[serde(rename = "T1")]
    RefinedT1,
    #[serde(rename = "T2")]
    HarmonicT2,
    #[serde(rename = "T3")]
    HImprovedAreaT3,
    #[serde(rename = "T4")]
    FImprovedAreaT4,
}

impl Variant {
    pub const ALL: [Variant; 11] = [
        Variant::ClassicalB,
        Variant::ImprovedAreaC,
        Variant::RefinedD,
        Variant::HarmonicF,
        Variant::PowerMG,
        Variant::QuadAreaH,
        Variant::RefinedShiftJ,
        Variant::RefinedT1,
        Variant::HarmonicT2,
        Variant::HImprovedAreaT3,
        Variant::FImprovedAreaT4,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Variant::ClassicalB => "B",
            Variant::ImprovedAreaC => "C",
            Variant::RefinedD => "D",
            Variant::HarmonicF => "F",
            Variant::PowerMG => "G",
            Variant::QuadAreaH => "H",
            Variant::RefinedShiftJ => "J",
            Variant::RefinedT1 => "T1",
            Variant::HarmonicT2 => "T2",
            Variant::HImprovedAreaT3 => "T3",
            Variant::FImprovedAreaT4 => "T4",
        }
    }

    /// Accepts short codes (`T2`) and long names (`Harmonic_T2`).
    pub fn parse(s: &str) -> Option<Variant> {
        let s = s.trim();
        Variant::ALL
            .into_iter()
            .find(|v| v.code().eq_ignore_ascii_case(s) || v.long_name().eq_ignore_ascii_case(s))
    }

    pub fn long_name(self) -> &'static str {
        match self {
            Variant::ClassicalB => "Classical_B",
            Variant::ImprovedAreaC => "ImprovedArea_C",
            Variant::RefinedD => "Refined_D",
            Variant::HarmonicF => "Harmonic_F",
            Variant::PowerMG => "PowerM_G",
            Variant::QuadAreaH => "QuadArea_H",
            Variant::RefinedShiftJ => "RefinedShift_J",
            Variant::RefinedT1 => "Refined_T1",
            Variant::HarmonicT2 => "Harmonic_T2",
            Variant::HImprovedAreaT3 => "HImprovedArea_T3",
            Variant::FImprovedAreaT4 => "FImprovedArea_T4",
        }
    }

    pub fn expansion(self) -> Expansion {
        match self {
            Variant::RefinedT1
            | Variant::HarmonicT2
            | Variant::HImprovedAreaT3
            | Variant::FImprovedAreaT4 => Expansion::Shifted,
            _ => Expansion::Disk,
        }
    }

    pub fn needs_k(self) -> bool {
        matches!(
            self,
            Variant::HarmonicF
                | Variant::HarmonicT2
                | Variant::HImprovedAreaT3
                | Variant::FImprovedAreaT4
        )
    }

    /// Variants whose left side carries a tunable area multiplier.
    pub fn has_area_constant(self) -> bool {
        matches!(
            self,
            Variant::ImprovedAreaC | Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4
        )
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Radius convention for the analytic area term of `T3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaScale {
    /// `Σ n |d_n|² ρ^{2n}` with no prefactor.
    #[default]
    AsDisplayed,
    /// Same sum times `1/(1-γ)²`, matching the harmonic area convention.
    Rescaled,
}

/// Which of the two candidate multipliers `T4` uses by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T4Constant {
    /// `2(k+2)²(k+1) / ((1-k)(2k+3)²)`.
    #[default]
    Statement,
    /// `2(k+2)²(k+1) / (2k+3)²`, the bound reached in the argument.
    ProofDerived,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Params {
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Area multiplier override.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub area_const: Option<f64>,
    #[serde(default)]
    pub area_scale: AreaScale,
    #[serde(default)]
    pub t4_constant: T4Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub variant: Variant,
    pub params: Params,
}

/// `2(k+2)²(k+1)²/(2k+3)²`.
pub fn t3_constant(k: f64) -> f64 {
    2.0 * (k + 2.0).powi(2) * (k + 1.0).powi(2) / (2.0 * k + 3.0).powi(2)
}

/// The same constant written as `(2k+4)²(2k+2)²/(8(2k+3)²)`.
pub fn t3_constant_expanded(k: f64) -> f64 {
    (2.0 * k + 4.0).powi(2) * (2.0 * k + 2.0).powi(2) / (8.0 * (2.0 * k + 3.0).powi(2))
}

/// `2(k+2)²(k+1)/((1-k)(2k+3)²)`.
pub fn t4_statement_constant(k: f64) -> f64 {
    2.0 * (k + 2.0).powi(2) * (k + 1.0) / ((1.0 - k) * (2.0 * k + 3.0).powi(2))
}

/// `(2k+4)²(2k+2)²/(8(1+k)(2k+3)²)` = `2(k+2)²(k+1)/(2k+3)²`.
pub fn t4_proof_constant(k: f64) -> f64 {
    (2.0 * k + 4.0).powi(2) * (2.0 * k + 2.0).powi(2) / (8.0 * (1.0 + k) * (2.0 * k + 3.0).powi(2))
}

/// `τ = ((1-γ)^m (3+γ) - (1-γ²)) / (8(m-1))`.
pub fn tau(gamma: f64, m: u32) -> f64 {
    ((1.0 - gamma).powi(m as i32) * (3.0 + gamma) - (1.0 - gamma * gamma))
        / (8.0 * (m as f64 - 1.0))
}

/// Multiplier of the area term in the background improved inequality.
pub const C_AREA_CONSTANT: f64 = 8.0 / 9.0;

impl FunctionalSpec {
    pub fn new(variant: Variant, gamma: f64) -> Self {
        FunctionalSpec {
            variant,
            params: Params {
                gamma,
                ..Params::default()
            },
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.params.k = Some(k);
        self
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.params.m = Some(m);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.params.lambda = Some(lambda);
        self
    }

    pub fn with_area_const(mut self, k_area: f64) -> Self {
        self.params.area_const = Some(k_area);
        self
    }

    pub fn with_area_scale(mut self, scale: AreaScale) -> Self {
        self.params.area_scale = scale;
        self
    }

    pub fn with_t4_constant(mut self, c: T4Constant) -> Self {
        self.params.t4_constant = c;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    /// Dilatation bound; 0 for variants that do not use one.
    pub fn k(&self) -> f64 {
        self.params.k.unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.params.gamma)?;
        let v = self.variant;
        if v.needs_k() {
            let k = self.params.k.ok_or(BohrError::MissingParameter("k"))?;
            if v == Variant::FImprovedAreaT4 {
                check_range("k", k, 0.0, 1.0, false, "[0, 1) for T4")?;
            } else {
                check_range("k", k, 0.0, 1.0, true, "[0, 1]")?;
            }
        }
        if v == Variant::PowerMG {
            let m = self.params.m.ok_or(BohrError::MissingParameter("m"))?;
            if m < 2 {
                return Err(BohrError::Domain {
                    name: "m",
                    value: m as f64,
                    expected: "integer >= 2",
                });
            }
        }
        if v == Variant::QuadAreaH {
            let l = self
                .params
                .lambda
                .ok_or(BohrError::MissingParameter("lambda (λ unspecified)"))?;
            check_range("lambda", l, f64::MIN, f64::MAX, true, "finite")?;
        }
        if let Some(kk) = self.params.area_const {
            check_range("K", kk, 0.0, f64::MAX, true, "finite, >= 0")?;
        }
        Ok(())
    }

    /// Multiplier of the area term, override first, then the default.
    pub fn area_constant(&self) -> Result<f64> {
        if let Some(kk) = self.params.area_const {
            return Ok(kk);
        }
        let k = self.k();
        match self.variant {
            Variant::ImprovedAreaC => Ok(C_AREA_CONSTANT),
            Variant::HImprovedAreaT3 => Ok(t3_constant(k)),
            Variant::FImprovedAreaT4 => Ok(match self.params.t4_constant {
                T4Constant::Statement => t4_statement_constant(k),
                T4Constant::ProofDerived => t4_proof_constant(k),
            }),
            v => Err(BohrError::Unsupported {
                variant: v.code(),
                operation: "area constant",
            }),
        }
    }

    /// Effective multiplier of `(1-a²)²ρ²/(1-a²ρ²)²` for the extremal family
    /// of `T3`/`T4`, folding in the γ and k dependence of the area term.
    pub fn area_weight(&self) -> Result<f64> {
        let kk = self.area_constant()?;
        let s2 = (1.0 - self.gamma()).powi(2);
        Ok(match self.variant {
            Variant::HImprovedAreaT3 => match self.params.area_scale {
                AreaScale::AsDisplayed => kk,
                AreaScale::Rescaled => kk / s2,
            },
            Variant::FImprovedAreaT4 => {
                let k = self.k();
                kk * (1.0 - k * k) / s2
            }
            _ => kk,
        })
    }

    pub fn tau(&self) -> Result<f64> {
        let m = self.params.m.ok_or(BohrError::MissingParameter("m"))?;
        Ok(tau(self.gamma(), m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub variant: Variant,
    pub params: Params,
    pub rho: f64,
    pub lhs: f64,
    pub tail: f64,
    pub margin: f64,
    pub components: Vec<Component>,
    pub certified: bool,
}

impl EvalResult {
    fn assemble(
        spec: &FunctionalSpec,
        rho: f64,
        parts: &[(&str, f64)],
        tail: f64,
        certified: bool,
    ) -> Self {
        let lhs: f64 = parts.iter().map(|p| p.1).sum();
        EvalResult {
            variant: spec.variant,
            params: spec.params,
            rho,
            lhs,
            tail,
            margin: 1.0 - lhs,
            components: parts
                .iter()
                .map(|&(label, value)| Component {
                    label: label.to_string(),
                    value,
                })
                .collect(),
            certified,
        }
    }

    /// `margin >= -(tail + 1e-12)`.
    pub fn passes(&self) -> bool {
        self.margin >= -(self.tail + PASS_TOL)
    }

    pub fn component(&self, label: &str) -> Option<f64> {
        self.components
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.value)
    }
}

/// What a functional is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Input<'a> {
    Series(&'a CoeffSeries),
    Pair(&'a HarmonicPair),
}

impl<'a> Input<'a> {
    fn h(&self) -> &'a CoeffSeries {
        match *self {
            Input::Series(s) => s,
            Input::Pair(p) => p.h(),
        }
    }

    fn gamma(&self) -> f64 {
        self.h().gamma()
    }
}

fn weight(c: f64, rho: f64) -> f64 {
    1.0 / (1.0 + c) + rho / (1.0 - rho)
}

fn g_majorant(input: Input, rho: f64) -> Result<Bounded> {
    match input {
        Input::Pair(p) => p.g_majorant(rho),
        Input::Series(_) => Ok(Bounded {
            value: 0.0,
            tail: 0.0,
            certified: true,
        }),
    }
}

fn check_input(spec: &FunctionalSpec, input: Input) -> Result<()> {
    spec.validate()?;
    let h = input.h();
    let want = spec.variant.expansion();
    if h.expansion() != want {
        return Err(BohrError::Expansion {
            expected: want.name(),
            found: h.expansion().name(),
        });
    }
    if h.gamma() != spec.gamma() {
        return Err(BohrError::GammaMismatch {
            h: h.gamma(),
            g: spec.gamma(),
        });
    }
    if let Input::Pair(p) = input {
        if spec.variant.needs_k() && p.k() > spec.k() + 1e-15 {
            return Err(BohrError::Domain {
                name: "k",
                value: p.k(),
                expected: "pair dilatation bound <= spec k",
            });
        }
    }
    h.check_admissible()
}

/// Evaluates any variant on a series or pair. Series inputs to harmonic
/// variants are treated as `g ≡ 0`.
pub fn evaluate(spec: &FunctionalSpec, input: Input, rho: f64) -> Result<EvalResult> {
    check_input(spec, input)?;
    check_rho(rho)?;
    match spec.variant {
        Variant::RefinedT1 => refined_t1(spec, input.h(), rho),
        Variant::HarmonicT2 | Variant::HImprovedAreaT3 | Variant::FImprovedAreaT4 => {
            harmonic_family(spec, input, rho)
        }
        _ => background(spec, input, rho),
    }
}

fn refined_t1(spec: &FunctionalSpec, s: &CoeffSeries, rho: f64) -> Result<EvalResult> {
    let m = s.majorant(rho)?;
    let q = s.quadratic_sum(rho)?;
    let w = weight(s.c0().norm(), rho);
    Ok(EvalResult::assemble(
        spec,
        rho,
        &[("majorant", m.value), ("refinement", w * q.value)],
        m.tail + w * q.tail,
        m.certified && q.certified,
    ))
}

fn harmonic_family(spec: &FunctionalSpec, input: Input, rho: f64) -> Result<EvalResult> {
    let h = input.h();
    let m = h.majorant(rho)?;
    let g = g_majorant(input, rho)?;
    let mut parts = vec![("majorant", m.value), ("g_majorant", g.value)];
    let mut tail = m.tail + g.tail;
    let mut certified = m.certified && g.certified;
    match spec.variant {
        Variant::HImprovedAreaT3 => {
            let kk = spec.area_constant()?;
            let a = h.area_analytic(rho)?;
            let scale = match spec.params.area_scale {
                AreaScale::AsDisplayed => 1.0,
                AreaScale::Rescaled => 1.0 / (1.0 - h.gamma()).powi(2),
            };
            parts.push(("area", kk * scale * a.value));
            tail += kk * scale * a.tail;
            certified &= a.certified;
        }
        Variant::FImprovedAreaT4 => {
            let kk = spec.area_constant()?;
            let a = match input {
                Input::Pair(p) => p.area_harmonic(rho)?,
                Input::Series(s) => {
                    let a = s.area_analytic(rho)?;
                    let pref = 1.0 / (1.0 - s.gamma()).powi(2);
                    Bounded {
                        value: pref * a.value,
                        tail: pref * a.tail,
                        certified: a.certified,
                    }
                }
            };
            parts.push(("area", kk * a.value));
            tail += kk * a.tail;
            certified &= a.certified;
        }
        _ => {}
    }
    Ok(EvalResult::assemble(spec, rho, &parts, tail, certified))
}

/// `Σ_{n>=1} |α_n|^m (ρ/(1-γ)^(m-1))^n` with its tail.
fn power_sum(s: &CoeffSeries, rho: f64, m: u32) -> Result<Bounded> {
    let mf = m as f64;
    let x = rho / (1.0 - s.gamma()).powi(m as i32 - 1);
    let lx = x.ln();
    let value: f64 = s
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm() > 0.0 && x > 0.0)
        .map(|(n, c)| (mf * c.norm().ln() + n as f64 * lx).exp())
        .sum();
    let n = s.n_trunc();
    let mut best: Option<f64> = None;
    if let Some(e) = s.envelope() {
        let r = e.ratio.powi(m as i32) * x;
        if r >= 1.0 {
            return Err(BohrError::Divergent { rho, ratio: r });
        }
        best = Some(e.scale.powi(m as i32) * x * geom_tail(r, n));
    }
    if let Some(l) = s.coeff_bound() {
        if x < 1.0 {
            let t = l.powi(m as i32) * geom_tail(x, n + 1);
            best = Some(best.map_or(t, |b| b.min(t)));
        } else if best.is_none() {
            return Ok(Bounded {
                value,
                tail: f64::INFINITY,
                certified: false,
            });
        }
    }
    Ok(match best {
        Some(tail) => Bounded {
            value,
            tail,
            certified: true,
        },
        None => Bounded {
            value,
            tail: 0.0,
            certified: false,
        },
    })
}

fn background(spec: &FunctionalSpec, input: Input, rho: f64) -> Result<EvalResult> {
    let s = input.h();
    let gamma = s.gamma();
    let m = s.majorant(rho)?;
    let area_at = |r: f64| s.area_analytic(r);
    let res = match spec.variant {
        Variant::ClassicalB => {
            EvalResult::assemble(spec, rho, &[("majorant", m.value)], m.tail, m.certified)
        }
        Variant::ImprovedAreaC => {
            let kk = spec.area_constant()?;
            let a = area_at(rho * (1.0 - gamma))?;
            EvalResult::assemble(
                spec,
                rho,
                &[("majorant", m.value), ("area", kk * a.value)],
                m.tail + kk * a.tail,
                m.certified && a.certified,
            )
        }
        Variant::RefinedD => {
            let q = s.quadratic_sum(rho)?;
            let w = weight(s.c0().norm(), rho);
            EvalResult::assemble(
                spec,
                rho,
                &[("majorant", m.value), ("refinement", w * q.value)],
                m.tail + w * q.tail,
                m.certified && q.certified,
            )
        }
        Variant::HarmonicF => {
            let g = g_majorant(input, rho)?;
            EvalResult::assemble(
                spec,
                rho,
                &[("majorant", m.value), ("g_majorant", g.value)],
                m.tail + g.tail,
                m.certified && g.certified,
            )
        }
        Variant::PowerMG => {
            let t = spec.tau()?;
            let p = power_sum(s, rho, spec.params.m.unwrap_or(2))?;
            EvalResult::assemble(
                spec,
                rho,
                &[("majorant", m.value), ("power", t * p.value)],
                m.tail + t.abs() * p.tail,
                m.certified && p.certified,
            )
        }
        Variant::QuadAreaH => {
            let l = spec
                .params
                .lambda
                .ok_or(BohrError::MissingParameter("lambda (λ unspecified)"))?;
            let a = area_at(rho * (1.0 - gamma))?;
            let c1 = C_AREA_CONSTANT - 27.0 * l / 64.0;
            EvalResult::assemble(
                spec,
                rho,
                &[
                    ("majorant", m.value),
                    ("area", c1 * a.value),
                    ("area_squared", l * a.value * a.value),
                ],
                m.tail + c1.abs() * a.tail + l.abs() * a.tail * (2.0 * a.value + a.tail),
                m.certified && a.certified,
            )
        }
        Variant::RefinedShiftJ => {
            let c = s.coeffs();
            let a1 = c.get(1).map_or(0.0, |z| z.norm());
            let x = rho * rho;
            let mut p = 1.0;
            let mut q2 = 0.0;
            for z in c.iter().skip(2) {
                p *= x;
                q2 += z.norm_sqr() * p;
            }
            let q2_tail = if rho > 0.0 {
                s.quadratic_tail(rho).0 / x
            } else {
                0.0
            };
            let w = weight(a1, rho);
            let head = m.value - c[0].norm();
            EvalResult::assemble(
                spec,
                rho,
                &[("majorant_nonconstant", head), ("refinement", w * q2)],
                m.tail + w * q2_tail,
                m.certified && s.quadratic_tail(rho).1,
            )
        }
        v => {
            return Err(BohrError::Unsupported {
                variant: v.code(),
                operation: "background evaluation",
            })
        }
    };
    Ok(res)
}

/// Refined inequality on the shifted disk.
pub fn eval_refined_t1(s: &CoeffSeries, rho: f64) -> Result<EvalResult> {
    let spec = FunctionalSpec::new(Variant::RefinedT1, s.gamma());
    evaluate(&spec, Input::Series(s), rho)
}

/// Harmonic majorant on the shifted disk with the pair's own k.
pub fn eval_harmonic_t2(p: &HarmonicPair, rho: f64) -> Result<EvalResult> {
    let spec = FunctionalSpec::new(Variant::HarmonicT2, p.gamma()).with_k(p.k());
    evaluate(&spec, Input::Pair(p), rho)
}

/// Harmonic majorant plus `K` times the analytic area of `h`.
pub fn eval_h_area_t3(
    p: &HarmonicPair,
    rho: f64,
    k_override: Option<f64>,
    scale: AreaScale,
) -> Result<EvalResult> {
    let mut spec = FunctionalSpec::new(Variant::HImprovedAreaT3, p.gamma())
        .with_k(p.k())
        .with_area_scale(scale);
    spec.params.area_const = k_override;
    evaluate(&spec, Input::Pair(p), rho)
}

/// Harmonic majorant plus `K` times the area of `f = h + conj(g)`.
pub fn eval_f_area_t4(
    p: &HarmonicPair,
    rho: f64,
    k_override: Option<f64>,
    constant: T4Constant,
) -> Result<EvalResult> {
    let mut spec = FunctionalSpec::new(Variant::FImprovedAreaT4, p.gamma())
        .with_k(p.k())
        .with_t4_constant(constant);
    spec.params.area_const = k_override;
    evaluate(&spec, Input::Pair(p), rho)
}

/// Background variants on unit-disk restricted input.
pub fn eval_background(spec: &FunctionalSpec, input: Input, rho: f64) -> Result<EvalResult> {
    if spec.variant.expansion() != Expansion::Disk {
        return Err(BohrError::Unsupported {
            variant: spec.variant.code(),
            operation: "eval_background",
        });
    }
    evaluate(spec, input, rho)
}

/// Input gamma must match; exposed for callers assembling specs by hand.
pub fn spec_for(input: Input, variant: Variant) -> FunctionalSpec {
    FunctionalSpec::new(variant, input.gamma())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    use crate::series::TailMode;

    #[test]
    fn constant_unimodular_t1() {
        let s = CoeffSeries::from_shifted_coeffs(
            0.4,
            &[Complex64::new(0.0, 1.0)],
            TailMode::SchwarzPick,
        )
        .unwrap();
        for rho in [0.0, 0.3, 0.9] {
            let r = eval_refined_t1(&s, rho).unwrap();
            assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-15);
            assert_eq!(r.component("refinement"), Some(0.0));
        }
    }

    #[test]
    fn t1_extremal_half() {
        // a + (1-a²)ρ/(1-aρ) + (2/3 + 1/2)(1-a²)²ρ²/(1-a²ρ²) at a = 1/2, ρ = 1/3
        let s = CoeffSeries::extremal(0.3, 0.5).unwrap();
        let r = eval_refined_t1(&s, 1.0 / 3.0).unwrap();
        assert_abs_diff_eq!(r.component("majorant").unwrap(), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lhs, 0.875, epsilon = 1e-12);
        assert!(r.passes());
        assert_eq!(r.margin, 1.0 - r.lhs);
    }

    #[test]
    fn t2_examples() {
        let p = HarmonicPair::extremal(0.2, 0.5, 0.5).unwrap();
        let r = eval_harmonic_t2(&p, 0.25).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.5 + 1.5 * 0.75 * 0.25 / 0.875, epsilon = 1e-12);

        let p = HarmonicPair::extremal(0.0, 0.99, 0.0).unwrap();
        let r = eval_harmonic_t2(&p, 0.4).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.99 + 0.0199 * 0.4 / 0.604, epsilon = 1e-12);
        assert!(r.lhs > 1.003);
        assert!(!r.passes());

        let h = CoeffSeries::extremal(0.2, 0.3).unwrap();
        let spec = FunctionalSpec::new(Variant::HarmonicT2, 0.2).with_k(0.0);
        let r = evaluate(&spec, Input::Series(&h), 0.3).unwrap();
        assert_abs_diff_eq!(r.lhs, h.majorant(0.3).unwrap().value, epsilon = 1e-15);
    }

    #[test]
    fn area_constants() {
        assert_abs_diff_eq!(t3_constant(1.0), 72.0 / 25.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t3_constant(0.0), 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t4_statement_constant(0.0), 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t4_proof_constant(0.0), 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            t4_proof_constant(0.5),
            2.0 * 6.25 * 1.5 / 16.0,
            epsilon = 1e-15
        );
        for i in 0..=20 {
            let k = i as f64 / 20.0;
            assert_abs_diff_eq!(t3_constant(k), t3_constant_expanded(k), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(tau(0.0, 2), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn t4_zero_g_uses_rescaled_area() {
        let h = CoeffSeries::extremal(0.5, 0.4).unwrap();
        let p = HarmonicPair::proportional(h.clone(), 0.0).unwrap();
        let r = eval_f_area_t4(&p, 0.2, None, T4Constant::Statement).unwrap();
        let area = h.area_analytic(0.2).unwrap().value / 0.25;
        assert_abs_diff_eq!(
            r.component("area").unwrap(),
            8.0 / 9.0 * area,
            epsilon = 1e-14
        );
    }

    #[test]
    fn t4_zero_function() {
        let h = CoeffSeries::from_normalized(
            0.3,
            vec![Complex64::new(0.0, 0.0)],
            TailMode::SchwarzPick,
        )
        .unwrap();
        let p = HarmonicPair::proportional(h, 0.5).unwrap();
        let r = eval_f_area_t4(&p, 0.3, None, T4Constant::Statement).unwrap();
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn t4_rejects_k_one() {
        let p = HarmonicPair::extremal(0.0, 0.5, 1.0).unwrap();
        assert!(eval_f_area_t4(&p, 0.2, None, T4Constant::Statement).is_err());
    }

    #[test]
    fn conventions_do_not_mix() {
        let shifted = CoeffSeries::extremal(0.2, 0.5).unwrap();
        let disk = CoeffSeries::extremal_disk(0.2, 0.5).unwrap();
        let b = FunctionalSpec::new(Variant::ClassicalB, 0.2);
        assert!(matches!(
            evaluate(&b, Input::Series(&shifted), 0.3),
            Err(BohrError::Expansion { .. })
        ));
        assert!(matches!(
            eval_refined_t1(&disk, 0.3),
            Err(BohrError::Expansion { .. })
        ));
        assert!(eval_background(
            &FunctionalSpec::new(Variant::RefinedT1, 0.2),
            Input::Series(&shifted),
            0.3
        )
        .is_err());
    }

    #[test]
    fn h_requires_lambda() {
        let disk = CoeffSeries::extremal_disk(0.2, 0.5).unwrap();
        let h = FunctionalSpec::new(Variant::QuadAreaH, 0.2);
        assert!(matches!(
            evaluate(&h, Input::Series(&disk), 0.3),
            Err(BohrError::MissingParameter(_))
        ));
        let r = evaluate(&h.with_lambda(0.0), Input::Series(&disk), 0.3).unwrap();
        let c = evaluate(
            &FunctionalSpec::new(Variant::ImprovedAreaC, 0.2),
            Input::Series(&disk),
            0.3,
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, c.lhs, epsilon = 1e-15);
    }

    #[test]
    fn missing_parameters() {
        let disk = CoeffSeries::extremal_disk(0.0, 0.5).unwrap();
        assert!(matches!(
            evaluate(
                &FunctionalSpec::new(Variant::PowerMG, 0.0),
                Input::Series(&disk),
                0.3
            ),
            Err(BohrError::MissingParameter("m"))
        ));
        assert!(matches!(
            evaluate(
                &FunctionalSpec::new(Variant::HarmonicF, 0.0),
                Input::Series(&disk),
                0.3
            ),
            Err(BohrError::MissingParameter("k"))
        ));
    }

    #[test]
    fn background_b_extremal_closed_form() {
        let (g, a, rho) = (0.2, 0.7, 0.3);
        let s = CoeffSeries::extremal_disk(g, a).unwrap();
        let r = evaluate(
            &FunctionalSpec::new(Variant::ClassicalB, g),
            Input::Series(&s),
            rho,
        )
        .unwrap();
        let want = (a - g) / (1.0 - a * g)
            + (1.0 - a * a) * (1.0 - g) * rho
                / ((1.0 - a * g) * (1.0 - a * g - a * (1.0 - g) * rho));
        assert_abs_diff_eq!(r.lhs, want, epsilon = 1e-13);
    }

    #[test]
    fn components_sum_to_lhs() {
        let p = HarmonicPair::extremal(0.5, 0.6, 0.25).unwrap();
        let r = eval_h_area_t3(&p, 0.3, None, AreaScale::AsDisplayed).unwrap();
        let s: f64 = r.components.iter().map(|c| c.value).sum();
        assert_abs_diff_eq!(s, r.lhs, epsilon = 1e-14);
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "variant",
            "params",
            "rho",
            "lhs",
            "tail",
            "margin",
            "components",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["variant"], "T3");
    }

    #[test]
    fn variant_parsing() {
        assert_eq!(Variant::parse("t2"), Some(Variant::HarmonicT2));
        assert_eq!(Variant::parse("Classical_B"), Some(Variant::ClassicalB));
        assert_eq!(Variant::parse("X"), None);
    }
}
