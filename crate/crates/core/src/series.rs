//! Truncated coefficient sequences with certified tails.
//!
//! A [`CoeffSeries`] stores coefficients in the unit-disk variable: for the
//! shifted expansion `f(z) = Σ a_n (z + γ/(1-γ))^n` on Ω_γ we keep
//! `d_n = a_n/(1-γ)^n`, the Taylor coefficients of `f ∘ forward` at 0. Every
//! functional is then γ-free; γ only enters through I/O and the `1/(1-γ)²`
//! prefactor of the harmonic area.
//!
//! The background (unit-disk restricted) convention stores the Taylor
//! coefficients `α_n` of `f|_D` at the origin. Both share the same machinery
//! but carry different coefficient bounds and are kept apart by
//! [`Expansion`].

use std::f64::consts::{E, PI};
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, BohrError, Result};
use crate::geometry::check_gamma;
use crate::par::{self, Strategy};

/// Hard cap on stored coefficients.
pub const MAX_TERMS: usize = 4096;
/// Target for adaptively chosen truncations.
pub const TAIL_TARGET: f64 = 1e-12;
/// Radius at which the extremal truncation is certified.
pub const EXTREMAL_REF_RHO: f64 = 1.0 - 1e-3;
/// Slack allowed when checking the Schwarz-Pick coefficient bound.
pub const BOUND_TOL: f64 = 1e-12;
/// Absolute slack for the sampled dilatation test.
pub const DILATATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    /// Coefficients come from a function bounded by 1; the tail is bounded
    /// by the Schwarz-Pick estimate.
    #[serde(alias = "schwarz_pick", alias = "SchwarzPick")]
    SchwarzPick,
    /// Finite polynomial; the tail is reported as 0 and flagged uncertified.
    #[serde(alias = "Zero")]
    Zero,
}

/// Which expansion point the coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expansion {
    /// Centered at `-γ/(1-γ)`, stored unit-disk normalized (`d_n`).
    #[default]
    Shifted,
    /// Taylor coefficients at the origin of the restriction to the unit disk.
    Disk,
}

impl Expansion {
    pub fn name(self) -> &'static str {
        match self {
            Expansion::Shifted => "shifted",
            Expansion::Disk => "disk",
        }
    }
}

/// Geometric envelope `|c_n| <= scale * ratio^(n-1)` for every `n >= 1`,
/// used to certify tails sharper than the Schwarz-Pick bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub scale: f64,
    pub ratio: f64,
}

/// A truncated sum together with a bound on the neglected part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounded {
    pub value: f64,
    pub tail: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    gamma: f64,
    expansion: Expansion,
    mode: TailMode,
    coeffs: Vec<Complex64>,
    envelope: Option<Envelope>,
}

// Σ_{n>=m} x^n
pub(crate) fn geom_tail(x: f64, m: usize) -> f64 {
    if x <= 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    x.powf(m as f64) / (1.0 - x)
}

// Σ_{n>=m} n x^(n-1), m >= 1
fn n_tail_shifted(x: f64, m: usize) -> f64 {
    let m = m.max(1) as f64;
    if x <= 0.0 {
        return if m <= 1.0 { 1.0 } else { 0.0 };
    }
    x.powf(m - 1.0) * (m - (m - 1.0) * x) / ((1.0 - x) * (1.0 - x))
}

// Σ_{n>=m} n x^n
fn n_tail(x: f64, m: usize) -> f64 {
    x * n_tail_shifted(x, m)
}

// Σ_{n>=m} n² x^n
fn n2_tail(x: f64, m: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mf = m as f64;
    x.powf(mf) * (mf * mf - (2.0 * mf * mf - 2.0 * mf - 1.0) * x + (mf - 1.0).powi(2) * x * x)
        / (1.0 - x).powi(3)
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    check_range("rho", rho, 0.0, 1.0, false, "[0, 1)")
}

fn extremal_truncation(envelope: Envelope) -> usize {
    let r = envelope.ratio * EXTREMAL_REF_RHO;
    if r <= 0.0 || envelope.scale == 0.0 {
        return 1;
    }
    // scale * rho * r^N / (1 - r) < TAIL_TARGET
    let need = (TAIL_TARGET * (1.0 - r) / (envelope.scale * EXTREMAL_REF_RHO)).ln() / r.ln();
    (need.ceil().max(1.0) as usize).min(MAX_TERMS)
}

impl CoeffSeries {
    /// Build from the shifted coefficients `a_n` of `Σ a_n (z + γ/(1-γ))^n`.
    pub fn from_shifted_coeffs(gamma: f64, a: &[Complex64], mode: TailMode) -> Result<Self> {
        check_gamma(gamma)?;
        let s = 1.0 - gamma;
        let ln_s = s.ln();
        let mut scale = 1.0;
        let d: Vec<Complex64> = a
            .iter()
            .enumerate()
            .map(|(n, &an)| {
                if n > 0 {
                    scale *= s;
                }
                if an == Complex64::new(0.0, 0.0) {
                    an
                } else if scale >= f64::MIN_POSITIVE {
                    an / scale
                } else {
                    // (1-γ)^n has underflowed; rescale in two halves so a
                    // subnormal a_n is not multiplied by an overflowed factor
                    let half = (-0.5 * n as f64 * ln_s).exp();
                    an * half * half
                }
            })
            .collect();
        Self::build(gamma, Expansion::Shifted, d, mode, None)
    }

    /// Build directly from unit-disk-normalized coefficients `d_n`.
    pub fn from_normalized(gamma: f64, d: Vec<Complex64>, mode: TailMode) -> Result<Self> {
        check_gamma(gamma)?;
        Self::build(gamma, Expansion::Shifted, d, mode, None)
    }

    /// Build from Taylor coefficients at 0 of a function in B(Ω_γ)
    /// restricted to the unit disk.
    pub fn from_disk_coeffs(gamma: f64, alpha: Vec<Complex64>, mode: TailMode) -> Result<Self> {
        check_gamma(gamma)?;
        Self::build(gamma, Expansion::Disk, alpha, mode, None)
    }

    fn build(
        gamma: f64,
        expansion: Expansion,
        coeffs: Vec<Complex64>,
        mode: TailMode,
        envelope: Option<Envelope>,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(BohrError::Domain {
                name: "coeffs",
                value: 0.0,
                expected: "at least one coefficient",
            });
        }
        if coeffs.len() > MAX_TERMS + 1 {
            return Err(BohrError::Domain {
                name: "coeffs",
                value: coeffs.len() as f64,
                expected: "at most 4097 coefficients",
            });
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(BohrError::NonFinite { index });
        }
        let series = CoeffSeries {
            gamma,
            expansion,
            mode,
            coeffs,
            envelope,
        };
        if mode == TailMode::SchwarzPick {
            let c0 = series.coeffs[0].norm();
            if c0 > 1.0 + BOUND_TOL {
                return Err(BohrError::SchwarzPick {
                    index: 0,
                    modulus: c0,
                    bound: 1.0,
                });
            }
            let bound = series.coeff_bound().unwrap_or(0.0);
            for (index, c) in series.coeffs.iter().enumerate().skip(1) {
                if c.norm() > bound + BOUND_TOL {
                    return Err(BohrError::SchwarzPick {
                        index,
                        modulus: c.norm(),
                        bound,
                    });
                }
            }
        }
        Ok(series)
    }

    /// The extremal family `ψ_a ∘ backward`: `d_0 = a`,
    /// `d_n = -a^(n-1)(1-a²)`.
    pub fn extremal(gamma: f64, a: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
        let envelope = Envelope {
            scale: 1.0 - a * a,
            ratio: a,
        };
        let n = extremal_truncation(envelope);
        let mut d = Vec::with_capacity(n + 1);
        d.push(Complex64::new(a, 0.0));
        let mut p = 1.0;
        for _ in 1..=n {
            d.push(Complex64::new(-p * envelope.scale, 0.0));
            p *= a;
        }
        Self::build(
            gamma,
            Expansion::Shifted,
            d,
            TailMode::SchwarzPick,
            Some(envelope),
        )
    }

    /// The same family seen through the origin of the unit disk:
    /// `α_0 = (a-γ)/(1-aγ)`, `α_n = -(1-a²)(1-γ)/(1-aγ)² q^(n-1)` with
    /// `q = a(1-γ)/(1-aγ)`.
    pub fn extremal_disk(gamma: f64, a: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_range("a", a, 0.0, 1.0, false, "[0, 1)")?;
        let den = 1.0 - a * gamma;
        let q = a * (1.0 - gamma) / den;
        let envelope = Envelope {
            scale: (1.0 - a * a) * (1.0 - gamma) / (den * den),
            ratio: q,
        };
        let n = extremal_truncation(envelope);
        let mut alpha = Vec::with_capacity(n + 1);
        alpha.push(Complex64::new((a - gamma) / den, 0.0));
        let mut p = 1.0;
        for _ in 1..=n {
            alpha.push(Complex64::new(-p * envelope.scale, 0.0));
            p *= q;
        }
        Self::build(
            gamma,
            Expansion::Disk,
            alpha,
            TailMode::SchwarzPick,
            Some(envelope),
        )
    }

    /// Checks `|c_0| <= 1` and the coefficient bound for every stored term,
    /// whatever the tail mode.
    pub fn check_admissible(&self) -> Result<()> {
        let c0 = self.coeffs[0].norm();
        if c0 > 1.0 + BOUND_TOL {
            return Err(BohrError::SchwarzPick {
                index: 0,
                modulus: c0,
                bound: 1.0,
            });
        }
        let mut b = (1.0 - c0 * c0).max(0.0);
        if self.expansion == Expansion::Disk {
            b /= 1.0 + self.gamma;
        }
        match self
            .coeffs
            .iter()
            .skip(1)
            .position(|c| c.norm() > b + BOUND_TOL)
        {
            Some(i) => Err(BohrError::SchwarzPick {
                index: i + 1,
                modulus: self.coeffs[i + 1].norm(),
                bound: b,
            }),
            None => Ok(()),
        }
    }

    /// Attach a geometric envelope after validating it on the stored terms.
    pub fn with_envelope(mut self, envelope: Envelope) -> Result<Self> {
        check_range("envelope.ratio", envelope.ratio, 0.0, 1.0, false, "[0, 1)")?;
        check_range(
            "envelope.scale",
            envelope.scale,
            0.0,
            f64::INFINITY,
            false,
            ">= 0",
        )?;
        let mut p = envelope.scale;
        for (index, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.norm() > p * (1.0 + 1e-12) + BOUND_TOL {
                return Err(BohrError::SchwarzPick {
                    index,
                    modulus: c.norm(),
                    bound: p,
                });
            }
            p *= envelope.ratio;
        }
        self.envelope = Some(envelope);
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn expansion(&self) -> Expansion {
        self.expansion
    }

    pub fn mode(&self) -> TailMode {
        self.mode
    }

    pub fn envelope(&self) -> Option<Envelope> {
        self.envelope
    }

    /// Stored coefficients (`d_n` or `α_n`).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the last stored coefficient.
    pub fn n_trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn c0(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Shifted coefficients `a_n = d_n (1-γ)^n` (identity for the disk
    /// expansion).
    pub fn shifted_coeffs(&self) -> Vec<Complex64> {
        match self.expansion {
            Expansion::Disk => self.coeffs.clone(),
            Expansion::Shifted => {
                let s = 1.0 - self.gamma;
                let mut scale = 1.0;
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, &d)| {
                        if n > 0 {
                            scale *= s;
                        }
                        d * scale
                    })
                    .collect()
            }
        }
    }

    /// Uniform bound on `|c_n|`, `n >= 1`, for SchwarzPick series:
    /// `1-|c_0|²` (shifted) or `(1-|c_0|²)/(1+γ)` (disk restriction).
    pub fn coeff_bound(&self) -> Option<f64> {
        if self.mode != TailMode::SchwarzPick {
            return None;
        }
        let b = (1.0 - self.coeffs[0].norm_sqr()).max(0.0);
        Some(match self.expansion {
            Expansion::Shifted => b,
            Expansion::Disk => b / (1.0 + self.gamma),
        })
    }

    fn tail_min(&self, sp: impl Fn(f64) -> f64, env: impl Fn(Envelope) -> f64) -> (f64, bool) {
        let mut best: Option<f64> = None;
        if let Some(l) = self.coeff_bound() {
            best = Some(sp(l));
        }
        if let Some(e) = self.envelope {
            let t = env(e);
            best = Some(best.map_or(t, |b| b.min(t)));
        }
        match best {
            Some(t) => (t, true),
            None => (0.0, false),
        }
    }

    /// Certified bound on `Σ_{n>N} |c_n| ρ^n`.
    pub fn majorant_tail(&self, rho: f64) -> (f64, bool) {
        let n = self.n_trunc();
        self.tail_min(
            |l| l * geom_tail(rho, n + 1),
            |e| e.scale * rho * geom_tail(e.ratio * rho, n),
        )
    }

    /// Certified bound on `Σ_{n>N} |c_n|² ρ^{2n}`.
    pub fn quadratic_tail(&self, rho: f64) -> (f64, bool) {
        let n = self.n_trunc();
        let x = rho * rho;
        self.tail_min(
            |l| l * l * geom_tail(x, n + 1),
            |e| e.scale * e.scale * x * geom_tail(e.ratio * e.ratio * x, n),
        )
    }

    /// Certified bound on `Σ_{n>N} n |c_n|² ρ^{2n}`.
    pub fn area_tail(&self, rho: f64) -> (f64, bool) {
        let n = self.n_trunc();
        let x = rho * rho;
        self.tail_min(
            |l| l * l * n_tail(x, n + 1),
            |e| e.scale * e.scale * x * n_tail_shifted(e.ratio * e.ratio * x, n + 1),
        )
    }

    /// `Σ |c_n| ρ^n`.
    pub fn majorant(&self, rho: f64) -> Result<Bounded> {
        check_rho(rho)?;
        let mut p = 1.0;
        let mut value = 0.0;
        for c in &self.coeffs {
            value += c.norm() * p;
            p *= rho;
        }
        let (tail, certified) = self.majorant_tail(rho);
        Ok(Bounded {
            value,
            tail,
            certified,
        })
    }

    /// `Σ_{n>=1} |c_n| ρ^n`, the majorant without the constant term.
    pub fn majorant_nonconstant(&self, rho: f64) -> Result<Bounded> {
        let mut m = self.majorant(rho)?;
        m.value -= self.coeffs[0].norm();
        Ok(m)
    }

    /// `Σ_{n>=1} |c_n|² ρ^{2n}`.
    pub fn quadratic_sum(&self, rho: f64) -> Result<Bounded> {
        check_rho(rho)?;
        let x = rho * rho;
        let mut p = x;
        let mut value = 0.0;
        for c in &self.coeffs[1..] {
            value += c.norm_sqr() * p;
            p *= x;
        }
        let (tail, certified) = self.quadratic_tail(rho);
        Ok(Bounded {
            value,
            tail,
            certified,
        })
    }

    /// Normalized area `Σ n |c_n|² ρ^{2n}` of the image of the sub-disk of
    /// normalized radius ρ.
    pub fn area_analytic(&self, rho: f64) -> Result<Bounded> {
        check_rho(rho)?;
        let x = rho * rho;
        let mut p = x;
        let mut value = 0.0;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            value += n as f64 * c.norm_sqr() * p;
            p *= x;
        }
        let (tail, certified) = self.area_tail(rho);
        Ok(Bounded {
            value,
            tail,
            certified,
        })
    }

    /// Polar midpoint estimate of `(1/π) ∬_{|w|<ρ} |φ'(w)|² dA` where φ is
    /// the stored power series. `grid` angular nodes, `grid/2` radial.
    pub fn area_quadrature(&self, rho: f64, grid: usize) -> Result<f64> {
        self.area_quadrature_with(rho, grid, Strategy::default())
    }

    pub fn area_quadrature_with(&self, rho: f64, grid: usize, strategy: Strategy) -> Result<f64> {
        check_rho(rho)?;
        if grid < 64 {
            return Err(BohrError::Domain {
                name: "grid",
                value: grid as f64,
                expected: "grid >= 64",
            });
        }
        let n_r = grid / 2;
        let dr = rho / n_r as f64;
        let dt = 2.0 * PI / grid as f64;
        let rotations: Vec<Complex64> = (0..grid)
            .map(|j| {
                let t = (j as f64 + 0.5) * dt;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        let total = par::sum_range(strategy, n_r, |i| {
            let r = (i as f64 + 0.5) * dr;
            let ring: f64 = rotations
                .iter()
                .map(|u| self.derivative(u * r).norm_sqr())
                .sum();
            ring * r
        });
        Ok(total * dr * dt / PI)
    }

    /// Evaluates the truncated series at `w`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// Evaluates the derivative of the truncated series at `w`.
    pub fn derivative(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (n, &c)| {
                acc * w + c * n as f64
            })
    }

    /// Writes `rho,majorant,tail` rows.
    pub fn write_majorant_csv<W: Write>(&self, out: &mut W, rhos: &[f64]) -> Result<()> {
        let rows = rhos
            .iter()
            .map(|&r| self.majorant(r).map(|m| (r, m)))
            .collect::<Result<Vec<_>>>()?;
        let io = |_| BohrError::Domain {
            name: "io",
            value: f64::NAN,
            expected: "writable sink",
        };
        writeln!(out, "rho,majorant,tail").map_err(io)?;
        for (r, m) in rows {
            writeln!(
                out,
                "{},{},{}",
                crate::fmt_f64(r),
                crate::fmt_f64(m.value),
                crate::fmt_f64(m.tail)
            )
            .map_err(io)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            gamma: self.gamma,
            mode: self.mode,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            expansion: self.expansion,
            envelope: self.envelope,
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let c: Vec<Complex64> = j
            .coeffs
            .iter()
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let s = match j.expansion {
            Expansion::Shifted => Self::from_normalized(j.gamma, c, j.mode)?,
            Expansion::Disk => Self::from_disk_coeffs(j.gamma, c, j.mode)?,
        };
        match j.envelope {
            Some(e) => s.with_envelope(e),
            None => Ok(s),
        }
    }
}

/// Wire format: `{gamma, mode, coeffs: [[re, im], ...]}`. Coefficients are
/// stored as held: normalized `d_n = a_n/(1-γ)^n` for the shifted expansion,
/// `α_n` for the disk expansion. Shifted `a_n` would underflow for γ near 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub gamma: f64,
    pub mode: TailMode,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    pub expansion: Expansion,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
}

/// Outcome of the quadratic-sum checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticReport {
    pub rho: f64,
    /// `Σ n |b_n|² ρ^{2n}` vs `k² Σ n |a_n|² ρ^{2n}`.
    pub area_lhs: f64,
    pub area_rhs: f64,
    /// `Σ |b_n|² ρ^n` vs `k² Σ |a_n|² ρ^n`.
    pub mean_lhs: f64,
    pub mean_rhs: f64,
    pub pass: bool,
}

/// `f = h + conj(g)` with `|g'| <= k |h'|`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPair {
    h: CoeffSeries,
    g: CoeffSeries,
    k: f64,
}

/// Sample points of modulus at most 0.999 used to test `|g'| <= k|h'|`.
pub fn dilatation_samples() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(1000);
    for i in 0..10 {
        let r = 0.999 * (i + 1) as f64 / 10.0;
        for j in 0..100 {
            let t = 2.0 * PI * (j as f64 + 0.5 * (i % 2) as f64) / 100.0;
            pts.push(Complex64::from_polar(r, t));
        }
    }
    pts
}

impl HarmonicPair {
    /// Validates shared γ and expansion, `g(center) = 0`, `k ∈ [0, 1]` and
    /// samples the dilatation bound on 10³ points.
    pub fn new(h: CoeffSeries, g: CoeffSeries, k: f64) -> Result<Self> {
        Self::check_shape(&h, &g, k)?;
        let pair = HarmonicPair { h, g, k };
        pair.validate_dilatation(Strategy::default())?;
        Ok(pair)
    }

    fn check_shape(h: &CoeffSeries, g: &CoeffSeries, k: f64) -> Result<()> {
        check_range("k", k, 0.0, 1.0, true, "[0, 1]")?;
        if h.gamma != g.gamma {
            return Err(BohrError::GammaMismatch {
                h: h.gamma,
                g: g.gamma,
            });
        }
        if h.expansion != g.expansion {
            return Err(BohrError::Expansion {
                expected: h.expansion.name(),
                found: g.expansion.name(),
            });
        }
        let g0 = g.coeffs[0].norm();
        if g0 > BOUND_TOL {
            return Err(BohrError::NonzeroConstant(g0));
        }
        Ok(())
    }

    fn validate_dilatation(&self, strategy: Strategy) -> Result<()> {
        let pts = dilatation_samples();
        let bad = par::map(strategy, &pts, |&w| {
            let gd = self.g.derivative(w).norm();
            let hd = self.h.derivative(w).norm();
            (gd > self.k * hd + DILATATION_TOL).then_some((w, gd, self.k * hd))
        });
        match bad.into_iter().flatten().next() {
            Some((w, g, kh)) => Err(BohrError::Dilatation {
                re: w.re,
                im: w.im,
                g,
                kh,
            }),
            None => Ok(()),
        }
    }

    /// Extremal pair `g = -k (h - h(center))` built on [`CoeffSeries::extremal`].
    /// `|g'| = k |h'|` holds coefficientwise, so no sampling is needed.
    pub fn extremal(gamma: f64, a: f64, k: f64) -> Result<Self> {
        Self::proportional(CoeffSeries::extremal(gamma, a)?, k)
    }

    /// Extremal pair in the disk-restricted convention.
    pub fn extremal_disk(gamma: f64, a: f64, k: f64) -> Result<Self> {
        Self::proportional(CoeffSeries::extremal_disk(gamma, a)?, k)
    }

    /// `g = -k (h - h(center))`.
    pub fn proportional(h: CoeffSeries, k: f64) -> Result<Self> {
        check_range("k", k, 0.0, 1.0, true, "[0, 1]")?;
        let mut b: Vec<Complex64> = h.coeffs.iter().map(|&c| -k * c).collect();
        b[0] = Complex64::new(0.0, 0.0);
        let envelope = h.envelope.map(|e| Envelope {
            scale: k * e.scale,
            ratio: e.ratio,
        });
        let g = CoeffSeries {
            gamma: h.gamma,
            expansion: h.expansion,
            mode: TailMode::Zero,
            coeffs: b,
            envelope,
        };
        Ok(HarmonicPair { h, g, k })
    }

    pub fn h(&self) -> &CoeffSeries {
        &self.h
    }

    pub fn g(&self) -> &CoeffSeries {
        &self.g
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.h.gamma
    }

    // |b_n| <= k L sqrt(e n) follows from Σ |b_n|² r^n <= k² L² r/(1-r)
    // with r = (n-1)/n; needs h bounded by 1.
    fn dilatation_coeff_scale(&self) -> Option<f64> {
        self.h.coeff_bound().map(|l| self.k * l * E.sqrt())
    }

    fn g_tail(
        &self,
        env_tail: impl Fn(&CoeffSeries) -> (f64, bool),
        dil_tail: impl Fn(f64) -> f64,
    ) -> (f64, bool) {
        let (env, env_ok) = env_tail(&self.g);
        let dil = self.dilatation_coeff_scale().map(dil_tail);
        match (env_ok, dil) {
            (true, Some(d)) => (env.min(d), true),
            (true, None) => (env, true),
            (false, Some(d)) => (d, true),
            (false, None) => (0.0, false),
        }
    }

    /// `Σ_{n>=1} |b_n| ρ^n` in the stored normalization.
    pub fn g_majorant(&self, rho: f64) -> Result<Bounded> {
        let mut m = self.g.majorant(rho)?;
        let n = self.g.n_trunc();
        let (tail, certified) = self.g_tail(|g| g.majorant_tail(rho), |b| b * n_tail(rho, n + 1));
        m.tail = tail;
        m.certified = certified;
        Ok(m)
    }

    /// Normalized harmonic area `Σ n (|a_n|² - |b_n|²) ρ^{2n}`, with the
    /// `1/(1-γ)²` prefactor for the shifted expansion.
    pub fn area_harmonic(&self, rho: f64) -> Result<Bounded> {
        let ah = self.h.area_analytic(rho)?;
        let ag = self.g.area_analytic(rho)?;
        let n = self.g.n_trunc();
        let x = rho * rho;
        let (g_tail, g_ok) = self.g_tail(|g| g.area_tail(rho), |b| b * b * n2_tail(x, n + 1));
        let pref = match self.h.expansion {
            Expansion::Shifted => 1.0 / (1.0 - self.h.gamma).powi(2),
            Expansion::Disk => 1.0,
        };
        let value = pref * (ah.value - ag.value);
        if value < -1e-14 {
            return Err(BohrError::NotSensePreserving(value));
        }
        Ok(Bounded {
            value: value.max(0.0),
            tail: pref * ah.tail.max(g_tail),
            certified: ah.certified && g_ok,
        })
    }

    /// Both quadratic-sum inequalities implied by the dilatation bound.
    pub fn check_quadratic_bounds(&self, rho: f64) -> Result<QuadraticReport> {
        check_rho(rho)?;
        let k2 = self.k * self.k;
        let sums = |s: &CoeffSeries| {
            let (mut area, mut mean) = (0.0, 0.0);
            let (mut p1, mut p2) = (rho, rho * rho);
            for (n, c) in s.coeffs.iter().enumerate().skip(1) {
                let m = c.norm_sqr();
                mean += m * p1;
                area += n as f64 * m * p2;
                p1 *= rho;
                p2 *= rho * rho;
            }
            (area, mean)
        };
        let (ah, mh) = sums(&self.h);
        let (ag, mg) = sums(&self.g);
        let slack = |r: f64| 1e-13 * (1.0 + r);
        let area_rhs = k2 * ah;
        let mean_rhs = k2 * mh;
        Ok(QuadraticReport {
            rho,
            area_lhs: ag,
            area_rhs,
            mean_lhs: mg,
            mean_rhs,
            pass: ag <= area_rhs + slack(area_rhs) && mg <= mean_rhs + slack(mean_rhs),
        })
    }

    /// Right side of the Cauchy-Schwarz step `Σ |b_n| ρ^n <= k(1-|a_0|²)ρ/(1-ρ)`.
    pub fn cauchy_schwarz_bound(&self, rho: f64) -> Option<f64> {
        self.h.coeff_bound().map(|l| self.k * l * rho / (1.0 - rho))
    }

    pub fn to_json(&self) -> PairJson {
        PairJson {
            h: self.h.to_json(),
            g: self.g.to_json(),
            k: self.k,
        }
    }

    pub fn from_json(j: &PairJson) -> Result<Self> {
        let h = CoeffSeries::from_json(&j.h)?;
        let g = CoeffSeries::from_json(&j.g)?;
        Self::new(h, g, j.k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub h: SeriesJson,
    pub g: SeriesJson,
    pub k: f64,
}

/// Taylor coefficients of `e^{iθ} Π (w - z_j)/(1 - conj(z_j) w)` up to degree `n`.
pub fn blaschke_coeffs(zeros: &[Complex64], theta: f64, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    out[0] = Complex64::from_polar(1.0, theta);
    for &z in zeros {
        let zc = z.conj();
        let w = 1.0 - z.norm_sqr();
        let mut factor = Vec::with_capacity(n + 1);
        factor.push(-z);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 1..=n {
            factor.push(p * w);
            p *= zc;
        }
        out = convolve(&out, &factor, n);
    }
    out
}

fn convolve(x: &[Complex64], y: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|i| (0..=i).map(|j| x[j] * y[i - j]).sum())
        .collect()
}

/// Random finite Blaschke product composed with the backward transport.
/// Zeros are drawn with modulus at most `max_modulus`.
pub fn random_blaschke<R: Rng + ?Sized>(
    rng: &mut R,
    gamma: f64,
    max_modulus: f64,
    n_trunc: usize,
) -> Result<CoeffSeries> {
    check_range("max_modulus", max_modulus, 0.0, 1.0, false, "[0, 1)")?;
    let m = rng.gen_range(1..=3);
    let zeros: Vec<Complex64> = (0..m)
        .map(|_| {
            Complex64::from_polar(
                max_modulus * rng.gen::<f64>().sqrt(),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let theta = rng.gen_range(0.0..2.0 * PI);
    let b = blaschke_coeffs(&zeros, theta, n_trunc);
    let s = 1.0 - gamma;
    let mut scale = 1.0;
    let a: Vec<Complex64> = b
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            if n > 0 {
                scale *= s;
            }
            c * scale
        })
        .collect();
    CoeffSeries::from_shifted_coeffs(gamma, &a, TailMode::SchwarzPick)
}

/// Random admissible pair with `g' = (k/2) ω h'`, `h` a random Blaschke
/// product and `ω` a single Blaschke factor. `g` is stored uncertified;
/// the pair certifies its tail through the dilatation bound.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    gamma: f64,
    k: f64,
    max_modulus: f64,
    n_trunc: usize,
) -> Result<HarmonicPair> {
    let h = random_blaschke(rng, gamma, max_modulus, n_trunc)?;
    let z = Complex64::from_polar(
        max_modulus * rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..2.0 * PI),
    );
    let omega = blaschke_coeffs(&[z], rng.gen_range(0.0..2.0 * PI), n_trunc);
    let hp: Vec<Complex64> = (0..n_trunc)
        .map(|j| h.coeffs[j + 1] * (j + 1) as f64)
        .collect();
    let prod = convolve(&hp, &omega[..n_trunc], n_trunc - 1);
    let mut d = vec![Complex64::new(0.0, 0.0); n_trunc + 1];
    for (j, c) in prod.iter().enumerate() {
        d[j + 1] = 0.5 * k * c / (j + 1) as f64;
    }
    let g = CoeffSeries::from_normalized(gamma, d, TailMode::Zero)?;
    HarmonicPair::new(h, g, k)
}
