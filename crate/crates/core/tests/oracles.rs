//! Closed forms checked against brute-force sums of the family
//! coefficients written out directly in the test.

use approx::assert_abs_diff_eq;
use bohrlab::extremal::{closed_form_lhs, excess_ratio};
use bohrlab::functionals::{tau, FunctionalSpec, Variant};
use bohrlab::BohrError;

const TERMS: usize = 20_000;

/// Moduli of the disk-restricted family, `|α_0|, |α_1|, ...`.
fn disk_family(gamma: f64, a: f64) -> Vec<f64> {
    let c = (1.0 - a * a) / (1.0 - a * gamma).powi(2);
    let q = a * (1.0 - gamma) / (1.0 - a * gamma);
    let mut v = vec![((a - gamma) / (1.0 - a * gamma)).abs()];
    v.extend((1..TERMS).map(|n| c * (1.0 - gamma) * q.powi(n as i32 - 1)));
    v
}

/// Moduli of the shifted family, `|d_0|, |d_1|, ...`.
fn shifted_family(a: f64) -> Vec<f64> {
    let mut v = vec![a];
    v.extend((1..TERMS).map(|n| a.powi(n as i32 - 1) * (1.0 - a * a)));
    v
}

fn sum(c: &[f64], f: impl Fn(usize, f64) -> f64) -> f64 {
    c.iter().enumerate().skip(1).map(|(n, &x)| f(n, x)).sum()
}

fn direct(spec: &FunctionalSpec, a: f64, rho: f64) -> f64 {
    let g = spec.gamma();
    let k = spec.k();
    let w = |c0: f64| 1.0 / (1.0 + c0) + rho / (1.0 - rho);
    match spec.variant {
        Variant::RefinedT1 | Variant::HarmonicT2 | Variant::HImprovedAreaT3 => {
            let d = shifted_family(a);
            let m1 = sum(&d, |n, x| x * rho.powi(n as i32));
            match spec.variant {
                Variant::RefinedT1 => {
                    d[0] + m1 + w(d[0]) * sum(&d, |n, x| x * x * rho.powi(2 * n as i32))
                }
                Variant::HarmonicT2 => d[0] + (1.0 + k) * m1,
                _ => {
                    let area = sum(&d, |n, x| n as f64 * x * x * rho.powi(2 * n as i32));
                    d[0] + (1.0 + k) * m1 + spec.area_constant().unwrap() * area
                }
            }
        }
        v => {
            let al = disk_family(g, a);
            let b = al[0] + sum(&al, |n, x| x * rho.powi(n as i32));
            let r1 = rho * (1.0 - g);
            let area = sum(&al, |n, x| n as f64 * x * x * r1.powi(2 * n as i32));
            match v {
                Variant::ClassicalB => b,
                Variant::ImprovedAreaC => b + 8.0 / 9.0 * area,
                Variant::RefinedD => b + w(al[0]) * sum(&al, |n, x| x * x * rho.powi(2 * n as i32)),
                Variant::HarmonicF => al[0] + (1.0 + k) * (b - al[0]),
                Variant::PowerMG => {
                    let m = spec.params.m.unwrap();
                    let r = rho / (1.0 - g).powi(m as i32 - 1);
                    let t = sum(&al, |n, x| (m as f64 * x.ln() + n as f64 * r.ln()).exp());
                    b + tau(g, m) * t
                }
                Variant::QuadAreaH => {
                    let l = spec.params.lambda.unwrap();
                    b + (8.0 / 9.0 - 27.0 * l / 64.0) * area + l * area * area
                }
                Variant::RefinedShiftJ => {
                    let tail: f64 = (2..TERMS)
                        .map(|n| al[n] * al[n] * rho.powi(2 * (n as i32 - 1)))
                        .sum();
                    (b - al[0]) + w(al[1]) * tail
                }
                _ => unreachable!(),
            }
        }
    }
}

#[test]
fn closed_forms_match_direct_sums() {
    for v in Variant::ALL {
        if v == Variant::FImprovedAreaT4 {
            continue;
        }
        for g in [0.0, 0.3, 0.6] {
            let spec = FunctionalSpec::new(v, g)
                .with_k(0.4)
                .with_m(3)
                .with_lambda(0.25);
            for a in [0.0, 0.2, 0.55, 0.9] {
                for rho in [0.1, 0.35, 0.7] {
                    let got = match closed_form_lhs(&spec, a, rho) {
                        Ok(x) => x,
                        Err(BohrError::Divergent { .. }) => {
                            let q = a * (1.0 - g) / (1.0 - a * g);
                            assert!(
                                v == Variant::PowerMG && q.powi(3) * rho / (1.0 - g).powi(2) >= 1.0
                            );
                            continue;
                        }
                        Err(e) => panic!("{e}"),
                    };
                    let want = direct(&spec, a, rho);
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                        "{v:?} g={g} a={a} rho={rho}: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn t4_area_weight_matches_direct_form() {
    // T4 carries (1-k²)/(1-γ)² on the area of the extremal pair
    let (g, k, a, rho): (f64, f64, f64, f64) = (0.4, 0.3, 0.7, 0.25);
    let spec = FunctionalSpec::new(Variant::FImprovedAreaT4, g).with_k(k);
    let d = shifted_family(a);
    let m1 = sum(&d, |n, x| x * rho.powi(n as i32));
    let area = sum(&d, |n, x| n as f64 * x * x * rho.powi(2 * n as i32));
    let kk = 2.0 * (k + 2.0f64).powi(2) * (k + 1.0) / ((1.0 - k) * (2.0 * k + 3.0f64).powi(2));
    let want = a + (1.0 + k) * m1 + kk * (1.0 - k * k) / (1.0 - g).powi(2) * area;
    assert_abs_diff_eq!(
        closed_form_lhs(&spec, a, rho).unwrap(),
        want,
        epsilon = 1e-12
    );
}

#[test]
fn excess_ratio_survives_a_near_one() {
    // naive (S-1)/(1-a) is noise at a = 1 - 1e-10; the factored form is not
    let spec = FunctionalSpec::new(Variant::HarmonicT2, 0.0).with_k(0.0);
    let a = 1.0 - 1e-10;
    let e = excess_ratio(&spec, a, 0.3).unwrap();
    // limit a -> 1 of -W/(1-aρ) is -(1-3ρ)/(1-ρ)
    assert_abs_diff_eq!(e, -(1.0 - 0.9) / 0.7, epsilon = 1e-8);
}

#[test]
fn t1_example_value() {
    let s = closed_form_lhs(
        &FunctionalSpec::new(Variant::RefinedT1, 0.0),
        0.5,
        1.0 / 3.0,
    )
    .unwrap();
    assert_abs_diff_eq!(s, 0.875, epsilon = 1e-12);
}
