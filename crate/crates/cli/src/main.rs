//! `bohrlab` command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed (radius mismatch, or an
//! inequality violated where it is claimed to hold), 2 invalid flags.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use bohrlab::extremal::{closed_form_lhs, series_lhs, A_CAP};
use bohrlab::functionals::{AreaScale, FunctionalSpec, T4Constant, Variant, PASS_TOL};
use bohrlab::geometry::{write_circle_csv, ShiftedDisk};
use bohrlab::par::{self, Strategy};
use bohrlab::series::{random_blaschke, CoeffSeries};
use bohrlab::solver::{
    critical_radius, is_confirmed, reference_radius, registry_entry, sharpest_k, sup_over_family,
    violation_witness, write_radius_csv,
};
use bohrlab::{fmt_f64, BohrError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "bohrlab",
    version,
    about = "Bohr-type inequalities on shifted disks"
)]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, env = "BOHRLAB_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Displayed,
    Rescaled,
}

#[derive(Clone, Copy, ValueEnum)]
enum T4Choice {
    Statement,
    Proof,
}

#[derive(Args, Clone)]
struct VariantArgs {
    /// Variant code (B, C, D, F, G, H, J, T1-T4) or registry alias (CorA, T2cor).
    #[arg(long)]
    variant: String,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Dilatation bound.
    #[arg(long)]
    k: Option<f64>,
    /// Power for G.
    #[arg(long)]
    m: Option<u32>,
    /// Quadratic area weight for H.
    #[arg(long)]
    lambda: Option<f64>,
    /// Area multiplier override.
    #[arg(long = "K")]
    area_const: Option<f64>,
    #[arg(long, value_enum, default_value_t = Scale::Displayed)]
    area_scale: Scale,
    #[arg(long, value_enum, default_value_t = T4Choice::Statement)]
    t4_constant: T4Choice,
}

impl VariantArgs {
    fn spec(&self) -> Result<FunctionalSpec, Failure> {
        let mut spec = match registry_entry(&self.variant).filter(|e| e.fixed_k.is_some()) {
            Some(e) => e.spec(self.gamma, None),
            None => {
                let v = Variant::parse(&self.variant).ok_or_else(|| {
                    Failure::Usage(format!(
                        "unknown variant {}; expected one of B, C, D, F, G, H, J, T1-T4, CorA, T2cor",
                        self.variant
                    ))
                })?;
                let mut s = FunctionalSpec::new(v, self.gamma);
                if let Some(k) = self.k {
                    s = s.with_k(k);
                }
                s
            }
        };
        if let Some(m) = self.m {
            spec = spec.with_m(m);
        }
        if let Some(l) = self.lambda {
            spec = spec.with_lambda(l);
        }
        if let Some(kk) = self.area_const {
            spec = spec.with_area_const(kk);
        }
        spec = spec
            .with_area_scale(match self.area_scale {
                Scale::Displayed => AreaScale::AsDisplayed,
                Scale::Rescaled => AreaScale::Rescaled,
            })
            .with_t4_constant(match self.t4_constant {
                T4Choice::Statement => T4Constant::Statement,
                T4Choice::Proof => T4Constant::ProofDerived,
            });
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Critical radius by bisection, compared with the closed form.
    Radius {
        #[command(flatten)]
        v: VariantArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate the extremal family on an a-grid at one radius.
    Verify {
        #[command(flatten)]
        v: VariantArgs,
        #[arg(long)]
        rho: f64,
        #[arg(long = "a-grid", default_value_t = 129)]
        a_grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Family supremum over a range of radii.
    Sweep {
        #[command(flatten)]
        v: VariantArgs,
        #[arg(long, default_value_t = 0.01)]
        rho_min: f64,
        #[arg(long, default_value_t = 0.9)]
        rho_max: f64,
        #[arg(long, default_value_t = 90)]
        n: usize,
    },
    /// Closed form against series summation for one family member.
    Extremal {
        #[command(flatten)]
        v: VariantArgs,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 0.01)]
        rho_min: f64,
        #[arg(long, default_value_t = 0.9)]
        rho_max: f64,
        #[arg(long, default_value_t = 90)]
        n: usize,
    },
    /// Area sum from coefficients against polar quadrature.
    Area {
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Extremal parameter; ignored when --seed is given.
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Use a random Blaschke product drawn from this seed instead.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Boundary circles of the shifted disks.
    Figure {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.2, 0.4, 0.5, 0.7])]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Empirical sharp area multiplier for T3 or T4.
    Sharpk {
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum Failure {
    /// A check ran and did not hold.
    Check(String),
    /// Bad input.
    Usage(String),
    Io(io::Error),
}

impl From<BohrError> for Failure {
    fn from(e: BohrError) -> Self {
        match e {
            BohrError::Domain { .. }
            | BohrError::MissingParameter(_)
            | BohrError::Unsupported { .. }
            | BohrError::GammaMismatch { .. } => Failure::Usage(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, Failure> {
    if n < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Failure::Usage("need n >= 2 and min < max".into()));
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn radius(out: &mut Out, v: &VariantArgs, tol: f64, format: Format) -> Result<(), Failure> {
    let spec = v.spec()?;
    let r = critical_radius(&spec, tol)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r).unwrap())?,
        Format::Csv => write_radius_csv(out, std::slice::from_ref(&r))?,
    }
    match r.abs_err {
        Some(e) if e > tol.max(1e-6) => Err(Failure::Check(format!(
            "rho* = {} differs from the closed form {} by {e:e}",
            r.rho_star,
            r.reference.unwrap()
        ))),
        _ => Ok(()),
    }
}

fn verify(
    out: &mut Out,
    v: &VariantArgs,
    rho: f64,
    a_grid: usize,
    format: Format,
) -> Result<(), Failure> {
    let spec = v.spec()?;
    if a_grid < 2 {
        return Err(Failure::Usage("--a-grid must be at least 2".into()));
    }
    let grid = linspace(0.0, A_CAP, a_grid)?;
    let vals = par::map(Strategy::default(), &grid, |&a| {
        closed_form_lhs(&spec, a, rho)
    });
    let mut rows = Vec::with_capacity(a_grid);
    for (a, v) in grid.iter().zip(vals) {
        match v {
            Ok(x) => rows.push((*a, x)),
            Err(BohrError::Divergent { .. }) => rows.push((*a, f64::INFINITY)),
            Err(e) => return Err(e.into()),
        }
    }
    let (a_max, lhs_max) = rows
        .iter()
        .copied()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    let rho0 = reference_radius(&spec);
    let claimed = rho0.is_some_and(|r0| rho <= r0) && is_confirmed(&spec);
    let pass = lhs_max <= 1.0 + PASS_TOL;
    let witness = if pass {
        None
    } else {
        violation_witness(&spec, rho).ok()
    };
    match format {
        Format::Json => {
            let j = json!({
                "variant": spec.variant,
                "params": spec.params,
                "rho": rho,
                "rho0": rho0,
                "a_grid": a_grid,
                "max_lhs": lhs_max,
                "a_at_max": a_max,
                "pass": pass,
                "claimed": claimed,
                "witness": witness,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&j).unwrap())?;
        }
        Format::Csv => {
            writeln!(
                out,
                "variant,rho,rho0,max_lhs,a_at_max,pass,witness_a,witness_lhs"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                spec.variant.code(),
                fmt_f64(rho),
                opt(rho0),
                fmt_f64(lhs_max),
                fmt_f64(a_max),
                if pass { "pass" } else { "fail" },
                opt(witness.map(|w| w.a)),
                opt(witness.map(|w| w.lhs)),
            )?;
        }
    }
    if claimed && !pass {
        return Err(Failure::Check(format!(
            "lhs {lhs_max} > 1 at rho = {rho} <= rho0, a = {a_max}"
        )));
    }
    Ok(())
}

fn sweep(out: &mut Out, v: &VariantArgs, lo: f64, hi: f64, n: usize) -> Result<(), Failure> {
    let spec = v.spec()?;
    let rhos = linspace(lo, hi, n)?;
    let sups = par::map(Strategy::default(), &rhos, |&r| sup_over_family(&spec, r));
    writeln!(out, "rho,sup_lhs,a_star")?;
    for (r, s) in rhos.iter().zip(sups) {
        let s = s?;
        writeln!(out, "{},{},{}", fmt_f64(*r), fmt_f64(s.value), fmt_f64(s.a))?;
    }
    Ok(())
}

fn extremal(
    out: &mut Out,
    v: &VariantArgs,
    a: f64,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<(), Failure> {
    let spec = v.spec()?;
    let rhos = linspace(lo, hi, n)?;
    let rows = par::map(Strategy::default(), &rhos, |&r| {
        Ok::<_, BohrError>((closed_form_lhs(&spec, a, r)?, series_lhs(&spec, a, r)?))
    });
    writeln!(out, "rho,closed_form,series,tail")?;
    for (r, row) in rhos.iter().zip(rows) {
        let (c, s) = row?;
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(*r),
            fmt_f64(c),
            fmt_f64(s.lhs),
            fmt_f64(s.tail)
        )?;
    }
    Ok(())
}

fn area(
    out: &mut Out,
    gamma: f64,
    a: f64,
    rho: f64,
    grid: usize,
    seed: Option<u64>,
) -> Result<(), Failure> {
    let s = match seed {
        Some(seed) => random_blaschke(&mut ChaCha8Rng::seed_from_u64(seed), gamma, 0.9, 256)?,
        None => CoeffSeries::extremal(gamma, a)?,
    };
    let an = s.area_analytic(rho)?;
    let q = s.area_quadrature(rho, grid)?;
    writeln!(out, "gamma,rho,grid,analytic,tail,quadrature,abs_diff")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        fmt_f64(gamma),
        fmt_f64(rho),
        grid,
        fmt_f64(an.value),
        fmt_f64(an.tail),
        fmt_f64(q),
        fmt_f64((an.value - q).abs())
    )?;
    Ok(())
}

fn figure(out: &mut Out, gammas: &[f64], n: usize) -> Result<(), Failure> {
    let disks = gammas
        .iter()
        .map(|&g| ShiftedDisk::new(g))
        .collect::<Result<Vec<_>, _>>()?;
    write_circle_csv(out, &disks, n)?;
    Ok(())
}

fn sharpk(
    out: &mut Out,
    variant: &str,
    gamma: f64,
    k: f64,
    tol: f64,
    format: Format,
) -> Result<(), Failure> {
    let v = Variant::parse(variant)
        .ok_or_else(|| Failure::Usage(format!("unknown variant {variant}")))?;
    let r = sharpest_k(v, gamma, k, tol)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r).unwrap())?,
        Format::Csv => {
            writeln!(
                out,
                "variant,gamma,k,rho0,k_empirical,bound_sharp,statement,proof_derived,supported"
            )?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.variant.code(),
                fmt_f64(r.gamma),
                fmt_f64(r.k),
                fmt_f64(r.rho0),
                fmt_f64(r.k_empirical),
                fmt_f64(r.bound_sharp),
                fmt_f64(r.statement),
                fmt_f64(r.proof_derived),
                r.supported.as_deref().unwrap_or("none")
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        par::init_threads(n);
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let r = match &cli.command {
        Command::Radius { v, tol, format } => radius(&mut out, v, *tol, *format),
        Command::Verify {
            v,
            rho,
            a_grid,
            format,
        } => verify(&mut out, v, *rho, *a_grid, *format),
        Command::Sweep {
            v,
            rho_min,
            rho_max,
            n,
        } => sweep(&mut out, v, *rho_min, *rho_max, *n),
        Command::Extremal {
            v,
            a,
            rho_min,
            rho_max,
            n,
        } => extremal(&mut out, v, *a, *rho_min, *rho_max, *n),
        Command::Area {
            gamma,
            a,
            rho,
            grid,
            seed,
        } => area(&mut out, *gamma, *a, *rho, *grid, *seed),
        Command::Figure { gammas, n } => figure(&mut out, gammas, *n),
        Command::Sharpk {
            variant,
            gamma,
            k,
            tol,
            format,
        } => sharpk(&mut out, variant, *gamma, *k, *tol, *format),
    };
    out.flush()?;
    r
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}
