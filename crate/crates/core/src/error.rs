use thiserror::Error;

/// Errors raised by the evaluation, verification and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BohrError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("coefficient {index} has modulus {modulus:.6e}, exceeding the Schwarz-Pick bound {bound:.6e}")]
    SchwarzPick {
        index: usize,
        modulus: f64,
        bound: f64,
    },

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },

    #[error("expansion mismatch: expected {expected}, got {found}")]
    Expansion {
        expected: &'static str,
        found: &'static str,
    },

    #[error("analytic parts disagree on gamma ({h} vs {g})")]
    GammaMismatch { h: f64, g: f64 },

    #[error("g must vanish at the expansion point, found |g0| = {0:.3e}")]
    NonzeroConstant(f64),

    #[error(
        "dilatation bound violated at w = {re:.6}+{im:.6}i: |g'| = {g:.6e} > k|h'| = {kh:.6e}"
    )]
    Dilatation { re: f64, im: f64, g: f64, kh: f64 },

    #[error("pair is not sense-preserving: harmonic area {0:.6e} < 0")]
    NotSensePreserving(f64),

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("series diverges at rho = {rho} (ratio {ratio:.6})")]
    Divergent { rho: f64, ratio: f64 },

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo:.3e}, g(hi) = {g_hi:.3e}")]
    Bracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("no violation found at rho = {rho}: sup lhs = {sup:.12}")]
    NoWitness { rho: f64, sup: f64 },

    #[error("variant {0} has no registry radius")]
    NoRegistry(&'static str),

    #[error("unsupported variant {variant} for {operation}")]
    Unsupported {
        variant: &'static str,
        operation: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, BohrError>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    hi_inclusive: bool,
    expected: &'static str,
) -> Result<()> {
    let ok = value.is_finite()
        && value >= lo
        && if hi_inclusive {
            value <= hi
        } else {
            value < hi
        };
    if ok {
        Ok(())
    } else {
        Err(BohrError::Domain {
            name,
            value,
            expected,
        })
    }
}
