use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("negative rational value {0}/{1} is outside this crate's domain")]
    NegativeValue(String, String),

    #[error("division by zero ratio")]
    DivisionByZero,

    #[error("invalid scheme parameters: require 2 <= k <= n, got k={k}, n={n}")]
    InvalidScheme { k: u32, n: u32 },

    #[error("stack count t={t} out of range 1..={n}")]
    InvalidStackCount { t: u32, n: u32 },

    #[error("fixed threshold j={j} out of range {k}..={n}")]
    InvalidFixedThreshold { j: u32, k: u32, n: u32 },

    #[error("contrast undefined: T(s=0)={t0} is below T(s=1)={t1}")]
    ContrastInverted { t0: String, t1: String },

    #[error("cannot stack an empty set of pixels")]
    EmptyStack,

    #[error("bitmap must be nonempty")]
    EmptyBitmap,

    #[error("bitmap dimensions {0}x{1} and {2}x{3} do not match")]
    DimensionMismatch(u32, u32, u32, u32),

    #[error("secret has no pixels of color {0} to measure against")]
    EmptyRegion(u8),

    #[error("need at least one share")]
    NoShares,

    #[error("enumeration over n={n} shares exceeds cap {cap} ({states} states)")]
    EnumerationCapExceeded { n: u32, cap: u32, states: u128 },

    #[error("malformed PBM at byte {offset}: {reason}")]
    PbmParse { offset: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
