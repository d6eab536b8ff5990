//! Closed-form light transmissions and contrast.
//!
//! For a fixed `(j,n)` threshold sub-scheme, stacking `t` shares by OR
//! gives transmission `C(t,j)/C(n,j) * (1/2)^(t-1) + (1 - C(t,j)/C(n,j)) * (1/2)^t`
//! on the white region and `(1 - C(t,j)/C(n,j)) * (1/2)^t` on the black
//! region when `t >= j`, and `(1/2)^t` on both below threshold. XORing is
//! `1/2 * (1 ± 1/C(n,j))` exactly at `t = j` and an uninformative `1/2`
//! otherwise. The full `(k,n)` scheme draws the sub-threshold `j`
//! uniformly from `k..=n`, so its transmission is the plain average of
//! the fixed ones. Contrast is `(T0 - T1) / (1 + T1)`.

use crate::codec::PixelColor;
use crate::error::{Error, Result};
use crate::numeric::{binom_ratio, Ratio};

/// `(k, n)` threshold parameters: any `k` of the `n` shares reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    k: u32,
    n: u32,
}

impl SchemeParams {
    pub fn new(k: u32, n: u32) -> Result<SchemeParams> {
        if k < 2 || k > n {
            return Err(Error::InvalidScheme { k, n });
        }
        Ok(SchemeParams { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn check_t(&self, t: u32) -> Result<()> {
        if t < 1 || t > self.n {
            return Err(Error::InvalidStackCount { t, n: self.n });
        }
        Ok(())
    }
}

impl std::fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.k, self.n)
    }
}

/// How stacked share pixels are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StackOp {
    /// Physical superimposition: black if any stacked pixel is black.
    Or,
    /// Computational parity of the stacked pixels.
    Xor,
}

impl std::fmt::Display for StackOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StackOp::Or => write!(f, "OR"),
            StackOp::Xor => write!(f, "XOR"),
        }
    }
}

/// Identifies one expected light-transmission quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransmissionSpec {
    pub scheme: SchemeParams,
    pub t: u32,
    pub op: StackOp,
    pub s: PixelColor,
}

impl TransmissionSpec {
    pub fn new(scheme: SchemeParams, t: u32, op: StackOp, s: PixelColor) -> Result<Self> {
        scheme.check_t(t)?;
        Ok(TransmissionSpec { scheme, t, op, s })
    }
}

/// Light transmission of the OR-stack of `t` shares of a fixed `(j,n)`
/// sub-scheme over the secret region of color `s`.
pub fn fixed_or_transmission(j: u32, n: u32, t: u32, s: PixelColor) -> Result<Ratio> {
    let scheme = SchemeParams::new(j, n)?;
    scheme.check_t(t)?;
    if t < j {
        return Ok(Ratio::half_pow(t));
    }
    // cover = C(t,j)/C(n,j): probability the t stacked shares contain the
    // whole parity core
    let cover = binom_ratio(t, n, j as i64)?;
    let rest = &Ratio::one().checked_sub(&cover)? * &Ratio::half_pow(t);
    match s {
        PixelColor::White => Ok(&(&cover * &Ratio::half_pow(t - 1)) + &rest),
        PixelColor::Black => Ok(rest),
    }
}

/// Light transmission of the XOR of `t` shares of a fixed `(j,n)`
/// sub-scheme over the secret region of color `s`.
pub fn fixed_xor_transmission(j: u32, n: u32, t: u32, s: PixelColor) -> Result<Ratio> {
    let scheme = SchemeParams::new(j, n)?;
    scheme.check_t(t)?;
    let half = Ratio::new(1, 2)?;
    if t != j {
        return Ok(half);
    }
    let inv = binom_ratio(j, n, j as i64)?; // 1/C(n,j)
    match s {
        PixelColor::White => Ok(&half * &(&Ratio::one() + &inv)),
        PixelColor::Black => Ok(&half * &Ratio::one().checked_sub(&inv)?),
    }
}

fn fixed_transmission(j: u32, n: u32, t: u32, op: StackOp, s: PixelColor) -> Result<Ratio> {
    match op {
        StackOp::Or => fixed_or_transmission(j, n, t, s),
        StackOp::Xor => fixed_xor_transmission(j, n, t, s),
    }
}

/// Average light transmission of the full `(k,n)` scheme: the mean of the
/// fixed `(j,n)` transmissions over `j = k..=n`.
pub fn avg_transmission(spec: &TransmissionSpec) -> Result<Ratio> {
    let (k, n) = (spec.scheme.k, spec.scheme.n);
    let mut sum = Ratio::zero();
    for j in k..=n {
        sum = &sum + &fixed_transmission(j, n, spec.t, spec.op, spec.s)?;
    }
    sum.checked_div(&Ratio::from_integer((n - k + 1) as u64))
}

/// Contrast `(t0 - t1) / (1 + t1)` of a reconstruction whose white-region
/// transmission is `t0` and black-region transmission is `t1`.
pub fn contrast(t0: &Ratio, t1: &Ratio) -> Result<Ratio> {
    let diff = t0.checked_sub(t1).map_err(|_| Error::ContrastInverted {
        t0: t0.to_string(),
        t1: t1.to_string(),
    })?;
    diff.checked_div(&(&Ratio::one() + t1))
}

/// Contrast of the `(k,n)` scheme when `t` shares are combined with `op`.
pub fn scheme_contrast(scheme: SchemeParams, t: u32, op: StackOp) -> Result<Ratio> {
    let t0 = avg_transmission(&TransmissionSpec::new(scheme, t, op, PixelColor::White)?)?;
    let t1 = avg_transmission(&TransmissionSpec::new(scheme, t, op, PixelColor::Black)?)?;
    contrast(&t0, &t1)
}

/// One row of a contrast table: both contrasts and the transmissions they
/// were built from, for a single `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContrastRow {
    pub scheme: SchemeParams,
    pub t: u32,
    pub alpha_or: Ratio,
    pub alpha_xor: Ratio,
    pub t0_or: Ratio,
    pub t1_or: Ratio,
    pub t0_xor: Ratio,
    pub t1_xor: Ratio,
}

/// Contrast table rows for `t = k..=n`.
pub fn contrast_table(scheme: SchemeParams) -> Result<Vec<ContrastRow>> {
    let mut rows = Vec::new();
    for t in scheme.k..=scheme.n {
        let tr = |op, s| avg_transmission(&TransmissionSpec::new(scheme, t, op, s).unwrap());
        let t0_or = tr(StackOp::Or, PixelColor::White)?;
        let t1_or = tr(StackOp::Or, PixelColor::Black)?;
        let t0_xor = tr(StackOp::Xor, PixelColor::White)?;
        let t1_xor = tr(StackOp::Xor, PixelColor::Black)?;
        rows.push(ContrastRow {
            scheme,
            t,
            alpha_or: contrast(&t0_or, &t1_or)?,
            alpha_xor: contrast(&t0_xor, &t1_xor)?,
            t0_or,
            t1_or,
            t0_xor,
            t1_xor,
        });
    }
    Ok(rows)
}

/// One row of the corrigendum diff: the contrast pair as previously
/// published against the recomputed pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrigendumRow {
    pub scheme: SchemeParams,
    pub t: u32,
    pub claimed_or: Ratio,
    pub claimed_xor: Ratio,
    pub corrected_or: Ratio,
    pub corrected_xor: Ratio,
    pub or_match: bool,
    pub xor_match: bool,
}

/// The ten previously published contrast pairs. These are reference data,
/// not derivable; they exist only so the diff can be reported.
#[allow(clippy::type_complexity)]
const CLAIMED: [(u32, u32, u32, (i64, i64), (i64, i64)); 10] = [
    (2, 3, 2, (1, 10), (1, 6)),
    (2, 3, 3, (5, 17), (2, 5)),
    (2, 4, 2, (1, 15), (1, 9)),
    (2, 4, 3, (14, 107), (2, 57)),
    (2, 4, 4, (11, 49), (3, 8)),
    (3, 5, 3, (2, 269), (2, 89)),
    (3, 5, 4, (3, 126), (1, 27)),
    (3, 5, 5, (1, 16), (1, 4)),
    (4, 5, 4, (2, 169), (1, 29)),
    (4, 5, 5, (1, 16), (2, 5)),
];

/// Diff of the previously published contrast values against the
/// recomputed ones, one row per published `(scheme, t)`. Comparison is by
/// value, so a published unreduced form matches its reduced equal.
pub fn corrigendum_report() -> Result<Vec<CorrigendumRow>> {
    CLAIMED
        .iter()
        .map(|&(k, n, t, or, xor)| {
            let scheme = SchemeParams::new(k, n)?;
            let claimed_or = Ratio::new(or.0, or.1)?;
            let claimed_xor = Ratio::new(xor.0, xor.1)?;
            let corrected_or = scheme_contrast(scheme, t, StackOp::Or)?;
            let corrected_xor = scheme_contrast(scheme, t, StackOp::Xor)?;
            Ok(CorrigendumRow {
                scheme,
                t,
                or_match: claimed_or == corrected_or,
                xor_match: claimed_xor == corrected_xor,
                claimed_or,
                claimed_xor,
                corrected_or,
                corrected_xor,
            })
        })
        .collect()
}
