//! Ground truth for the generator and the closed forms.
//!
//! [`enumerate_transmission`] walks every equally likely outcome of the
//! per-pixel encoder — core placement, free core bits, filler bits, and
//! (for the averaged policy) the sub-threshold draw — and sums exact
//! rational weights. No floating point is involved, so agreement with the
//! analytic module can be asserted as fraction equality.
//!
//! The enumeration builds share vectors from the generation rules
//! directly rather than calling into the codec; the codec path is
//! exercised separately by [`monte_carlo_transmission`].

use crate::analytic::{self, SchemeParams, StackOp, TransmissionSpec};
use crate::codec::{self, EncodingPolicy, PixelColor, PolicyVariant};
use crate::error::{Error, Result};
use crate::numeric::{binom, Ratio};

/// Default limit on the share count for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: u32 = 8;

/// Trials per Monte Carlo chunk. Each chunk draws from its own derived
/// substream, so totals do not depend on how chunks are scheduled.
pub const MC_CHUNK: u64 = 1 << 16;

/// Exact expected white fraction of a stacked reconstruction, with the
/// number of equally weighted generator outcomes that were inspected
/// per sub-threshold.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub spec: TransmissionSpec,
    pub policy: EncodingPolicy,
    pub exact: Ratio,
    pub outcome_count: u128,
}

/// A seeded Monte Carlo estimate of the same quantity.
#[derive(Debug, Clone)]
pub struct McEstimate {
    pub spec: TransmissionSpec,
    pub trials: u64,
    pub white_count: u64,
    pub estimate: f64,
    pub stderr: f64,
}

fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        let states: u128 = (0..=n)
            .map(|j| u128::try_from(binom(n, j as i64)).unwrap() << (n - 1))
            .sum();
        return Err(Error::EnumerationCapExceeded { n, cap, states });
    }
    Ok(())
}

/// Exact white fraction of `op` over the share positions in `subset`
/// (bitmask) for the fixed `(j,n)` encoding of secret pixel `s`.
fn enumerate_fixed_subset(j: u32, n: u32, subset: u32, op: StackOp, s: PixelColor) -> Ratio {
    let mut white: u64 = 0;
    let mut total: u64 = 0;
    // every j-subset of positions hosts the parity core
    for placement in 0u32..1 << n {
        if placement.count_ones() != j {
            continue;
        }
        let core_positions: Vec<u32> = (0..n).filter(|i| placement >> i & 1 == 1).collect();
        let filler_positions: Vec<u32> = (0..n).filter(|i| placement >> i & 1 == 0).collect();
        for free in 0u32..1 << (j - 1) {
            // closer bit makes the core parity equal the secret
            let closer = (free.count_ones() as u8 ^ s.bit()) & 1;
            for filler in 0u32..1 << (n - j) {
                let mut word = 0u32;
                for (idx, &pos) in core_positions.iter().enumerate() {
                    let bit = if idx as u32 == j - 1 {
                        closer as u32
                    } else {
                        free >> idx & 1
                    };
                    word |= bit << pos;
                }
                for (idx, &pos) in filler_positions.iter().enumerate() {
                    word |= (filler >> idx & 1) << pos;
                }
                let selected = word & subset;
                let is_white = match op {
                    StackOp::Or => selected == 0,
                    StackOp::Xor => selected.count_ones().is_multiple_of(2),
                };
                white += is_white as u64;
                total += 1;
            }
        }
    }
    Ratio::new(white as i64, total as i64).unwrap()
}

fn enumerate_subset(policy: &EncodingPolicy, subset: u32, op: StackOp, s: PixelColor) -> Ratio {
    let (k, n) = (policy.scheme().k(), policy.scheme().n());
    match policy.variant() {
        PolicyVariant::FixedThreshold(j) => enumerate_fixed_subset(j, n, subset, op, s),
        PolicyVariant::Averaged => {
            let mut sum = Ratio::zero();
            for j in k..=n {
                sum = &sum + &enumerate_fixed_subset(j, n, subset, op, s);
            }
            sum.checked_div(&Ratio::from_integer((n - k + 1) as u64))
                .unwrap()
        }
    }
}

fn outcome_count(policy: &EncodingPolicy) -> u128 {
    let n = policy.scheme().n();
    let per_j = |j: u32| u128::try_from(binom(n, j as i64)).unwrap() << (n - 1);
    match policy.variant() {
        PolicyVariant::FixedThreshold(j) => per_j(j),
        PolicyVariant::Averaged => (policy.scheme().k()..=n).map(per_j).sum(),
    }
}

/// Exact expected white fraction of stacking shares `1..=t`, by brute
/// force over all generator randomness.
pub fn enumerate_transmission(
    policy: &EncodingPolicy,
    spec: &TransmissionSpec,
) -> Result<EnumerationResult> {
    enumerate_transmission_capped(policy, spec, DEFAULT_ENUM_CAP)
}

pub fn enumerate_transmission_capped(
    policy: &EncodingPolicy,
    spec: &TransmissionSpec,
    cap: u32,
) -> Result<EnumerationResult> {
    let n = policy.scheme().n();
    check_cap(n, cap)?;
    let subset = (1u32 << spec.t) - 1;
    Ok(EnumerationResult {
        spec: *spec,
        policy: *policy,
        exact: enumerate_subset(policy, subset, spec.op, spec.s),
        outcome_count: outcome_count(policy),
    })
}

/// True iff the enumerated transmission is identical for every `t`-subset
/// of the `n` shares, i.e. the generator is exchangeable across share
/// positions.
pub fn enumerate_all_subsets_check(
    policy: &EncodingPolicy,
    t: u32,
    op: StackOp,
    s: PixelColor,
    cap: u32,
) -> Result<bool> {
    let n = policy.scheme().n();
    check_cap(n, cap)?;
    let mut reference = None;
    for subset in 0u32..1 << n {
        if subset.count_ones() != t {
            continue;
        }
        let value = enumerate_subset(policy, subset, op, s);
        match &reference {
            None => reference = Some(value),
            Some(expected) if *expected != value => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Seeded Monte Carlo estimate through the real codec path. Trials are
/// split into fixed-size chunks, each with its own substream derived from
/// `(seed, chunk index)`, so the result is independent of scheduling.
pub fn monte_carlo_transmission(
    policy: &EncodingPolicy,
    spec: &TransmissionSpec,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let mut white_count = 0u64;
    let mut done = 0u64;
    let mut chunk_index = 0u64;
    while done < trials {
        let chunk = (trials - done).min(MC_CHUNK);
        let mut rng = codec::pixel_rng(seed, chunk_index);
        for _ in 0..chunk {
            let vector = codec::encode_pixel(spec.s, policy, &mut rng)?;
            let stacked = codec::stack(&vector.bits()[..spec.t as usize], spec.op)?;
            white_count += !stacked.is_black() as u64;
        }
        done += chunk;
        chunk_index += 1;
    }
    let estimate = white_count as f64 / trials as f64;
    Ok(McEstimate {
        spec: *spec,
        trials,
        white_count,
        estimate,
        stderr: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
    })
}

/// One `(t, op, s)` comparison of closed form, enumeration, and Monte
/// Carlo.
#[derive(Debug, Clone)]
pub struct VerifyEntry {
    pub t: u32,
    pub op: StackOp,
    pub s: PixelColor,
    pub closed_form: Ratio,
    pub enumerated: Ratio,
    pub mc: McEstimate,
    pub exact_match: bool,
    pub mc_deviation_sigmas: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub scheme: SchemeParams,
    pub sigma_limit: f64,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Compares closed form, enumeration, and Monte Carlo for every
/// `t = 1..=n`, both ops, both secret colors, under the averaged policy.
pub fn verify_scheme(
    scheme: SchemeParams,
    trials: u64,
    seed: u64,
    sigma_limit: f64,
    cap: u32,
) -> Result<VerifyReport> {
    check_cap(scheme.n(), cap)?;
    let policy = EncodingPolicy::averaged(scheme);
    let mut entries = Vec::new();
    for t in 1..=scheme.n() {
        for op in [StackOp::Or, StackOp::Xor] {
            for s in [PixelColor::White, PixelColor::Black] {
                let spec = TransmissionSpec::new(scheme, t, op, s)?;
                let closed_form = analytic::avg_transmission(&spec)?;
                let enumerated = enumerate_transmission_capped(&policy, &spec, cap)?.exact;
                let mc = monte_carlo_transmission(&policy, &spec, trials, seed)?;
                let deviation = (mc.estimate - closed_form.to_f64()).abs();
                let mc_deviation_sigmas = if deviation == 0.0 {
                    0.0
                } else {
                    deviation / mc.stderr
                };
                let exact_match = enumerated == closed_form;
                entries.push(VerifyEntry {
                    t,
                    op,
                    s,
                    passed: exact_match && mc_deviation_sigmas <= sigma_limit,
                    exact_match,
                    mc_deviation_sigmas,
                    closed_form,
                    enumerated,
                    mc,
                });
            }
        }
    }
    Ok(VerifyReport {
        scheme,
        sigma_limit,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PixelColor::{Black, White};

    fn scheme(k: u32, n: u32) -> SchemeParams {
        SchemeParams::new(k, n).unwrap()
    }

    fn r(n: i64, d: i64) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    fn enumerate(policy: &EncodingPolicy, t: u32, op: StackOp, s: PixelColor) -> Ratio {
        let spec = TransmissionSpec::new(policy.scheme(), t, op, s).unwrap();
        enumerate_transmission(policy, &spec).unwrap().exact
    }

    #[test]
    fn enumerated_worked_examples() {
        let averaged = EncodingPolicy::averaged(scheme(2, 3));
        assert_eq!(enumerate(&averaged, 2, StackOp::Or, Black), r(5, 24));

        let averaged = EncodingPolicy::averaged(scheme(2, 4));
        assert_eq!(enumerate(&averaged, 3, StackOp::Xor, White), r(13, 24));

        let fixed = EncodingPolicy::fixed(scheme(3, 3), 3).unwrap();
        assert_eq!(enumerate(&fixed, 3, StackOp::Xor, White), Ratio::one());
    }

    #[test]
    fn enumerated_fixed_matches_codec_claims() {
        // expected white fractions stated for the generator itself
        let fixed = EncodingPolicy::fixed(scheme(2, 3), 2).unwrap();
        assert_eq!(enumerate(&fixed, 2, StackOp::Or, Black), r(1, 6));
        let fixed = EncodingPolicy::fixed(scheme(2, 4), 2).unwrap();
        assert_eq!(enumerate(&fixed, 2, StackOp::Xor, White), r(7, 12));
    }

    #[test]
    fn outcome_counts() {
        let averaged = EncodingPolicy::averaged(scheme(2, 3));
        let spec = TransmissionSpec::new(scheme(2, 3), 2, StackOp::Or, White).unwrap();
        let result = enumerate_transmission(&averaged, &spec).unwrap();
        // C(3,2)*4 + C(3,3)*4
        assert_eq!(result.outcome_count, 16);
    }

    #[test]
    fn subset_invariance_small_cases() {
        for (k, n, t) in [(2, 3, 2), (2, 4, 3), (2, 4, 4)] {
            let policy = EncodingPolicy::averaged(scheme(k, n));
            for op in [StackOp::Or, StackOp::Xor] {
                for s in [White, Black] {
                    assert!(enumerate_all_subsets_check(&policy, t, op, s, 8).unwrap());
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let policy = EncodingPolicy::averaged(scheme(2, 6));
        let spec = TransmissionSpec::new(scheme(2, 6), 2, StackOp::Or, White).unwrap();
        match enumerate_transmission_capped(&policy, &spec, 5) {
            Err(Error::EnumerationCapExceeded { n: 6, cap: 5, states }) => {
                assert!(states > 0)
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_determinism_and_degenerate_trials() {
        let policy = EncodingPolicy::averaged(scheme(2, 3));
        let spec = TransmissionSpec::new(scheme(2, 3), 2, StackOp::Or, White).unwrap();
        let a = monte_carlo_transmission(&policy, &spec, 10_000, 1).unwrap();
        let b = monte_carlo_transmission(&policy, &spec, 10_000, 1).unwrap();
        assert_eq!(a.white_count, b.white_count);

        let single = monte_carlo_transmission(&policy, &spec, 1, 1).unwrap();
        assert!(single.estimate == 0.0 || single.estimate == 1.0);
    }

    #[test]
    fn verify_small_scheme_passes() {
        let report = verify_scheme(scheme(2, 3), 20_000, 0, 5.0, 8).unwrap();
        assert_eq!(report.entries.len(), 12);
        assert!(report.all_passed(), "{report:#?}");
    }

    #[test]
    fn verify_includes_below_threshold_security() {
        let report = verify_scheme(scheme(3, 5), 5_000, 0, 5.0, 8).unwrap();
        for op in [StackOp::Or, StackOp::Xor] {
            for t in 1..3 {
                let find = |s| {
                    report
                        .entries
                        .iter()
                        .find(|e| e.t == t && e.op == op && e.s == s)
                        .unwrap()
                };
                assert_eq!(find(White).enumerated, find(Black).enumerated);
            }
        }
    }
}
