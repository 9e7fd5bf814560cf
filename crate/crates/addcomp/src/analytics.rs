//! Exact counting functions and the deficiency decomposition.
//!
//! For a constructed pair, A(x) and B(x) count members up to x; B(x) is
//! evaluated purely from the interval descriptors by inclusion-exclusion, so
//! it is exact at any magnitude. The deficiency A(x)B(x) − x splits exactly
//! into y + z − r, where y counts excess representation multiplicities among
//! sums of A ∩ [1,x] and B ∩ [1,x], z counts the distinct sums that overshoot
//! x, and r counts the integers up to x left uncovered.
//!
//! Operations that scan or materialize up to x are guarded by an enumeration
//! limit and fail loudly beyond it; nothing here approximates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::construction::ComplementPair;

/// Default bound for operations that enumerate integers up to x.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

/// Cap on the uncovered-gap list; the count r is always exact regardless.
pub const MAX_GAP_LIST: usize = 10_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("x = {x} is below the admissible minimum for this operation")]
    BelowMinimum { x: BigInt },
    #[error("x = {x} exceeds the enumeration limit {limit}")]
    LimitExceeded { x: BigInt, limit: u64 },
    #[error("zero denominator: {what}")]
    ZeroDenominator { what: String },
    #[error("A(x) = {count} is too small for the lower-bound report (need ≥ 2)")]
    DegenerateA { count: u64 },
}

/// A(x): members of all explicit blocks that are ≤ x. Binary search per block.
pub fn count_a(pair: &ComplementPair, x: &BigInt) -> u64 {
    pair.a_blocks()
        .iter()
        .map(|b| b.elements.count_up_to(x) as u64)
        .sum()
}

/// Multiples of `modulus` in the open interval (lower, upper), clipped to ≤ x.
fn multiples_in_open_clipped(modulus: &BigInt, lower: &BigInt, upper: &BigInt, x: &BigInt) -> BigInt {
    let hi = (upper - 1u32).min(x.clone());
    if hi <= *lower {
        return BigInt::zero();
    }
    hi.div_floor(modulus) - lower.div_floor(modulus)
}

/// B(x): exact count of descriptor members in [1, x].
///
/// Adjacent descriptors overlap in ((k+1)u_{k+1}, (k+3)u_{k+1}) and their
/// moduli are distinct primes, so the double-counted members are exactly the
/// multiples of p_k·p_{k+1} there. Non-adjacent descriptors never overlap:
/// (k+2)u_{k+2} > (k+2)²u_{k+1} ≥ (k+3)u_{k+1}, which also rules out triple
/// overlaps, so pairwise subtraction is complete inclusion-exclusion.
pub fn count_b(pair: &ComplementPair, x: &BigInt) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let descriptors = pair.b_descriptors();
    let mut total = BigInt::zero();
    for d in descriptors {
        total += multiples_in_open_clipped(&d.modulus, &d.lower, &d.upper, x);
    }
    for w in descriptors.windows(2) {
        let lower = (&w[0].lower).max(&w[1].lower);
        let upper = (&w[0].upper).min(&w[1].upper);
        if lower < upper {
            let modulus = &w[0].modulus * &w[1].modulus;
            total -= multiples_in_open_clipped(&modulus, lower, upper, x);
        }
    }
    total
}

/// Membership test against the descriptors.
pub fn is_in_b(pair: &ComplementPair, n: &BigInt) -> bool {
    pair.b_descriptors().iter().any(|d| d.contains(n))
}

/// a*(x): largest member of A that is ≤ x. Defined for x ≥ 1 since 1 ∈ A.
pub fn a_star(pair: &ComplementPair, x: &BigInt) -> Result<BigInt, AnalyticsError> {
    if *x < BigInt::one() {
        return Err(AnalyticsError::BelowMinimum { x: x.clone() });
    }
    pair.a_blocks()
        .iter()
        .rev()
        .find_map(|b| b.elements.max_up_to(x))
        .cloned()
        .ok_or_else(|| AnalyticsError::BelowMinimum { x: x.clone() })
}

/// Fixed-size bit set used for exact sum accounting.
struct BitSet {
    words: Vec<u64>,
    bits: usize,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet {
            words: vec![0; bits.div_ceil(64)],
            bits,
        }
    }

    fn set(&mut self, i: usize) {
        debug_assert!(i < self.bits);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        i < self.bits && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// self |= src << shift, dropping nothing (callers size `self` to fit).
    fn or_shifted(&mut self, src: &BitSet, shift: usize) {
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        let n = self.words.len();
        for (i, &w) in src.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let d = i + word_shift;
            if d >= n {
                break;
            }
            self.words[d] |= w << bit_shift;
            if bit_shift != 0 && d + 1 < n {
                self.words[d + 1] |= w >> (64 - bit_shift);
            }
        }
    }

    /// Popcount over the inclusive index range [lo, hi].
    fn count_range(&self, lo: usize, hi: usize) -> u64 {
        if self.bits == 0 || lo > hi || lo >= self.bits {
            return 0;
        }
        let hi = hi.min(self.bits - 1);
        let (lw, lb) = (lo / 64, lo % 64);
        let (hw, hb) = (hi / 64, hi % 64);
        let lo_mask = !0u64 << lb;
        let hi_mask = if hb == 63 { !0 } else { (1u64 << (hb + 1)) - 1 };
        if lw == hw {
            return (self.words[lw] & lo_mask & hi_mask).count_ones() as u64;
        }
        let mut total = (self.words[lw] & lo_mask).count_ones() as u64;
        for w in &self.words[lw + 1..hw] {
            total += w.count_ones() as u64;
        }
        total + (self.words[hw] & hi_mask).count_ones() as u64
    }
}

/// Bit n ⇔ n ∈ B, for n ≤ x, filled by striding each descriptor.
fn b_bitset_up_to(pair: &ComplementPair, x: u64) -> BitSet {
    let mut bits = BitSet::new(x as usize + 1);
    let big_x = BigInt::from(x);
    for d in pair.b_descriptors() {
        if d.lower >= big_x {
            continue;
        }
        let lower = d.lower.to_u64().expect("clipped below x");
        let modulus = match d.modulus.to_u64() {
            Some(m) if m <= x => m,
            // A modulus beyond x has no multiples in range.
            _ => continue,
        };
        let hi = (&d.upper - 1u32).min(big_x.clone());
        let hi = hi.to_u64().expect("clipped at x");
        // First multiple strictly above the lower endpoint, overflow-safe.
        let start = (lower as u128 / modulus as u128 + 1) * modulus as u128;
        if start > hi as u128 {
            continue;
        }
        let mut n = start as u64;
        while n <= hi {
            bits.set(n as usize);
            n += modulus;
        }
    }
    bits
}

/// Exact sum accounting for U = A ∩ [1,x], V = B ∩ [1,x]: the set of distinct
/// sums lives in a bit set over [0, 2x].
struct SumScan {
    a_count: u64,
    b_count: u64,
    distinct_sums: u64,
    covered: u64,
    sums: BitSet,
}

fn sum_scan(pair: &ComplementPair, x: u64) -> SumScan {
    let big_x = BigInt::from(x);
    let b_bits = b_bitset_up_to(pair, x);
    let b_count = b_bits.count_range(1, x as usize);
    let a_members: Vec<u64> = pair
        .a_blocks()
        .iter()
        .flat_map(|b| b.elements.iter())
        .filter(|a| **a <= big_x)
        .map(|a| a.to_u64().expect("bounded by x"))
        .collect();
    let mut sums = BitSet::new(2 * x as usize + 1);
    for &a in &a_members {
        sums.or_shifted(&b_bits, a as usize);
    }
    let covered = sums.count_range(1, x as usize);
    let distinct_sums = sums.count_range(0, 2 * x as usize);
    SumScan {
        a_count: a_members.len() as u64,
        b_count,
        distinct_sums,
        covered,
        sums,
    }
}

/// Integers in [1, x] missing from the sumset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncoveredReport {
    /// r(x): exact count of uncovered integers ≤ x.
    pub r: u64,
    /// The uncovered integers, capped at [`MAX_GAP_LIST`] entries.
    pub gaps: Vec<u64>,
    pub truncated: bool,
}

/// Scan [1, x] for integers with no representation a + b, a ∈ A, b ∈ B.
pub fn uncovered_up_to(
    pair: &ComplementPair,
    x: u64,
    limit: u64,
) -> Result<UncoveredReport, AnalyticsError> {
    if x > limit {
        return Err(AnalyticsError::LimitExceeded {
            x: BigInt::from(x),
            limit,
        });
    }
    let scan = sum_scan(pair, x);
    let r = x - scan.covered;
    let mut gaps = Vec::new();
    let mut truncated = false;
    for n in 1..=x {
        if !scan.sums.get(n as usize) {
            if gaps.len() == MAX_GAP_LIST {
                truncated = true;
                break;
            }
            gaps.push(n);
        }
    }
    Ok(UncoveredReport { r, gaps, truncated })
}

/// Exact decomposition of the deficiency at one checkpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyReport {
    pub x: BigInt,
    pub count_a: u64,
    pub count_b: BigInt,
    pub a_star: BigInt,
    /// r(x): integers ≤ x not represented.
    pub r: u64,
    /// Excess representation multiplicities among sums of U and V.
    pub y: BigInt,
    /// Distinct sums that land above x.
    pub z: BigInt,
    /// A(x)·B(x) − x.
    pub deficiency: BigInt,
    /// A(x)·B(x) / x, exact.
    pub exactness_ratio: BigRational,
    /// Whether deficiency = y + z − r held exactly.
    pub identity_ok: bool,
}

/// Compute the decomposition at x: y from the representation profile of
/// U = A ∩ [1,x] against V = B ∩ [1,x], z from the distinct overshooting
/// sums, r from the uncovered scan.
pub fn deficiency_decomposition(
    pair: &ComplementPair,
    x: u64,
    limit: u64,
) -> Result<DeficiencyReport, AnalyticsError> {
    if x == 0 {
        return Err(AnalyticsError::BelowMinimum {
            x: BigInt::zero(),
        });
    }
    if x > limit {
        return Err(AnalyticsError::LimitExceeded {
            x: BigInt::from(x),
            limit,
        });
    }
    let big_x = BigInt::from(x);
    let scan = sum_scan(pair, x);
    debug_assert_eq!(scan.a_count, count_a(pair, &big_x));
    debug_assert_eq!(BigInt::from(scan.b_count), count_b(pair, &big_x));

    // Total pair mass |U|·|V| minus the support size is exactly the excess
    // multiplicity sum Σ_{σ(n)>1} (σ(n) − 1).
    let pair_mass = scan.a_count as u128 * scan.b_count as u128;
    let y = BigInt::from(pair_mass - scan.distinct_sums as u128);
    let z = BigInt::from(scan.distinct_sums - scan.covered);
    let r = x - scan.covered;

    let product = BigInt::from(scan.a_count) * BigInt::from(scan.b_count);
    let deficiency = &product - &big_x;
    let identity_ok = deficiency == &y + &z - BigInt::from(r);
    let a_star_val = a_star(pair, &big_x)?;
    Ok(DeficiencyReport {
        x: big_x.clone(),
        count_a: scan.a_count,
        count_b: BigInt::from(scan.b_count),
        a_star: a_star_val,
        r,
        y,
        z,
        deficiency,
        exactness_ratio: BigRational::new(product, big_x),
        identity_ok,
    })
}

/// Doubling ratios of both counting functions at one checkpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyReport {
    pub x: BigInt,
    pub ratio_a: BigRational,
    pub ratio_b: BigRational,
}

/// Exact A(2x)/A(x) and B(2x)/B(x) for each requested x.
pub fn dichotomy_ratios(
    pair: &ComplementPair,
    xs: &[BigInt],
) -> Result<Vec<DichotomyReport>, AnalyticsError> {
    xs.iter()
        .map(|x| {
            let a1 = count_a(pair, x);
            if a1 == 0 {
                return Err(AnalyticsError::ZeroDenominator {
                    what: format!("A({x}) = 0"),
                });
            }
            let b1 = count_b(pair, x);
            if b1.is_zero() {
                return Err(AnalyticsError::ZeroDenominator {
                    what: format!("B({x}) = 0"),
                });
            }
            let x2 = x * 2u32;
            let a2 = count_a(pair, &x2);
            let b2 = count_b(pair, &x2);
            Ok(DichotomyReport {
                x: x.clone(),
                ratio_a: BigRational::new(BigInt::from(a2), BigInt::from(a1)),
                ratio_b: BigRational::new(b2, b1),
            })
        })
        .collect()
}

/// (Σ_{a ∈ A, a ≤ x} a) / (x · A(x)), exact. Diagnostic for how small the
/// members of A are relative to their counting range.
pub fn mean_a_ratio(pair: &ComplementPair, x: &BigInt) -> Result<BigRational, AnalyticsError> {
    if *x < BigInt::one() {
        return Err(AnalyticsError::BelowMinimum { x: x.clone() });
    }
    let a_count = count_a(pair, x);
    if a_count == 0 {
        return Err(AnalyticsError::ZeroDenominator {
            what: format!("A({x}) = 0"),
        });
    }
    let mut sum = BigInt::zero();
    for block in pair.a_blocks() {
        for a in block.elements.iter() {
            if a <= x {
                sum += a;
            }
        }
    }
    Ok(BigRational::new(sum, x * BigInt::from(a_count)))
}

/// Finite-scale form of the deficiency lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundReport {
    pub x: BigInt,
    /// A(x)·B(x) − x.
    pub lhs: BigInt,
    /// (1−ε)·a*(x)/(A(x)−1) − r(x)·A(x)/(A(x)−1), exact.
    pub rhs: BigRational,
    pub satisfied: bool,
}

/// Evaluate the rearranged lower bound at one checkpoint. The underlying
/// statement is asymptotic; finite checkpoints may fail for tiny ε and the
/// result is reported, never asserted.
pub fn lower_bound_report(
    pair: &ComplementPair,
    x: u64,
    epsilon: &BigRational,
    limit: u64,
) -> Result<LowerBoundReport, AnalyticsError> {
    let big_x = BigInt::from(x);
    let a_count = count_a(pair, &big_x);
    if a_count < 2 {
        return Err(AnalyticsError::DegenerateA { count: a_count });
    }
    let r = uncovered_up_to(pair, x, limit)?.r;
    let b_count = count_b(pair, &big_x);
    let lhs = BigInt::from(a_count) * b_count - &big_x;
    let a_rat = BigRational::from_integer(BigInt::from(a_count));
    let denom = &a_rat - BigRational::one();
    let t = BigRational::from_integer(a_star(pair, &big_x)?);
    let r_rat = BigRational::from_integer(BigInt::from(r));
    let rhs = (BigRational::one() - epsilon) * &t / &denom - r_rat * &a_rat / &denom;
    let satisfied = BigRational::from_integer(lhs.clone()) >= rhs;
    Ok(LowerBoundReport {
        x: big_x,
        lhs,
        rhs,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{construct, GrowthConfig};
    use num_traits::FromPrimitive;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn k2_pair() -> ComplementPair {
        construct(&GrowthConfig::new(2)).unwrap()
    }

    fn k3_pair() -> ComplementPair {
        construct(&GrowthConfig::new(3)).unwrap()
    }

    /// Literal membership test: trial-divide against every descriptor.
    fn naive_in_b(pair: &ComplementPair, n: u64) -> bool {
        let n = big(n as i64);
        pair.b_descriptors()
            .iter()
            .any(|d| n > d.lower && n < d.upper && (&n % &d.modulus).is_zero())
    }

    #[test]
    fn count_a_basics() {
        let pair = k2_pair();
        assert_eq!(count_a(&pair, &big(0)), 0);
        // A_1 = {1, 2}; the second block starts above u_2 = 22.
        assert_eq!(count_a(&pair, &big(12)), 2);
        let two_u2 = pair.u(2) * 2u32;
        assert_eq!(count_a(&pair, &two_u2), 11); // p_2
    }

    #[test]
    fn count_b_single_descriptor_example() {
        // Descriptor (modulus 2, interval (2, 88)): multiples 4, 6, 8, 10.
        let pair = k2_pair();
        assert_eq!(count_b(&pair, &big(10)), big(4));
        assert_eq!(count_b(&pair, pair.u(1)), BigInt::zero());
        assert_eq!(count_b(&pair, &big(0)), BigInt::zero());
    }

    #[test]
    fn count_b_matches_enumeration() {
        let pair = k3_pair();
        let mut running = 0i64;
        for n in 1..=10_000u64 {
            if naive_in_b(&pair, n) {
                running += 1;
            }
            assert_eq!(
                count_b(&pair, &big(n as i64)),
                big(running),
                "mismatch at x = {n}"
            );
        }
    }

    #[test]
    fn is_in_b_examples() {
        let pair = k2_pair();
        assert!(is_in_b(&pair, &big(4)));
        assert!(!is_in_b(&pair, &big(2)), "endpoint is exclusive");
        assert!(!is_in_b(&pair, &big(5)), "odd numbers miss modulus 2");
        assert!(!is_in_b(&pair, &big(-4)));
        for n in 1..2_000u64 {
            assert_eq!(is_in_b(&pair, &big(n as i64)), naive_in_b(&pair, n));
        }
    }

    #[test]
    fn a_star_examples() {
        let pair = k2_pair();
        assert_eq!(a_star(&pair, &big(100)).unwrap(), big(33));
        assert_eq!(a_star(&pair, &big(2)).unwrap(), big(2));
        // x ∈ A → a*(x) = x
        for a in pair.a_blocks().iter().flat_map(|b| b.elements.iter()) {
            assert_eq!(&a_star(&pair, a).unwrap(), a);
        }
        assert!(matches!(
            a_star(&pair, &big(0)),
            Err(AnalyticsError::BelowMinimum { .. })
        ));
    }

    #[test]
    fn a_star_at_u_checkpoints() {
        let pair = construct(&GrowthConfig::new(5)).unwrap();
        for k in 2..=4usize {
            let x = pair.u(k + 1).clone();
            let star = a_star(&pair, &x).unwrap();
            assert_eq!(&star, pair.a_block(k).elements.max().unwrap());
            assert!(*pair.u(k) < star && star < pair.u(k) * 2u32);
        }
    }

    #[test]
    fn uncovered_small_prefix() {
        let pair = k3_pair();
        // Scan exactly the region where coverage is guaranteed:
        // everything in (3u_1, (K+2)u_K] must be represented.
        let hi = (pair.blocks() as u64 + 2) * pair.u(3).to_u64().unwrap();
        let report = uncovered_up_to(&pair, hi, DEFAULT_ENUMERATION_LIMIT).unwrap();
        // 1 is never covered: min A = 1 and min B ≥ 2 force sums ≥ 3.
        assert_eq!(report.gaps.first(), Some(&1));
        assert!(!report.truncated);
        assert_eq!(report.r as usize, report.gaps.len());
        let lo = 3 * pair.u(1).to_u64().unwrap();
        assert!(report.gaps.iter().all(|&g| g <= lo));
    }

    #[test]
    fn uncovered_respects_limit() {
        let pair = k2_pair();
        assert!(matches!(
            uncovered_up_to(&pair, 1_001, 1_000),
            Err(AnalyticsError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn uncovered_monotone_in_x() {
        let pair = k2_pair();
        let mut last = 0;
        for x in [10u64, 50, 100, 500, 2_000] {
            let r = uncovered_up_to(&pair, x, DEFAULT_ENUMERATION_LIMIT)
                .unwrap()
                .r;
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn decomposition_identity_and_empty_prefix() {
        let pair = k3_pair();
        for x in [1u64, 2, 3, 10, 88, 1_000, 5_000] {
            let report = deficiency_decomposition(&pair, x, DEFAULT_ENUMERATION_LIMIT).unwrap();
            assert!(report.identity_ok, "identity failed at x = {x}");
        }
        // Below min(B) the prefix of B is empty, the sum profile with it:
        // y = z = 0, r = x, deficiency = A(x)·0 − x = −x.
        let report = deficiency_decomposition(&pair, 3, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(report.count_b, BigInt::zero());
        assert_eq!(report.y, BigInt::zero());
        assert_eq!(report.z, BigInt::zero());
        assert_eq!(report.r, 3);
        assert_eq!(report.deficiency, big(-3));
        assert!(report.identity_ok);
    }

    #[test]
    fn dichotomy_at_u_checkpoints() {
        let pair = construct(&GrowthConfig::new(4)).unwrap();
        for k in 1..=3usize {
            let x = pair.u(k + 1).clone();
            let reports = dichotomy_ratios(&pair, &[x]).unwrap();
            let expected = BigRational::new(
                pair.schedule().prime(k + 1).clone(),
                pair.schedule().prime(k).clone(),
            );
            assert_eq!(reports[0].ratio_a, expected, "k = {k}");
            assert!(reports[0].ratio_a >= BigRational::one());
        }
        assert!(matches!(
            dichotomy_ratios(&pair, &[BigInt::zero()]),
            Err(AnalyticsError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn mean_ratio_bounds() {
        let pair = construct(&GrowthConfig::new(4)).unwrap();
        // Termwise a ≤ x gives ratio ∈ (0, 1]; x = 1 hits 1 exactly.
        assert_eq!(
            mean_a_ratio(&pair, &big(1)).unwrap(),
            BigRational::one()
        );
        for k in 2..=3usize {
            let x = pair.u(k + 1);
            let ratio = mean_a_ratio(&pair, x).unwrap();
            assert!(ratio > BigRational::zero() && ratio <= BigRational::one());
            let cap = BigRational::from_u64(2).unwrap()
                / BigRational::from_u64(k as u64 + 1).unwrap();
            assert!(ratio < cap, "k = {k}: {ratio} ≥ {cap}");
        }
    }

    #[test]
    fn lower_bound_report_cases() {
        let pair = k3_pair();
        let x = pair.u(3).to_u64().unwrap();
        // ε = 1 collapses the first term; with r > 0 the bound is negative
        // and trivially satisfied.
        let report =
            lower_bound_report(&pair, x, &BigRational::one(), DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert!(report.rhs <= BigRational::zero());
        assert!(report.satisfied);
        let half = BigRational::new(big(1), big(2));
        let report =
            lower_bound_report(&pair, x, &half, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(report.lhs, {
            let d = deficiency_decomposition(&pair, x, DEFAULT_ENUMERATION_LIMIT).unwrap();
            d.deficiency
        });
        assert!(matches!(
            lower_bound_report(&pair, 1, &half, DEFAULT_ENUMERATION_LIMIT),
            Err(AnalyticsError::DegenerateA { .. })
        ));
    }

    #[test]
    fn bitset_shift_or_against_naive() {
        let mut src = BitSet::new(130);
        for i in [0usize, 1, 63, 64, 65, 100, 129] {
            src.set(i);
        }
        for shift in [0usize, 1, 5, 63, 64, 65, 120] {
            let mut dst = BitSet::new(300);
            dst.or_shifted(&src, shift);
            for i in 0..300 {
                let expected = i >= shift && {
                    let j = i - shift;
                    [0usize, 1, 63, 64, 65, 100, 129].contains(&j)
                };
                assert_eq!(dst.get(i), expected, "shift {shift}, bit {i}");
            }
        }
    }

    #[test]
    fn bitset_count_range_against_naive() {
        let mut bs = BitSet::new(200);
        let set_bits = [0usize, 3, 63, 64, 127, 128, 199];
        for &i in &set_bits {
            bs.set(i);
        }
        for lo in [0usize, 1, 3, 64, 128, 199] {
            for hi in [0usize, 3, 63, 64, 130, 199, 500] {
                let expected = set_bits.iter().filter(|&&b| b >= lo && b <= hi).count() as u64;
                assert_eq!(bs.count_range(lo, hi), expected, "[{lo}, {hi}]");
            }
        }
    }
}
