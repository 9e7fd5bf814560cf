//! Constructive coverage witnesses, structural audits, and fuzzing.
//!
//! Coverage is proved constructively: for n in the guaranteed range
//! (3u_1, (K+2)u_K], the block index k with (k+2)u_k < n ≤ (k+3)u_{k+1} is
//! unique, the complete residue system at level k supplies exactly one
//! a ≡ n (mod p_k), and b = n − a is then a multiple of p_k inside the k-th
//! dense-block interval. Witness checking re-derives membership through the
//! analytics predicates rather than trusting construction internals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analytics::{self, AnalyticsError};
use crate::construction::{ComplementPair, OmegaSpec};
use crate::core_sets::{
    check_excess_inequality, delta_profile, moment_identities, sigma_profile, FiniteIntSet,
};
use crate::primes::is_prime_u64;
use crate::rng::{derive_seed, sample_range_inclusive};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum VerificationError {
    #[error("n = {n} lies outside the guaranteed coverage range ({lo}, {hi}]")]
    OutOfGuaranteedRange { n: BigInt, lo: BigInt, hi: BigInt },
    #[error("witness verification failed for n = {n}: {reason}")]
    WitnessInvalid { n: BigInt, reason: String },
    #[error("invalid coverage range: {0}")]
    InvalidRange(String),
    #[error("block index {k} is out of range (need 2 ≤ k ≤ {max})")]
    InvalidBlockIndex { k: usize, max: usize },
    #[error("finite-scale claim violated: {0}")]
    ClaimViolated(String),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
}

/// A verified representation n = a + b with a in the first k explicit blocks
/// and b in the k-th dense block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub n: BigInt,
    pub k: usize,
    pub a: BigInt,
    pub b: BigInt,
}

/// One named audit check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Aggregate audit outcome; `overall` holds exactly when every check passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn record(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// The range (lo, hi] on which witnesses are guaranteed: lo = 3u_1 and
/// hi = (K+2)u_K. Beyond hi the last dense block would need u_{K+1}.
pub fn guaranteed_range(pair: &ComplementPair) -> (BigInt, BigInt) {
    let blocks = pair.blocks();
    let lo = BigInt::from(3) * pair.u(1);
    let hi = BigInt::from(blocks + 2) * pair.u(blocks);
    (lo, hi)
}

fn locate_block(pair: &ComplementPair, n: &BigInt) -> usize {
    // Ranges ((k+2)u_k, (k+3)u_{k+1}] for k = 1..K−1 tile the guaranteed
    // region, so the first satisfied upper bound identifies k.
    for k in 1..pair.blocks() {
        if *n <= BigInt::from(k + 3) * pair.u(k + 1) {
            debug_assert!(*n > BigInt::from(k + 2) * pair.u(k));
            return k;
        }
    }
    unreachable!("n was checked against the guaranteed range");
}

fn validate_witness(
    pair: &ComplementPair,
    n: &BigInt,
    k: usize,
    a: &BigInt,
) -> Result<Witness, VerificationError> {
    let fail = |reason: String| VerificationError::WitnessInvalid {
        n: n.clone(),
        reason,
    };
    let p_k = pair.schedule().prime(k);
    let b = n - a;
    if !(&b).mod_floor(p_k).is_zero() {
        return Err(fail(format!("b = {b} is not a multiple of p_{k} = {p_k}")));
    }
    let lower = BigInt::from(k) * pair.u(k);
    let upper = BigInt::from(k + 3) * pair.u(k + 1);
    if !(b > lower && b < upper) {
        return Err(fail(format!("b = {b} misses the interval ({lower}, {upper})")));
    }
    // Independent membership re-checks.
    if !analytics::is_in_b(pair, &b) {
        return Err(fail(format!("b = {b} fails descriptor membership")));
    }
    if !pair.a_blocks()[..k].iter().any(|blk| blk.elements.contains(a)) {
        return Err(fail(format!("a = {a} is not in the first {k} blocks")));
    }
    if &(a + &b) != n {
        return Err(fail("a + b does not reproduce n".into()));
    }
    Ok(Witness {
        n: n.clone(),
        k,
        a: a.clone(),
        b,
    })
}

/// Produce the constructive witness for n in the guaranteed range.
pub fn witness(pair: &ComplementPair, n: &BigInt) -> Result<Witness, VerificationError> {
    let (lo, hi) = guaranteed_range(pair);
    if !(*n > lo && *n <= hi) {
        return Err(VerificationError::OutOfGuaranteedRange {
            n: n.clone(),
            lo,
            hi,
        });
    }
    let k = locate_block(pair, n);
    let p_k = pair.schedule().prime(k);
    let target = n.mod_floor(p_k);
    let matches: Vec<&BigInt> = pair
        .level_union(k)
        .filter(|a| a.mod_floor(p_k) == target)
        .collect();
    if matches.len() != 1 {
        return Err(VerificationError::WitnessInvalid {
            n: n.clone(),
            reason: format!(
                "{} elements of the level-{k} union are congruent to n mod p_{k}",
                matches.len()
            ),
        });
    }
    validate_witness(pair, n, k, matches[0])
}

/// Residue-indexed lookup tables: entry k−1 maps each residue mod p_k to the
/// unique element of the level-k union in that class.
struct WitnessTable {
    by_block: Vec<Option<Vec<BigInt>>>,
}

impl WitnessTable {
    fn build(pair: &ComplementPair) -> Self {
        let mut by_block = Vec::with_capacity(pair.blocks().saturating_sub(1));
        for k in 1..pair.blocks() {
            let p_k = pair.schedule().prime(k);
            let size = match p_k.to_usize() {
                Some(s) => s,
                None => {
                    by_block.push(None);
                    continue;
                }
            };
            let mut table: Vec<Option<BigInt>> = vec![None; size];
            let mut valid = true;
            for a in pair.level_union(k) {
                let r = a.mod_floor(p_k).to_usize().expect("residue < p_k");
                if table[r].is_some() {
                    valid = false;
                    break;
                }
                table[r] = Some(a.clone());
            }
            if valid && table.iter().all(|e| e.is_some()) {
                by_block.push(Some(table.into_iter().map(|e| e.unwrap()).collect()));
            } else {
                // Leave selection to the linear path, which reports the
                // duplicate or the hole precisely.
                by_block.push(None);
            }
        }
        WitnessTable { by_block }
    }
}

fn witness_fast(
    pair: &ComplementPair,
    table: &WitnessTable,
    n: &BigInt,
) -> Result<Witness, VerificationError> {
    let k = locate_block(pair, n);
    match &table.by_block[k - 1] {
        Some(residues) => {
            let p_k = pair.schedule().prime(k);
            let r = n.mod_floor(p_k).to_usize().expect("residue < p_k");
            validate_witness(pair, n, k, &residues[r])
        }
        None => witness(pair, n),
    }
}

/// How coverage should be exercised over a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverageMode {
    /// Every n in [lo, hi].
    Exhaustive,
    /// `count` seeded uniform draws from [lo, hi]; reproducible per seed.
    Sampled { count: u64, seed: u64 },
}

/// Witness-verify a subrange of the guaranteed region.
///
/// Preconditions: 3u_1 < lo ≤ hi ≤ (K+2)u_K. The first failing witness
/// propagates as an error carrying the offending n.
pub fn verify_coverage(
    pair: &ComplementPair,
    lo: &BigInt,
    hi: &BigInt,
    mode: CoverageMode,
) -> Result<AuditReport, VerificationError> {
    let (guaranteed_lo, guaranteed_hi) = guaranteed_range(pair);
    if *lo <= guaranteed_lo {
        return Err(VerificationError::InvalidRange(format!(
            "lo = {lo} must exceed 3·u_1 = {guaranteed_lo}"
        )));
    }
    if *hi > guaranteed_hi {
        return Err(VerificationError::InvalidRange(format!(
            "hi = {hi} must not exceed (K+2)·u_K = {guaranteed_hi}"
        )));
    }
    if lo > hi {
        return Err(VerificationError::InvalidRange(format!(
            "lo = {lo} exceeds hi = {hi}"
        )));
    }
    let table = WitnessTable::build(pair);
    let mut report = AuditReport::default();
    match mode {
        CoverageMode::Exhaustive => {
            let mut n = lo.clone();
            let mut verified = 0u64;
            while n <= *hi {
                witness_fast(pair, &table, &n)?;
                verified += 1;
                n += 1u32;
            }
            report.record(
                "coverage-exhaustive",
                true,
                Some(format!("{verified} witnesses verified on [{lo}, {hi}]")),
            );
        }
        CoverageMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
            for _ in 0..count {
                let n = sample_range_inclusive(&mut rng, lo, hi);
                witness_fast(pair, &table, &n)?;
            }
            report.record(
                "coverage-sampled",
                true,
                Some(format!("{count} sampled witnesses verified on [{lo}, {hi}]")),
            );
        }
    }
    Ok(report)
}

/// Full structural audit of a pair. Failures become report entries, never
/// errors, so a corrupted pair yields a complete diagnosis.
pub fn verify_invariants(pair: &ComplementPair) -> AuditReport {
    let mut report = AuditReport::default();
    let blocks = pair.blocks();
    let schedule = pair.schedule();

    // Schedule: primality, cube windows, monotonicity.
    {
        let mut ok = true;
        let mut detail = None;
        for k in 1..=blocks {
            let p = schedule.prime(k);
            let prime_ok = p.to_u64().map(is_prime_u64).unwrap_or(false);
            let window_ok = if k == 1 {
                *p > BigInt::one() && *p < BigInt::from(8)
            } else {
                let k_big = BigInt::from(k);
                let next = BigInt::from(k + 1);
                *p > &k_big * &k_big * &k_big && *p < &next * &next * &next
            };
            let increasing_ok = k == 1 || schedule.prime(k - 1) < p;
            if !(prime_ok && window_ok && increasing_ok) {
                ok = false;
                detail = Some(format!("p_{k} = {p} violates the schedule contract"));
                break;
            }
        }
        report.record("schedule-primes", ok, detail);
    }

    // Block sizes: |A_1| = p_1, |A_k| = p_k − p_{k−1}.
    {
        let mut ok = pair.a_blocks().len() == blocks;
        let mut detail = if ok {
            None
        } else {
            Some(format!(
                "{} blocks present, expected {blocks}",
                pair.a_blocks().len()
            ))
        };
        for k in 1..=blocks.min(pair.a_blocks().len()) {
            let expected = if k == 1 {
                schedule.prime(1).clone()
            } else {
                schedule.prime(k) - schedule.prime(k - 1)
            };
            let got = BigInt::from(pair.a_block(k).elements.len());
            if got != expected {
                ok = false;
                detail = Some(format!("|A_{k}| = {got}, expected {expected}"));
                break;
            }
        }
        report.record("block-sizes", ok, detail);
    }

    // First block is literally {1, ..., p_1} with u_1 = p_1.
    {
        let p1 = schedule.prime(1).to_u64().unwrap_or(0);
        let expected = FiniteIntSet::new((1..=p1).map(BigInt::from).collect());
        let ok = pair.a_block(1).elements == expected && pair.u(1) == schedule.prime(1);
        report.record("first-block", ok, None);
    }

    // Interval containment: A_k ⊂ (u_k, 2u_k) strictly for k ≥ 2.
    {
        let mut ok = true;
        let mut detail = None;
        'outer: for k in 2..=blocks {
            let u_k = pair.u(k);
            let upper = u_k * 2u32;
            for a in pair.a_block(k).elements.iter() {
                if !(a > u_k && *a < upper) {
                    ok = false;
                    detail = Some(format!("A_{k} element {a} escapes ({u_k}, {upper})"));
                    break 'outer;
                }
            }
        }
        report.record("block-intervals", ok, detail);
    }

    // Growth and divisibility: u_k > k·u_{k−1} and p_k | u_k.
    {
        let mut ok = true;
        let mut detail = None;
        for k in 1..=blocks {
            let u_k = pair.u(k);
            let div_ok = u_k.mod_floor(schedule.prime(k)).is_zero();
            let growth_ok = k == 1 || *u_k > BigInt::from(k) * pair.u(k - 1);
            if !(div_ok && growth_ok) {
                ok = false;
                detail = Some(format!("u_{k} = {u_k} violates growth or divisibility"));
                break;
            }
        }
        report.record("u-growth-divisibility", ok, detail);
    }

    // Level unions: complete residue system mod p_k, and pairwise
    // incongruence mod p_j for every k ≤ j ≤ K.
    {
        let mut ok = true;
        let mut detail = None;
        'levels: for k in 1..=blocks {
            let level: Vec<&BigInt> = pair.level_union(k).collect();
            for j in k..=blocks {
                let p_j = schedule.prime(j);
                let mut residues: Vec<BigInt> =
                    level.iter().map(|a| a.mod_floor(p_j)).collect();
                residues.sort();
                residues.dedup();
                if residues.len() != level.len() {
                    ok = false;
                    detail = Some(format!(
                        "level-{k} union has a repeated residue mod p_{j}"
                    ));
                    break 'levels;
                }
            }
            // Sizes were checked separately; distinct residues mod p_k plus
            // |union| = p_k makes the system complete.
            let p_k_usize = schedule.prime(k).to_usize().unwrap_or(usize::MAX);
            if level.len() != p_k_usize {
                ok = false;
                detail = Some(format!(
                    "level-{k} union has {} members, expected p_{k}",
                    level.len()
                ));
                break;
            }
        }
        report.record("residue-systems", ok, detail);
    }

    // Descriptors: one per k ≤ K−1, correct modulus and endpoints.
    {
        let ds = pair.b_descriptors();
        let mut ok = ds.len() == blocks - 1;
        let mut detail = None;
        if !ok {
            detail = Some(format!("{} descriptors, expected {}", ds.len(), blocks - 1));
        }
        for (i, d) in ds.iter().enumerate() {
            let k = i + 1;
            let expected_lower = BigInt::from(k) * pair.u(k);
            let expected_upper = BigInt::from(k + 3) * pair.u(k + 1);
            if d.index != k
                || &d.modulus != schedule.prime(k)
                || d.lower != expected_lower
                || d.upper != expected_upper
                || d.lower >= d.upper
            {
                ok = false;
                detail = Some(format!("descriptor {k} is malformed"));
                break;
            }
        }
        report.record("descriptor-form", ok, detail);
    }

    // Non-adjacent descriptors stay disjoint.
    {
        let ds = pair.b_descriptors();
        let mut ok = true;
        let mut detail = None;
        'pairs: for i in 0..ds.len() {
            for j in i + 2..ds.len() {
                if ds[i].upper > ds[j].lower {
                    ok = false;
                    detail = Some(format!(
                        "descriptors {} and {} overlap",
                        ds[i].index, ds[j].index
                    ));
                    break 'pairs;
                }
            }
        }
        report.record("descriptor-disjointness", ok, detail);
    }

    report
}

/// Checkpoint record at x = u_{k+1}: the deficiency, its ratio against a*(x),
/// and the slow-growth comparison when a spec is supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct FelsoRecord {
    pub k: usize,
    pub x: BigInt,
    pub deficiency: BigInt,
    pub a_star: BigInt,
    /// deficiency / a*(x), exact.
    pub implied_c: BigRational,
    pub omega_value: Option<BigInt>,
    /// deficiency < ω(x), when ω was given.
    pub within_omega: Option<bool>,
}

/// Evaluate the upper-bound behavior at the checkpoint x = u_{k+1}
/// (2 ≤ k ≤ K−1). Also asserts the exact finite-scale facts A(x) = p_k and
/// u_k < a*(x) < 2u_k.
pub fn check_felso(
    pair: &ComplementPair,
    k: usize,
    omega: Option<&OmegaSpec>,
    limit: u64,
) -> Result<FelsoRecord, VerificationError> {
    let blocks = pair.blocks();
    if k < 2 || k + 1 > blocks {
        return Err(VerificationError::InvalidBlockIndex {
            k,
            max: blocks.saturating_sub(1),
        });
    }
    let x = pair.u(k + 1).clone();
    let x_u64 = x.to_u64().ok_or_else(|| AnalyticsError::LimitExceeded {
        x: x.clone(),
        limit,
    })?;
    let report = analytics::deficiency_decomposition(pair, x_u64, limit)?;

    if BigInt::from(report.count_a) != *pair.schedule().prime(k) {
        return Err(VerificationError::ClaimViolated(format!(
            "A({x}) = {} differs from p_{k}",
            report.count_a
        )));
    }
    let star = &report.a_star;
    if !(star > pair.u(k) && *star < pair.u(k) * 2u32) {
        return Err(VerificationError::ClaimViolated(format!(
            "a*({x}) = {star} escapes (u_{k}, 2u_{k})"
        )));
    }

    let omega_value = omega.map(|w| w.eval(&x));
    let within_omega = omega_value
        .as_ref()
        .map(|w| report.deficiency < *w);
    Ok(FelsoRecord {
        k,
        x,
        implied_c: BigRational::new(report.deficiency.clone(), star.clone()),
        deficiency: report.deficiency,
        a_star: report.a_star,
        omega_value,
        within_omega,
    })
}

/// Parameters for the representation-profile fuzzer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub trials: u64,
    /// Upper bound on |U| and |V|.
    pub size_bound: usize,
    /// Values are drawn from [−value_bound, value_bound].
    pub value_bound: i64,
    pub seed: u64,
}

/// Seeded fuzz over random set pairs: the excess inequality, both moment
/// identities, the per-entry doubling estimate, and the σ(n) ≤ min(|U|, |V|)
/// cap must hold on every case. Progression fixtures U = V = {0..m} maximize
/// collisions and run first. Counterexamples are reported verbatim; any
/// failure indicts the implementation, not the underlying statement.
pub fn sigma_delta_fuzz(config: &FuzzConfig) -> AuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 1));
    let mut failures: Vec<(&'static str, String)> = Vec::new();
    let mut cases = 0u64;

    let run_case = |u: &FiniteIntSet, v: &FiniteIntSet, failures: &mut Vec<(&'static str, String)>| {
        let inequality = check_excess_inequality(u, v).expect("U is nonempty");
        if !inequality.holds {
            failures.push((
                "excess-inequality",
                format!(
                    "U = {u}, V = {v}: lhs = {}, rhs numerator = {}",
                    inequality.lhs, inequality.rhs_numerator
                ),
            ));
        }
        let moments = moment_identities(u, v);
        if !(moments.first_ok && moments.second_ok) {
            failures.push((
                "moment-identities",
                format!(
                    "U = {u}, V = {v}: sums ({}, {}), squares ({}, {})",
                    moments.sum_sigma, moments.sum_delta, moments.sum_sigma_sq, moments.sum_delta_sq
                ),
            ));
        }
        let delta = delta_profile(u, v);
        for (n, c) in delta.iter() {
            if c > 1 && (c - 1) as u128 * 2 > (c as u128 * c as u128 - c as u128) {
                failures.push((
                    "pointwise-doubling",
                    format!("U = {u}, V = {v}: entry {n} count {c}"),
                ));
            }
        }
        let sigma = sigma_profile(u, v);
        let cap = u.len().min(v.len()) as u64;
        if sigma.max_count() > cap {
            failures.push((
                "sigma-cap",
                format!("U = {u}, V = {v}: max σ = {} > {cap}", sigma.max_count()),
            ));
        }
    };

    // Adversarial fixtures first: initial-segment progressions collide
    // maximally in both profiles.
    let fixture_top = config.size_bound.saturating_sub(1).min(30) as i64;
    for m in 0..=fixture_top {
        let s = FiniteIntSet::from_i64s(&(0..=m).collect::<Vec<_>>());
        run_case(&s, &s, &mut failures);
        cases += 1;
    }

    let span = 2 * config.value_bound + 1;
    for _ in 0..config.trials {
        let u_size = rng.gen_range(1..=config.size_bound.max(1)) as i64;
        let v_size = rng.gen_range(0..=config.size_bound) as i64;
        let u = random_set(&mut rng, u_size.min(span), config.value_bound);
        let v = random_set(&mut rng, v_size.min(span), config.value_bound);
        run_case(&u, &v, &mut failures);
        cases += 1;
    }

    let mut report = AuditReport::default();
    for aspect in [
        "excess-inequality",
        "moment-identities",
        "pointwise-doubling",
        "sigma-cap",
    ] {
        let examples: Vec<&String> = failures
            .iter()
            .filter(|(a, _)| *a == aspect)
            .map(|(_, d)| d)
            .take(5)
            .collect();
        if examples.is_empty() {
            report.record(aspect, true, Some(format!("{cases} cases")));
        } else {
            report.record(
                aspect,
                false,
                Some(examples.into_iter().cloned().collect::<Vec<_>>().join("; ")),
            );
        }
    }
    report
}

fn random_set(rng: &mut ChaCha8Rng, size: i64, value_bound: i64) -> FiniteIntSet {
    let mut values = std::collections::BTreeSet::new();
    while (values.len() as i64) < size {
        values.insert(rng.gen_range(-value_bound..=value_bound));
    }
    FiniteIntSet::from_i64s(&values.into_iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{
        build_b_descriptors, construct, ABlock, GrowthConfig, PrimeSchedule,
    };

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn k3_pair() -> ComplementPair {
        construct(&GrowthConfig::new(3)).unwrap()
    }

    #[test]
    fn witness_range_boundaries() {
        let pair = k3_pair();
        let (lo, hi) = guaranteed_range(&pair);
        assert!(matches!(
            witness(&pair, &lo),
            Err(VerificationError::OutOfGuaranteedRange { .. })
        ));
        assert!(witness(&pair, &(lo.clone() + 1u32)).is_ok());
        assert!(witness(&pair, &hi).is_ok());
        assert!(matches!(
            witness(&pair, &(hi + 1u32)),
            Err(VerificationError::OutOfGuaranteedRange { .. })
        ));
    }

    #[test]
    fn witness_structure() {
        let pair = k3_pair();
        let (lo, hi) = guaranteed_range(&pair);
        let mut n = lo.clone() + 1u32;
        while n <= hi {
            let w = witness(&pair, &n).unwrap();
            assert_eq!(&w.a + &w.b, n);
            assert!(w.a >= BigInt::one());
            assert!(w.a < pair.u(w.k) * 2u32);
            assert!(w.b > BigInt::from(w.k) * pair.u(w.k));
            n += 1u32;
        }
    }

    #[test]
    fn witness_ranges_tile() {
        let pair = construct(&GrowthConfig::new(5)).unwrap();
        let blocks = pair.blocks();
        // Consecutive endpoints match: (k+3)u_{k+1} starts the next range.
        for k in 1..blocks - 1 {
            let end_k = BigInt::from(k + 3) * pair.u(k + 1);
            let start_next = BigInt::from((k + 1) + 2) * pair.u(k + 1);
            assert_eq!(end_k, start_next);
        }
        let (lo, _) = guaranteed_range(&pair);
        assert_eq!(lo, BigInt::from(1 + 2) * pair.u(1));
    }

    #[test]
    fn coverage_exhaustive_and_sampled() {
        let pair = k3_pair();
        let (lo, hi) = guaranteed_range(&pair);
        let lo1 = lo + 1u32;
        let report =
            verify_coverage(&pair, &lo1, &hi, CoverageMode::Exhaustive).unwrap();
        assert!(report.overall());

        let sampled = CoverageMode::Sampled {
            count: 500,
            seed: 11,
        };
        let r1 = verify_coverage(&pair, &lo1, &hi, sampled.clone()).unwrap();
        let r2 = verify_coverage(&pair, &lo1, &hi, sampled).unwrap();
        assert_eq!(r1, r2, "sampled coverage must be reproducible");
    }

    #[test]
    fn coverage_precondition() {
        let pair = k3_pair();
        let (lo, hi) = guaranteed_range(&pair);
        assert!(matches!(
            verify_coverage(&pair, &lo, &hi, CoverageMode::Exhaustive),
            Err(VerificationError::InvalidRange(_))
        ));
    }

    #[test]
    fn invariants_pass_on_constructed_pairs() {
        for blocks in 2..=5usize {
            let pair = construct(&GrowthConfig::new(blocks)).unwrap();
            let report = verify_invariants(&pair);
            assert!(
                report.overall(),
                "K = {blocks}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn invariants_catch_mutations() {
        let pair = k3_pair();
        // Replace one A_2 element with a duplicate residue mod p_2.
        let mut blocks = pair.a_blocks().to_vec();
        let elements: Vec<BigInt> = blocks[1].elements.iter().cloned().collect();
        let mut mutated = elements.clone();
        mutated[0] = &elements[1] + pair.schedule().prime(2); // same class as elements[1]
        blocks[1] = ABlock {
            index: 2,
            u: blocks[1].u.clone(),
            elements: FiniteIntSet::new(mutated),
        };
        let broken = ComplementPair::from_parts(
            PrimeSchedule::from_raw(pair.schedule().primes().to_vec()),
            pair.u_sequence().to_vec(),
            blocks,
            build_b_descriptors(pair.u_sequence(), pair.schedule()),
            pair.config().clone(),
        );
        let report = verify_invariants(&broken);
        assert!(!report.overall());
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"residue-systems"), "failed: {failed:?}");
    }

    #[test]
    fn union_size_is_last_prime() {
        let pair = construct(&GrowthConfig::new(6)).unwrap();
        let total: usize = pair.a_blocks().iter().map(|b| b.elements.len()).sum();
        assert_eq!(BigInt::from(total), *pair.schedule().prime(6));
    }

    #[test]
    fn felso_checkpoint_claims() {
        let pair = construct(&GrowthConfig::new(4)).unwrap();
        let record = check_felso(&pair, 2, None, 1_000_000).unwrap();
        assert_eq!(record.x, *pair.u(3));
        assert!(record.omega_value.is_none());
        // implied_c = deficiency / a*, sign matching the deficiency.
        assert_eq!(
            record.implied_c,
            BigRational::new(record.deficiency.clone(), record.a_star.clone())
        );

        let omega = OmegaSpec::Const {
            value: big(1_000_000),
        };
        let with_omega = check_felso(&pair, 2, Some(&omega), 1_000_000).unwrap();
        assert_eq!(with_omega.omega_value, Some(big(1_000_000)));
        assert_eq!(
            with_omega.within_omega,
            Some(with_omega.deficiency < big(1_000_000))
        );

        assert!(matches!(
            check_felso(&pair, 1, None, 1_000_000),
            Err(VerificationError::InvalidBlockIndex { .. })
        ));
        assert!(matches!(
            check_felso(&pair, 4, None, 1_000_000),
            Err(VerificationError::InvalidBlockIndex { .. })
        ));
    }

    #[test]
    fn fuzz_clean_run_and_reproducibility() {
        let config = FuzzConfig {
            trials: 300,
            size_bound: 12,
            value_bound: 60,
            seed: 5,
        };
        let r1 = sigma_delta_fuzz(&config);
        let r2 = sigma_delta_fuzz(&config);
        assert!(r1.overall(), "{:?}", r1.failures().collect::<Vec<_>>());
        assert_eq!(r1, r2);
    }
}
