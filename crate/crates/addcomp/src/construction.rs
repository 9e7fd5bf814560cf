//! Residue-block construction of an additive complement pair.
//!
//! The pair is assembled from a schedule of primes p_1 < p_2 < ... < p_K with
//! k³ < p_k < (k+1)³, a growth sequence u_k (p_k | u_k, u_k > k·u_{k-1}), and
//! per-block element sets:
//!
//! * A_1 = {1, ..., p_1}; for k ≥ 2, A_k holds p_k − p_{k−1} integers strictly
//!   inside (u_k, 2u_k), chosen so that the running union A_1 ∪ ... ∪ A_k stays
//!   pairwise incongruent modulo every schedule prime p_j with j ≥ k. The
//!   union at level k then has exactly p_k members and forms a complete
//!   residue system modulo p_k.
//! * B_k is never materialized: it is the set of multiples of p_k strictly
//!   between k·u_k and (k+3)·u_{k+1}, kept as an interval descriptor.
//!
//! Element selection is deterministic for a given [`GrowthConfig`]: short
//! intervals are scanned smallest-first, long ones use seeded rejection
//! sampling with a deterministic fallback scan.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::core_sets::FiniteIntSet;
use crate::primes::next_prime_above;
use crate::rng::{derive_seed, sample_range_inclusive};

/// Interval length above which block selection switches from the
/// smallest-first scan to seeded rejection sampling.
pub const DEFAULT_SIEVE_THRESHOLD: u64 = 1_000_000;

/// Consecutive rejections tolerated before the sampler falls back to a
/// deterministic scan from the bottom of the interval.
const REJECTION_FALLBACK_LIMIT: u32 = 10_000;

/// Retry budget for re-doubling u_k when a block turns out infeasible.
const MAX_BLOCK_RETRIES: u32 = 64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("no prime lies in (k^3, (k+1)^3) for k = {k}")]
    ScheduleGap { k: usize },
    #[error("block count {blocks} exceeds the supported schedule range")]
    ScheduleTooLarge { blocks: usize },
    #[error(
        "a schedule of {available} primes cannot certify the feasibility bound for block {k}; extend the schedule"
    )]
    InsufficientSchedule { k: usize, available: usize },
    #[error("explicit u for block {k} is invalid: {reason}")]
    InvalidExplicitU { k: usize, reason: String },
    #[error("no admissible candidates left in ({lower}, {upper}) for block {k}")]
    BlockInfeasible {
        k: usize,
        lower: BigInt,
        upper: BigInt,
    },
    #[error("block {k} still infeasible after {attempts} attempts; last u tried was {last_u}")]
    ConstructionFailed {
        k: usize,
        attempts: u32,
        last_u: BigInt,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Increasing primes p_1 < p_2 < ... < p_K with p_k the least prime above k³.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSchedule {
    primes: Vec<BigInt>,
}

impl PrimeSchedule {
    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// 1-based access: `prime(k)` is p_k.
    pub fn prime(&self, k: usize) -> &BigInt {
        &self.primes[k - 1]
    }

    pub(crate) fn from_raw(primes: Vec<BigInt>) -> Self {
        PrimeSchedule { primes }
    }
}

/// p_k = least prime strictly greater than k³, verified to stay below
/// (k+1)³ for k ≥ 2. The k = 1 slot uses the window (1, 8).
pub fn prime_schedule(blocks: usize) -> Result<PrimeSchedule, ConstructionError> {
    if blocks == 0 {
        return Ok(PrimeSchedule { primes: vec![] });
    }
    // (blocks + 1)^3 must stay representable in u64 for the window check.
    if blocks as u128 + 1 > 2_642_245 {
        return Err(ConstructionError::ScheduleTooLarge { blocks });
    }
    let mut primes = Vec::with_capacity(blocks);
    for k in 1..=blocks as u64 {
        let cube = k * k * k;
        let p = next_prime_above(cube);
        if k >= 2 && p >= (k + 1) * (k + 1) * (k + 1) {
            return Err(ConstructionError::ScheduleGap { k: k as usize });
        }
        primes.push(BigInt::from(p));
    }
    Ok(PrimeSchedule { primes })
}

/// How u_k values are chosen during construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthPolicy {
    /// Least admissible multiple of p_k, with retry-doubling on infeasible
    /// blocks. The default; keeps every value at desk scale.
    GreedyMin,
    /// Additionally force u_k above the certified feasibility bound, so the
    /// first selection attempt is guaranteed to succeed. The bound involves a
    /// product of schedule primes and grows astronomically with k.
    LemmaSafe,
    /// User-supplied u_2, ..., u_K (u_1 is always p_1).
    Explicit(Vec<BigInt>),
}

impl fmt::Display for GrowthPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthPolicy::GreedyMin => write!(f, "greedy-min"),
            GrowthPolicy::LemmaSafe => write!(f, "lemma-safe"),
            GrowthPolicy::Explicit(values) => {
                write!(f, "explicit:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GrowthPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy-min" => Ok(GrowthPolicy::GreedyMin),
            "lemma-safe" => Ok(GrowthPolicy::LemmaSafe),
            _ => {
                if let Some(rest) = s.strip_prefix("explicit:") {
                    let values = rest
                        .split(',')
                        .map(|t| t.trim().parse::<BigInt>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| format!("bad explicit u-list: {e}"))?;
                    Ok(GrowthPolicy::Explicit(values))
                } else if s == "explicit" {
                    Err("explicit policy needs a u-list (explicit:u2,u3,...)".into())
                } else {
                    Err(format!("unknown growth policy '{s}'"))
                }
            }
        }
    }
}

/// A named slow-growth function with exact integer evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaSpec {
    /// ω(x) = value
    Const { value: BigInt },
    /// ω(x) = scale · bitlength(x)
    Log2 { scale: BigInt },
    /// ω(x) = scale · bitlength(bitlength(x))
    LogLog2 { scale: BigInt },
}

impl OmegaSpec {
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let bitlen = |v: &BigInt| -> u64 {
            if v.is_positive() {
                v.bits()
            } else {
                0
            }
        };
        match self {
            OmegaSpec::Const { value } => value.clone(),
            OmegaSpec::Log2 { scale } => scale * BigInt::from(bitlen(x)),
            OmegaSpec::LogLog2 { scale } => {
                scale * BigInt::from(bitlen(&BigInt::from(bitlen(x))))
            }
        }
    }
}

impl fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaSpec::Const { value } => write!(f, "const:{value}"),
            OmegaSpec::Log2 { scale } => write!(f, "log2:{scale}"),
            OmegaSpec::LogLog2 { scale } => write!(f, "loglog2:{scale}"),
        }
    }
}

impl FromStr for OmegaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("omega spec '{s}' needs name:parameter"))?;
        let value: BigInt = arg
            .trim()
            .parse()
            .map_err(|e| format!("bad omega parameter: {e}"))?;
        match name {
            "const" => Ok(OmegaSpec::Const { value }),
            "log2" => Ok(OmegaSpec::Log2 { scale: value }),
            "loglog2" => Ok(OmegaSpec::LogLog2 { scale: value }),
            _ => Err(format!("unknown omega function '{name}'")),
        }
    }
}

/// Construction parameters. Identical configs always produce identical pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthConfig {
    /// Number of blocks K (≥ 2).
    pub blocks: usize,
    pub policy: GrowthPolicy,
    /// Seed for the rejection sampler; per-block streams are derived from it.
    pub seed: u64,
    /// Interval length above which rejection sampling replaces the scan.
    pub sieve_threshold: u64,
    /// Optional slow-growth spec, echoed for reporting; never enforced here.
    pub omega: Option<OmegaSpec>,
}

impl GrowthConfig {
    pub fn new(blocks: usize) -> Self {
        GrowthConfig {
            blocks,
            policy: GrowthPolicy::GreedyMin,
            seed: 0,
            sieve_threshold: DEFAULT_SIEVE_THRESHOLD,
            omega: None,
        }
    }

    pub fn with_policy(mut self, policy: GrowthPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sieve_threshold(mut self, threshold: u64) -> Self {
        self.sieve_threshold = threshold;
        self
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        if self.blocks < 2 {
            return Err(ConstructionError::InvalidConfig(
                "at least 2 blocks are required".into(),
            ));
        }
        if self.sieve_threshold == 0 {
            return Err(ConstructionError::InvalidConfig(
                "sieve threshold must be ≥ 1".into(),
            ));
        }
        if let GrowthPolicy::Explicit(values) = &self.policy {
            if values.len() != self.blocks - 1 {
                return Err(ConstructionError::InvalidConfig(format!(
                    "explicit policy needs {} u-values (u_2..u_K), got {}",
                    self.blocks - 1,
                    values.len()
                )));
            }
        }
        Ok(())
    }
}

/// One explicit block of the thin set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ABlock {
    /// 1-based block index k.
    pub index: usize,
    /// The block's u_k.
    pub u: BigInt,
    /// For k = 1: {1, ..., p_1}. For k ≥ 2: p_k − p_{k−1} integers strictly
    /// inside (u_k, 2u_k).
    pub elements: FiniteIntSet,
}

/// Implicit block of the dense set: multiples of `modulus` strictly between
/// `lower` and `upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBlockDescriptor {
    /// 1-based block index k.
    pub index: usize,
    /// p_k.
    pub modulus: BigInt,
    /// k·u_k, exclusive.
    pub lower: BigInt,
    /// (k+3)·u_{k+1}, exclusive.
    pub upper: BigInt,
}

impl BBlockDescriptor {
    pub fn contains(&self, n: &BigInt) -> bool {
        *n > self.lower && *n < self.upper && n.mod_floor(&self.modulus).is_zero()
    }
}

/// A fully constructed complement pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementPair {
    schedule: PrimeSchedule,
    u: Vec<BigInt>,
    a_blocks: Vec<ABlock>,
    b_descriptors: Vec<BBlockDescriptor>,
    config: GrowthConfig,
}

impl ComplementPair {
    /// Number of blocks K.
    pub fn blocks(&self) -> usize {
        self.schedule.len()
    }

    pub fn schedule(&self) -> &PrimeSchedule {
        &self.schedule
    }

    pub fn u_sequence(&self) -> &[BigInt] {
        &self.u
    }

    /// 1-based access: `u(k)` is u_k.
    pub fn u(&self, k: usize) -> &BigInt {
        &self.u[k - 1]
    }

    pub fn a_blocks(&self) -> &[ABlock] {
        &self.a_blocks
    }

    /// 1-based access.
    pub fn a_block(&self, k: usize) -> &ABlock {
        &self.a_blocks[k - 1]
    }

    /// Descriptors for k = 1, ..., K−1 (the last block has no u_{K+1}).
    pub fn b_descriptors(&self) -> &[BBlockDescriptor] {
        &self.b_descriptors
    }

    pub fn config(&self) -> &GrowthConfig {
        &self.config
    }

    /// Elements of A_1 ∪ ... ∪ A_k in block order.
    pub fn level_union(&self, k: usize) -> impl Iterator<Item = &BigInt> {
        self.a_blocks[..k].iter().flat_map(|b| b.elements.iter())
    }

    pub(crate) fn from_parts(
        schedule: PrimeSchedule,
        u: Vec<BigInt>,
        a_blocks: Vec<ABlock>,
        b_descriptors: Vec<BBlockDescriptor>,
        config: GrowthConfig,
    ) -> Self {
        ComplementPair {
            schedule,
            u,
            a_blocks,
            b_descriptors,
            config,
        }
    }
}

/// Construction state after the first k blocks: the schedule, u_1..u_k and
/// A_1..A_k.
#[derive(Debug, Clone)]
pub struct PartialConstruction {
    pub schedule: PrimeSchedule,
    pub u: Vec<BigInt>,
    pub a_blocks: Vec<ABlock>,
}

impl PartialConstruction {
    /// Level-1 state: u_1 = p_1 and A_1 = {1, ..., p_1}.
    pub fn start(schedule: PrimeSchedule) -> Self {
        let p1 = schedule.prime(1).clone();
        let p1_u64 = p1.to_u64().expect("p_1 is tiny");
        let elements =
            FiniteIntSet::new((1..=p1_u64).map(BigInt::from).collect());
        PartialConstruction {
            schedule,
            u: vec![p1.clone()],
            a_blocks: vec![ABlock {
                index: 1,
                u: p1,
                elements,
            }],
        }
    }

    fn level(&self) -> usize {
        self.a_blocks.len()
    }

    fn union_elements(&self) -> impl Iterator<Item = &BigInt> {
        self.a_blocks.iter().flat_map(|b| b.elements.iter())
    }
}

/// Certified feasibility bound for block k.
///
/// `delta_lower` is an exact rational lower bound for the infinite product
/// Π_{j≥k} (1 − (p_k−1)/p_j): schedule primes contribute exact factors and the
/// tail beyond the schedule is bounded below by 1 − (p_k−1)/(2K²), using
/// Π(1−t_j) ≥ 1 − Σt_j and Σ_{j>K} j⁻³ < 1/(2K²) together with p_j > j³.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSafeBound {
    pub delta_lower: BigRational,
    /// Least schedule index r with certified Σ_{i>r} 1/p_i < delta_lower/(4 p_k).
    pub tail_index: usize,
    /// q = p_k · p_{k+1} · ... · p_r.
    pub modulus_product: BigInt,
    /// v_k = ⌈2q / delta_lower⌉; any u_k > v_k admits a first-try block.
    pub min_u: BigInt,
}

pub fn lemma_safe_bound(
    k: usize,
    schedule: &PrimeSchedule,
) -> Result<LemmaSafeBound, ConstructionError> {
    let blocks = schedule.len();
    assert!(k >= 2 && k <= blocks, "need 2 ≤ k ≤ K");
    let p_k = schedule.prime(k);
    let c = p_k - 1u32;

    // Exact finite part: Π_{j=k}^{K} (1 − c/p_j). Every factor is positive
    // because the schedule is strictly increasing.
    let mut finite = BigRational::one();
    for j in k..=blocks {
        let p_j = schedule.prime(j);
        finite *= BigRational::new(p_j - &c, p_j.clone());
    }

    // Tail beyond the schedule: 1 − c/(2K²) must be positive to certify.
    let two_k_sq = BigInt::from(2) * BigInt::from(blocks) * BigInt::from(blocks);
    let tail = BigRational::one() - BigRational::new(c.clone(), two_k_sq.clone());
    if tail <= BigRational::zero() {
        return Err(ConstructionError::InsufficientSchedule {
            k,
            available: blocks,
        });
    }
    let delta_lower = finite * tail;

    // Least r ≤ K whose certified prime-reciprocal tail drops below
    // delta_lower / (4 p_k). Beyond the schedule the same j³ bound applies.
    let threshold = &delta_lower / BigRational::from_integer(BigInt::from(4) * p_k);
    let beyond_schedule = BigRational::new(BigInt::one(), two_k_sq);
    let mut suffix = beyond_schedule.clone();
    let mut suffix_sums = vec![BigRational::zero(); blocks + 1];
    suffix_sums[blocks] = suffix.clone();
    for i in (k..blocks).rev() {
        suffix += BigRational::new(BigInt::one(), schedule.prime(i + 1).clone());
        suffix_sums[i] = suffix.clone();
    }
    let tail_index = (k..=blocks)
        .find(|&r| suffix_sums[r] < threshold)
        .ok_or(ConstructionError::InsufficientSchedule {
            k,
            available: blocks,
        })?;

    let mut modulus_product = BigInt::one();
    for i in k..=tail_index {
        modulus_product *= schedule.prime(i);
    }

    // v_k = ceil(2q / delta_lower); delta_lower > 0 with positive denominator.
    let numer = BigInt::from(2) * &modulus_product * delta_lower.denom();
    let min_u = numer.div_ceil(delta_lower.numer());

    Ok(LemmaSafeBound {
        delta_lower,
        tail_index,
        modulus_product,
        min_u,
    })
}

/// Run [`lemma_safe_bound`] against successively longer schedules until the
/// tail bounds certify, returning the bound and the schedule length used.
pub fn lemma_safe_bound_extending(
    k: usize,
    start_blocks: usize,
) -> Result<(LemmaSafeBound, usize), ConstructionError> {
    let mut blocks = start_blocks.max(k).max(4);
    for _ in 0..20 {
        let schedule = prime_schedule(blocks)?;
        match lemma_safe_bound(k, &schedule) {
            Ok(bound) => return Ok((bound, blocks)),
            Err(ConstructionError::InsufficientSchedule { .. }) => blocks *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(ConstructionError::InsufficientSchedule {
        k,
        available: blocks,
    })
}

fn least_multiple_above(modulus: &BigInt, bound: &BigInt) -> BigInt {
    modulus * (bound.div_floor(modulus) + 1u32)
}

/// Pick u_k for block k ≥ 2 according to the configured policy. Every result
/// is a multiple of p_k strictly greater than k·u_{k−1}.
pub fn choose_u(
    k: usize,
    prior: &PartialConstruction,
    config: &GrowthConfig,
) -> Result<BigInt, ConstructionError> {
    choose_u_detail(k, prior, config).map(|(u, _)| u)
}

/// Also returns the certified bound v_k when the lemma-safe policy computed one.
fn choose_u_detail(
    k: usize,
    prior: &PartialConstruction,
    config: &GrowthConfig,
) -> Result<(BigInt, Option<BigInt>), ConstructionError> {
    assert!(k >= 2, "u_1 is fixed by the schedule");
    assert_eq!(prior.level(), k - 1, "prior must hold exactly A_1..A_(k-1)");
    let p_k = prior.schedule.prime(k);
    let growth_floor = BigInt::from(k) * &prior.u[k - 2];
    match &config.policy {
        GrowthPolicy::GreedyMin => Ok((least_multiple_above(p_k, &growth_floor), None)),
        GrowthPolicy::LemmaSafe => {
            let (bound, _) = lemma_safe_bound_extending(k, config.blocks)?;
            let floor = growth_floor.max(bound.min_u.clone());
            Ok((least_multiple_above(p_k, &floor), Some(bound.min_u)))
        }
        GrowthPolicy::Explicit(values) => {
            let value = values.get(k - 2).ok_or_else(|| {
                ConstructionError::InvalidExplicitU {
                    k,
                    reason: "no value supplied".into(),
                }
            })?;
            if !value.mod_floor(p_k).is_zero() {
                return Err(ConstructionError::InvalidExplicitU {
                    k,
                    reason: format!("{value} is not divisible by p_{k} = {p_k}"),
                });
            }
            if *value <= growth_floor {
                return Err(ConstructionError::InvalidExplicitU {
                    k,
                    reason: format!("{value} does not exceed {k}·u_{} = {growth_floor}", k - 1),
                });
            }
            Ok((value.clone(), None))
        }
    }
}

fn residue_ok(candidate: &BigInt, moduli: &[BigInt], forbidden: &[HashSet<BigInt>]) -> bool {
    moduli
        .iter()
        .zip(forbidden)
        .all(|(p, f)| !f.contains(&candidate.mod_floor(p)))
}

fn note_residues(value: &BigInt, moduli: &[BigInt], forbidden: &mut [HashSet<BigInt>]) {
    for (p, f) in moduli.iter().zip(forbidden.iter_mut()) {
        f.insert(value.mod_floor(p));
    }
}

/// Select the elements of A_k inside (u_k, 2u_k).
///
/// A candidate is admissible when it is incongruent, modulo every schedule
/// prime p_j with j ≥ k and p_j < 2u_k, to everything already chosen in
/// A_1 ∪ ... ∪ A_{k−1} and in the partial block. Larger moduli need no
/// bookkeeping: distinct positive integers below 2u_k ≤ p_j can never
/// collide.
pub fn build_a_block(
    k: usize,
    u_k: &BigInt,
    prior: &PartialConstruction,
    config: &GrowthConfig,
) -> Result<ABlock, ConstructionError> {
    assert!(k >= 2, "A_1 is fixed");
    assert_eq!(prior.level(), k - 1, "prior must hold exactly A_1..A_(k-1)");
    let schedule = &prior.schedule;
    let blocks = schedule.len();
    let p_k = schedule.prime(k);
    let p_prev = schedule.prime(k - 1);
    debug_assert!(u_k.mod_floor(p_k).is_zero(), "p_k must divide u_k");

    let need = (p_k - p_prev).to_usize().expect("block size is small");
    let lower = u_k.clone();
    let upper = u_k * 2u32;

    let moduli: Vec<BigInt> = (k..=blocks)
        .map(|j| schedule.prime(j))
        .take_while(|p| **p < upper)
        .cloned()
        .collect();
    let mut forbidden: Vec<HashSet<BigInt>> = moduli
        .iter()
        .map(|p| prior.union_elements().map(|a| a.mod_floor(p)).collect())
        .collect();

    let infeasible = |k: usize, lower: &BigInt, upper: &BigInt| ConstructionError::BlockInfeasible {
        k,
        lower: lower.clone(),
        upper: upper.clone(),
    };

    let mut chosen: Vec<BigInt> = Vec::with_capacity(need);
    let interval_len = &upper - &lower - 1u32;

    if interval_len <= BigInt::from(config.sieve_threshold) {
        // Smallest admissible candidate each step. One forward scan is
        // equivalent: admissibility of a skipped candidate never recovers,
        // because forbidden residue sets only grow.
        let mut candidate = &lower + 1u32;
        while chosen.len() < need && candidate < upper {
            if residue_ok(&candidate, &moduli, &forbidden) {
                note_residues(&candidate, &moduli, &mut forbidden);
                chosen.push(candidate.clone());
            }
            candidate += 1u32;
        }
        if chosen.len() < need {
            return Err(infeasible(k, &lower, &upper));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, k as u64));
        let lo = &lower + 1u32;
        let hi = &upper - 1u32;
        while chosen.len() < need {
            let mut rejections = 0u32;
            let pick: BigInt = loop {
                let candidate = sample_range_inclusive(&mut rng, &lo, &hi);
                if residue_ok(&candidate, &moduli, &forbidden) {
                    break candidate;
                }
                rejections += 1;
                if rejections >= REJECTION_FALLBACK_LIMIT {
                    // Deterministic fallback: first admissible from the bottom.
                    let mut scan = lo.clone();
                    let mut found = None;
                    while scan <= hi {
                        if residue_ok(&scan, &moduli, &forbidden) {
                            found = Some(scan);
                            break;
                        }
                        scan += 1u32;
                    }
                    match found {
                        Some(v) => break v,
                        None => return Err(infeasible(k, &lower, &upper)),
                    }
                }
            };
            note_residues(&pick, &moduli, &mut forbidden);
            chosen.push(pick);
        }
    }

    Ok(ABlock {
        index: k,
        u: u_k.clone(),
        elements: FiniteIntSet::new(chosen),
    })
}

/// Descriptors for B_k, k = 1, ..., K−1: multiples of p_k strictly inside
/// (k·u_k, (k+3)·u_{k+1}).
pub fn build_b_descriptors(u: &[BigInt], schedule: &PrimeSchedule) -> Vec<BBlockDescriptor> {
    assert!(u.len() >= 2, "descriptors need at least two u values");
    assert_eq!(u.len(), schedule.len());
    (1..u.len())
        .map(|k| BBlockDescriptor {
            index: k,
            modulus: schedule.prime(k).clone(),
            lower: BigInt::from(k) * &u[k - 1],
            upper: BigInt::from(k + 3) * &u[k],
        })
        .collect()
}

/// Per-run construction diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstructStats {
    /// (block index k, retries spent before the block succeeded).
    pub block_retries: Vec<(usize, u32)>,
    /// (block index k, certified bound v_k) for lemma-safe runs.
    pub feasibility_bounds: Vec<(usize, BigInt)>,
}

/// Build the full pair for `config`. Deterministic: identical configs yield
/// identical pairs.
pub fn construct(config: &GrowthConfig) -> Result<ComplementPair, ConstructionError> {
    construct_with_stats(config).map(|(pair, _)| pair)
}

/// [`construct`], also returning retry counts and feasibility bounds.
pub fn construct_with_stats(
    config: &GrowthConfig,
) -> Result<(ComplementPair, ConstructStats), ConstructionError> {
    config.validate()?;
    let schedule = prime_schedule(config.blocks)?;
    let mut partial = PartialConstruction::start(schedule);
    let mut stats = ConstructStats::default();

    for k in 2..=config.blocks {
        let (mut u_k, bound) = choose_u_detail(k, &partial, config)?;
        if let Some(v) = bound {
            stats.feasibility_bounds.push((k, v));
        }
        let mut retries = 0u32;
        let block = loop {
            match build_a_block(k, &u_k, &partial, config) {
                Ok(block) => break block,
                Err(ConstructionError::BlockInfeasible { .. }) if retries < MAX_BLOCK_RETRIES => {
                    retries += 1;
                    u_k *= 2u32;
                }
                Err(ConstructionError::BlockInfeasible { .. }) => {
                    return Err(ConstructionError::ConstructionFailed {
                        k,
                        attempts: retries + 1,
                        last_u: u_k,
                    });
                }
                Err(e) => return Err(e),
            }
        };
        stats.block_retries.push((k, retries));
        partial.u.push(u_k);
        partial.a_blocks.push(block);
    }

    let b_descriptors = build_b_descriptors(&partial.u, &partial.schedule);
    let pair = ComplementPair {
        schedule: partial.schedule,
        u: partial.u,
        a_blocks: partial.a_blocks,
        b_descriptors,
        config: config.clone(),
    };
    Ok((pair, stats))
}
