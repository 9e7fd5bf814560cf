//! Additive-complement pairs at desk scale: construction, exact analytics,
//! and structural verification.
//!
//! Two sets of positive integers are additive complements when their sumset
//! misses only finitely many integers. This crate builds a classical
//! residue-block pair — a thin set assembled from complete residue systems
//! modulo a cube-windowed prime schedule, against a dense set of prime
//! multiples in growing intervals — and then checks everything about it that
//! is exactly checkable at finite scale:
//!
//! * [`core_sets`]: finite-set primitives, representation-count profiles,
//!   the excess inequality and its double-counting moment identities;
//! * [`construction`]: the prime schedule, growth sequence, explicit thin
//!   blocks and implicit dense-block descriptors;
//! * [`analytics`]: exact counting functions, the deficiency decomposition
//!   A(x)B(x) − x = y + z − r, and ratio diagnostics;
//! * [`verification`]: constructive coverage witnesses, the structural
//!   invariant audit, checkpoint claims, and a seeded profile fuzzer;
//! * [`archive`]: canonical digest-guarded text persistence.
//!
//! All assertions run in exact integer or rational arithmetic; floating
//! point never decides anything.

pub mod analytics;
pub mod archive;
pub mod construction;
pub mod core_sets;
pub mod verification;

mod primes;
mod rng;

pub use analytics::{
    a_star, count_a, count_b, deficiency_decomposition, dichotomy_ratios, is_in_b,
    lower_bound_report, mean_a_ratio, uncovered_up_to, AnalyticsError, DeficiencyReport,
    DichotomyReport, LowerBoundReport, UncoveredReport, DEFAULT_ENUMERATION_LIMIT,
};
pub use archive::{from_archive_str, load_pair, save_pair, to_archive_string, ArchiveError};
pub use construction::{
    build_a_block, build_b_descriptors, choose_u, construct, construct_with_stats,
    lemma_safe_bound, lemma_safe_bound_extending, prime_schedule, ABlock, BBlockDescriptor,
    ComplementPair, ConstructStats, ConstructionError, GrowthConfig, GrowthPolicy,
    LemmaSafeBound, OmegaSpec, PartialConstruction, PrimeSchedule, DEFAULT_SIEVE_THRESHOLD,
};
pub use core_sets::{
    check_excess_inequality, delta_profile, excess, moment_identities, sigma_profile, sumset,
    CoreSetsError, ExcessInequality, FiniteIntSet, MomentIdentities, RepProfile,
};
pub use verification::{
    check_felso, guaranteed_range, sigma_delta_fuzz, verify_coverage, verify_invariants,
    AuditReport, CheckResult, CoverageMode, FelsoRecord, FuzzConfig, VerificationError, Witness,
};
