//! Finite integer-set primitives and representation-count profiles.
//!
//! A [`FiniteIntSet`] is an immutable sorted set of arbitrary-precision
//! integers. For a pair of sets (U, V) the sum profile counts, for every n,
//! the ordered pairs (u, v) with u + v = n, and the difference profile counts
//! pairs with v - u = n. The excess of a profile measures how many pairs are
//! "wasted" on values that are already represented; the central inequality
//! here bounds the difference-side excess by |U| times the sum-side excess.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoreSetsError {
    /// The excess inequality divides by |U|, so U must be nonempty.
    #[error("U must be nonempty for the excess inequality")]
    EmptyU,
}

/// An immutable finite set of integers, stored strictly increasing.
///
/// Negative members are first-class; difference profiles need them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteIntSet {
    elements: Vec<BigInt>,
}

impl FiniteIntSet {
    /// Build a set from arbitrary values; duplicates collapse.
    pub fn new(mut values: Vec<BigInt>) -> Self {
        values.sort_unstable();
        values.dedup();
        FiniteIntSet { elements: values }
    }

    pub fn empty() -> Self {
        FiniteIntSet::default()
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, value: &BigInt) -> bool {
        self.elements.binary_search(value).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.elements.last()
    }

    /// Number of members that are ≤ `x`.
    pub fn count_up_to(&self, x: &BigInt) -> usize {
        self.elements.partition_point(|e| e <= x)
    }

    /// Largest member ≤ `x`, if any.
    pub fn max_up_to(&self, x: &BigInt) -> Option<&BigInt> {
        let idx = self.count_up_to(x);
        if idx == 0 {
            None
        } else {
            Some(&self.elements[idx - 1])
        }
    }
}

impl FromIterator<BigInt> for FiniteIntSet {
    fn from_iter<T: IntoIterator<Item = BigInt>>(iter: T) -> Self {
        FiniteIntSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FiniteIntSet {
    type Item = &'a BigInt;
    type IntoIter = std::slice::Iter<'a, BigInt>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl fmt::Display for FiniteIntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Multiset of representation counts: value n → how many pairs realize n.
///
/// Counts are always ≥ 1; values with no representation are simply absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepProfile {
    entries: BTreeMap<BigInt, u64>,
}

impl RepProfile {
    fn bump(&mut self, value: BigInt) {
        *self.entries.entry(value).or_insert(0) += 1;
    }

    /// Representation count of `value` (0 when absent).
    pub fn count(&self, value: &BigInt) -> u64 {
        self.entries.get(value).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, u64)> {
        self.entries.iter().map(|(n, &c)| (n, c))
    }

    /// Number of distinct represented values.
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    /// Total number of pairs: Σ counts.
    pub fn mass(&self) -> u128 {
        self.entries.values().map(|&c| c as u128).sum()
    }

    pub fn max_count(&self) -> u64 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// The represented values as a set.
    pub fn support_set(&self) -> FiniteIntSet {
        // Keys are already sorted and distinct.
        FiniteIntSet {
            elements: self.entries.keys().cloned().collect(),
        }
    }
}

/// The sumset { u + v : u ∈ U, v ∈ V }, deduplicated and sorted.
pub fn sumset(u: &FiniteIntSet, v: &FiniteIntSet) -> FiniteIntSet {
    let mut sums = BTreeSet::new();
    for a in u {
        for b in v {
            sums.insert(a + b);
        }
    }
    FiniteIntSet {
        elements: sums.into_iter().collect(),
    }
}

/// Sum profile: entry n counts pairs (u, v) with u + v = n.
pub fn sigma_profile(u: &FiniteIntSet, v: &FiniteIntSet) -> RepProfile {
    let mut profile = RepProfile::default();
    for a in u {
        for b in v {
            profile.bump(a + b);
        }
    }
    profile
}

/// Difference profile: entry n counts pairs (u, v) with v - u = n.
/// Entries may be negative.
pub fn delta_profile(u: &FiniteIntSet, v: &FiniteIntSet) -> RepProfile {
    let mut profile = RepProfile::default();
    for a in u {
        for b in v {
            profile.bump(b - a);
        }
    }
    profile
}

/// Σ over entries with count > 1 of (count - 1).
///
/// Equivalently mass minus support; the literal sum is kept so the identity
/// can be cross-checked.
pub fn excess(profile: &RepProfile) -> u128 {
    profile
        .iter()
        .filter(|&(_, c)| c > 1)
        .map(|(_, c)| (c - 1) as u128)
        .sum()
}

/// Outcome of the excess inequality
/// |U| · excess(sum profile) ≥ excess(difference profile),
/// compared in exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcessInequality {
    /// excess of the sum profile
    pub lhs: u128,
    /// excess of the difference profile (the right side before dividing by |U|)
    pub rhs_numerator: u128,
    pub holds: bool,
}

pub fn check_excess_inequality(
    u: &FiniteIntSet,
    v: &FiniteIntSet,
) -> Result<ExcessInequality, CoreSetsError> {
    if u.is_empty() {
        return Err(CoreSetsError::EmptyU);
    }
    let lhs = excess(&sigma_profile(u, v));
    let rhs_numerator = excess(&delta_profile(u, v));
    let holds = lhs * u.len() as u128 >= rhs_numerator;
    Ok(ExcessInequality {
        lhs,
        rhs_numerator,
        holds,
    })
}

/// First and second moments of the two profiles.
///
/// Both must satisfy Σ counts = |U|·|V| and Σ counts² equal across profiles
/// (count pairs (u,v), and quadruples with u + v = u' + v' rearranged as
/// v - u' = v' - u).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentIdentities {
    pub sum_sigma: u128,
    pub sum_delta: u128,
    pub sum_sigma_sq: u128,
    pub sum_delta_sq: u128,
    pub first_ok: bool,
    pub second_ok: bool,
}

pub fn moment_identities(u: &FiniteIntSet, v: &FiniteIntSet) -> MomentIdentities {
    let sigma = sigma_profile(u, v);
    let delta = delta_profile(u, v);
    let sq = |p: &RepProfile| -> u128 { p.iter().map(|(_, c)| (c as u128) * (c as u128)).sum() };
    let sum_sigma = sigma.mass();
    let sum_delta = delta.mass();
    let sum_sigma_sq = sq(&sigma);
    let sum_delta_sq = sq(&delta);
    let pair_count = u.len() as u128 * v.len() as u128;
    MomentIdentities {
        sum_sigma,
        sum_delta,
        sum_sigma_sq,
        sum_delta_sq,
        first_ok: sum_sigma == pair_count && sum_delta == pair_count,
        second_ok: sum_sigma_sq == sum_delta_sq,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: &[i64]) -> FiniteIntSet {
        FiniteIntSet::from_i64s(values)
    }

    /// Independent oracle: profiles via plain i64 enumeration.
    fn oracle_profile(u: &[i64], v: &[i64], sums: bool) -> BTreeMap<i64, u64> {
        let mut map = BTreeMap::new();
        for &a in u {
            for &b in v {
                let key = if sums { a + b } else { b - a };
                *map.entry(key).or_insert(0u64) += 1;
            }
        }
        map
    }

    fn oracle_excess(map: &BTreeMap<i64, u64>) -> u128 {
        map.values().filter(|&&c| c > 1).map(|&c| (c - 1) as u128).sum()
    }

    fn assert_profile_eq(profile: &RepProfile, expected: &[(i64, u64)]) {
        let got: Vec<(BigInt, u64)> = profile.iter().map(|(n, c)| (n.clone(), c)).collect();
        let want: Vec<(BigInt, u64)> = expected
            .iter()
            .map(|&(n, c)| (BigInt::from(n), c))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            sumset(&set(&[1, 2]), &set(&[1, 2, 3])),
            set(&[2, 3, 4, 5])
        );
        assert_eq!(sumset(&set(&[]), &set(&[5])), set(&[]));
        let v = set(&[-3, 0, 7, 100]);
        assert_eq!(sumset(&set(&[0]), &v), v);
    }

    #[test]
    fn sigma_profile_examples() {
        assert_profile_eq(
            &sigma_profile(&set(&[1, 2]), &set(&[1, 2, 3])),
            &[(2, 1), (3, 2), (4, 2), (5, 1)],
        );
        assert_profile_eq(&sigma_profile(&set(&[0]), &set(&[0])), &[(0, 1)]);
        assert_profile_eq(
            &sigma_profile(&set(&[1, 2]), &set(&[10])),
            &[(11, 1), (12, 1)],
        );
    }

    #[test]
    fn delta_profile_examples() {
        assert_profile_eq(
            &delta_profile(&set(&[1, 2]), &set(&[1, 2, 3])),
            &[(-1, 1), (0, 2), (1, 2), (2, 1)],
        );
        assert_profile_eq(&delta_profile(&set(&[0]), &set(&[0])), &[(0, 1)]);
        assert_profile_eq(
            &delta_profile(&set(&[5]), &set(&[1, 9])),
            &[(-4, 1), (4, 1)],
        );
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&sigma_profile(&set(&[1, 2]), &set(&[1, 2, 3]))), 2);
        assert_eq!(excess(&sigma_profile(&set(&[0]), &set(&[0]))), 0);
        // A count-5 entry contributes 4: σ(7) = 5 for these antisymmetric sets.
        let p = sigma_profile(&set(&[0, 1, 2, 3, 4]), &set(&[3, 4, 5, 6, 7]));
        assert_eq!(p.count(&BigInt::from(7)), 5);
        assert_eq!(p.max_count(), 5);
        assert_eq!(p.mass() - p.support() as u128, excess(&p));
    }

    #[test]
    fn excess_inequality_examples() {
        let r = check_excess_inequality(&set(&[1, 2]), &set(&[1, 2, 3])).unwrap();
        assert_eq!((r.lhs, r.rhs_numerator, r.holds), (2, 2, true));

        let r = check_excess_inequality(&set(&[0]), &set(&[0])).unwrap();
        assert_eq!((r.lhs, r.rhs_numerator, r.holds), (0, 0, true));

        // Progression case U = V = {0,1,2,3}: counts 1,2,3,4,3,2,1 on both
        // sides, mass 16 over support 7, so both excesses equal 9. Confirmed
        // against the i64 enumeration oracle.
        let u = [0i64, 1, 2, 3];
        let sigma = oracle_profile(&u, &u, true);
        let delta = oracle_profile(&u, &u, false);
        assert_eq!(sigma.len(), 7);
        assert_eq!(delta.len(), 7);
        assert_eq!(oracle_excess(&sigma), 9);
        assert_eq!(oracle_excess(&delta), 9);
        let r = check_excess_inequality(&set(&u), &set(&u)).unwrap();
        assert_eq!((r.lhs, r.rhs_numerator), (9, 9));
        assert!(r.holds, "9 * 4 >= 9");

        assert_eq!(
            check_excess_inequality(&set(&[]), &set(&[1])),
            Err(CoreSetsError::EmptyU)
        );
    }

    #[test]
    fn moment_identity_examples() {
        let m = moment_identities(&set(&[1, 2]), &set(&[1, 2, 3]));
        assert_eq!((m.sum_sigma, m.sum_delta), (6, 6));
        assert_eq!((m.sum_sigma_sq, m.sum_delta_sq), (10, 10));
        assert!(m.first_ok && m.second_ok);

        let m = moment_identities(&set(&[]), &set(&[1, 2]));
        assert_eq!((m.sum_sigma, m.sum_delta, m.sum_sigma_sq, m.sum_delta_sq), (0, 0, 0, 0));
        assert!(m.first_ok && m.second_ok);

        let m = moment_identities(&set(&[0, 1]), &set(&[0, 2]));
        assert_eq!((m.sum_sigma, m.sum_delta), (4, 4));
        assert_eq!((m.sum_sigma_sq, m.sum_delta_sq), (4, 4));
        assert!(m.first_ok && m.second_ok);
    }

    #[test]
    fn sumset_is_sigma_support() {
        let u = set(&[-5, 0, 3, 9]);
        let v = set(&[-1, 2, 4]);
        assert_eq!(sumset(&u, &v), sigma_profile(&u, &v).support_set());
    }

    #[test]
    fn negative_values_are_first_class() {
        let u = set(&[-10, -2, 0]);
        let v = set(&[-3, 5]);
        let d = delta_profile(&u, &v);
        assert_eq!(d.count(&BigInt::from(7)), 2); // 5 - (-2) and -3 - (-10)
        assert_eq!(d.count(&BigInt::from(-3)), 1); // -3 - 0
        assert_eq!(d.mass(), 6);
    }

    #[test]
    fn set_accessors() {
        let s = set(&[4, 1, 4, 2]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.min().unwrap(), &BigInt::from(1));
        assert_eq!(s.max().unwrap(), &BigInt::from(4));
        assert_eq!(s.count_up_to(&BigInt::from(2)), 2);
        assert_eq!(s.max_up_to(&BigInt::from(3)).unwrap(), &BigInt::from(2));
        assert!(s.max_up_to(&BigInt::from(0)).is_none());
        assert_eq!(s.to_string(), "{1, 2, 4}");
    }
}
