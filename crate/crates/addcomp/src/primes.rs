//! Deterministic primality testing and least-prime-above search.

/// Deterministic Miller-Rabin for `u64`. The fixed witness set
/// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact for all 64-bit
/// inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least prime strictly greater than `n`.
pub(crate) fn next_prime_above(n: u64) -> u64 {
    if n < 2 {
        return 2;
    }
    let mut candidate = n + 1;
    if candidate % 2 == 0 {
        if candidate == 2 {
            return 2;
        }
        candidate += 1;
    }
    while !is_prime_u64(candidate) {
        candidate += 2;
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain sieve of Eratosthenes, used as an independent oracle.
    fn sieve_primes(limit: usize) -> Vec<u64> {
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for n in 2..=limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut m = n * n;
                while m <= limit {
                    composite[m] = true;
                    m += n;
                }
            }
        }
        primes
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let primes = sieve_primes(10_000);
        let mut idx = 0;
        for n in 0..=10_000u64 {
            let expected = idx < primes.len() && primes[idx] == n;
            if expected {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), expected, "disagreement at {n}");
        }
    }

    #[test]
    fn next_prime_above_small_cases() {
        assert_eq!(next_prime_above(0), 2);
        assert_eq!(next_prime_above(1), 2);
        assert_eq!(next_prime_above(2), 3);
        assert_eq!(next_prime_above(8), 11);
        assert_eq!(next_prime_above(27), 29);
        assert_eq!(next_prime_above(64), 67);
        assert_eq!(next_prime_above(125), 127);
        assert_eq!(next_prime_above(216), 223);
    }

    #[test]
    fn large_known_prime() {
        // 2^61 - 1 is a Mersenne prime.
        assert!(is_prime_u64((1u64 << 61) - 1));
        assert!(!is_prime_u64((1u64 << 61) - 3));
    }
}
