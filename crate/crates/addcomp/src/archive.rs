//! Versioned plain-text persistence for constructed pairs.
//!
//! Archives are canonical: fixed line order, decimal-string integers at any
//! magnitude, and a trailing SHA-256 digest over every preceding byte. Saving
//! a loaded pair reproduces the file byte for byte, and loading re-runs the
//! full structural audit so a tampered-but-redigested archive is still
//! rejected.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::construction::{
    build_b_descriptors, ABlock, BBlockDescriptor, ComplementPair, GrowthConfig, GrowthPolicy,
    OmegaSpec, PrimeSchedule,
};
use crate::core_sets::FiniteIntSet;
use crate::verification::verify_invariants;

pub const FORMAT_VERSION: u32 = 1;
const HEADER: &str = "addcomp-pair format 1";

#[derive(Error, Debug)]
pub enum ArchiveError {
    #[error("archive format error: {0}")]
    Format(String),
    #[error("archive digest mismatch: stored {stored}, computed {computed}")]
    Integrity { stored: String, computed: String },
    #[error("archived pair violates invariants: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_bigints(values: &[BigInt]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn hex_digest(payload: &str) -> String {
    let hash = Sha256::digest(payload.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical text form of a pair, digest line included.
pub fn to_archive_string(pair: &ComplementPair) -> String {
    let config = pair.config();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("blocks = {}\n", config.blocks));
    out.push_str(&format!("policy = {}\n", config.policy));
    out.push_str(&format!("seed = {}\n", config.seed));
    out.push_str(&format!("sieve-threshold = {}\n", config.sieve_threshold));
    match &config.omega {
        Some(spec) => out.push_str(&format!("omega = {spec}\n")),
        None => out.push_str("omega = none\n"),
    }
    out.push_str(&format!(
        "primes = {}\n",
        join_bigints(pair.schedule().primes())
    ));
    out.push_str(&format!("u = {}\n", join_bigints(pair.u_sequence())));
    for block in pair.a_blocks() {
        out.push_str(&format!(
            "a-block {} = {}\n",
            block.index,
            join_bigints(block.elements.as_slice())
        ));
    }
    for d in pair.b_descriptors() {
        out.push_str(&format!(
            "b-descriptor {} = {},{},{}\n",
            d.index, d.modulus, d.lower, d.upper
        ));
    }
    let digest = hex_digest(&out);
    out.push_str(&format!("digest = {digest}\n"));
    out
}

pub fn save_pair(pair: &ComplementPair, path: &Path) -> Result<(), ArchiveError> {
    fs::write(path, to_archive_string(pair))?;
    Ok(())
}

struct LineReader<'a> {
    lines: std::str::Lines<'a>,
    number: usize,
}

impl<'a> LineReader<'a> {
    fn next(&mut self) -> Result<&'a str, ArchiveError> {
        self.number += 1;
        self.lines
            .next()
            .ok_or_else(|| ArchiveError::Format(format!("truncated at line {}", self.number)))
    }

    /// Next line, which must read `key = value`; returns the value.
    fn field(&mut self, key: &str) -> Result<&'a str, ArchiveError> {
        let line = self.next()?;
        let prefix = format!("{key} = ");
        line.strip_prefix(&prefix).ok_or_else(|| {
            ArchiveError::Format(format!("expected '{key} = ...' at line {}", self.number))
        })
    }
}

fn parse_bigint(text: &str) -> Result<BigInt, ArchiveError> {
    BigInt::from_str(text.trim())
        .map_err(|e| ArchiveError::Format(format!("bad integer '{text}': {e}")))
}

fn parse_bigint_list(text: &str) -> Result<Vec<BigInt>, ArchiveError> {
    if text.trim().is_empty() {
        return Ok(vec![]);
    }
    text.split(',').map(parse_bigint).collect()
}

/// Parse and fully validate an archive: digest first, then the structural
/// audit of the reconstructed pair.
pub fn from_archive_str(content: &str) -> Result<ComplementPair, ArchiveError> {
    // The digest line covers every byte before it.
    let body = content.strip_suffix('\n').ok_or_else(|| {
        ArchiveError::Format("archive must end with a newline".into())
    })?;
    let digest_start = body
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or_else(|| ArchiveError::Format("archive is too short".into()))?;
    let digest_line = &body[digest_start..];
    let stored = digest_line
        .strip_prefix("digest = ")
        .ok_or_else(|| ArchiveError::Format("missing digest line".into()))?;
    let payload = &content[..digest_start];
    let computed = hex_digest(payload);
    if !stored.eq_ignore_ascii_case(&computed) {
        return Err(ArchiveError::Integrity {
            stored: stored.to_string(),
            computed,
        });
    }

    let mut reader = LineReader {
        lines: payload.lines(),
        number: 0,
    };
    let header = reader.next()?;
    if header != HEADER {
        return Err(ArchiveError::Format(format!(
            "unsupported header '{header}' (expected '{HEADER}')"
        )));
    }
    let blocks: usize = reader
        .field("blocks")?
        .parse()
        .map_err(|e| ArchiveError::Format(format!("bad block count: {e}")))?;
    if blocks < 2 {
        return Err(ArchiveError::Format("block count must be ≥ 2".into()));
    }
    let policy = GrowthPolicy::from_str(reader.field("policy")?)
        .map_err(ArchiveError::Format)?;
    let seed: u64 = reader
        .field("seed")?
        .parse()
        .map_err(|e| ArchiveError::Format(format!("bad seed: {e}")))?;
    let sieve_threshold: u64 = reader
        .field("sieve-threshold")?
        .parse()
        .map_err(|e| ArchiveError::Format(format!("bad sieve threshold: {e}")))?;
    let omega_text = reader.field("omega")?;
    let omega = if omega_text == "none" {
        None
    } else {
        Some(OmegaSpec::from_str(omega_text).map_err(ArchiveError::Format)?)
    };
    let primes = parse_bigint_list(reader.field("primes")?)?;
    if primes.len() != blocks {
        return Err(ArchiveError::Format(format!(
            "{} primes for {blocks} blocks",
            primes.len()
        )));
    }
    let u = parse_bigint_list(reader.field("u")?)?;
    if u.len() != blocks {
        return Err(ArchiveError::Format(format!(
            "{} u-values for {blocks} blocks",
            u.len()
        )));
    }

    let mut a_blocks = Vec::with_capacity(blocks);
    for k in 1..=blocks {
        let elements = parse_bigint_list(reader.field(&format!("a-block {k}"))?)?;
        let set = FiniteIntSet::new(elements.clone());
        if set.len() != elements.len() {
            return Err(ArchiveError::Format(format!(
                "a-block {k} repeats an element"
            )));
        }
        a_blocks.push(ABlock {
            index: k,
            u: u[k - 1].clone(),
            elements: set,
        });
    }
    let mut b_descriptors = Vec::with_capacity(blocks - 1);
    for k in 1..blocks {
        let parts = parse_bigint_list(reader.field(&format!("b-descriptor {k}"))?)?;
        if parts.len() != 3 {
            return Err(ArchiveError::Format(format!(
                "b-descriptor {k} needs modulus,lower,upper"
            )));
        }
        b_descriptors.push(BBlockDescriptor {
            index: k,
            modulus: parts[0].clone(),
            lower: parts[1].clone(),
            upper: parts[2].clone(),
        });
    }
    if reader.lines.next().is_some() {
        return Err(ArchiveError::Format("unexpected trailing lines".into()));
    }

    // Stored descriptors must agree with the ones the u-sequence implies.
    let expected = build_b_descriptors(&u, &PrimeSchedule::from_raw(primes.clone()));
    if expected != b_descriptors {
        return Err(ArchiveError::Format(
            "descriptors disagree with the u-sequence".into(),
        ));
    }

    let config = GrowthConfig {
        blocks,
        policy,
        seed,
        sieve_threshold,
        omega,
    };
    let pair = ComplementPair::from_parts(
        PrimeSchedule::from_raw(primes),
        u,
        a_blocks,
        b_descriptors,
        config,
    );

    let audit = verify_invariants(&pair);
    if !audit.overall() {
        let failed: Vec<String> = audit
            .failures()
            .map(|c| match &c.detail {
                Some(d) => format!("{} ({d})", c.name),
                None => c.name.clone(),
            })
            .collect();
        return Err(ArchiveError::Invariant(failed.join("; ")));
    }
    Ok(pair)
}

pub fn load_pair(path: &Path) -> Result<ComplementPair, ArchiveError> {
    let content = fs::read_to_string(path)?;
    from_archive_str(&content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{construct, GrowthConfig};

    #[test]
    fn round_trip_is_byte_identical() {
        let pair = construct(&GrowthConfig::new(3).with_seed(4)).unwrap();
        let first = to_archive_string(&pair);
        let loaded = from_archive_str(&first).unwrap();
        assert_eq!(loaded, pair);
        let second = to_archive_string(&loaded);
        assert_eq!(first, second);
    }

    #[test]
    fn files_round_trip() {
        let pair = construct(&GrowthConfig::new(2)).unwrap();
        let dir = std::env::temp_dir().join("addcomp-archive-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("pair.txt");
        save_pair(&pair, &path).unwrap();
        let loaded = load_pair(&path).unwrap();
        assert_eq!(loaded, pair);
        fs::remove_file(&path).unwrap();
    }

    #[test]
    fn truncation_is_a_format_error() {
        let pair = construct(&GrowthConfig::new(2)).unwrap();
        let text = to_archive_string(&pair);
        let truncated = &text[..text.len() / 2];
        assert!(matches!(
            from_archive_str(truncated),
            Err(ArchiveError::Format(_) | ArchiveError::Integrity { .. })
        ));
    }

    #[test]
    fn digit_flip_is_an_integrity_error() {
        let pair = construct(&GrowthConfig::new(2)).unwrap();
        let text = to_archive_string(&pair);
        // Flip one digit inside the second a-block line.
        let idx = text.find("a-block 2 = ").unwrap() + "a-block 2 = ".len();
        let mut bytes = text.into_bytes();
        bytes[idx] = if bytes[idx] == b'2' { b'3' } else { b'2' };
        let tampered = String::from_utf8(bytes).unwrap();
        assert!(matches!(
            from_archive_str(&tampered),
            Err(ArchiveError::Integrity { .. })
        ));
    }

    #[test]
    fn redigested_tampering_hits_the_invariant_audit() {
        let pair = construct(&GrowthConfig::new(2)).unwrap();
        let text = to_archive_string(&pair);
        // Move one A_2 element out of its interval, then fix the digest.
        let broken = text.replace("a-block 2 = 25,", "a-block 2 = 13,");
        assert_ne!(text, broken);
        let payload_end = broken.rfind("digest = ").unwrap();
        let payload = &broken[..payload_end];
        let redigested = format!("{payload}digest = {}\n", hex_digest(payload));
        match from_archive_str(&redigested) {
            Err(ArchiveError::Invariant(detail)) => {
                assert!(detail.contains("block-intervals") || detail.contains("residue-systems"));
            }
            other => panic!("expected invariant rejection, got {other:?}"),
        }
    }

    #[test]
    fn header_mismatch() {
        assert!(matches!(
            from_archive_str("addcomp-pair format 99\ndigest = 00\n"),
            Err(ArchiveError::Format(_) | ArchiveError::Integrity { .. })
        ));
    }
}
