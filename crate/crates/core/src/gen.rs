//! Deterministic synthetic instance generation for both alignment families.
//!
//! `gen_instance` plants a requested number of pattern occurrences into a
//! noise text so that matcher tests always have a known subset of the answer:
//! the planted positions are contained in the exact match set by
//! construction. All randomness comes from a caller-supplied seed through a
//! fixed-stream generator, so the same parameters always produce the same
//! instance on every platform.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{FamilyKind, SparseBinaryVector};

/// A generated (text, pattern) pair plus where the pattern was planted.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub text: SparseBinaryVector,
    pub pattern: SparseBinaryVector,
    /// Ascending positions at which a full pattern copy was inserted.
    /// Always a subset of the exact match set.
    pub planted_positions: Vec<u128>,
}

/// Draws `count` distinct values from `[lo, hi)`, ascending.
///
/// Uses rejection sampling on large ranges and a partial shuffle when the
/// range is small enough that rejection would thrash.
fn sample_distinct(rng: &mut ChaCha8Rng, lo: u128, hi: u128, count: usize) -> Result<Vec<u128>> {
    let range = hi.saturating_sub(lo);
    if (count as u128) > range {
        return Err(Error::InfeasibleInstance(format!(
            "cannot draw {count} distinct values from a range of {range}"
        )));
    }
    const DENSE_CAP: u128 = 1 << 20;
    let mut out: Vec<u128>;
    if range <= DENSE_CAP && (count as u128) * 4 >= range {
        // Dense draw: partial Fisher-Yates over the materialized range.
        let mut pool: Vec<u128> = (lo..hi).collect();
        for k in 0..count {
            let j = rng.gen_range(k..pool.len());
            pool.swap(k, j);
        }
        pool.truncate(count);
        out = pool;
    } else {
        let mut seen = HashSet::with_capacity(count * 2);
        out = Vec::with_capacity(count);
        while out.len() < count {
            let v = rng.gen_range(lo..hi);
            if seen.insert(v) {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Generates a seeded instance for the given family.
///
/// * `domain_size` — text length `N` (power of two for the xor family);
/// * `n` — number of noise nonzeros drawn into the text;
/// * `m` — number of pattern nonzeros (`1 <= m <= n`);
/// * `planted` — number of guaranteed occurrences inserted into the text.
///
/// The text support is the union of the noise and the planted copies, so its
/// weight is at most `n + planted * m`. For the shift family the pattern
/// always contains index 0, which pins its length to its largest nonzero
/// plus one and keeps shifts canonical.
pub fn gen_instance(
    kind: FamilyKind,
    domain_size: u128,
    n: usize,
    m: usize,
    planted: usize,
    seed: u64,
) -> Result<GeneratedInstance> {
    if m == 0 || n < m {
        return Err(Error::InfeasibleInstance(format!("need n >= m >= 1, got n={n} m={m}")));
    }
    if (n as u128) > domain_size || (m as u128) > domain_size {
        return Err(Error::InfeasibleInstance(format!(
            "domain of size {domain_size} cannot hold n={n} or m={m} distinct indices"
        )));
    }
    if kind == FamilyKind::Xor && !domain_size.is_power_of_two() {
        return Err(Error::InfeasibleInstance(format!(
            "xor family needs a power-of-two domain, got {domain_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Pattern first: planting ranges depend on the pattern length.
    let pattern = match kind {
        FamilyKind::Xor => {
            SparseBinaryVector::new(domain_size, sample_distinct(&mut rng, 0, domain_size, m)?)?
        }
        FamilyKind::Shift => {
            // Spread the pattern over the first quarter of the domain (or the
            // minimum window that fits m indices) so that plenty of shifts
            // remain available for planting.
            let spread = (domain_size / 4).max(m as u128);
            let mut support = vec![0u128];
            support.extend(sample_distinct(&mut rng, 1, spread, m - 1)?);
            // 0 < everything drawn from [1, spread), so order is preserved.
            let len = support.last().copied().unwrap_or(0) + 1;
            SparseBinaryVector::new(len, support)?
        }
    };

    let planted_positions = match kind {
        FamilyKind::Xor => {
            if (planted as u128) > domain_size {
                return Err(Error::InfeasibleInstance(format!(
                    "cannot plant {planted} distinct positions in a domain of {domain_size}"
                )));
            }
            sample_distinct(&mut rng, 0, domain_size, planted)?
        }
        FamilyKind::Shift => {
            let shifts = domain_size - pattern.domain_size() + 1;
            if (planted as u128) > shifts {
                return Err(Error::InfeasibleInstance(format!(
                    "cannot plant {planted} distinct shifts out of {shifts}"
                )));
            }
            sample_distinct(&mut rng, 0, shifts, planted)?
        }
    };

    let noise = sample_distinct(&mut rng, 0, domain_size, n)?;
    let mut support: Vec<u128> = noise;
    for &pos in &planted_positions {
        for &j in pattern.support() {
            support.push(match kind {
                FamilyKind::Xor => pos ^ j,
                FamilyKind::Shift => pos + j,
            });
        }
    }
    support.sort_unstable();
    support.dedup();
    let text = SparseBinaryVector::new(domain_size, support)?;

    Ok(GeneratedInstance { text, pattern, planted_positions })
}
