//! Sparse XOR-convolution matching by index-polynomial length reduction.
//!
//! A domain index `i < 2^L` is split into `ℓ`-bit blocks (LSB block first)
//! and read as a polynomial over `GF(2^ℓ)`; evaluating at a field point `r`
//! hashes the index into one of `2^ℓ` buckets. The map is F₂-linear —
//! `hash(i ⊕ j) = hash(i) ⊕ hash(j)` — so XOR alignments survive reduction,
//! and for fixed distinct `i ≠ j` at most `degree_bound` of the `2^ℓ` choices
//! of `r` collide them.
//!
//! `sparse_match_xor` runs Las Vegas rounds: hash both vectors, correlate
//! bucket counts, and for every bucket holding at least `m` aligned pairs run
//! a per-bit purity check (two extra correlations per index bit, splitting
//! each side by that bit of the source index). A bucket whose every bit is
//! pure determines its original output index bit-by-bit; the reconstructed
//! candidate is then verified by exact membership. A round with no impure
//! heavy bucket proves the collected matches complete, so the output always
//! equals the brute-force oracle; after `max_rounds` an exhaustive candidate
//! sweep guarantees termination.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fwht::xor_correlate;
use crate::gf2m::Gf2mField;
use crate::sparse::{verify_xor_candidate, MatchResult, SparseBinaryVector};

/// Widest reduced domain the Walsh transforms accept.
const MAX_REDUCED_BITS: u32 = 22;

/// Everything needed to hash indices of a `2^L` domain into `2^ℓ` buckets.
#[derive(Debug, Clone, Copy)]
pub struct XorReductionParams {
    domain_bits: u32,
    field: Gf2mField,
    degree_bound: u32,
    eval_point: u32,
}

impl XorReductionParams {
    /// `domain_bits` is `L` (indices live below `2^L`); `eval_point` is the
    /// field element substituted for the polynomial variable.
    pub fn new(domain_bits: u32, field: Gf2mField, eval_point: u32) -> Result<Self> {
        if u64::from(eval_point) >= field.order() {
            return Err(Error::ElementOutOfRange {
                bits: eval_point as u64,
                ell: field.ell(),
            });
        }
        Ok(Self {
            domain_bits,
            field,
            degree_bound: block_count(domain_bits, field.ell()) - 1,
            eval_point,
        })
    }

    pub fn domain_bits(&self) -> u32 {
        self.domain_bits
    }

    pub fn field(&self) -> Gf2mField {
        self.field
    }

    /// Highest polynomial degree an encoded index can have.
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn eval_point(&self) -> u32 {
        self.eval_point
    }

    /// Number of buckets (`2^ℓ`).
    pub fn bucket_count(&self) -> usize {
        1usize << self.field.ell()
    }
}

/// Number of `ℓ`-bit blocks needed for an `L`-bit index (at least one).
fn block_count(domain_bits: u32, ell: u32) -> u32 {
    domain_bits.max(1).div_ceil(ell)
}

/// An index split into `ℓ`-bit blocks, constant (LSB) block first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2IndexPolynomial {
    coeffs: Vec<u32>,
    ell: u32,
}

impl Gf2IndexPolynomial {
    /// Coefficients as raw `ℓ`-bit words, constant term first.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Reassembles the source index from the blocks.
    pub fn source_index(&self) -> u128 {
        let mut out = 0u128;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let shift = k as u32 * self.ell;
            if shift < 128 {
                out |= (c as u128) << shift;
            }
        }
        out
    }
}

/// Splits `i` into `ℓ`-bit blocks starting from the least significant bit;
/// the top block is zero-padded when `ℓ` does not divide `L`.
pub fn encode_index_gf2(i: u128, field: Gf2mField, domain_bits: u32) -> Gf2IndexPolynomial {
    debug_assert!(domain_bits >= 128 || i < (1u128 << domain_bits.max(1)));
    let ell = field.ell();
    let blocks = block_count(domain_bits, ell);
    let mask = (1u128 << ell) - 1;
    let coeffs = (0..blocks)
        .map(|k| {
            let shift = k * ell;
            if shift >= 128 {
                0
            } else {
                ((i >> shift) & mask) as u32
            }
        })
        .collect();
    Gf2IndexPolynomial { coeffs, ell }
}

/// Hashes an index into a bucket by evaluating its block polynomial at the
/// params' field point. F₂-linear: `hash(i ⊕ j) = hash(i) ⊕ hash(j)`.
pub fn hash_index(i: u128, params: &XorReductionParams) -> u32 {
    let poly = encode_index_gf2(i, params.field, params.domain_bits);
    params.field.eval_raw(&poly.coeffs, params.eval_point)
}

/// How many source indices landed in a bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupancy {
    Empty,
    Singleton,
    Multiple,
}

/// A sparse vector pushed through the hash: per-bucket bookkeeping plus the
/// raw `(source index, bucket)` list for downstream bit-split correlations.
#[derive(Debug, Clone)]
pub struct ReducedXorVector {
    bucket_count: usize,
    counts: Vec<i64>,
    xor_of_indices: Vec<u128>,
    representatives: Vec<u128>,
    occupancy: Vec<Occupancy>,
    entries: Vec<(u128, u32)>,
}

impl ReducedXorVector {
    pub fn bucket_count(&self) -> usize {
        self.bucket_count
    }

    /// Per-bucket occupancy counts, usable directly as a transform input.
    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// XOR of all source indices mapped to each bucket.
    pub fn xor_of_indices(&self) -> &[u128] {
        &self.xor_of_indices
    }

    /// For a `Singleton` bucket, its unique source index (0 elsewhere).
    pub fn representative(&self, bucket: usize) -> u128 {
        self.representatives[bucket]
    }

    pub fn occupancy(&self) -> &[Occupancy] {
        &self.occupancy
    }

    /// All `(source index, bucket)` assignments, in support order.
    pub fn entries(&self) -> &[(u128, u32)] {
        &self.entries
    }

    /// Bucket counts restricted to entries whose source index has the given
    /// bit clear / set: `(zeros, ones)`.
    fn split_by_bit(&self, bit: u32) -> (Vec<i64>, Vec<i64>) {
        let mut zeros = vec![0i64; self.bucket_count];
        let mut ones = vec![0i64; self.bucket_count];
        for &(src, bucket) in &self.entries {
            if bit < 128 && (src >> bit) & 1 == 1 {
                ones[bucket as usize] += 1;
            } else {
                zeros[bucket as usize] += 1;
            }
        }
        (zeros, ones)
    }
}

/// Buckets every nonzero of `v` by [`hash_index`].
pub fn reduce_xor(v: &SparseBinaryVector, params: &XorReductionParams) -> Result<ReducedXorVector> {
    let expected = if params.domain_bits >= 128 {
        None
    } else {
        Some(1u128 << params.domain_bits)
    };
    if expected != Some(v.domain_size()) {
        return Err(Error::DomainMismatch(format!(
            "vector domain {} does not match reduction domain 2^{}",
            v.domain_size(),
            params.domain_bits
        )));
    }
    let nb = params.bucket_count();
    let mut red = ReducedXorVector {
        bucket_count: nb,
        counts: vec![0; nb],
        xor_of_indices: vec![0; nb],
        representatives: vec![0; nb],
        occupancy: vec![Occupancy::Empty; nb],
        entries: Vec::with_capacity(v.weight()),
    };
    for &i in v.support() {
        let bucket = hash_index(i, params) as usize;
        red.counts[bucket] += 1;
        red.xor_of_indices[bucket] ^= i;
        red.entries.push((i, bucket as u32));
        match red.occupancy[bucket] {
            Occupancy::Empty => {
                red.occupancy[bucket] = Occupancy::Singleton;
                red.representatives[bucket] = i;
            }
            Occupancy::Singleton => {
                red.occupancy[bucket] = Occupancy::Multiple;
                red.representatives[bucket] = 0;
            }
            Occupancy::Multiple => {}
        }
    }
    Ok(red)
}

/// Outcome of one bit-consistency pass at one bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitVerdict {
    /// Every aligned pair at this bucket has the output bit clear.
    AllZero,
    /// Every aligned pair at this bucket has the output bit set.
    AllOne,
    /// Pairs disagree — the bucket mixes different output indices.
    Mixed,
}

/// Per-bucket masses from one bit-consistency pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitPassBucket {
    /// Aligned pairs whose output index has this bit set.
    pub ones: i64,
    /// All aligned pairs at this bucket.
    pub total: i64,
    pub verdict: BitVerdict,
}

fn verdict_for(ones: i64, total: i64) -> BitVerdict {
    if ones == 0 {
        BitVerdict::AllZero
    } else if ones == total {
        BitVerdict::AllOne
    } else {
        BitVerdict::Mixed
    }
}

/// Mass of aligned pairs per bucket whose output index has `bit` set:
/// two correlations of the bit-split count vectors (pairs where exactly one
/// side has the bit).
fn bit_ones_masses(
    tred: &ReducedXorVector,
    pred: &ReducedXorVector,
    bit: u32,
) -> Result<Vec<i64>> {
    let (t0, t1) = tred.split_by_bit(bit);
    let (p0, p1) = pred.split_by_bit(bit);
    let a = xor_correlate(&t0, &p1)?;
    let b = xor_correlate(&t1, &p0)?;
    // Counts are bounded by n·m, far below overflow.
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
}

/// For every bucket, decides whether all text/pattern pairs aligned there
/// agree on the given bit of the original output index `i ⊕ j`.
pub fn bit_consistency_pass(
    tred: &ReducedXorVector,
    pred: &ReducedXorVector,
    bit: u32,
) -> Result<Vec<BitPassBucket>> {
    if tred.bucket_count != pred.bucket_count {
        return Err(Error::LengthMismatch {
            left: tred.bucket_count,
            right: pred.bucket_count,
        });
    }
    let totals = xor_correlate(&tred.counts, &pred.counts)?;
    let ones = bit_ones_masses(tred, pred, bit)?;
    Ok(ones
        .into_iter()
        .zip(totals)
        .map(|(o, t)| BitPassBucket {
            ones: o,
            total: t,
            verdict: verdict_for(o, t),
        })
        .collect())
}

/// Knobs for the Las Vegas XOR matcher.
#[derive(Debug, Clone, Copy)]
pub struct XorMatchConfig {
    /// Bucket-count headroom: the reduced domain holds at least
    /// `oversize_factor · (n + m)` buckets. Must be ≥ 2.
    pub oversize_factor: u64,
    /// Rounds before falling back to the exhaustive candidate sweep.
    pub max_rounds: u32,
    /// Seed for the per-round evaluation points.
    pub seed: u64,
}

impl Default for XorMatchConfig {
    fn default() -> Self {
        Self {
            oversize_factor: 8,
            max_rounds: 16,
            seed: 0,
        }
    }
}

/// Smallest field width `ℓ` whose bucket count reaches `needed`.
fn pick_field_width(needed: u64) -> Result<u32> {
    let ell = needed.next_power_of_two().trailing_zeros().max(2);
    if ell > MAX_REDUCED_BITS {
        return Err(Error::ReductionTooLarge {
            needed,
            max: 1 << MAX_REDUCED_BITS,
        });
    }
    Ok(ell)
}

/// Las Vegas sparse XOR matcher. Output always equals
/// [`oracle_match_xor`](crate::sparse::oracle_match_xor); randomness affects
/// only the running time.
pub fn sparse_match_xor(
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
    config: &XorMatchConfig,
) -> Result<MatchResult> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if text.domain_size() != pattern.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "xor matching needs equal domains, got {} and {}",
            text.domain_size(),
            pattern.domain_size()
        )));
    }
    let domain_bits = text.log2_domain().ok_or_else(|| {
        Error::DomainMismatch(format!(
            "xor matching needs a power-of-two domain, got {}",
            text.domain_size()
        ))
    })?;
    if config.oversize_factor < 2 {
        return Err(Error::InfeasibleInstance(
            "oversize factor must be at least 2".to_string(),
        ));
    }
    if config.max_rounds == 0 {
        return Err(Error::InfeasibleInstance(
            "at least one round is required".to_string(),
        ));
    }

    let p0 = pattern.support()[0];
    let m = pattern.weight();
    if m == 1 {
        // Single-point pattern: every text nonzero is a match at t ⊕ p0.
        let mut positions: Vec<u128> = text.support().iter().map(|&t| t ^ p0).collect();
        positions.sort_unstable();
        return Ok(MatchResult::new(positions, 0, 0));
    }

    let needed = 4u64.max(
        config
            .oversize_factor
            .saturating_mul((text.weight() + pattern.weight()) as u64),
    );
    let field = Gf2mField::new(pick_field_width(needed)?);
    let text_set = text.membership_index();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut confirmed: BTreeSet<u128> = BTreeSet::new();
    let mut counts_checked = 0u64;

    // Expected noise pairs per bucket. When this is large, unanimous
    // buckets are vanishingly rare (probability falls off exponentially in
    // the load), so extra rounds only burn time; one round still harvests
    // whatever pure buckets exist before the exhaustive sweep. The output
    // is exact either way.
    let load = (text.weight() as u64).saturating_mul(m as u64) / field.order();
    let budget = if load >= 4 { 1 } else { config.max_rounds };

    for round in 1..=budget {
        let eval_point = rng.gen_range(0..field.order()) as u32;
        let params = XorReductionParams::new(domain_bits, field, eval_point)?;
        let tred = reduce_xor(text, &params)?;
        let pred = reduce_xor(pattern, &params)?;

        let totals = xor_correlate(tred.counts(), pred.counts())?;
        let ones_per_bit: Vec<Vec<i64>> = (0..domain_bits.max(1))
            .map(|b| bit_ones_masses(&tred, &pred, b))
            .collect::<Result<_>>()?;

        let mut dirty = false;
        let mut candidates: BTreeSet<u128> = BTreeSet::new();
        for bucket in 0..params.bucket_count() {
            let total = totals[bucket];
            if total < m as i64 {
                continue;
            }
            let mut word = 0u128;
            let mut pure = true;
            for (b, ones) in ones_per_bit.iter().enumerate() {
                match verdict_for(ones[bucket], total) {
                    BitVerdict::AllZero => {}
                    BitVerdict::AllOne => word |= 1u128 << b,
                    BitVerdict::Mixed => {
                        pure = false;
                        break;
                    }
                }
            }
            if pure {
                candidates.insert(word);
            } else {
                dirty = true;
            }
        }

        for w in candidates {
            if confirmed.contains(&w) {
                continue;
            }
            counts_checked += 1;
            if verify_xor_candidate(&text_set, pattern.support(), w) {
                confirmed.insert(w);
            }
        }

        if !dirty {
            // Every bucket holding at least m pairs was pure, so every true
            // match was reconstructed and verified this round: done.
            let positions: Vec<u128> = confirmed.into_iter().collect();
            return Ok(MatchResult::new(positions, counts_checked, round));
        }
    }

    // Las Vegas budget exhausted: sweep the complete candidate set
    // {t ⊕ p0 : t ∈ text}. Any match w has w ⊕ p0 in the text, so the sweep
    // cannot miss one.
    for &t in text.support() {
        let w = t ^ p0;
        if confirmed.contains(&w) {
            continue;
        }
        counts_checked += 1;
        if verify_xor_candidate(&text_set, pattern.support(), w) {
            confirmed.insert(w);
        }
    }
    let positions: Vec<u128> = confirmed.into_iter().collect();
    Ok(MatchResult::new(positions, counts_checked, budget))
}
