//! Separating-prime search for huge index domains.
//!
//! Given distinct indices too large to encode as digit polynomials directly,
//! find a small prime `p` under which all indices stay distinct; reducing
//! mod `p` then shrinks the domain while preserving alignment structure.
//!
//! The search is the batch-GCD scheme: let `D` be the product of all pairwise
//! index differences (nonzero by distinctness) and `Q` the product of a pool
//! of candidate primes, both built with balanced product trees. Every pool
//! prime dividing some difference divides `gcd(Q, D)`, so
//! `R = Q / gcd(Q, D)` is the product of exactly the separating primes.
//! While the candidate list has more than one prime, halve it and keep the
//! half whose product shares a factor with `R`; the survivor separates all
//! indices (asserted before returning).
//!
//! Pool sufficiency is validated arithmetically: a difference below `2^b` is
//! divisible by fewer than `b / (bits − 1)` primes of `bits` bits, so a pool
//! larger than `#pairs · ⌊(b−1)/(bits−1)⌋` always leaves a survivor.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::primes::next_prime;

/// Most indices the quadratic pairwise-difference product accepts.
pub const MAX_SEARCH_INDICES: usize = 2048;

/// Pool shape for [`exp_prime_search`].
#[derive(Debug, Clone, Copy)]
pub struct PrimeSearchConfig {
    /// Number of candidate primes to generate.
    pub prime_count: usize,
    /// Bit width of every candidate prime.
    pub prime_bits: u32,
}

impl Default for PrimeSearchConfig {
    /// Enough for 32 indices of up to 128 bits: 496 pairs, each difference
    /// divisible by at most 6 twenty-bit primes, needs 2977 ≤ 4096.
    fn default() -> Self {
        Self {
            prime_count: 4096,
            prime_bits: 20,
        }
    }
}

/// Exact product of the values via a balanced pairwise tree.
/// An empty list yields the neutral element 1.
pub fn product_tree(values: &[BigUint]) -> BigUint {
    if values.is_empty() {
        return BigUint::one();
    }
    let mut layer: Vec<BigUint> = values.to_vec();
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            next.push(if pair.len() == 2 {
                &pair[0] * &pair[1]
            } else {
                pair[0].clone()
            });
        }
        layer = next;
    }
    layer.pop().unwrap()
}

/// The numbers the batch-GCD search works with, exposed for inspection.
#[derive(Debug, Clone)]
pub struct PrimeSearchState {
    /// Candidate primes (the pool `S`).
    pub pool: Vec<u64>,
    /// `D`: product of all pairwise index differences.
    pub difference_product: BigUint,
    /// `Q`: product of the pool.
    pub pool_product: BigUint,
    /// `R = Q / gcd(Q, D)`: product of the separating primes.
    pub surviving_product: BigUint,
}

fn validated_indices(indices: &[u128]) -> Result<Vec<u128>> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InfeasibleInstance(
            "separating-prime search needs distinct indices".to_string(),
        ));
    }
    if sorted.len() < 2 {
        return Err(Error::InfeasibleInstance(
            "separating-prime search needs at least two indices".to_string(),
        ));
    }
    if sorted.len() > MAX_SEARCH_INDICES {
        return Err(Error::InfeasibleInstance(format!(
            "separating-prime search is quadratic in the index count; \
             {} exceeds the {MAX_SEARCH_INDICES} guardrail",
            sorted.len()
        )));
    }
    Ok(sorted)
}

/// Builds `D`, `Q` and `R` for a given pool. Fails with `PoolTooSmall` when
/// no pool prime separates the indices (`R = 1`).
pub fn prepare_search(indices: &[u128], pool: &[u64]) -> Result<PrimeSearchState> {
    let sorted = validated_indices(indices)?;
    if pool.is_empty() {
        return Err(Error::PoolTooSmall {
            required: 1,
            available: 0,
        });
    }
    let mut diffs: Vec<BigUint> = Vec::with_capacity(sorted.len() * (sorted.len() - 1) / 2);
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            diffs.push(BigUint::from(sorted[j] - sorted[i]));
        }
    }
    let difference_product = product_tree(&diffs);
    let pool_big: Vec<BigUint> = pool.iter().map(|&p| BigUint::from(p)).collect();
    let pool_product = product_tree(&pool_big);
    let killed = pool_product.gcd(&difference_product);
    let surviving_product = &pool_product / &killed;
    if surviving_product.is_one() {
        return Err(Error::PoolTooSmall {
            required: pool.len() as u64 + 1,
            available: pool.len() as u64,
        });
    }
    Ok(PrimeSearchState {
        pool: pool.to_vec(),
        difference_product,
        pool_product,
        surviving_product,
    })
}

/// Runs the halving search on a prepared state and returns a prime under
/// which all the indices have pairwise-distinct residues.
fn search_pool(state: &PrimeSearchState, indices: &[u128]) -> u64 {
    let mut s: Vec<u64> = state.pool.clone();
    // Invariant: gcd(product(s), R) > 1 — some prime of s divides R.
    while s.len() > 1 {
        let (left, right) = s.split_at(s.len() / 2);
        let left_big: Vec<BigUint> = left.iter().map(|&p| BigUint::from(p)).collect();
        let half_product = product_tree(&left_big);
        if half_product.gcd(&state.surviving_product).is_one() {
            s = right.to_vec();
        } else {
            s = left.to_vec();
        }
    }
    let p = s[0];
    let residues: HashSet<u64> = indices.iter().map(|&i| (i % p as u128) as u64).collect();
    assert_eq!(
        residues.len(),
        indices.len(),
        "search returned {p} but residues collide — the gcd invariant broke"
    );
    p
}

/// Separating-prime search against an explicit candidate pool.
pub fn exp_prime_search_with_pool(indices: &[u128], pool: &[u64]) -> Result<u64> {
    let state = prepare_search(indices, pool)?;
    Ok(search_pool(&state, &validated_indices(indices)?))
}

/// `count` consecutive primes of exactly `bits` bits, ascending.
pub fn generate_prime_pool(count: usize, bits: u32) -> Result<Vec<u64>> {
    if !(2..=62).contains(&bits) {
        return Err(Error::InfeasibleInstance(format!(
            "prime pool width must be between 2 and 62 bits, got {bits}"
        )));
    }
    let lo = 1u64 << (bits - 1);
    let hi = 1u64 << bits;
    let mut pool = Vec::with_capacity(count);
    let mut p = next_prime(lo);
    while pool.len() < count && p < hi {
        pool.push(p);
        p = next_prime(p + 1);
    }
    if pool.len() < count {
        return Err(Error::PoolTooSmall {
            required: count as u64,
            available: pool.len() as u64,
        });
    }
    Ok(pool)
}

/// Separating-prime search with a generated pool, validated sufficient
/// before any big-integer work: every index pair stays distinct modulo the
/// returned prime.
pub fn exp_prime_search(indices: &[u128], config: &PrimeSearchConfig) -> Result<u64> {
    let sorted = validated_indices(indices)?;
    let pairs = (sorted.len() * (sorted.len() - 1) / 2) as u64;
    let spread = sorted[sorted.len() - 1] - sorted[0];
    let diff_bits = (128 - spread.leading_zeros()).max(1) as u64;
    // A difference below 2^b has at most ⌊(b−1)/(bits−1)⌋ prime factors of
    // `bits` bits, since k such primes multiply to at least 2^(k(bits−1)).
    let per_pair = (diff_bits - 1) / (config.prime_bits as u64 - 1).max(1);
    let required = pairs
        .checked_mul(per_pair)
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("prime pool sufficiency bound"))?;
    if required > config.prime_count as u64 {
        return Err(Error::PoolTooSmall {
            required,
            available: config.prime_count as u64,
        });
    }
    let pool = generate_prime_pool(config.prime_count, config.prime_bits)?;
    let state = prepare_search(&sorted, &pool)?;
    Ok(search_pool(&state, &sorted))
}
