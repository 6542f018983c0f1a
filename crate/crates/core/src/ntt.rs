//! Exact cyclic correlation of integer vectors via number-theoretic
//! transforms (NTT) — the modular analogue of an FFT, with no floating point
//! and therefore no rounding.
//!
//! `cyclic_correlate(a, b, q)` returns `out[s] = Σ_j a[(s+j) mod q] · b[j]` as
//! exact integers for any length `q ≤ 2^22`. Internally the correlation is a
//! linear convolution at the next power of two `≥ 2q − 1` (at most `2^23`),
//! folded back to length `q`.
//!
//! Arithmetic runs modulo one or two fixed 62-bit primes `p ≡ 1 (mod 2^23)`.
//! A single prime is used while the output-magnitude bound fits below `p/2`;
//! past that the routine automatically computes the correlation modulo both
//! primes and recombines residues (Chinese remaindering over `p1·p2 ≈
//! 2^122`), so every output that fits a signed 64-bit integer is produced
//! exactly. Negative entries are supported; lifting is symmetric.

use crate::error::{Error, Result};
use crate::primes::{mod_pow, mul_mod};

/// Smallest prime above `2^61` that is `1 (mod 2^23)`; multiplicative group
/// generated by 5. Reproduced by the prime search in this crate (see the
/// pinning test) and frozen here so reduced-vector transforms are identical
/// on every machine.
pub const NTT_PRIME_1: u64 = 2_305_843_009_255_636_993; // 274877906949 · 2^23 + 1
/// Next such prime above [`NTT_PRIME_1`]; generator 3. Second modulus for the
/// residue-recombination path.
pub const NTT_PRIME_2: u64 = 2_305_843_009_322_745_857; // 274877906957 · 2^23 + 1
/// Certified generator of the multiplicative group mod [`NTT_PRIME_1`].
pub const NTT_GENERATOR_1: u64 = 5;
/// Certified generator of the multiplicative group mod [`NTT_PRIME_2`].
pub const NTT_GENERATOR_2: u64 = 3;

/// Longest input vector `cyclic_correlate` accepts.
pub const MAX_NTT_LEN: usize = 1 << 22;

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // both < p < 2^62, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn bit_reverse_permute(v: &mut [u64]) {
    let n = v.len();
    let shift = (n.leading_zeros() + 1) as usize;
    for i in 0..n {
        let j = i.reverse_bits() >> shift;
        if i < j {
            v.swap(i, j);
        }
    }
}

/// Iterative radix-2 transform; `root` must have multiplicative order exactly
/// `v.len()` (a power of two) modulo `p`.
fn ntt_in_place(v: &mut [u64], p: u64, root: u64) {
    let n = v.len();
    if n <= 1 {
        return;
    }
    bit_reverse_permute(v);
    let mut len = 2;
    while len <= n {
        let w_len = mod_pow(root, (n / len) as u64, p);
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for i in start..start + len / 2 {
                let x = v[i];
                let y = mul_mod(w, v[i + len / 2], p);
                v[i] = add_mod(x, y, p);
                v[i + len / 2] = sub_mod(x, y, p);
                w = mul_mod(w, w_len, p);
            }
        }
        len <<= 1;
    }
}

/// Lifts a signed value into `[0, p)`.
fn lift_mod(x: i64, p: u64) -> u64 {
    let r = x % p as i64; // p < 2^63 so the cast is lossless
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}

/// Cyclic correlation of `a` with `b` modulo `p`, folded to length `q`.
/// `size` is the power-of-two transform length (`≥ 2q − 1`).
fn correlate_mod(a: &[i64], b: &[i64], q: usize, size: usize, p: u64, g: u64) -> Vec<u64> {
    // Correlation = convolution with the index-reversed second operand:
    // out[s] = Σ_j a[(s+j) mod q]·b[j] is the cyclic convolution of a with
    // b'[x] = b[(q − x) mod q].
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (i, &x) in a.iter().enumerate() {
        fa[i] = lift_mod(x, p);
    }
    for (i, &x) in b.iter().enumerate() {
        fb[(q - i) % q] = lift_mod(x, p);
    }
    let root = mod_pow(g, (p - 1) / size as u64, p);
    ntt_in_place(&mut fa, p, root);
    ntt_in_place(&mut fb, p, root);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x = mul_mod(*x, *y, p);
    }
    let root_inv = mod_pow(root, p - 2, p);
    ntt_in_place(&mut fa, p, root_inv);
    let size_inv = mod_pow(size as u64, p - 2, p);
    for x in fa.iter_mut() {
        *x = mul_mod(*x, size_inv, p);
    }
    // Fold the linear convolution (support < 2q − 1) back onto [0, q).
    let mut out = vec![0u64; q];
    for s in 0..q {
        let mut v = fa[s];
        if s + q < size {
            v = add_mod(v, fa[s + q], p);
        }
        out[s] = v;
    }
    out
}

/// Symmetric lift from `[0, p)` to `(-p/2, p/2]` range, as i128.
fn symmetric_single(r: u64, p: u64) -> i128 {
    if r > p / 2 {
        r as i128 - p as i128
    } else {
        r as i128
    }
}

/// Exact cyclic correlation `out[s] = Σ_j a[(s + j) mod q] · b[j]`.
///
/// Both inputs must have length `q` (`1 ≤ q ≤ 2^22`). The a-priori output
/// bound `min(Σ|a|·max|b|, Σ|b|·max|a|)` must fit a signed 64-bit integer;
/// otherwise `Overflow` is reported before any work is done.
pub fn cyclic_correlate(a: &[i64], b: &[i64], q: usize) -> Result<Vec<i64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() != q {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: q,
        });
    }
    if q == 0 {
        return Err(Error::DomainMismatch(
            "cyclic correlation needs a nonempty vector".to_string(),
        ));
    }
    if q > MAX_NTT_LEN {
        return Err(Error::ReductionTooLarge {
            needed: q as u64,
            max: MAX_NTT_LEN as u64,
        });
    }

    let sum_abs = |v: &[i64]| -> u128 { v.iter().map(|x| x.unsigned_abs() as u128).sum() };
    let max_abs = |v: &[i64]| -> u128 {
        v.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0)
    };
    let bound_a = sum_abs(a).saturating_mul(max_abs(b));
    let bound_b = sum_abs(b).saturating_mul(max_abs(a));
    let bound = bound_a.min(bound_b);
    if bound > i64::MAX as u128 {
        return Err(Error::Overflow("cyclic correlation output bound"));
    }

    let size = (2 * q - 1).next_power_of_two();
    let r1 = correlate_mod(a, b, q, size, NTT_PRIME_1, NTT_GENERATOR_1);

    // One prime suffices while every |output| < p1/2; beyond that, residues
    // modulo a second prime pin the value inside p1·p2 ≈ 2^122.
    if 2 * bound < NTT_PRIME_1 as u128 {
        return Ok(r1
            .into_iter()
            .map(|r| symmetric_single(r, NTT_PRIME_1) as i64)
            .collect());
    }

    let r2 = correlate_mod(a, b, q, size, NTT_PRIME_2, NTT_GENERATOR_2);
    let p1 = NTT_PRIME_1 as u128;
    let p2 = NTT_PRIME_2 as u128;
    let p1_inv_p2 = mod_pow(NTT_PRIME_1 % NTT_PRIME_2, NTT_PRIME_2 - 2, NTT_PRIME_2);
    let modulus = p1 * p2;
    let mut out = Vec::with_capacity(q);
    for (&v1, &v2) in r1.iter().zip(r2.iter()) {
        // x ≡ v1 (mod p1), x ≡ v2 (mod p2): x = v1 + p1·t with
        // t = (v2 − v1)·p1^{-1} mod p2.
        let diff = sub_mod(v2, v1 % NTT_PRIME_2, NTT_PRIME_2);
        let t = mul_mod(diff, p1_inv_p2, NTT_PRIME_2) as u128;
        let x = v1 as u128 + p1 * t;
        let signed = if x > modulus / 2 {
            x as i128 - modulus as i128
        } else {
            x as i128
        };
        let v: i64 = signed
            .try_into()
            .map_err(|_| Error::Overflow("cyclic correlation output"))?;
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::find_ntt_prime;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Quadratic reference with 128-bit accumulation.
    fn schoolbook(a: &[i64], b: &[i64]) -> Vec<i64> {
        let q = a.len();
        (0..q)
            .map(|s| {
                (0..q)
                    .map(|j| a[(s + j) % q] as i128 * b[j] as i128)
                    .sum::<i128>() as i64
            })
            .collect()
    }

    #[test]
    fn frozen_primes_match_prime_search() {
        // The constants are exactly what the crate's own search produces:
        // smallest qualifying prime above 2^61, then the next one above it.
        assert_eq!(
            find_ntt_prime(1 << 23, 1 << 61).unwrap(),
            (NTT_PRIME_1, NTT_GENERATOR_1)
        );
        assert_eq!(
            find_ntt_prime(1 << 23, NTT_PRIME_1).unwrap(),
            (NTT_PRIME_2, NTT_GENERATOR_2)
        );
    }

    #[test]
    fn transform_roots_have_exact_order() {
        for (p, g) in [(NTT_PRIME_1, NTT_GENERATOR_1), (NTT_PRIME_2, NTT_GENERATOR_2)] {
            let root = mod_pow(g, (p - 1) / (1 << 23), p);
            assert_eq!(mod_pow(root, 1 << 23, p), 1);
            assert_ne!(mod_pow(root, 1 << 22, p), 1);
        }
    }

    #[test]
    fn transform_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for size in [1usize, 2, 4, 8, 64, 256, 1024] {
            let reps = if size <= 64 { 1000 } else { 50 };
            for _ in 0..reps {
                let v: Vec<u64> = (0..size).map(|_| rng.gen_range(0..NTT_PRIME_1)).collect();
                let mut w = v.clone();
                let root = mod_pow(NTT_GENERATOR_1, (NTT_PRIME_1 - 1) / size as u64, NTT_PRIME_1);
                ntt_in_place(&mut w, NTT_PRIME_1, root);
                let root_inv = mod_pow(root, NTT_PRIME_1 - 2, NTT_PRIME_1);
                ntt_in_place(&mut w, NTT_PRIME_1, root_inv);
                let size_inv = mod_pow(size as u64, NTT_PRIME_1 - 2, NTT_PRIME_1);
                for x in w.iter_mut() {
                    *x = mul_mod(*x, size_inv, NTT_PRIME_1);
                }
                assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn worked_small_example() {
        // q=5: b has marks at offsets 0 (weight 1) and 2 (weight 2), so
        // out[s] = a[s] + 2·a[(s+2) mod 5].
        let a = vec![1i64, 2, 3, 4, 5];
        let b = vec![1i64, 0, 2, 0, 0];
        assert_eq!(cyclic_correlate(&a, &b, 5).unwrap(), vec![7, 10, 13, 6, 9]);
    }

    #[test]
    fn delta_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a: Vec<i64> = (0..13).map(|_| rng.gen_range(-100..=100)).collect();
        let mut delta = vec![0i64; 13];
        delta[0] = 1;
        assert_eq!(cyclic_correlate(&a, &delta, 13).unwrap(), a);
    }

    #[test]
    fn single_aligned_pair() {
        let mut a = vec![0i64; 13];
        let mut b = vec![0i64; 13];
        a[5] = 1;
        b[5] = 1;
        let out = cyclic_correlate(&a, &b, 13).unwrap();
        let mut expected = vec![0i64; 13];
        expected[0] = 1;
        assert_eq!(out, expected);
    }

    #[test]
    fn matches_schoolbook_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for q in [1usize, 2, 3, 13, 97] {
            for _ in 0..10 {
                let a: Vec<i64> = (0..q).map(|_| rng.gen_range(-1000..=1000)).collect();
                let b: Vec<i64> = (0..q).map(|_| rng.gen_range(-1000..=1000)).collect();
                assert_eq!(cyclic_correlate(&a, &b, q).unwrap(), schoolbook(&a, &b));
            }
        }
    }

    #[test]
    fn linearity_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let q = 97;
        let a1: Vec<i64> = (0..q).map(|_| rng.gen_range(-500..=500)).collect();
        let a2: Vec<i64> = (0..q).map(|_| rng.gen_range(-500..=500)).collect();
        let b: Vec<i64> = (0..q).map(|_| rng.gen_range(-500..=500)).collect();
        let sum: Vec<i64> = a1.iter().zip(&a2).map(|(x, y)| x + y).collect();
        let lhs = cyclic_correlate(&sum, &b, q).unwrap();
        let r1 = cyclic_correlate(&a1, &b, q).unwrap();
        let r2 = cyclic_correlate(&a2, &b, q).unwrap();
        let rhs: Vec<i64> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn large_values_route_through_second_prime() {
        // 3·2^60 > p1/2, so a single prime cannot represent the outputs;
        // the residue-recombination path must produce the exact values.
        let big = 3i64 << 60;
        let a = vec![big, 0, -big, 0];
        let b = vec![1i64, 1, 0, 0];
        let out = cyclic_correlate(&a, &b, 4).unwrap();
        assert_eq!(out, schoolbook(&a, &b));
        assert_eq!(out, vec![big, -big, -big, big]);
    }

    #[test]
    fn hopeless_bound_is_rejected() {
        let a = vec![i64::MAX; 4];
        let b = vec![i64::MAX; 4];
        match cyclic_correlate(&a, &b, 4) {
            Err(Error::Overflow(_)) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        let a = vec![0i64; 4];
        let b = vec![0i64; 5];
        assert!(matches!(
            cyclic_correlate(&a, &b, 4),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            cyclic_correlate(&a, &a, 5),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            cyclic_correlate(&[], &[], 0),
            Err(Error::DomainMismatch(_))
        ));
        let big = vec![0i64; MAX_NTT_LEN + 1];
        assert!(matches!(
            cyclic_correlate(&big, &big, MAX_NTT_LEN + 1),
            Err(Error::ReductionTooLarge { .. })
        ));
    }
}
