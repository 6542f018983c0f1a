//! Sparse binary vectors and the brute-force matching/convolution oracles.
//!
//! A sparse binary vector is a 0/1 vector of (possibly huge) length `N`
//! stored as the sorted list of its nonzero indices. Two alignment families
//! are supported throughout the crate:
//!
//! * **shift**: pattern index `j` aligns with text index `i + j` — ordinary
//!   substring-style matching with don't-cares encoded as zeros;
//! * **xor**: pattern index `j` aligns with text index `i ^ j` — dyadic
//!   (Walsh) correlation over a power-of-two domain.
//!
//! The oracles here are the ground truth the fast matchers are tested
//! against: direct membership testing in `O(n·m)`, plus a dense schoolbook
//! convolution capped at small lengths.
//!
//! Invariants maintained by [`SparseBinaryVector`]:
//! 1. `support` is strictly ascending (distinct, sorted);
//! 2. every index is `< domain_size`;
//! 3. an empty support is representable — operations that cannot accept it
//!    (pattern side of a match) reject it explicitly.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Ceiling on the dense lengths [`oracle_dot_convolution`] accepts.
pub const ORACLE_DENSE_MAX: u128 = 1 << 16;

/// A 0/1 vector of length `domain_size` stored by its nonzero indices.
///
/// Indices are `u128` so that exponentially large domains (up to 128-bit
/// indices) can be represented; the decimal file format in [`crate::io`]
/// round-trips the full width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryVector {
    domain_size: u128,
    support: Vec<u128>,
}

impl SparseBinaryVector {
    /// Builds a vector, validating that `support` is strictly ascending and
    /// within the domain.
    pub fn new(domain_size: u128, support: Vec<u128>) -> Result<Self> {
        for (k, &idx) in support.iter().enumerate() {
            if idx >= domain_size {
                return Err(Error::DomainMismatch(format!(
                    "index {idx} out of range for domain of size {domain_size}"
                )));
            }
            if k > 0 && support[k - 1] >= idx {
                return Err(Error::DomainMismatch(format!(
                    "support must be strictly ascending, saw {} then {idx}",
                    support[k - 1]
                )));
            }
        }
        Ok(Self { domain_size, support })
    }

    /// Builds a vector from a dense `'0'`/`'1'` string, index 0 first.
    /// Convenient for small worked examples.
    pub fn from_bit_string(bits: &str) -> Result<Self> {
        let mut support = Vec::new();
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => support.push(i as u128),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            }
        }
        Self::new(bits.chars().count() as u128, support)
    }

    /// Vector length `N` (one past the largest addressable index).
    pub fn domain_size(&self) -> u128 {
        self.domain_size
    }

    /// Sorted nonzero indices.
    pub fn support(&self) -> &[u128] {
        &self.support
    }

    /// Number of nonzeros.
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    /// True if the vector has no nonzeros.
    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Hash set over the support for `O(1)` membership tests.
    pub fn membership_index(&self) -> HashSet<u128> {
        self.support.iter().copied().collect()
    }

    /// `log2(domain_size)` if the domain is a power of two.
    pub fn log2_domain(&self) -> Option<u32> {
        if self.domain_size.is_power_of_two() {
            Some(self.domain_size.trailing_zeros())
        } else {
            None
        }
    }
}

/// Which alignment rule a convolution uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `pattern[j]` aligns with `text[i ^ j]`; domains are equal powers of two.
    Xor,
    /// `pattern[j]` aligns with `text[i + j]`; output indexed by shifts.
    Shift,
}

/// An alignment family instantiated for concrete text/pattern lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvolutionFamily {
    kind: FamilyKind,
    text_len: u128,
    pattern_len: u128,
    output_length: u128,
}

impl ConvolutionFamily {
    /// Xor family over a power-of-two domain of size `n`; output length `n`.
    pub fn xor(n: u128) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::DomainMismatch(format!(
                "xor family needs a power-of-two domain, got {n}"
            )));
        }
        Ok(Self { kind: FamilyKind::Xor, text_len: n, pattern_len: n, output_length: n })
    }

    /// Shift family with text length `n` and pattern length `m <= n`;
    /// output length `n - m + 1` (one slot per candidate shift).
    pub fn shift(n: u128, m: u128) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::DomainMismatch(format!(
                "shift family needs 0 < m <= n, got n={n} m={m}"
            )));
        }
        Ok(Self { kind: FamilyKind::Shift, text_len: n, pattern_len: m, output_length: n - m + 1 })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn text_len(&self) -> u128 {
        self.text_len
    }

    pub fn pattern_len(&self) -> u128 {
        self.pattern_len
    }

    /// Number of output slots the full convolution produces.
    pub fn output_length(&self) -> u128 {
        self.output_length
    }
}

/// Result of a matching run: where the pattern fits, plus cheap diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    /// Ascending, distinct match positions.
    pub positions: Vec<u128>,
    /// Number of candidate positions that went through exact verification.
    pub counts_checked: u64,
    /// Reduction rounds used (0 for the direct oracles).
    pub rounds_used: u32,
}

impl MatchResult {
    pub(crate) fn new(positions: Vec<u128>, counts_checked: u64, rounds_used: u32) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        Self { positions, counts_checked, rounds_used }
    }
}

/// Verifies a single shift candidate by membership testing.
pub(crate) fn verify_shift_candidate(
    text_set: &HashSet<u128>,
    pattern: &[u128],
    shift: u128,
) -> bool {
    pattern.iter().all(|&j| text_set.contains(&(shift + j)))
}

/// Verifies a single xor candidate by membership testing.
pub(crate) fn verify_xor_candidate(
    text_set: &HashSet<u128>,
    pattern: &[u128],
    word: u128,
) -> bool {
    pattern.iter().all(|&j| text_set.contains(&(word ^ j)))
}

/// Exact shift matching by direct membership testing.
///
/// Returns every `i` in `[0, N - M]` such that each pattern nonzero `j` has
/// `i + j` set in the text. Candidates are the alignments of the smallest
/// pattern nonzero with each text nonzero, and every candidate is probed
/// against the full pattern, so the cost is exactly `n·m` hash probes —
/// this is the measuring stick the fast matchers are compared against, so
/// it deliberately takes no shortcuts.
pub fn oracle_match_shift(
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
) -> Result<MatchResult> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.domain_size() > text.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "pattern length {} exceeds text length {}",
            pattern.domain_size(),
            text.domain_size()
        )));
    }
    let max_shift = text.domain_size() - pattern.domain_size();
    let set = text.membership_index();
    let p0 = pattern.support()[0];
    let mut positions = Vec::new();
    let mut checked = 0u64;
    for &t in text.support() {
        if t < p0 {
            continue;
        }
        let i = t - p0;
        if i > max_shift {
            continue;
        }
        checked += 1;
        let hits = pattern
            .support()
            .iter()
            .filter(|&&j| set.contains(&(i + j)))
            .count();
        if hits == pattern.weight() {
            positions.push(i);
        }
    }
    // Candidates inherit the text's ordering and are distinct because
    // `t -> t - p0` is injective.
    Ok(MatchResult::new(positions, checked, 0))
}

/// Exact xor matching by direct membership testing.
///
/// Returns every `i` in `[0, N)` such that each pattern nonzero `j` has
/// `i ^ j` set in the text. Both domains must be the same power of two.
/// Like [`oracle_match_shift`], every candidate is probed against the full
/// pattern (exactly `n·m` probes), keeping the baseline honest.
pub fn oracle_match_xor(
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
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
    if text.log2_domain().is_none() {
        return Err(Error::DomainMismatch(format!(
            "xor matching needs a power-of-two domain, got {}",
            text.domain_size()
        )));
    }
    let set = text.membership_index();
    let p0 = pattern.support()[0];
    let mut positions: Vec<u128> = Vec::new();
    let mut checked = 0u64;
    // Any match must align p0 with some text nonzero, so `t ^ p0` over text
    // nonzeros enumerates every possible match exactly once.
    for &t in text.support() {
        let i = t ^ p0;
        checked += 1;
        let hits = pattern
            .support()
            .iter()
            .filter(|&&j| set.contains(&(i ^ j)))
            .count();
        if hits == pattern.weight() {
            positions.push(i);
        }
    }
    positions.sort_unstable();
    Ok(MatchResult::new(positions, checked, 0))
}

/// Dense schoolbook convolution for either family, exact integer arithmetic.
///
/// For the xor family, `out[k] = sum_i v1[i ^ k] * v2[i]` with both inputs of
/// the family's (power-of-two) length. For the shift family,
/// `out[s] = sum_j v1[s + j] * v2[j]` for `s` in `[0, n - m]`. Lengths are
/// capped at [`ORACLE_DENSE_MAX`]; this is a reference implementation, not a
/// fast path.
pub fn oracle_dot_convolution(
    v1: &[i64],
    v2: &[i64],
    family: &ConvolutionFamily,
) -> Result<Vec<i64>> {
    if family.text_len() > ORACLE_DENSE_MAX || family.pattern_len() > ORACLE_DENSE_MAX {
        return Err(Error::OracleTooLarge {
            len: family.text_len().max(family.pattern_len()),
            max: ORACLE_DENSE_MAX,
        });
    }
    if v1.len() as u128 != family.text_len() {
        return Err(Error::LengthMismatch { left: v1.len(), right: family.text_len() as usize });
    }
    if v2.len() as u128 != family.pattern_len() {
        return Err(Error::LengthMismatch { left: v2.len(), right: family.pattern_len() as usize });
    }
    let out_len = family.output_length() as usize;
    let mut out = vec![0i128; out_len];
    match family.kind() {
        FamilyKind::Xor => {
            for (k, slot) in out.iter_mut().enumerate() {
                let mut acc = 0i128;
                for (i, &b) in v2.iter().enumerate() {
                    acc += i128::from(v1[i ^ k]) * i128::from(b);
                }
                *slot = acc;
            }
        }
        FamilyKind::Shift => {
            for (s, slot) in out.iter_mut().enumerate() {
                let mut acc = 0i128;
                for (j, &b) in v2.iter().enumerate() {
                    acc += i128::from(v1[s + j]) * i128::from(b);
                }
                *slot = acc;
            }
        }
    }
    out.into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Overflow("dense convolution output")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Worked shift example: length-38 text, pattern 1000101.
    const EX_TEXT: &str = "00000100101100011001010101110000000100";
    const EX_PATTERN: &str = "1000101";

    #[test]
    fn vector_construction_validates() {
        assert!(SparseBinaryVector::new(8, vec![1, 6]).is_ok());
        assert!(SparseBinaryVector::new(8, vec![]).is_ok());
        assert!(SparseBinaryVector::new(8, vec![6, 1]).is_err());
        assert!(SparseBinaryVector::new(8, vec![1, 1]).is_err());
        assert!(SparseBinaryVector::new(8, vec![8]).is_err());
    }

    #[test]
    fn bit_string_roundtrip() {
        let v = SparseBinaryVector::from_bit_string("01000010").unwrap();
        assert_eq!(v.domain_size(), 8);
        assert_eq!(v.support(), &[1, 6]);
    }

    #[test]
    fn shift_oracle_worked_example() {
        let text = SparseBinaryVector::from_bit_string(EX_TEXT).unwrap();
        let pattern = SparseBinaryVector::from_bit_string(EX_PATTERN).unwrap();
        let result = oracle_match_shift(&text, &pattern).unwrap();
        assert_eq!(result.positions, vec![15, 19, 21]);
    }

    #[test]
    fn shift_oracle_single_nonzero_pattern() {
        let text = SparseBinaryVector::new(100, vec![3, 50, 97, 99]).unwrap();
        let pattern = SparseBinaryVector::new(4, vec![0]).unwrap();
        let result = oracle_match_shift(&text, &pattern).unwrap();
        // Every text nonzero within [0, N - M] matches a single-point pattern.
        assert_eq!(result.positions, vec![3, 50]);
    }

    #[test]
    fn shift_oracle_matches_dense_scan() {
        // Independent route: evaluate the defining predicate at every shift.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n_dom = 4096u128;
        let m_dom = 256u128;
        let mut text_sup: Vec<u128> = (0..64).map(|_| rng.gen_range(0..n_dom)).collect();
        text_sup.sort_unstable();
        text_sup.dedup();
        let mut pat_sup: Vec<u128> = (0..8).map(|_| rng.gen_range(0..m_dom)).collect();
        pat_sup.sort_unstable();
        pat_sup.dedup();
        let text = SparseBinaryVector::new(n_dom, text_sup).unwrap();
        let pattern = SparseBinaryVector::new(m_dom, pat_sup).unwrap();

        let set = text.membership_index();
        let mut expected = Vec::new();
        for i in 0..=(n_dom - m_dom) {
            if pattern.support().iter().all(|&j| set.contains(&(i + j))) {
                expected.push(i);
            }
        }
        let got = oracle_match_shift(&text, &pattern).unwrap();
        assert_eq!(got.positions, expected);
    }

    #[test]
    fn xor_oracle_worked_example() {
        let text = SparseBinaryVector::from_bit_string("01000010").unwrap();
        let pattern = SparseBinaryVector::new(8, vec![0, 7]).unwrap();
        let result = oracle_match_xor(&text, &pattern).unwrap();
        assert_eq!(result.positions, vec![1, 6]);
    }

    #[test]
    fn xor_oracle_single_nonzero_at_origin() {
        let text = SparseBinaryVector::new(64, vec![5, 17, 40]).unwrap();
        let pattern = SparseBinaryVector::new(64, vec![0]).unwrap();
        let result = oracle_match_xor(&text, &pattern).unwrap();
        assert_eq!(result.positions, text.support());
    }

    #[test]
    fn xor_oracle_matches_dense_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n: u128 = 1024;
        let mut text_sup: Vec<u128> = (0..40).map(|_| rng.gen_range(0..n)).collect();
        text_sup.sort_unstable();
        text_sup.dedup();
        let mut pat_sup: Vec<u128> = (0..6).map(|_| rng.gen_range(0..n)).collect();
        pat_sup.sort_unstable();
        pat_sup.dedup();
        let text = SparseBinaryVector::new(n, text_sup).unwrap();
        let pattern = SparseBinaryVector::new(n, pat_sup).unwrap();

        let set = text.membership_index();
        let mut expected = Vec::new();
        for i in 0..n {
            if pattern.support().iter().all(|&j| set.contains(&(i ^ j))) {
                expected.push(i);
            }
        }
        let got = oracle_match_xor(&text, &pattern).unwrap();
        assert_eq!(got.positions, expected);
    }

    #[test]
    fn oracle_rejects_bad_inputs() {
        let text = SparseBinaryVector::new(8, vec![1, 6]).unwrap();
        let empty = SparseBinaryVector::new(8, vec![]).unwrap();
        assert!(matches!(oracle_match_shift(&text, &empty), Err(Error::EmptyPattern)));
        assert!(matches!(oracle_match_xor(&text, &empty), Err(Error::EmptyPattern)));

        let long = SparseBinaryVector::new(16, vec![0]).unwrap();
        assert!(matches!(oracle_match_shift(&text, &long), Err(Error::DomainMismatch(_))));
        assert!(matches!(oracle_match_xor(&text, &long), Err(Error::DomainMismatch(_))));

        let odd_t = SparseBinaryVector::new(10, vec![0]).unwrap();
        let odd_p = SparseBinaryVector::new(10, vec![1]).unwrap();
        assert!(matches!(oracle_match_xor(&odd_t, &odd_p), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn dot_convolution_xor_worked_example() {
        let a = [0i64, 1, 0, 0, 0, 0, 1, 0];
        let b = [1i64, 0, 0, 0, 0, 0, 0, 1];
        let fam = ConvolutionFamily::xor(8).unwrap();
        let out = oracle_dot_convolution(&a, &b, &fam).unwrap();
        assert_eq!(out, vec![0, 2, 0, 0, 0, 0, 2, 0]);
    }

    #[test]
    fn dot_convolution_delta_is_identity() {
        let a = [3i64, -1, 4, 1, 5, -9, 2, 6];
        let mut delta = [0i64; 8];
        delta[0] = 1;
        let fam = ConvolutionFamily::xor(8).unwrap();
        assert_eq!(oracle_dot_convolution(&a, &delta, &fam).unwrap(), a.to_vec());
    }

    #[test]
    fn dot_convolution_shift_matches_bit_counts() {
        // The shift-family dot convolution of the worked example counts
        // aligned ones, so the match set is exactly where it reaches m = 3.
        let text = SparseBinaryVector::from_bit_string(EX_TEXT).unwrap();
        let pattern = SparseBinaryVector::from_bit_string(EX_PATTERN).unwrap();
        let dense = |v: &SparseBinaryVector| -> Vec<i64> {
            let mut out = vec![0i64; v.domain_size() as usize];
            for &i in v.support() {
                out[i as usize] = 1;
            }
            out
        };
        let fam = ConvolutionFamily::shift(38, 7).unwrap();
        let out = oracle_dot_convolution(&dense(&text), &dense(&pattern), &fam).unwrap();
        assert_eq!(out.len(), 32);
        let full: Vec<u128> =
            (0..out.len()).filter(|&s| out[s] == 3).map(|s| s as u128).collect();
        assert_eq!(full, vec![15, 19, 21]);
    }

    #[test]
    fn dot_convolution_rejects_oversize() {
        let fam = ConvolutionFamily::shift(1 << 17, 4).unwrap();
        let v1 = vec![0i64; 1 << 17];
        let v2 = vec![0i64; 4];
        assert!(matches!(
            oracle_dot_convolution(&v1, &v2, &fam),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn family_output_lengths() {
        assert_eq!(ConvolutionFamily::xor(8).unwrap().output_length(), 8);
        assert_eq!(ConvolutionFamily::shift(38, 7).unwrap().output_length(), 32);
        assert!(ConvolutionFamily::xor(6).is_err());
        assert!(ConvolutionFamily::shift(4, 5).is_err());
    }
}
