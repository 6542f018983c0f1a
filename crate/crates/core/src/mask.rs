//! Domain-halving reduction for XOR matching with a translation mask.
//!
//! A power-of-two domain `2^L` is folded in half: indices with the top bit
//! clear stay where they are (label `static`), indices with the top bit set
//! move to `i ⊕ mask` (label `moved`), where the mask has its top bit forced
//! to 1 so moved indices land in the lower half. Because `⊕ mask` is an
//! involution that cancels in `i ⊕ j`, every aligned text/pattern pair keeps
//! a recoverable output index after folding:
//!
//! - both sides same origin (`s·s` or `m·m`): the folded product location IS
//!   the output index (which lies in the lower half);
//! - opposite origins (`m·s` / `s·m`): the product location is
//!   `output ⊕ mask`, so XOR-ing the mask back recovers the output (which
//!   lies in the upper half).
//!
//! A folded position receiving both a static and a moved source nonzero is a
//! collision; callers retry with a fresh mask. On collision-free reductions,
//! a true match's location is never labelled inconsistent (a cross-origin
//! intruder at that location would force a position collision), which makes
//! the clean-round termination rule of `mask_match_xor` sound.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fwht::xor_correlate;
use crate::sparse::{verify_xor_candidate, MatchResult, SparseBinaryVector};

/// Where a folded nonzero came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginLabel {
    /// Source index had the top bit clear; position unchanged.
    Static,
    /// Source index had the top bit set; position is `source ⊕ mask`.
    Moved,
}

/// One sparse vector folded to the half domain, with per-nonzero origin
/// labels and the collision list.
#[derive(Debug, Clone)]
pub struct MaskReduction {
    mask: u128,
    domain_bits: u32,
    lower_half: SparseBinaryVector,
    upper_half: SparseBinaryVector,
    merged: SparseBinaryVector,
    labels: Vec<OriginLabel>,
    collided: Vec<u128>,
}

impl MaskReduction {
    pub fn mask(&self) -> u128 {
        self.mask
    }

    /// `L`: the folded vectors live on `2^(L-1)`.
    pub fn domain_bits(&self) -> u32 {
        self.domain_bits
    }

    /// Nonzeros that started in the lower half, untranslated.
    pub fn lower_half(&self) -> &SparseBinaryVector {
        &self.lower_half
    }

    /// Nonzeros that started in the upper half, with the top bit stripped
    /// (i.e. before the mask translation).
    pub fn upper_half(&self) -> &SparseBinaryVector {
        &self.upper_half
    }

    /// The folded vector: static nonzeros ∪ mask-translated moved nonzeros.
    pub fn merged(&self) -> &SparseBinaryVector {
        &self.merged
    }

    /// Origin label per merged nonzero, parallel to `merged().support()`.
    pub fn labels(&self) -> &[OriginLabel] {
        &self.labels
    }

    /// Folded positions that received both a static and a moved nonzero.
    pub fn collided(&self) -> &[u128] {
        &self.collided
    }

    pub fn is_collision_free(&self) -> bool {
        self.collided.is_empty()
    }

    /// Indicator count vectors over the half domain: `(static, moved)`.
    fn split_counts(&self) -> (Vec<i64>, Vec<i64>) {
        let half = 1usize << (self.domain_bits - 1);
        let mut statics = vec![0i64; half];
        let mut moved = vec![0i64; half];
        for (&pos, &label) in self.merged.support().iter().zip(&self.labels) {
            match label {
                OriginLabel::Static => statics[pos as usize] += 1,
                OriginLabel::Moved => moved[pos as usize] += 1,
            }
        }
        (statics, moved)
    }
}

fn fold_one(v: &SparseBinaryVector, mask: u128, domain_bits: u32) -> Result<MaskReduction> {
    let half = 1u128 << (domain_bits - 1);
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    // (position, label, source) triples before sorting by position.
    let mut placed: Vec<(u128, OriginLabel)> = Vec::with_capacity(v.weight());
    for &i in v.support() {
        if i < half {
            lower.push(i);
            placed.push((i, OriginLabel::Static));
        } else {
            upper.push(i - half);
            placed.push((i ^ mask, OriginLabel::Moved));
        }
    }
    placed.sort_unstable_by_key(|&(pos, _)| pos);
    let mut support = Vec::with_capacity(placed.len());
    let mut labels = Vec::with_capacity(placed.len());
    let mut collided = Vec::new();
    for &(pos, label) in &placed {
        if support.last() == Some(&pos) {
            collided.push(pos);
            continue;
        }
        support.push(pos);
        labels.push(label);
    }
    Ok(MaskReduction {
        mask,
        domain_bits,
        lower_half: SparseBinaryVector::new(half, lower)?,
        upper_half: SparseBinaryVector::new(half, upper)?,
        merged: SparseBinaryVector::new(half, support)?,
        labels,
        collided,
    })
}

/// Folds text and pattern to the half domain under one translation mask.
///
/// The domain must be `2^L` with `L ≥ 1`; the mask must have bit `L−1` set
/// and fit in `L` bits. Collisions are reported in the returned reductions,
/// not as errors — callers inspect `is_collision_free` and retry.
pub fn mask_halving_reduce(
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
    mask: u128,
) -> Result<(MaskReduction, MaskReduction)> {
    if text.domain_size() != pattern.domain_size() {
        return Err(Error::DomainMismatch(format!(
            "mask folding needs equal domains, got {} and {}",
            text.domain_size(),
            pattern.domain_size()
        )));
    }
    let domain_bits = text.log2_domain().ok_or_else(|| {
        Error::DomainMismatch(format!(
            "mask folding needs a power-of-two domain, got {}",
            text.domain_size()
        ))
    })?;
    if domain_bits < 1 {
        return Err(Error::DomainMismatch(
            "mask folding needs a domain of at least 2".to_string(),
        ));
    }
    let top = 1u128 << (domain_bits - 1);
    if mask & top == 0 || mask >= top << 1 {
        return Err(Error::DomainMismatch(format!(
            "mask {mask:#b} must be an {domain_bits}-bit word with its top bit set"
        )));
    }
    Ok((
        fold_one(text, mask, domain_bits)?,
        fold_one(pattern, mask, domain_bits)?,
    ))
}

/// What the origin-product masses say about one folded location.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskVerdict {
    /// No aligned pairs at this location.
    Zero,
    /// All mass is `s·s` + `m·m`: output index is the location itself.
    SameOrigin,
    /// All mass is `m·s` + `s·m`: output index is location ⊕ mask.
    CrossOrigin,
    /// Both kinds of mass: two different output indices overlap here.
    Inconsistent,
}

/// Verdict plus masses and the recovered full-domain output index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskCheckLocation {
    /// Aligned pairs with equal origin labels (`s·s` + `m·m`).
    pub same_mass: i64,
    /// Aligned pairs with opposite origin labels (`m·s` + `s·m`).
    pub cross_mass: i64,
    pub verdict: MaskVerdict,
    /// The unique output index this location stands for, when unambiguous.
    pub expanded: Option<u128>,
}

/// Classifies every folded location by correlating the four origin-indicator
/// combinations, and expands unambiguous locations back to full-domain
/// output indices.
pub fn mask_consistency_check(
    tred: &MaskReduction,
    pred: &MaskReduction,
) -> Result<Vec<MaskCheckLocation>> {
    if tred.mask != pred.mask || tred.domain_bits != pred.domain_bits {
        return Err(Error::DomainMismatch(
            "text and pattern reductions use different masks".to_string(),
        ));
    }
    let (ts, tm) = tred.split_counts();
    let (ps, pm) = pred.split_counts();
    let ss = xor_correlate(&ts, &ps)?;
    let mm = xor_correlate(&tm, &pm)?;
    let sm = xor_correlate(&ts, &pm)?;
    let ms = xor_correlate(&tm, &ps)?;
    let mask = tred.mask;
    let mut out = Vec::with_capacity(ss.len());
    for k in 0..ss.len() {
        let same = ss[k] + mm[k];
        let cross = sm[k] + ms[k];
        let (verdict, expanded) = match (same > 0, cross > 0) {
            (false, false) => (MaskVerdict::Zero, None),
            (true, false) => (MaskVerdict::SameOrigin, Some(k as u128)),
            (false, true) => (MaskVerdict::CrossOrigin, Some(k as u128 ^ mask)),
            (true, true) => (MaskVerdict::Inconsistent, None),
        };
        out.push(MaskCheckLocation {
            same_mass: same,
            cross_mass: cross,
            verdict,
            expanded,
        });
    }
    Ok(out)
}

/// Las Vegas XOR matcher built on the halving reducer: fold under a fresh
/// random mask each round, classify locations, verify every unambiguous
/// location holding at least `m` pairs, and stop on a round where no heavy
/// location is inconsistent. Output equals the brute-force oracle.
///
/// Rounds whose fold collides are retried with a fresh mask, up to `2L`
/// collisions total; past that the reducer is reported inapplicable (the
/// polynomial reducer has no such limitation). After `max_rounds` clean folds
/// without a clean classification, an exhaustive candidate sweep finishes
/// the job exactly.
pub fn mask_match_xor(
    text: &SparseBinaryVector,
    pattern: &SparseBinaryVector,
    max_rounds: u32,
    seed: u64,
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
    if max_rounds == 0 {
        return Err(Error::InfeasibleInstance(
            "at least one round is required".to_string(),
        ));
    }

    let p0 = pattern.support()[0];
    let m = pattern.weight();
    if m == 1 || domain_bits == 0 {
        let mut positions: Vec<u128> = text.support().iter().map(|&t| t ^ p0).collect();
        positions.sort_unstable();
        return Ok(MatchResult::new(positions, 0, 0));
    }

    let text_set = text.membership_index();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut confirmed: BTreeSet<u128> = BTreeSet::new();
    let mut counts_checked = 0u64;
    let mut collision_budget = 2 * domain_bits;
    let top = 1u128 << (domain_bits - 1);

    let mut round = 0;
    while round < max_rounds {
        let mask = top | rng.gen_range(0..top);
        let (tred, pred) = mask_halving_reduce(text, pattern, mask)?;
        if !tred.is_collision_free() || !pred.is_collision_free() {
            if collision_budget == 0 {
                return Err(Error::InfeasibleInstance(format!(
                    "mask reducer hit origin collisions under {} masks; \
                     use the polynomial reducer for this instance",
                    2 * domain_bits
                )));
            }
            collision_budget -= 1;
            continue;
        }
        round += 1;

        let verdicts = mask_consistency_check(&tred, &pred)?;
        let mut dirty = false;
        let mut candidates: BTreeSet<u128> = BTreeSet::new();
        for loc in &verdicts {
            let total = loc.same_mass + loc.cross_mass;
            if total < m as i64 {
                continue;
            }
            match loc.expanded {
                Some(w) => {
                    candidates.insert(w);
                }
                None => dirty = true,
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
            // Collision-free fold + no inconsistent heavy location: every
            // true match sat in an unambiguous location and was verified.
            let positions: Vec<u128> = confirmed.into_iter().collect();
            return Ok(MatchResult::new(positions, counts_checked, round));
        }
    }

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
    Ok(MatchResult::new(positions, counts_checked, max_rounds))
}
