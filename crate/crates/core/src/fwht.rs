//! Exact integer fast Walsh–Hadamard transform and XOR-correlation.
//!
//! All arithmetic is checked 64-bit integer arithmetic — no floating point —
//! so transform outputs are exact and any overflow is reported instead of
//! silently wrapping. Invariants:
//!
//! - `fwht_in_place` applied twice multiplies a vector by its length `2^k`.
//! - `xor_correlate(a, b)[k] = Σ_i a[i ⊕ k] · b[i]`, exactly.
//! - the inverse-transform division by `2^k` is asserted exact.

use crate::error::{Error, Result};

/// Longest vector the Walsh paths accept (`2^22` entries).
pub const MAX_WHT_LEN: usize = 1 << 22;

fn check_wht_len(len: usize) -> Result<()> {
    if !len.is_power_of_two() {
        return Err(Error::DomainMismatch(format!(
            "walsh transform needs a power-of-two length, got {len}"
        )));
    }
    if len > MAX_WHT_LEN {
        return Err(Error::ReductionTooLarge {
            needed: len as u64,
            max: MAX_WHT_LEN as u64,
        });
    }
    Ok(())
}

/// In-place Walsh–Hadamard transform: the butterfly `(a, b) → (a+b, a−b)`
/// applied level by level. Length must be a power of two `≤ 2^22`.
///
/// The transform is its own inverse up to scale: applying it twice yields
/// `len · original`. Overflow past 63 bits is detected and reported.
pub fn fwht_in_place(values: &mut [i64]) -> Result<()> {
    check_wht_len(values.len())?;
    let mut half = 1;
    while half < values.len() {
        let step = half * 2;
        for block in (0..values.len()).step_by(step) {
            for i in block..block + half {
                let x = values[i];
                let y = values[i + half];
                values[i] = x
                    .checked_add(y)
                    .ok_or(Error::Overflow("walsh butterfly"))?;
                values[i + half] = x
                    .checked_sub(y)
                    .ok_or(Error::Overflow("walsh butterfly"))?;
            }
        }
        half = step;
    }
    Ok(())
}

/// XOR-correlation `out[k] = Σ_i a[i ⊕ k] · b[i]` via three Walsh transforms:
/// transform both inputs, multiply pointwise, transform back and divide by the
/// length (asserted exact).
///
/// Both inputs must share a power-of-two length `≤ 2^22`.
pub fn xor_correlate(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    check_wht_len(a.len())?;
    let mut ha = a.to_vec();
    let mut hb = b.to_vec();
    fwht_in_place(&mut ha)?;
    fwht_in_place(&mut hb)?;
    for (x, y) in ha.iter_mut().zip(hb.iter()) {
        *x = x
            .checked_mul(*y)
            .ok_or(Error::Overflow("walsh pointwise product"))?;
    }
    fwht_in_place(&mut ha)?;
    let n = a.len() as i64;
    for x in ha.iter_mut() {
        // The Walsh pipeline always yields multiples of the length; a failure
        // here would mean the checked arithmetic above let an error through.
        assert_eq!(*x % n, 0, "inexact division in walsh correlation");
        *x /= n;
    }
    Ok(ha)
}
