//! GF(2^ℓ) arithmetic for 1 <= ℓ <= 32 with portable carry-less multiply.
//!
//! Addition is XOR; multiplication is shift-and-xor followed by reduction
//! modulo a fixed irreducible polynomial. Each width ships with the smallest
//! low-weight irreducible (trinomial where one exists, otherwise the
//! lexicographically first pentanomial). Custom polynomials are accepted for
//! ℓ <= 16, where irreducibility is confirmed by exhaustive trial division;
//! wider custom polynomials are rejected rather than trusted.
//!
//! Elements carry their field descriptor so that mixing fields is caught at
//! the API boundary instead of silently producing garbage.

use crate::error::{Error, Result};

/// Low-weight irreducible polynomials, index `ell - 1`, degree-`ell` bit set.
///
/// Entry preference: trinomial `x^l + x^k + 1` with smallest `k`, else
/// pentanomial with lexicographically smallest exponents.
const REDUCTION_POLYS: [u64; 32] = [
    0x3,         // x + 1
    0x7,         // x^2 + x + 1
    0xB,         // x^3 + x + 1
    0x13,        // x^4 + x + 1
    0x25,        // x^5 + x^2 + 1
    0x43,        // x^6 + x + 1
    0x83,        // x^7 + x + 1
    0x11B,       // x^8 + x^4 + x^3 + x + 1
    0x203,       // x^9 + x + 1
    0x409,       // x^10 + x^3 + 1
    0x805,       // x^11 + x^2 + 1
    0x1009,      // x^12 + x^3 + 1
    0x201B,      // x^13 + x^4 + x^3 + x + 1
    0x4021,      // x^14 + x^5 + 1
    0x8003,      // x^15 + x + 1
    0x1002B,     // x^16 + x^5 + x^3 + x + 1
    0x20009,     // x^17 + x^3 + 1
    0x40009,     // x^18 + x^3 + 1
    0x80027,     // x^19 + x^5 + x^2 + x + 1
    0x100009,    // x^20 + x^3 + 1
    0x200005,    // x^21 + x^2 + 1
    0x400003,    // x^22 + x + 1
    0x800021,    // x^23 + x^5 + 1
    0x100001B,   // x^24 + x^4 + x^3 + x + 1
    0x2000009,   // x^25 + x^3 + 1
    0x400001B,   // x^26 + x^4 + x^3 + x + 1
    0x8000027,   // x^27 + x^5 + x^2 + x + 1
    0x10000003,  // x^28 + x + 1
    0x20000005,  // x^29 + x^2 + 1
    0x40000003,  // x^30 + x + 1
    0x80000009,  // x^31 + x^3 + 1
    0x10000008D, // x^32 + x^7 + x^3 + x^2 + 1
];

/// Width above which custom reduction polynomials are not accepted.
pub const CUSTOM_POLY_MAX_ELL: u32 = 16;

/// A binary extension field GF(2^ℓ), 1 <= ℓ <= 32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2mField {
    ell: u32,
    poly: u64,
}

impl Gf2mField {
    /// Field of width `ell` with the built-in reduction polynomial.
    pub fn new(ell: u32) -> Self {
        assert!((1..=32).contains(&ell), "supported widths are 1..=32, got {ell}");
        Self { ell, poly: REDUCTION_POLYS[(ell - 1) as usize] }
    }

    /// Field with a caller-supplied reduction polynomial.
    ///
    /// The polynomial must have degree exactly `ell`. For `ell <= 16`
    /// irreducibility is verified by trial division against every candidate
    /// divisor of degree up to `ell / 2`; wider polynomials are only accepted
    /// if they equal the vetted built-in entry.
    pub fn with_poly(ell: u32, poly: u64) -> Result<Self> {
        assert!((1..=32).contains(&ell), "supported widths are 1..=32, got {ell}");
        if poly_degree(poly) != Some(ell) {
            return Err(Error::ReduciblePolynomial { ell, poly });
        }
        if ell <= CUSTOM_POLY_MAX_ELL {
            if !irreducible_by_trial_division(poly, ell) {
                return Err(Error::ReduciblePolynomial { ell, poly });
            }
        } else if poly != REDUCTION_POLYS[(ell - 1) as usize] {
            return Err(Error::ReduciblePolynomial { ell, poly });
        }
        Ok(Self { ell, poly })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn reduction_poly(&self) -> u64 {
        self.poly
    }

    /// Number of field elements, `2^ell`.
    pub fn order(&self) -> u64 {
        1u64 << self.ell
    }

    /// Wraps a bit pattern as an element; rejects values wider than `ell`.
    pub fn element(&self, bits: u64) -> Result<Gf2mElement> {
        if bits >= self.order() {
            return Err(Error::ElementOutOfRange { bits, ell: self.ell });
        }
        Ok(Gf2mElement { bits: bits as u32, field: *self })
    }

    /// Additive identity.
    pub fn zero(&self) -> Gf2mElement {
        Gf2mElement { bits: 0, field: *self }
    }

    /// Multiplicative identity.
    pub fn one(&self) -> Gf2mElement {
        Gf2mElement { bits: 1, field: *self }
    }

    /// Raw addition on bit patterns (addition in GF(2^ℓ) is XOR).
    #[inline]
    pub fn add_raw(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    /// Raw carry-less multiplication with polynomial reduction.
    #[inline]
    pub fn mul_raw(&self, a: u32, b: u32) -> u32 {
        // Product of two degree-<ell polynomials fits in 2*ell - 1 <= 63 bits.
        let mut acc: u64 = 0;
        let mut a = a as u64;
        let mut b = b as u64;
        while a != 0 {
            if a & 1 == 1 {
                acc ^= b;
            }
            a >>= 1;
            b <<= 1;
        }
        // Reduce degree 2*ell-2 .. ell down to < ell.
        let ell = self.ell;
        let mut bit = 2 * ell;
        while bit > ell {
            bit -= 1;
            if acc >> bit & 1 == 1 {
                acc ^= self.poly << (bit - ell);
            }
        }
        acc as u32
    }

    /// Horner evaluation of a polynomial with raw coefficients
    /// (`coeffs[0]` is the constant term) at raw point `x`.
    pub fn eval_raw(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = self.add_raw(self.mul_raw(acc, x), c);
        }
        acc
    }
}

/// An element of a specific GF(2^ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2mElement {
    bits: u32,
    field: Gf2mField,
}

impl Gf2mElement {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn field(&self) -> Gf2mField {
        self.field
    }

    /// Field addition; errors if the operands live in different fields.
    pub fn add(self, rhs: Gf2mElement) -> Result<Gf2mElement> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Gf2mElement { bits: self.field.add_raw(self.bits, rhs.bits), field: self.field })
    }

    /// Field multiplication; errors if the operands live in different fields.
    pub fn mul(self, rhs: Gf2mElement) -> Result<Gf2mElement> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Gf2mElement { bits: self.field.mul_raw(self.bits, rhs.bits), field: self.field })
    }
}

/// Horner evaluation over checked elements; `coeffs[0]` is the constant term.
pub fn gf_eval_poly(coeffs: &[Gf2mElement], x: Gf2mElement) -> Result<Gf2mElement> {
    let mut acc = x.field().zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// Degree of a nonzero GF(2) polynomial given as a bit pattern.
fn poly_degree(poly: u64) -> Option<u32> {
    if poly == 0 {
        None
    } else {
        Some(63 - poly.leading_zeros())
    }
}

/// Remainder of `a` modulo `b` over GF(2).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Exhaustive irreducibility check: trial division by every polynomial of
/// degree 1 through `ell / 2`. Only viable for small widths.
fn irreducible_by_trial_division(poly: u64, ell: u32) -> bool {
    if ell == 1 {
        return true; // both degree-1 polynomials are irreducible
    }
    for deg in 1..=(ell / 2) {
        let lo = 1u64 << deg;
        let hi = 1u64 << (deg + 1);
        for divisor in lo..hi {
            if poly_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}
