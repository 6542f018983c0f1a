//! Deterministic 64-bit primality testing and transform-friendly prime search.
//!
//! `is_prime` runs Miller-Rabin with a fixed witness set that is known to be
//! exact for every `n < 2^64`, so there is no probabilistic error anywhere in
//! the crate. On top of it sit `next_prime`, a small Pollard-rho factorizer
//! (needed to certify primitive roots), and `find_ntt_prime`, which locates a
//! prime `p ≡ 1 (mod 2^k)` together with a verified primitive root — the raw
//! material for exact number-theoretic transforms.

use crate::error::{Error, Result};

/// `base^exp mod modulus` with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Witnesses that make Miller-Rabin exact for all `n < 2^64`.
const WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic primality test, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &WITNESSES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = mod_pow(a, d, n);
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

/// Smallest prime `>= v`.
pub fn next_prime(v: u64) -> u64 {
    if v <= 2 {
        return 2;
    }
    let mut candidate = v | 1;
    loop {
        if is_prime(candidate) {
            return candidate;
        }
        candidate = candidate.checked_add(2).expect("prime search overflowed u64");
    }
}

/// Pollard's rho (Brent variant) for one nontrivial factor of composite `n`.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(!is_prime(n) && n > 1);
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1; // deterministic restart with a new polynomial offset
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Distinct prime factors of `n`, ascending.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
    }
    let mut stack = vec![n];
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime(v) {
            out.push(v);
            continue;
        }
        let d = pollard_rho(v);
        stack.push(d);
        stack.push(v / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// An odd prime modulus for digit-polynomial arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Validates that `q` is an odd prime.
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || !is_prime(q) {
            return Err(Error::InfeasibleInstance(format!("{q} is not an odd prime")));
        }
        Ok(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }
}

/// Upper bound accepted for `min_order` in [`find_ntt_prime`].
pub const MAX_NTT_ORDER: u64 = 1 << 24;

/// Finds the smallest prime `p > min_value` with `p ≡ 1 (mod min_order)`,
/// together with a primitive root `g` certified by checking
/// `g^((p-1)/r) != 1` for every prime `r` dividing `p - 1`.
///
/// `min_order` must be a power of two (at most 2^24); it guarantees the
/// multiplicative group has a subgroup of that smooth order, which is what a
/// power-of-two-length transform needs.
pub fn find_ntt_prime(min_order: u64, min_value: u64) -> Result<(u64, u64)> {
    assert!(min_order >= 1 && min_order.is_power_of_two(), "min_order must be a power of two");
    assert!(min_order <= MAX_NTT_ORDER, "min_order above supported ceiling");
    // Smallest k with k*min_order + 1 > min_value.
    let mut k = min_value.saturating_sub(1) / min_order + 1;
    let p = loop {
        let candidate = match k.checked_mul(min_order).and_then(|v| v.checked_add(1)) {
            Some(c) => c,
            None => return Err(Error::NoNttPrime),
        };
        if candidate > min_value && is_prime(candidate) {
            break candidate;
        }
        k = k.checked_add(1).ok_or(Error::NoNttPrime)?;
    };
    let factors = distinct_prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&r| mod_pow(g, (p - 1) / r, p) != 1))
        .ok_or(Error::NoNttPrime)?;
    Ok((p, g))
}
