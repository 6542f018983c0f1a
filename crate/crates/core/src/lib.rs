//! Sparse binary convolution toolkit.
//!
//! Matching a sparse binary pattern against a sparse binary text costs
//! `O(n·m)` membership probes when done directly, or one dense transform over
//! the whole domain when done by FFT-style convolution — both painful when
//! the domain is much larger than the number of nonzeros. This crate instead
//! maps nonzero *indices* through small polynomial encodings into a domain
//! proportional to the nonzero count, runs exact integer transforms there,
//! and expands the surviving candidates back with exact verification.
//!
//! Two alignment families are covered end to end:
//!
//! * **xor family** (`pattern[j]` vs `text[i ^ j]`): indices become
//!   polynomials over GF(2^ℓ) whose evaluation is XOR-linear, reduced via
//!   integer Walsh transforms ([`xor_match`], [`mask`], [`fwht`], [`gf2m`]);
//! * **shift family** (`pattern[j]` vs `text[i + j]`): indices become digit
//!   polynomials modulo a prime `q`, with carry variants absorbing digit
//!   overflow, reduced via exact number-theoretic transforms
//!   ([`shift_match`], [`ntt`], [`primes`]); domains too large for any
//!   supported digit polynomial are first collapsed with a separating prime
//!   found by product-tree GCD search ([`prime_search`]).
//!
//! Brute-force oracles ([`sparse`]) and a seeded instance generator ([`gen`])
//! anchor every fast path to an exact reference.

pub mod error;
pub mod fwht;
pub mod gen;
pub mod gf2m;
pub mod io;
pub mod mask;
pub mod ntt;
pub mod primes;
pub mod prime_search;
pub mod shift_match;
pub mod sparse;
pub mod xor_match;

pub use error::{Error, Result};
pub use fwht::{fwht_in_place, xor_correlate};
pub use gen::{gen_instance, GeneratedInstance};
pub use gf2m::{gf_eval_poly, Gf2mElement, Gf2mField};
pub use mask::{mask_halving_reduce, mask_match_xor};
pub use ntt::cyclic_correlate;
pub use prime_search::{exp_prime_search, PrimeSearchConfig};
pub use primes::{find_ntt_prime, is_prime, next_prime, PrimeField};
pub use shift_match::{
    choose_params, preprocess_select_assignments, sparse_match_shift_deterministic,
    sparse_match_shift_lasvegas, AssignmentTable, ShiftMatchConfig, ShiftReductionParams,
};
pub use sparse::{
    oracle_dot_convolution, oracle_match_shift, oracle_match_xor, ConvolutionFamily, FamilyKind,
    MatchResult, SparseBinaryVector,
};
pub use xor_match::{sparse_match_xor, XorMatchConfig};
