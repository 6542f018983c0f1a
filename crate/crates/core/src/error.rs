//! Error type shared by every operation in this crate.
//!
//! All fallible operations return [`Result`]. Variants carry enough context to
//! tell a caller *which* contract was violated without formatting at the error
//! site; the CLI maps variants onto exit codes (input problems vs. broken
//! internal invariants).

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the sparse vectors, field arithmetic,
/// transforms and matchers.
#[derive(Debug)]
pub enum Error {
    /// A match was requested with an empty pattern; matching is undefined for
    /// a pattern without nonzeros.
    EmptyPattern,
    /// Text/pattern domains are incompatible for the requested operation
    /// (unequal where equality is required, pattern longer than text, or a
    /// non-power-of-two domain on a transform that needs one).
    DomainMismatch(String),
    /// A brute-force oracle was asked to run over a dense domain larger than
    /// its guardrail.
    OracleTooLarge { len: u128, max: u128 },
    /// Instance generation parameters cannot be satisfied (for example more
    /// distinct nonzeros than the domain can hold).
    InfeasibleInstance(String),
    /// A `.sv` file (or the assignment-table file) failed to parse.
    /// `line` is 1-based.
    Parse { line: usize, msg: String },
    /// Two field elements from different fields were combined.
    FieldMismatch,
    /// A field element was constructed with more bits than the field width.
    ElementOutOfRange { bits: u64, ell: u32 },
    /// The reduction polynomial supplied for a custom field is not
    /// irreducible (or cannot be verified).
    ReduciblePolynomial { ell: u32, poly: u64 },
    /// Prime search exhausted its range without a usable transform prime.
    NoNttPrime,
    /// Checked integer arithmetic left the representable range.
    Overflow(&'static str),
    /// Two dense vectors that must have equal length do not.
    LengthMismatch { left: usize, right: usize },
    /// The bucket count required by the reduction exceeds the dense-transform
    /// ceiling.
    ReductionTooLarge { needed: u64, max: u64 },
    /// The index domain cannot be covered by a digit polynomial of supported
    /// degree; callers should reduce indices modulo a separating prime first.
    DomainTooLargeForPoly { domain: u128, max_digits: u32 },
    /// The field `q` does not hold enough distinct assignment values to build
    /// the requested assignment table.
    AssignmentPoolExhausted { needed: u64, q: u64 },
    /// The prime pool cannot guarantee a prime separating every index pair.
    PoolTooSmall { required: u64, available: u64 },
    /// An assignment table was built for a different text than the one
    /// supplied at match time.
    StaleTable { expected: u64, found: u64 },
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPattern => {
                write!(f, "pattern has no nonzeros; matching is undefined")
            }
            Error::DomainMismatch(msg) => write!(f, "domain mismatch: {msg}"),
            Error::OracleTooLarge { len, max } => {
                write!(f, "dense oracle limited to length {max}, got {len}")
            }
            Error::InfeasibleInstance(msg) => {
                write!(f, "infeasible instance parameters: {msg}")
            }
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::FieldMismatch => {
                write!(f, "operands belong to different finite fields")
            }
            Error::ElementOutOfRange { bits, ell } => {
                write!(f, "value {bits:#x} does not fit in GF(2^{ell})")
            }
            Error::ReduciblePolynomial { ell, poly } => {
                write!(f, "polynomial {poly:#x} is not irreducible over GF(2) at width {ell}")
            }
            Error::NoNttPrime => {
                write!(f, "no transform-friendly prime found in the search range")
            }
            Error::Overflow(what) => write!(f, "integer overflow in {what}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::ReductionTooLarge { needed, max } => {
                write!(f, "reduction needs {needed} buckets, ceiling is {max}")
            }
            Error::DomainTooLargeForPoly { domain, max_digits } => {
                write!(
                    f,
                    "domain {domain} exceeds what {max_digits} digits can address; \
                     reduce indices modulo a separating prime first"
                )
            }
            Error::AssignmentPoolExhausted { needed, q } => {
                write!(f, "need {needed} distinct assignments but the field has only {q}")
            }
            Error::PoolTooSmall { required, available } => {
                write!(
                    f,
                    "prime pool of {available} cannot separate all index pairs \
                     (worst case kills {required})"
                )
            }
            Error::StaleTable { expected, found } => {
                write!(
                    f,
                    "assignment table fingerprint {found:#018x} does not match \
                     text fingerprint {expected:#018x}"
                )
            }
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
