//! Exact integer and digit primitives: base conversion, digit sums,
//! factorization, Legendre valuations, unit/valuation pairs and the
//! streaming `ℓ_b(n!)` oracle.

pub mod arith;
mod digits;
mod factor;
mod oracle;
mod pair;

use thiserror::Error;

pub use digits::{
    big_digit_sum, big_from_digits, big_to_digits, digit_sum, from_digits, render_digits,
    to_digits, DigitOrder, DigitString,
};
pub use factor::{
    base_valuation_factorial, factorize, legendre_valuation, multiplicatively_dependent,
    Factorization, PrimePower, Verdict,
};
pub use oracle::{lnz_factorial, lnz_range, LnzStream};
pub use pair::{exact_exponent_modulus, lnz_of_big, UnitValPair};

pub(crate) use digits::lsd_digits;
pub(crate) use factor::legendre_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("invalid base {0}: a base must be at least 2")]
    InvalidBase(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime exponent must be at least 1")]
    ZeroExponent,
    #[error("zero has no unit/valuation decomposition")]
    Zero,
    #[error("exponent modulus {l} is not a positive multiple of {a}")]
    BadExponentModulus { l: u64, a: u32 },
    #[error("{unit} is not a reduced unit modulo a power of {p}")]
    NotAUnit { unit: u64, p: u64 },
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("value exceeds the supported machine range")]
    Overflow,
}
