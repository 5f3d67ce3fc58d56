use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::arith::{is_prime, mul_mod, pow_mod};
use super::NumError;

/// A positive integer seen through one prime power `p^a`: its unit part
/// `x / p^{v_p(x)}` reduced mod `p^a`, and its valuation `v_p(x)` reduced
/// mod `L` (a positive multiple of `a`).
///
/// Unlike last-nonzero-digit values, these pairs compose exactly under
/// multiplication, and `ℓ_{p^a}(x)` is recoverable from the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitValPair {
    p: u64,
    a: u32,
    modulus: u64,
    l: u64,
    unit: u64,
    val: u64,
}

/// Exponent modulus large enough that valuations of any `n!` with `n < 2^62`
/// never wrap.
pub fn exact_exponent_modulus(a: u32) -> u64 {
    (1u64 << 62) / a as u64 * a as u64
}

impl UnitValPair {
    fn context(p: u64, a: u32, l: u64) -> Result<u64, NumError> {
        if !is_prime(p) {
            return Err(NumError::NotPrime(p));
        }
        if a == 0 {
            return Err(NumError::ZeroExponent);
        }
        if l == 0 || l % a as u64 != 0 {
            return Err(NumError::BadExponentModulus { l, a });
        }
        match p.checked_pow(a) {
            Some(m) if m <= u32::MAX as u64 => Ok(m),
            _ => Err(NumError::Overflow),
        }
    }

    pub fn identity(p: u64, a: u32, l: u64) -> Result<Self, NumError> {
        let modulus = Self::context(p, a, l)?;
        Ok(UnitValPair { p, a, modulus, l, unit: 1 % modulus, val: 0 })
    }

    /// Builds a pair from already-reduced parts.
    pub fn from_parts(p: u64, a: u32, l: u64, unit: u64, val: u64) -> Result<Self, NumError> {
        let modulus = Self::context(p, a, l)?;
        if unit % p == 0 || unit >= modulus || val >= l {
            return Err(NumError::NotAUnit { unit, p });
        }
        Ok(UnitValPair { p, a, modulus, l, unit, val })
    }

    pub fn of_int(x: u128, p: u64, a: u32, l: u64) -> Result<Self, NumError> {
        let modulus = Self::context(p, a, l)?;
        if x == 0 {
            return Err(NumError::Zero);
        }
        let pp = p as u128;
        let mut rest = x;
        let mut v = 0u64;
        while rest % pp == 0 {
            rest /= pp;
            v += 1;
        }
        Ok(UnitValPair {
            p,
            a,
            modulus,
            l,
            unit: (rest % modulus as u128) as u64,
            val: v % l,
        })
    }

    pub fn of_big(x: &BigUint, p: u64, a: u32, l: u64) -> Result<Self, NumError> {
        let modulus = Self::context(p, a, l)?;
        if x.is_zero() {
            return Err(NumError::Zero);
        }
        let pb = BigUint::from(p);
        let mut rest = x.clone();
        let mut v = 0u64;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            v += 1;
        }
        let unit = (rest % modulus).to_u64().expect("reduced below modulus");
        Ok(UnitValPair { p, a, modulus, l, unit, val: v % l })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `p^a`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent_modulus(&self) -> u64 {
        self.l
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn val(&self) -> u64 {
        self.val
    }

    fn same_context(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.l == other.l
    }

    /// Pair of the product of the two represented integers.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_context(other), "mixing pairs over different prime powers");
        UnitValPair {
            unit: mul_mod(self.unit, other.unit, self.modulus),
            val: ((self.val as u128 + other.val as u128) % self.l as u128) as u64,
            ..*self
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        UnitValPair {
            unit: pow_mod(self.unit, e, self.modulus),
            val: ((self.val as u128 * e as u128) % self.l as u128) as u64,
            ..*self
        }
    }

    /// `ℓ_{p^a}(x) = p^{v mod a} · unit  (mod p^a)`.
    pub fn to_lnz(&self) -> u64 {
        let shift = self.p.pow((self.val % self.a as u64) as u32);
        mul_mod(shift, self.unit, self.modulus)
    }
}

/// Last nonzero base-`b` digit of an arbitrary positive integer, by direct
/// division. Used as an independent reference.
pub fn lnz_of_big(x: &BigUint, b: u64) -> Result<u64, NumError> {
    if b < 2 {
        return Err(NumError::InvalidBase(b));
    }
    if x.is_zero() {
        return Err(NumError::Zero);
    }
    let bb = BigUint::from(b);
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(&bb);
        if !r.is_zero() {
            return Ok(r.to_u64().expect("digit below base"));
        }
        rest = q;
    }
}
