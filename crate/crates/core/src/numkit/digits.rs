use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::NumError;

/// Which end of a digit string is read first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DigitOrder {
    MsdFirst,
    LsdFirst,
}

impl DigitOrder {
    pub fn flipped(self) -> Self {
        match self {
            DigitOrder::MsdFirst => DigitOrder::LsdFirst,
            DigitOrder::LsdFirst => DigitOrder::MsdFirst,
        }
    }
}

/// Positional representation of a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u64,
    order: DigitOrder,
    digits: Vec<u64>,
}

impl DigitString {
    /// Wraps raw digits, rejecting out-of-range values. Non-canonical
    /// strings (extra zeros at the high end) are accepted.
    pub fn new(base: u64, order: DigitOrder, digits: Vec<u64>) -> Result<Self, NumError> {
        check_base(base)?;
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(NumError::DigitOutOfRange { digit, base });
        }
        Ok(DigitString { base, order, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u64> {
        self.digits
    }

    pub fn is_canonical(&self) -> bool {
        let high = match self.order {
            DigitOrder::MsdFirst => self.digits.first(),
            DigitOrder::LsdFirst => self.digits.last(),
        };
        match high {
            None => false,
            Some(&0) => self.digits.len() == 1,
            Some(_) => true,
        }
    }

    /// Value of the string; `None` if it does not fit in a `u64`.
    pub fn value(&self) -> Option<u64> {
        let mut acc: u64 = 0;
        let fold = |acc: u64, &d: &u64| acc.checked_mul(self.base)?.checked_add(d);
        match self.order {
            DigitOrder::MsdFirst => {
                for d in &self.digits {
                    acc = fold(acc, d)?;
                }
            }
            DigitOrder::LsdFirst => {
                for d in self.digits.iter().rev() {
                    acc = fold(acc, d)?;
                }
            }
        }
        Some(acc)
    }
}

fn check_base(k: u64) -> Result<(), NumError> {
    if k < 2 {
        Err(NumError::InvalidBase(k))
    } else {
        Ok(())
    }
}

/// Canonical base-`k` digits of `n` in the requested order.
pub fn to_digits(n: u64, k: u64, order: DigitOrder) -> Result<DigitString, NumError> {
    check_base(k)?;
    let mut digits = lsd_digits(n, k);
    if order == DigitOrder::MsdFirst {
        digits.reverse();
    }
    Ok(DigitString { base: k, order, digits })
}

pub fn from_digits(s: &DigitString) -> Option<u64> {
    s.value()
}

/// LSD-first digits, `[0]` for zero. Assumes `k ≥ 2`.
pub(crate) fn lsd_digits(mut n: u64, k: u64) -> Vec<u64> {
    if n == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(64);
    while n > 0 {
        out.push(n % k);
        n /= k;
    }
    out
}

/// Sum of the base-`k` digits of `n`.
pub fn digit_sum(n: u64, k: u64) -> Result<u64, NumError> {
    check_base(k)?;
    Ok(digit_sum_unchecked(n, k))
}

#[inline]
pub(crate) fn digit_sum_unchecked(mut n: u64, k: u64) -> u64 {
    if k == 2 {
        return n.count_ones() as u64;
    }
    let mut s = 0;
    while n > 0 {
        s += n % k;
        n /= k;
    }
    s
}

/// Largest power of `k` that fits in a `u64`, with its exponent.
fn chunk_radix(k: u64) -> (u64, usize) {
    let mut pow = k;
    let mut e = 1;
    while let Some(next) = pow.checked_mul(k) {
        pow = next;
        e += 1;
    }
    (pow, e)
}

/// Canonical MSD-first base-`k` digits of an arbitrary-size integer.
pub fn big_to_digits(n: &BigUint, k: u64) -> Result<Vec<u64>, NumError> {
    check_base(k)?;
    if n.is_zero() {
        return Ok(vec![0]);
    }
    if k <= 256 {
        return Ok(n.to_radix_be(k as u32).into_iter().map(u64::from).collect());
    }
    let (chunk, width) = chunk_radix(k);
    let chunk_big = BigUint::from(chunk);
    let mut rest = n.clone();
    let mut lsd = Vec::new();
    while !rest.is_zero() {
        let low = (&rest % &chunk_big).to_u64().expect("remainder below chunk");
        rest /= &chunk_big;
        let mut piece = low;
        for _ in 0..width {
            lsd.push(piece % k);
            piece /= k;
        }
    }
    while lsd.len() > 1 && *lsd.last().unwrap() == 0 {
        lsd.pop();
    }
    lsd.reverse();
    Ok(lsd)
}

/// Value of MSD-first digits in base `k`.
pub fn big_from_digits(digits: &[u64], k: u64) -> BigUint {
    let base = BigUint::from(k);
    digits
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * &base + BigUint::from(d))
}

pub fn big_digit_sum(n: &BigUint, k: u64) -> Result<u64, NumError> {
    check_base(k)?;
    if k == 2 {
        return Ok(n.count_ones());
    }
    Ok(big_to_digits(n, k)?.into_iter().sum())
}

/// Renders digits as text: concatenated for bases up to ten, dot-separated
/// decimal digit values above.
pub fn render_digits(digits: &[u64], k: u64) -> String {
    if k <= 10 {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}
