use std::fmt;

use super::arith::{gcd, is_prime};
use super::digits::digit_sum_unchecked;
use super::NumError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub a: u32,
}

impl PrimePower {
    /// The ordering key `a·(p−1)`: the rate at which `v_{p^a}(n!)` grows.
    pub fn key(&self) -> u64 {
        self.a as u64 * (self.p - 1)
    }

    pub fn value(&self) -> u64 {
        self.p.pow(self.a)
    }
}

/// Prime-power decomposition sorted by key `a·(p−1)` descending, ties broken
/// by the larger prime first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    pairs: Vec<PrimePower>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn pairs(&self) -> &[PrimePower] {
        &self.pairs
    }

    pub fn keys(&self) -> Vec<u64> {
        self.pairs.iter().map(PrimePower::key).collect()
    }

    pub fn leading(&self) -> PrimePower {
        self.pairs[0]
    }

    /// Prime powers whose key equals the leading key (the leading one first).
    pub fn top_tier(&self) -> &[PrimePower] {
        let top = self.pairs[0].key();
        let len = self.pairs.iter().take_while(|pp| pp.key() == top).count();
        &self.pairs[..len]
    }

    pub fn verdict(&self) -> Verdict {
        match self.pairs.as_slice() {
            [only] => Verdict::PrimePower { p: only.p, a: only.a },
            [first, second, ..] if first.key() > second.key() => Verdict::Automatic { p: first.p },
            _ => Verdict::NotAutomatic,
        }
    }
}

/// Whether `ℓ_b(n!)` is automatic, and in which base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    PrimePower { p: u64, a: u32 },
    Automatic { p: u64 },
    NotAutomatic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PrimePower { p, a } => write!(f, "PRIME_POWER {p} {a}"),
            Verdict::Automatic { p } => write!(f, "AUTOMATIC {p}"),
            Verdict::NotAutomatic => write!(f, "NOT_AUTOMATIC"),
        }
    }
}

/// Trial-division factorization of `b ≥ 2`.
pub fn factorize(b: u64) -> Result<Factorization, NumError> {
    if b < 2 {
        return Err(NumError::InvalidBase(b));
    }
    let mut pairs = Vec::new();
    let mut rest = b;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut a = 0;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            pairs.push(PrimePower { p, a });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        pairs.push(PrimePower { p: rest, a: 1 });
    }
    pairs.sort_by(|x, y| y.key().cmp(&x.key()).then(y.p.cmp(&x.p)));
    Ok(Factorization { n: b, pairs })
}

fn check_prime(p: u64) -> Result<(), NumError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(NumError::NotPrime(p))
    }
}

/// `v_{p^a}(n!) = ⌊(n − s_p(n)) / (a(p−1))⌋`.
pub fn legendre_valuation(n: u64, p: u64, a: u32) -> Result<u64, NumError> {
    check_prime(p)?;
    if a == 0 {
        return Err(NumError::ZeroExponent);
    }
    Ok(legendre_unchecked(n, p, a))
}

#[inline]
pub(crate) fn legendre_unchecked(n: u64, p: u64, a: u32) -> u64 {
    (n - digit_sum_unchecked(n, p)) / (a as u64 * (p - 1))
}

/// Largest `t` with `b^t | n!`.
pub fn base_valuation_factorial(n: u64, b: u64) -> Result<u64, NumError> {
    let fact = factorize(b)?;
    Ok(fact
        .pairs()
        .iter()
        .map(|pp| legendre_unchecked(n, pp.p, pp.a))
        .min()
        .expect("b ≥ 2 has a prime factor"))
}

/// True iff `b` and `c` are powers of one common integer.
pub fn multiplicatively_dependent(b: u64, c: u64) -> Result<bool, NumError> {
    let fb = factorize(b)?;
    let fc = factorize(c)?;
    let mut eb: Vec<(u64, u64)> = fb.pairs().iter().map(|pp| (pp.p, pp.a as u64)).collect();
    let mut ec: Vec<(u64, u64)> = fc.pairs().iter().map(|pp| (pp.p, pp.a as u64)).collect();
    eb.sort_unstable();
    ec.sort_unstable();
    if eb.len() != ec.len() || eb.iter().zip(&ec).any(|(x, y)| x.0 != y.0) {
        return Ok(false);
    }
    // Exponent vectors must be proportional.
    let gb = eb.iter().fold(0, |g, &(_, e)| gcd(g, e));
    let gc = ec.iter().fold(0, |g, &(_, e)| gcd(g, e));
    Ok(eb.iter().zip(&ec).all(|(x, y)| x.1 / gb == y.1 / gc))
}
