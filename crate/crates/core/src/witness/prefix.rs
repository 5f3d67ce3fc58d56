use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::WitnessError;
use crate::numkit::arith::is_prime;
use crate::numkit::{big_digit_sum, big_to_digits, multiplicatively_dependent, NumError};

/// Slack around the floating-point prefilter; candidates are always
/// confirmed exactly.
const LOG_SLACK: f64 = 1e-7;

/// `c^d = a·b^e + f` with `1 ≤ f < b^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTriple {
    pub c: u64,
    pub b: u64,
    pub a: BigUint,
    pub d: u64,
    pub e: u64,
    pub f: BigUint,
}

impl WitnessTriple {
    /// Exact recomputation of the defining identity and the bounds on `f`.
    pub fn verify(&self) -> bool {
        let scale = BigUint::from(self.b).pow(self.e);
        let lhs = BigUint::from(self.c).pow(self.d);
        !self.f.is_zero() && self.f < scale && lhs == &self.a * &scale + &self.f
    }
}

/// `a' = a·k^e + f` with `[a]_k` a prefix of `[a']_k` and the largest prime
/// of the set dominating every other digit sum of `a'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub a_prime: BigUint,
    /// Exponent used by the construction (`p^d − 1` or `a·p^{td} + p^{td} − 1`).
    pub d: u64,
    /// Number of base-`k` digits appended after `[a]_k`.
    pub e: u64,
    pub f: BigUint,
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let top = (x >> (bits - 64)).to_u64().unwrap() as f64;
    top.log2() + (bits - 64) as f64
}

fn num_digits(x: &BigUint, k: u64) -> Result<u64, NumError> {
    Ok(big_to_digits(x, k)?.len() as u64)
}

/// The `e ≥ 0` with `a·k^e ≤ x < (a+1)·k^e`, i.e. `[x]_k` is `[a]_k`
/// followed by exactly `e` digits.
fn prefix_shift(x: &BigUint, a: &BigUint, a_len: u64, k: u64) -> Option<u64> {
    if x < a {
        return None;
    }
    let estimate = (log2_big(x) / (k as f64).log2()).floor() as i64 - (a_len as i64 - 1);
    let big_k = BigUint::from(k);
    (estimate - 1..=estimate + 1).filter(|&e| e >= 0).find_map(|e| {
        let scale = Pow::pow(&big_k, e as u64);
        let low = a * &scale;
        (low <= *x && *x < low + &scale).then_some(e as u64)
    })
}

/// Floating-point test that `frac(t)` lies in `[lo, hi)` up to slack,
/// allowing for wrap-around at the integers.
fn near_window(t: f64, lo: f64, hi: f64) -> bool {
    let frac = t - t.floor();
    [frac - 1.0, frac, frac + 1.0]
        .iter()
        .any(|&x| x >= lo - LOG_SLACK && x < hi + LOG_SLACK)
}

/// Log window `[log_k a − (L−1), log_k(a+1) − (L−1))` for an `L`-digit prefix.
fn window(a: &BigUint, a_len: u64, k: u64) -> (f64, f64) {
    let lk = (k as f64).log2();
    let shift = (a_len - 1) as f64;
    (log2_big(a) / lk - shift, log2_big(&(a + 1u32)) / lk - shift)
}

/// Smallest `d ≤ d_max` such that `[a]_b` is a proper prefix of `[c^d]_b`
/// and the remaining digits are not all zero.
pub fn find_power_with_prefix(c: u64, b: u64, a: &BigUint, d_max: u64) -> Result<WitnessTriple, WitnessError> {
    for base in [c, b] {
        if base < 2 {
            return Err(NumError::InvalidBase(base).into());
        }
    }
    if a.is_zero() {
        return Err(WitnessError::ZeroPrefix);
    }
    if multiplicatively_dependent(b, c)? {
        return Err(WitnessError::Dependent { c, b });
    }
    let a_len = num_digits(a, b)?;
    let (lo, hi) = window(a, a_len, b);
    let step = (c as f64).log2() / (b as f64).log2();
    for d in 1..=d_max {
        let t = d as f64 * step;
        if t + LOG_SLACK < a_len as f64 || !near_window(t, lo, hi) {
            continue;
        }
        let x = BigUint::from(c).pow(d);
        let Some(e) = prefix_shift(&x, a, a_len, b) else { continue };
        if e == 0 {
            continue;
        }
        let f = &x - a * BigUint::from(b).pow(e);
        if f.is_zero() {
            continue;
        }
        let triple = WitnessTriple { c, b, a: a.clone(), d, e, f };
        debug_assert!(triple.verify());
        return Ok(triple);
    }
    Err(WitnessError::Exhausted { search: "power with prefix", limit: d_max })
}

/// `t` with `k = p^t`, if any.
fn power_of(k: u64, p: u64) -> Option<u32> {
    let (mut x, mut t) = (k, 0);
    while x % p == 0 {
        x /= p;
        t += 1;
    }
    (x == 1 && t > 0).then_some(t)
}

fn dominates(x: &BigUint, primes: &[u64], p: u64) -> Result<bool, NumError> {
    let top = big_digit_sum(x, p)?;
    for &q in primes {
        if q != p && big_digit_sum(x, q)? > top {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `d ≤ d_max` whose candidate extends `[a]_k` and satisfies
/// `max_{q∈P} s_q(a') = s_p(a')` with `p = max P`. The candidate is
/// `p^d − 1` when `k` is not a power of `p`, else `a·p^{td} + p^{td} − 1`.
pub fn find_extension(primes: &[u64], k: u64, a: &BigUint, d_max: u64) -> Result<Extension, WitnessError> {
    if k < 2 {
        return Err(NumError::InvalidBase(k).into());
    }
    if a.is_zero() {
        return Err(WitnessError::ZeroPrefix);
    }
    let &p = primes.iter().max().ok_or(WitnessError::EmptyPrimeSet)?;
    if let Some(&q) = primes.iter().find(|&&q| !is_prime(q)) {
        return Err(NumError::NotPrime(q).into());
    }
    let a_len = num_digits(a, k)?;
    let big_p = BigUint::from(p);

    let accept = |a_prime: BigUint, d: u64| -> Result<Option<Extension>, WitnessError> {
        let Some(e) = prefix_shift(&a_prime, a, a_len, k) else { return Ok(None) };
        if !dominates(&a_prime, primes, p)? {
            return Ok(None);
        }
        let f = &a_prime - a * BigUint::from(k).pow(e);
        Ok(Some(Extension { a_prime, d, e, f }))
    };

    match power_of(k, p) {
        Some(t) => {
            for d in 1..=d_max {
                let block = Pow::pow(&big_p, t as u64 * d);
                let a_prime = a * &block + &block - BigUint::one();
                if let Some(ext) = accept(a_prime, d)? {
                    return Ok(ext);
                }
            }
        }
        None => {
            let (lo, hi) = window(a, a_len, k);
            let step = (p as f64).log2() / (k as f64).log2();
            for d in 1..=d_max {
                let t = d as f64 * step;
                if t + LOG_SLACK < (a_len - 1) as f64 || !near_window(t, lo, hi) {
                    continue;
                }
                let a_prime = Pow::pow(&big_p, d) - BigUint::one();
                if let Some(ext) = accept(a_prime, d)? {
                    return Ok(ext);
                }
            }
        }
    }
    Err(WitnessError::Exhausted { search: "dominant extension", limit: d_max })
}
