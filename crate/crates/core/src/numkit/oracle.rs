//! Streaming ground truth for `ℓ_b(n!)`.
//!
//! The running factorial is never materialized. For every prime power
//! `p_i^{a_i} ‖ b` the stream keeps the exact [`UnitValPair`] of `n!`; the
//! digit is rebuilt by CRT from
//!
//! `n! / b^t ≡ p_i^{v_i − a_i t} · unit_i · (b / p_i^{a_i})^{−t}  (mod p_i^{a_i})`
//!
//! with `t = min_i ⌊v_i / a_i⌋`.

use super::arith::{mod_inv, mul_mod, pow_mod};
use super::factor::factorize;
use super::pair::{exact_exponent_modulus, UnitValPair};
use super::NumError;

#[derive(Debug, Clone)]
struct Slot {
    acc: UnitValPair,
    /// Inverse of `b / p^a` modulo `p^a`.
    cofactor_inv: u64,
    /// CRT coefficient: `≡ 1 (mod p^a)`, `≡ 0` modulo the other prime powers.
    crt_coeff: u64,
}

/// Incremental iterator over `(n, ℓ_b(n!))` for `n` in an inclusive range.
#[derive(Debug, Clone)]
pub struct LnzStream {
    base: u64,
    slots: Vec<Slot>,
    /// The accumulators hold the pairs of `current!`.
    current: u64,
    end: u64,
    done: bool,
}

impl LnzStream {
    /// Stream positioned at `n0!`, yielding through `n1` inclusive.
    pub fn new(b: u64, n0: u64, n1: u64) -> Result<Self, NumError> {
        let fact = factorize(b)?;
        if b > u32::MAX as u64 {
            return Err(NumError::Overflow);
        }
        let mut slots = Vec::with_capacity(fact.pairs().len());
        for pp in fact.pairs() {
            let q = pp.value();
            let cofactor = b / q;
            let cofactor_inv = mod_inv(cofactor % q, q).expect("cofactor coprime to p");
            let crt_coeff = mul_mod(cofactor, cofactor_inv, b);
            slots.push(Slot {
                acc: UnitValPair::identity(pp.p, pp.a, exact_exponent_modulus(pp.a))?,
                cofactor_inv,
                crt_coeff,
            });
        }
        let mut stream = LnzStream { base: b, slots, current: 0, end: n1, done: n0 > n1 };
        stream.advance_to(n0);
        Ok(stream)
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// The `n` whose factorial the stream currently represents.
    pub fn current(&self) -> u64 {
        self.current
    }

    fn step(&mut self) {
        self.current += 1;
        let n = self.current as u128;
        for slot in &mut self.slots {
            let acc = &slot.acc;
            let factor = UnitValPair::of_int(n, acc.p(), acc.a(), acc.exponent_modulus())
                .expect("context already validated");
            slot.acc = acc.mul(&factor);
        }
    }

    fn advance_to(&mut self, n: u64) {
        while self.current < n {
            self.step();
        }
    }

    /// Pairs of `current!`, one per prime power of the base, in
    /// factorization order.
    pub fn pairs(&self) -> impl Iterator<Item = &UnitValPair> {
        self.slots.iter().map(|s| &s.acc)
    }

    /// `v_b(current!)`.
    pub fn base_valuation(&self) -> u64 {
        self.slots
            .iter()
            .map(|s| s.acc.val() / s.acc.a() as u64)
            .min()
            .expect("at least one prime")
    }

    /// `ℓ_b(current!)`.
    pub fn value(&self) -> u64 {
        let t = self.base_valuation();
        let mut acc = 0u64;
        for slot in &self.slots {
            let pair = &slot.acc;
            let a = pair.a() as u64;
            let q = pair.modulus();
            let excess = pair.val() - a * t;
            if excess >= a {
                continue;
            }
            let residue = mul_mod(
                mul_mod(pair.p().pow(excess as u32), pair.unit(), q),
                pow_mod(slot.cofactor_inv, t, q),
                q,
            );
            acc = (acc + mul_mod(residue, slot.crt_coeff, self.base)) % self.base;
        }
        acc
    }
}

impl Iterator for LnzStream {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = (self.current, self.value());
        if self.current >= self.end {
            self.done = true;
        } else {
            self.step();
        }
        Some(item)
    }
}

/// `ℓ_b(n!)`, the last nonzero base-`b` digit of `n!`.
pub fn lnz_factorial(n: u64, b: u64) -> Result<u64, NumError> {
    Ok(LnzStream::new(b, n, n)?.value())
}

/// Stream of `(n, ℓ_b(n!))` for `n0 ≤ n ≤ n1`.
pub fn lnz_range(b: u64, n0: u64, n1: u64) -> Result<LnzStream, NumError> {
    LnzStream::new(b, n0, n1)
}
