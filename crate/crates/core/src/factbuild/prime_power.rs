//! Automata over the alphabet `b = p^a` computing `ℓ_b(n!)`.

use super::{m_table, BuildError};
use crate::dfao::{explore, minimize, Dfao, STATE_LIMIT};
use crate::numkit::arith::{is_prime, lcm, mul_mod, multiplicative_order, phi_prime_power};
use crate::numkit::{DigitOrder, NumError, UnitValPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimePowerMode {
    /// The three-component construction `(u, v, w)` transcribed as stated,
    /// with no correctness guarantee.
    Literal,
    /// Exact construction on unit/valuation pairs.
    Sound,
}

pub fn build_prime_power(p: u64, a: u32, mode: PrimePowerMode) -> Result<Dfao, BuildError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p).into());
    }
    if a == 0 {
        return Err(NumError::ZeroExponent.into());
    }
    match p.checked_pow(a) {
        Some(b) if b <= 1 << 16 => {}
        _ => return Err(NumError::Overflow.into()),
    }
    match mode {
        PrimePowerMode::Literal => literal(p, a),
        PrimePowerMode::Sound => sound(p, a),
    }
}

/// Last nonzero base-`b` digit of a positive machine integer.
fn lnz_small(mut x: u64, b: u64) -> u64 {
    debug_assert!(x > 0);
    while x % b == 0 {
        x /= b;
    }
    x % b
}

/// States `(u, v, w) ∈ {1..b−1} × Z_{φ(b)} × Z_{p−1}`, initial `(1, 0, 0)`,
/// `ρ((u,v,w), s) = (ℓ_b(u·m_s), v+s, w+v)` and
/// `τ(u,v,w) = ℓ_b(u · m_{b−1}^{v + p^{a−1} w})`.
fn literal(p: u64, a: u32) -> Result<Dfao, BuildError> {
    let b = p.pow(a);
    let phi = phi_prime_power(p, a);
    let wmod = p - 1;
    let m = m_table(b)?;
    let top = UnitValPair::of_int(m.get(b as usize - 1) as u128, p, a, a as u64)?;

    let (nu, nv, nw) = (b - 1, phi, wmod);
    let index = |u: u64, v: u64, w: u64| (((u - 1) * nv + v) * nw + w) as usize;
    let states = (nu * nv * nw) as usize;
    let mut outputs = vec![0u64; states];
    let mut transitions = vec![0usize; states * b as usize];
    for u in 1..b {
        for v in 0..nv {
            for w in 0..nw {
                let q = index(u, v, w);
                let exponent = v + p.pow(a - 1) * w;
                let pair = UnitValPair::of_int(u as u128, p, a, a as u64)?.mul(&top.pow(exponent));
                outputs[q] = pair.to_lnz();
                for s in 0..b {
                    let u2 = lnz_small(u * m.get(s as usize), b);
                    let target = index(u2, (v + s) % phi, (w + v) % wmod);
                    transitions[q * b as usize + s as usize] = target;
                }
            }
        }
    }
    Ok(Dfao::new(b as usize, DigitOrder::MsdFirst, index(1, 0, 0), outputs, transitions)?)
}

/// Unit part of `x > 0` modulo `q = p^a`.
fn unit_mod(mut x: u64, p: u64, q: u64) -> u64 {
    while x % p == 0 {
        x /= p;
    }
    x % q
}

/// Tables driving the exact construction for `b = p^a`.
///
/// Reading digit `d` after prefix `P` moves from `P!` to `(bP + d)!`, and
///
/// `(bP + d)! = b^P · P! · ∏_{k<P} ∏_{j=1}^{b−1} (kb + j) · ∏_{j=1}^{d} (bP + j)`.
///
/// Since `j < p^a`, `v_p(kb + j) = v_p(j)`, while the unit part of `kb + j`
/// depends on `k mod p^{a−1}`. So the block units `U(k)` are periodic with
/// period `p^{a−1}`, and their running product is periodic in `P` with
/// period `ord(C)·p^{a−1}`, where `C` is the product over one period.
struct BlockTables {
    p: u64,
    a: u32,
    q: u64,
    /// `p^{a−1}`.
    low: u64,
    /// Period of the prefix residue kept in the state.
    period: u64,
    /// `prefix_units[x] = ∏_{k<x} U(k) mod q` for `x < period`.
    prefix_units: Vec<u64>,
    /// `tail_units[r][d] = ∏_{j=1}^{d} unit(rb + j)` for `r < p^{a−1}`.
    tail_units: Vec<Vec<u64>>,
    /// `v_p((b−1)!) mod a`.
    block_val: u64,
    /// `v_p(d!) mod a`.
    tail_val: Vec<u64>,
}

impl BlockTables {
    fn new(p: u64, a: u32) -> Self {
        let q = p.pow(a);
        let b = q;
        let low = p.pow(a - 1);
        let block = |k: u64| (1..b).fold(1u64, |acc, j| mul_mod(acc, unit_mod(k * b + j, p, q), q));
        let blocks: Vec<u64> = (0..low).map(block).collect();
        let full = blocks.iter().fold(1u64, |acc, &u| mul_mod(acc, u, q));
        let period = lcm(multiplicative_order(full, q) * low, a as u64);
        let mut prefix_units = Vec::with_capacity(period as usize);
        let mut acc = 1u64;
        for x in 0..period {
            prefix_units.push(acc);
            acc = mul_mod(acc, blocks[(x % low) as usize], q);
        }
        let tail_units = (0..low)
            .map(|r| {
                let mut row = Vec::with_capacity(b as usize);
                let mut acc = 1u64;
                row.push(acc);
                for j in 1..b {
                    acc = mul_mod(acc, unit_mod(r * b + j, p, q), q);
                    row.push(acc);
                }
                row
            })
            .collect();
        let vp = |j: u64| {
            let (mut j, mut v) = (j, 0);
            while j % p == 0 {
                j /= p;
                v += 1;
            }
            v
        };
        let mut tail_val = vec![0u64];
        for j in 1..b {
            tail_val.push((tail_val[j as usize - 1] + vp(j)) % a as u64);
        }
        let block_val = tail_val[b as usize - 1];
        BlockTables { p, a, q, low, period, prefix_units, tail_units, block_val, tail_val }
    }

    /// State `(unit of P!, v_p(P!) mod a, P mod period)` after one more digit.
    fn step(&self, (unit, val, prefix): (u64, u64, u64), d: u64) -> (u64, u64, u64) {
        let a = self.a as u64;
        let unit = mul_mod(
            mul_mod(unit, self.prefix_units[prefix as usize], self.q),
            self.tail_units[(prefix % self.low) as usize][d as usize],
            self.q,
        );
        let val = (val + prefix % a * self.block_val + self.tail_val[d as usize]) % a;
        let prefix = (prefix * self.q + d) % self.period;
        (unit, val, prefix)
    }

    fn output(&self, (unit, val, _): (u64, u64, u64)) -> u64 {
        mul_mod(self.p.pow(val as u32), unit, self.q)
    }
}

fn sound(p: u64, a: u32) -> Result<Dfao, BuildError> {
    let tables = BlockTables::new(p, a);
    let raw = explore(
        tables.q as usize,
        DigitOrder::MsdFirst,
        (1 % tables.q, 0u64, 0u64),
        |&state, d| tables.step(state, d as u64),
        |&state| tables.output(state),
        STATE_LIMIT,
    )?;
    Ok(minimize(&raw))
}
