//! Bases with a strictly dominant prime.
//!
//! Write `b = q · b'` with `q = p₁^{a₁}` the prime power of largest key
//! `a(p−1)`. Once `v_{b'}(n!) > v_q(n!)`, the digit `ℓ_b(n!)` is a multiple
//! of `b'` and satisfies `ℓ_b(n!) · b'^{v_q(n!)} ≡ ℓ_q(n!) (mod q)`, so it is
//! determined by `ℓ_q(n!)` and `v_q(n!) mod φ(q)`, both `p₁`-automatic.
//! The finitely many `n` where the valuation inequality fails are patched.

use std::collections::BTreeMap;

use super::{build_prime_power, BuildError, PrimePowerMode};
use crate::dfao::{build_primitive, map_output, minimize, patch, product, rebase, Dfao, Primitive, Rebase};
use crate::numkit::arith::{is_prime, mod_inv, mul_mod, phi_prime_power, pow_mod};
use crate::numkit::{factorize, legendre_unchecked, lnz_range, Factorization, NumError, PrimePower, Verdict};

/// Default range scanned exhaustively for valuation-inequality failures.
pub const DEFAULT_SCAN_LIMIT: u64 = 10_000;

/// Automaton over the alphabet `p` computing `v_{p^a}(n!) mod m`.
pub fn build_valuation_dfao(p: u64, a: u32, m: u64) -> Result<Dfao, BuildError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p).into());
    }
    if a == 0 {
        return Err(NumError::ZeroExponent.into());
    }
    let scale = m
        .checked_mul(a as u64)
        .and_then(|x| x.checked_mul(p - 1))
        .ok_or(NumError::Overflow)?;
    let raw = build_primitive(&Primitive::NMinusDigitSumMod(scale), p as usize)?;
    // (n − s_p(n)) / (p − 1) = v_p(n!), known here modulo m·a.
    let mapped = map_output(&raw, |x| (x / (p - 1)) / a as u64 % m);
    Ok(minimize(&mapped))
}

/// Where the valuation inequality `v_{b'}(n!) > v_q(n!)` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceScan {
    pub b: u64,
    pub lead: PrimePower,
    pub cofactor: u64,
    /// Every `n ≤ scanned_to` was checked exactly.
    pub scanned_to: u64,
    /// From here on the inequality follows from Legendre's formula with
    /// `s_p(n) ≤ (p−1)·(number of base-p digits)`.
    pub certified_from: u64,
    pub exceptions: Vec<u64>,
}

/// Smallest `N` such that for all `N ≤ n < 2^63` the bound
/// `(n − s_i(n))/K_i − 1 ≥ (n − 1)/K_1` holds, which implies
/// `⌊v_{p_i}(n!)/a_i⌋ > ⌊v_{p_1}(n!)/a_1⌋`.
fn certified_start(lead: PrimePower, other: PrimePower) -> u64 {
    let (k1, ki) = (lead.key() as u128, other.key() as u128);
    debug_assert!(k1 > ki);
    let p = other.p as u128;
    let mut last_fail: Option<u128> = None;
    let mut lo: u128 = 1;
    let mut digits: u128 = 1;
    while lo < 1u128 << 63 {
        let hi = lo * p; // interval [lo, hi) has `digits` base-p digits
        let need = (k1 * (p - 1) * digits + k1 * ki - ki).div_ceil(k1 - ki);
        if need > lo {
            last_fail = Some(need.min(hi) - 1);
        }
        lo = hi;
        digits += 1;
    }
    last_fail.map_or(0, |f| (f + 1) as u64)
}

fn dominant_parts(b: u64) -> Result<Factorization, BuildError> {
    let fact = factorize(b)?;
    match fact.verdict() {
        Verdict::PrimePower { .. } => Err(BuildError::PrimePowerBase { b }),
        Verdict::NotAutomatic => Err(BuildError::Tie {
            b,
            key: fact.leading().key(),
            primes: fact.top_tier().iter().map(|pp| pp.p).collect(),
        }),
        Verdict::Automatic { .. } => Ok(fact),
    }
}

/// Exact scan of `[0, max(scan_limit, certified_from − 1)]`.
pub fn dominance_exceptions(b: u64, scan_limit: u64) -> Result<DominanceScan, BuildError> {
    let fact = dominant_parts(b)?;
    let lead = fact.leading();
    let others = &fact.pairs()[1..];
    let certified_from = others.iter().map(|&o| certified_start(lead, o)).max().unwrap_or(0);
    let scanned_to = scan_limit.max(certified_from.saturating_sub(1));
    let exceptions = (0..=scanned_to)
        .filter(|&n| {
            let lead_val = legendre_unchecked(n, lead.p, lead.a);
            let cofactor_val = others.iter().map(|o| legendre_unchecked(n, o.p, o.a)).min().unwrap();
            cofactor_val <= lead_val
        })
        .collect();
    Ok(DominanceScan { b, lead, cofactor: b / lead.value(), scanned_to, certified_from, exceptions })
}

/// Unpatched automaton over the alphabet `lead.p`, assuming `lead` dominates.
fn assemble(b: u64, lead: PrimePower) -> Result<Dfao, BuildError> {
    let q = lead.value();
    let cofactor = b / q;
    let unit_digit = build_prime_power(lead.p, lead.a, PrimePowerMode::Sound)?;
    let lowered = rebase(&unit_digit, Rebase::Lower { base: lead.p as usize, m: lead.a })?;
    let phi = phi_prime_power(lead.p, lead.a);
    let valuation = build_valuation_dfao(lead.p, lead.a, phi)?;
    let inv = mod_inv(cofactor % q, q).expect("cofactor is coprime to the lead prime");
    // ℓ_b = b'·t with t ≡ ℓ_q · b'^{−(v+1)} (mod q).
    let combined = product(&lowered, &valuation, |lq, v| {
        cofactor * mul_mod(lq, pow_mod(inv, v + 1, q), q)
    })?;
    Ok(minimize(&combined))
}

/// A dominant-prime automaton together with its patch certificate.
#[derive(Debug, Clone)]
pub struct DominantBuild {
    pub dfao: Dfao,
    pub scan: DominanceScan,
    /// Overrides applied: exactly the scan's exception set, with oracle values.
    pub patch: BTreeMap<u64, u64>,
}

pub fn build_dominant(b: u64) -> Result<DominantBuild, BuildError> {
    let scan = dominance_exceptions(b, DEFAULT_SCAN_LIMIT)?;
    let raw = assemble(b, scan.lead)?;
    let mut overrides = BTreeMap::new();
    if let Some(&last) = scan.exceptions.last() {
        let mut pending = scan.exceptions.iter().peekable();
        for (n, v) in lnz_range(b, 0, last)? {
            if pending.peek() == Some(&&n) {
                overrides.insert(n, v);
                pending.next();
            }
        }
    }
    let dfao = minimize(&patch(&raw, &overrides)?);
    Ok(DominantBuild { dfao, scan, patch: overrides })
}

/// For a tie base: the dominant-prime construction built as if the leading
/// prime power dominated, patched against the oracle for `n < patch_below`.
/// It is necessarily wrong somewhere beyond the patch.
pub fn build_tie_approximant(b: u64, patch_below: u64) -> Result<Dfao, BuildError> {
    let fact = factorize(b)?;
    match fact.verdict() {
        Verdict::NotAutomatic => {}
        Verdict::PrimePower { .. } => return Err(BuildError::PrimePowerBase { b }),
        Verdict::Automatic { .. } => return Err(BuildError::NotATie { b }),
    }
    let raw = assemble(b, fact.leading())?;
    let mut overrides = BTreeMap::new();
    if patch_below > 0 {
        for (n, v) in lnz_range(b, 0, patch_below - 1)? {
            if raw.eval(n) != v {
                overrides.insert(n, v);
            }
        }
    }
    Ok(minimize(&patch(&raw, &overrides)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::legendre_valuation;

    #[test]
    fn valuation_examples() {
        assert_eq!(build_valuation_dfao(5, 1, 4).unwrap().eval(25), 2);
        assert_eq!(build_valuation_dfao(3, 2, 10).unwrap().eval(10), 2);
        let one = build_valuation_dfao(7, 2, 1).unwrap();
        assert_eq!(one.num_states(), 1);
        assert!((0..500).all(|n| one.eval(n) == 0));
    }

    #[test]
    fn valuation_grid_small() {
        for &(p, a, m) in &[(2u64, 1u32, 4u64), (2, 3, 8), (3, 2, 6), (5, 1, 20), (7, 1, 3)] {
            let d = build_valuation_dfao(p, a, m).unwrap();
            for n in 0..2000 {
                assert_eq!(d.eval(n), legendre_valuation(n, p, a).unwrap() % m, "p={p} a={a} m={m} n={n}");
            }
        }
    }

    #[test]
    fn decimal_examples() {
        let built = build_dominant(10).unwrap();
        assert_eq!(built.dfao.eval(7), 4);
        assert_eq!(built.dfao.eval(0), 1);
        assert_eq!(built.dfao.eval(1), 1);
        assert_eq!(built.scan.exceptions, vec![0, 1]);
        assert_eq!(built.dfao.base(), 5);
        let six = build_dominant(6).unwrap();
        assert_eq!(six.dfao.eval(5), 2);
    }

    #[test]
    fn dominant_rejects_ties_and_prime_powers() {
        match build_dominant(12) {
            Err(BuildError::Tie { primes, key, .. }) => {
                assert_eq!(primes, vec![3, 2]);
                assert_eq!(key, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(build_dominant(9).unwrap_err(), BuildError::PrimePowerBase { b: 9 });
    }

    #[test]
    fn certification_covers_the_tail() {
        for b in [6u64, 10, 15, 20, 24, 36, 48, 50] {
            let scan = dominance_exceptions(b, DEFAULT_SCAN_LIMIT).unwrap();
            assert!(scan.certified_from <= scan.scanned_to + 1, "b={b}");
        }
    }
}
