use std::collections::{BTreeMap, BTreeSet};

use super::{explore, Dfao, DfaoError, STATE_LIMIT};
use crate::numkit::DigitOrder;

/// Elementary automatic sequences, all read most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitive {
    /// `n mod m`.
    NMod(u64),
    /// `s_k(n) mod m`.
    DigitSumMod(u64),
    /// `(n − s_k(n)) mod m`.
    NMinusDigitSumMod(u64),
    Const(u64),
    /// Characteristic function of a finite set.
    FiniteSet(BTreeSet<u64>),
    /// `pattern[n mod pattern.len()]`.
    Periodic(Vec<u64>),
}

pub fn build_primitive(kind: &Primitive, k: usize) -> Result<Dfao, DfaoError> {
    if k < 2 {
        return Err(DfaoError::InvalidBase(k));
    }
    let kk = k as u64;
    let msd = DigitOrder::MsdFirst;
    match kind {
        Primitive::NMod(0) | Primitive::DigitSumMod(0) | Primitive::NMinusDigitSumMod(0) => {
            Err(DfaoError::InvalidPrimitive("modulus must be at least 1"))
        }
        Primitive::NMod(m) => {
            let m = *m;
            explore(k, msd, 0u64, |&q, s| (q * kk + s as u64) % m, |&q| q, STATE_LIMIT)
        }
        Primitive::DigitSumMod(m) => {
            let m = *m;
            explore(k, msd, 0u64, |&q, s| (q + s as u64) % m, |&q| q, STATE_LIMIT)
        }
        Primitive::NMinusDigitSumMod(m) => {
            let m = *m;
            explore(
                k,
                msd,
                (0u64, 0u64),
                |&(n, ds), s| ((n * kk + s as u64) % m, (ds + s as u64) % m),
                |&(n, ds)| (n + m - ds) % m,
                STATE_LIMIT,
            )
        }
        Primitive::Const(c) => Dfao::constant(k, msd, *c),
        Primitive::FiniteSet(set) => {
            let zero = Dfao::constant(k, msd, 0)?;
            patch(&zero, &set.iter().map(|&n| (n, 1)).collect())
        }
        Primitive::Periodic(pattern) => {
            if pattern.is_empty() {
                return Err(DfaoError::InvalidPrimitive("periodic pattern is empty"));
            }
            let m = pattern.len() as u64;
            explore(k, msd, 0u64, |&q, s| (q * kk + s as u64) % m, |&q| pattern[q as usize], STATE_LIMIT)
        }
    }
}

/// Prefix tracker: the exact value read so far while it can still reach an
/// overridden `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Track {
    /// Value, and (LSD-first only) number of digits consumed, capped.
    Exact(u64, u32),
    Beyond,
}

/// Replaces the outputs at finitely many `n`, leaving every other value.
pub fn patch(d: &Dfao, overrides: &BTreeMap<u64, u64>) -> Result<Dfao, DfaoError> {
    let Some(&max) = overrides.keys().next_back() else {
        return Ok(d.clone());
    };
    let k = d.base() as u64;
    // Smallest `cap` with k^cap > max: a nonzero digit at position ≥ cap overshoots.
    let mut cap = 0u32;
    while k.checked_pow(cap).is_some_and(|pw| pw <= max) {
        cap += 1;
    }
    let order = d.order();
    let advance = move |track: Track, s: usize| -> Track {
        let s = s as u64;
        match (track, order) {
            (Track::Beyond, _) => Track::Beyond,
            (Track::Exact(v, _), DigitOrder::MsdFirst) => {
                match v.checked_mul(k).and_then(|x| x.checked_add(s)) {
                    Some(x) if x <= max => Track::Exact(x, 0),
                    _ => Track::Beyond,
                }
            }
            (Track::Exact(v, pos), DigitOrder::LsdFirst) => {
                if s == 0 {
                    return Track::Exact(v, (pos + 1).min(cap));
                }
                if pos >= cap {
                    return Track::Beyond;
                }
                match k.pow(pos).checked_mul(s).and_then(|x| x.checked_add(v)) {
                    Some(x) if x <= max => Track::Exact(x, pos + 1),
                    _ => Track::Beyond,
                }
            }
        }
    };
    explore(
        d.base(),
        order,
        (d.initial(), Track::Exact(0, 0)),
        |&(q, track), s| (d.next(q, s), advance(track, s)),
        |&(q, track)| match track {
            Track::Exact(v, _) => overrides.get(&v).copied().unwrap_or(d.output(q)),
            Track::Beyond => d.output(q),
        },
        STATE_LIMIT,
    )
}
