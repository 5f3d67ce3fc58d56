use std::fmt;

use num_bigint::BigUint;

use super::WitnessError;
use crate::numkit::arith::is_prime;
use crate::numkit::{big_digit_sum, factorize, NumError, PrimePower, Verdict};

/// Primes `P` with `p = max P` and a threshold `c ≥ 1`, defining
/// `A₋ = {n : max_{q∈P} s_q(n) = s_p(n)}` and
/// `A₊ = {n : max_{q∈P} s_q(n) − s_p(n) ≥ c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSpec {
    primes: Vec<u64>,
    p: u64,
    c: u64,
}

impl SetSpec {
    pub fn new(mut primes: Vec<u64>, c: u64) -> Result<Self, WitnessError> {
        primes.sort_unstable();
        primes.dedup();
        if primes.len() < 2 {
            return Err(WitnessError::EmptyPrimeSet);
        }
        if let Some(&q) = primes.iter().find(|&&q| !is_prime(q)) {
            return Err(NumError::NotPrime(q).into());
        }
        if c == 0 {
            return Err(NumError::Zero.into());
        }
        let p = *primes.last().unwrap();
        Ok(SetSpec { primes, p, c })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> u64 {
        self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    AMinus,
    APlus,
    Neither,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::AMinus => "A_MINUS",
            Membership::APlus => "A_PLUS",
            Membership::Neither => "NEITHER",
        })
    }
}

/// `(max_{q∈P} s_q(n), s_p(n))`.
fn top_sums(n: &BigUint, primes: &[u64], p: u64) -> Result<(u64, u64), NumError> {
    let mut best = 0;
    for &q in primes {
        best = best.max(big_digit_sum(n, q)?);
    }
    Ok((best, big_digit_sum(n, p)?))
}

pub fn set_membership(n: &BigUint, spec: &SetSpec) -> Result<Membership, WitnessError> {
    let (best, own) = top_sums(n, &spec.primes, spec.p)?;
    Ok(if best == own {
        Membership::AMinus
    } else if best - own >= spec.c {
        Membership::APlus
    } else {
        Membership::Neither
    })
}

/// Predicted divisibility of `ℓ_b(n!)` by `p₁^{a₁}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    Divides,
    NotDivides,
    Unknown,
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signal::Divides => "DIVIDES",
            Signal::NotDivides => "NOT_DIVIDES",
            Signal::Unknown => "UNKNOWN",
        })
    }
}

impl std::str::FromStr for Signal {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "DIVIDES" => Ok(Signal::Divides),
            "NOT_DIVIDES" => Ok(Signal::NotDivides),
            "UNKNOWN" => Ok(Signal::Unknown),
            other => Err(WitnessError::Malformed(format!("unknown signal `{other}`"))),
        }
    }
}

/// The tie structure of a base: the top tier `I` of prime powers sharing
/// the largest key `K = a(p−1)`, its largest prime `p₁`, and the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieInfo {
    pub b: u64,
    pub lead: PrimePower,
    pub key: u64,
    pub tier: Vec<PrimePower>,
    pub others: Vec<PrimePower>,
}

impl TieInfo {
    pub fn new(b: u64) -> Result<Self, WitnessError> {
        let fact = factorize(b)?;
        if fact.verdict() != Verdict::NotAutomatic {
            return Err(WitnessError::NotATie { b });
        }
        let tier = fact.top_tier().to_vec();
        let lead = *tier.iter().max_by_key(|pp| pp.p).unwrap();
        let others = fact.pairs()[tier.len()..].to_vec();
        Ok(TieInfo { b, lead, key: lead.key(), tier, others })
    }

    pub fn tier_primes(&self) -> Vec<u64> {
        self.tier.iter().map(|pp| pp.p).collect()
    }

    /// `p₁^{a₁}`.
    pub fn modulus(&self) -> u64 {
        self.lead.value()
    }

    /// The `A₋`/`A₊` sets used by the falsifier, with threshold `K + 1`.
    pub fn set_spec(&self) -> SetSpec {
        SetSpec::new(self.tier_primes(), self.key + 1).expect("a tie tier has at least two primes")
    }

    /// `⌊v_{p^a}(n!)⌋` computed exactly from Legendre's formula.
    fn base_valuation(n: &BigUint, pp: PrimePower) -> Result<BigUint, NumError> {
        let s = big_digit_sum(n, pp.p)?;
        Ok((n - BigUint::from(s)) / BigUint::from(pp.key()))
    }

    pub fn signal(&self, n: &BigUint) -> Result<Signal, WitnessError> {
        let primes = self.tier_primes();
        let (best, own) = top_sums(n, &primes, self.lead.p)?;
        if best > own && best - own > self.key {
            return Ok(Signal::Divides);
        }
        if best != own {
            return Ok(Signal::Unknown);
        }
        // p₁ attains the minimum over the tier; lower tiers must not undercut it.
        let lead_val = Self::base_valuation(n, self.lead)?;
        for &pp in &self.others {
            if Self::base_valuation(n, pp)? < lead_val {
                return Ok(Signal::Unknown);
            }
        }
        Ok(Signal::NotDivides)
    }
}

pub fn divisibility_signal(n: &BigUint, b: u64) -> Result<Signal, WitnessError> {
    TieInfo::new(b)?.signal(n)
}
