//! Constructions of automata for `ℓ_b(n!)`: the m-table, prime-power and
//! dominant-prime automata, the valuation automaton, the base classifier,
//! an empirical learner, and the verification harness.

mod dominant;
mod infer;
mod prime_power;
mod verify;

use thiserror::Error;

use crate::dfao::DfaoError;
use crate::numkit::{factorize, lnz_range, NumError, Verdict};

pub use dominant::{
    build_dominant, build_tie_approximant, build_valuation_dfao, dominance_exceptions,
    DominantBuild, DominanceScan,
};
pub use infer::{infer_dfao, InferConfig, Inferred};
pub use prime_power::{build_prime_power, PrimePowerMode};
pub use verify::{verify, Mismatch, Target, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Dfao(#[from] DfaoError),
    #[error("base {b} is not a prime power")]
    NotPrimePower { b: u64 },
    #[error("base {b} is a prime power; use the prime-power construction")]
    PrimePowerBase { b: u64 },
    #[error("base {b} has no dominant prime: keys a(p-1) tie at {key} for primes {primes:?}")]
    Tie { b: u64, key: u64, primes: Vec<u64> },
    #[error("base {b} has a strictly dominant prime, not a tie")]
    NotATie { b: u64 },
    #[error("learner exceeded its budget of {0} states")]
    Budget(usize),
    #[error("learner could not reconcile its hypothesis with the data up to {0}")]
    Unresolved(u64),
}

/// `m_i = ℓ_b(i!)` for `0 ≤ i < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MTable {
    base: u64,
    values: Vec<u64>,
}

impl MTable {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> u64 {
        self.values[i]
    }
}

pub fn m_table(b: u64) -> Result<MTable, BuildError> {
    let values = lnz_range(b, 0, b - 1)?.map(|(_, v)| v).collect();
    Ok(MTable { base: b, values })
}

pub fn classify(b: u64) -> Result<Verdict, BuildError> {
    Ok(factorize(b)?.verdict())
}
