//! Concrete witnesses for non-automaticity in the tie case: powers with a
//! prescribed leading block, digit-sum-dominant extensions, the sets
//! `A₋`/`A₊`, divisibility signals, and fooling pairs against candidate
//! automata.

mod fooling;
mod prefix;
mod sets;

use thiserror::Error;

use crate::dfao::DfaoError;
use crate::numkit::NumError;

pub use fooling::{fooling_report, Claim, FoolingReport, DEFAULT_C_MAX, DEFAULT_D_MAX};
pub use prefix::{find_extension, find_power_with_prefix, Extension, WitnessTriple};
pub use sets::{divisibility_signal, set_membership, Membership, SetSpec, Signal, TieInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Dfao(#[from] DfaoError),
    #[error("{c} and {b} are multiplicatively dependent: powers of {c} cannot reach every base-{b} prefix")]
    Dependent { c: u64, b: u64 },
    #[error("{search}: nothing found up to {limit}")]
    Exhausted { search: &'static str, limit: u64 },
    #[error("base {b} is not a tie base")]
    NotATie { b: u64 },
    #[error("prime set must not be empty")]
    EmptyPrimeSet,
    #[error("prefix must be at least 1")]
    ZeroPrefix,
    #[error("candidate alphabet {found} does not match the expected {expected}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate check failed: {0}")]
    Rejected(String),
}
