//! Empirical learner for `n ↦ ℓ_b(n!)` read in base `k`, most significant
//! digit first.
//!
//! States are observed rows: the map from a suffix set `S` to the values
//! `ℓ_b([w s]_k !)`, restricted to arguments within the training bound.
//! Rows are compared only where both are observable. Whenever the
//! hypothesis disagrees with the data, every suffix of the offending word
//! joins `S` and the table is rebuilt. The result is a conjecture: it agrees
//! with the data up to the bound and nothing is claimed past it.

use std::collections::{BTreeSet, VecDeque};

use super::BuildError;
use crate::dfao::{minimize, Dfao};
use crate::numkit::{lnz_range, DigitOrder, NumError};

const MAX_ROUNDS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferConfig {
    /// Base of the digit being learned.
    pub base: u64,
    /// Input alphabet of the learned automaton.
    pub alphabet: u64,
    /// Training data is `n ≤ train_to`.
    pub train_to: u64,
    /// Initial suffix set: every word of length `≤ depth`.
    pub depth: u32,
    /// Maximum number of states.
    pub budget: usize,
}

impl InferConfig {
    pub fn new(base: u64, alphabet: u64, train_to: u64) -> Self {
        InferConfig { base, alphabet, train_to, depth: 2, budget: 1000 }
    }
}

#[derive(Debug, Clone)]
pub struct Inferred {
    pub dfao: Dfao,
    pub train_to: u64,
    /// Always set: the learner offers no guarantee beyond the training data.
    pub conjectural: bool,
    pub rounds: usize,
}

/// A suffix `s` of length `len` with value `value`, so `[w s] = [w]·k^len + value`.
type Suffix = (u32, u64);

struct Learner<'a> {
    k: u64,
    data: &'a [u64],
    suffixes: Vec<Suffix>,
}

impl Learner<'_> {
    fn row(&self, prefix: u64) -> Vec<Option<u64>> {
        let limit = self.data.len() as u64 - 1;
        self.suffixes
            .iter()
            .map(|&(len, value)| {
                self.k
                    .checked_pow(len)
                    .and_then(|scale| prefix.checked_mul(scale))
                    .and_then(|x| x.checked_add(value))
                    .filter(|&n| n <= limit)
                    .map(|n| self.data[n as usize])
            })
            .collect()
    }

    fn hypothesis(&self, budget: usize) -> Result<Dfao, BuildError> {
        let k = self.k as usize;
        // The empty suffix sits first, so a row's output is `row[0]`.
        let mut reps: Vec<(u64, Vec<Option<u64>>)> = vec![(0, self.row(0))];
        let mut transitions: Vec<usize> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            let base = reps[q].0;
            let mut targets = Vec::with_capacity(k);
            for sigma in 0..self.k {
                let child = base * self.k + sigma;
                let row = self.row(child);
                let found = reps.iter().position(|(_, r)| compatible(r, &row));
                let t = match found {
                    Some(t) => t,
                    None => {
                        if reps.len() >= budget {
                            return Err(BuildError::Budget(budget));
                        }
                        reps.push((child, row));
                        queue.push_back(reps.len() - 1);
                        reps.len() - 1
                    }
                };
                targets.push(t);
            }
            if transitions.len() < (q + 1) * k {
                transitions.resize((q + 1) * k, 0);
            }
            transitions[q * k..(q + 1) * k].copy_from_slice(&targets);
        }
        transitions.resize(reps.len() * k, 0);
        let outputs = reps.iter().map(|(_, r)| r[0].expect("representatives are observable")).collect();
        Ok(Dfao::new(k, DigitOrder::MsdFirst, 0, outputs, transitions)?)
    }
}

fn compatible(a: &[Option<u64>], b: &[Option<u64>]) -> bool {
    a.iter().zip(b).all(|pair| match pair {
        (Some(x), Some(y)) => x == y,
        _ => true,
    })
}

pub fn infer_dfao(config: &InferConfig) -> Result<Inferred, BuildError> {
    let k = config.alphabet;
    if k < 2 {
        return Err(NumError::InvalidBase(k).into());
    }
    if config.train_to == 0 || config.depth == 0 {
        return Err(BuildError::Unresolved(0));
    }
    let data: Vec<u64> = lnz_range(config.base, 0, config.train_to)?.map(|(_, v)| v).collect();

    let mut set: BTreeSet<Suffix> = BTreeSet::new();
    let mut scale = 1u64;
    for len in 0..=config.depth {
        for value in 0..scale {
            set.insert((len, value));
        }
        scale = scale.checked_mul(k).ok_or(NumError::Overflow)?;
    }

    for round in 1..=MAX_ROUNDS {
        let learner = Learner { k, data: &data, suffixes: set.iter().copied().collect() };
        let dfao = learner.hypothesis(config.budget)?;
        let Some(n) = (0..data.len() as u64).find(|&n| dfao.eval(n) != data[n as usize]) else {
            return Ok(Inferred { dfao: minimize(&dfao), train_to: config.train_to, conjectural: true, rounds: round });
        };
        let before = set.len();
        let (mut len, mut scale) = (1u32, k);
        while scale / k <= n {
            set.insert((len, n % scale));
            match scale.checked_mul(k) {
                Some(s) => scale = s,
                None => break,
            }
            len += 1;
        }
        if set.len() == before {
            return Err(BuildError::Unresolved(n));
        }
    }
    Err(BuildError::Unresolved(config.train_to))
}
