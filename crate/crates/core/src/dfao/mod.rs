//! Deterministic finite automata with output over digit alphabets.
//!
//! A [`Dfao`] reads the base-`k` digits of `n` (most significant first, or
//! least significant first depending on its [`DigitOrder`]) and emits the
//! output symbol of the state it ends in. Every builder in this crate
//! produces *zero-robust* automata: the initial state loops on digit 0, so
//! leading zeros never change the result.

mod combinators;
pub mod io;
mod minimize;
mod primitive;

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use thiserror::Error;

use crate::numkit::{big_to_digits, lsd_digits, DigitOrder};

pub use combinators::{map_output, product, rebase, reverse, Rebase};
pub use minimize::{equivalent, minimize};
pub use primitive::{build_primitive, patch, Primitive};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaoError {
    #[error("alphabet size {0} is invalid: must be at least 2")]
    InvalidBase(usize),
    #[error("an automaton needs at least one state")]
    NoStates,
    #[error("initial state {initial} out of range for {states} states")]
    InitialOutOfRange { initial: usize, states: usize },
    #[error("transition table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("transition from state {state} on {symbol} targets {target}, out of range")]
    TransitionOutOfRange { state: usize, symbol: usize, target: usize },
    #[error("symbol {symbol} is not in the alphabet of size {base}")]
    InvalidSymbol { symbol: u64, base: usize },
    #[error("alphabet sizes differ: {left} vs {right}")]
    BaseMismatch { left: usize, right: usize },
    #[error("digit orders differ")]
    OrderMismatch,
    #[error("alphabet size {base} is not a power of {target}")]
    NotAPower { base: usize, target: usize },
    #[error("invalid primitive: {0}")]
    InvalidPrimitive(&'static str),
    #[error("construction exceeded the limit of {0} states")]
    StateLimit(usize),
}

/// Deterministic finite automaton with output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfao {
    base: usize,
    order: DigitOrder,
    initial: usize,
    outputs: Vec<u64>,
    /// Row-major `states × base` table.
    transitions: Vec<usize>,
}

impl Dfao {
    pub fn new(
        base: usize,
        order: DigitOrder,
        initial: usize,
        outputs: Vec<u64>,
        transitions: Vec<usize>,
    ) -> Result<Self, DfaoError> {
        if base < 2 {
            return Err(DfaoError::InvalidBase(base));
        }
        let states = outputs.len();
        if states == 0 {
            return Err(DfaoError::NoStates);
        }
        if initial >= states {
            return Err(DfaoError::InitialOutOfRange { initial, states });
        }
        if transitions.len() != states * base {
            return Err(DfaoError::TableSize { expected: states * base, found: transitions.len() });
        }
        if let Some(pos) = transitions.iter().position(|&t| t >= states) {
            return Err(DfaoError::TransitionOutOfRange {
                state: pos / base,
                symbol: pos % base,
                target: transitions[pos],
            });
        }
        Ok(Dfao { base, order, initial, outputs, transitions })
    }

    /// One-state automaton with constant output.
    pub fn constant(base: usize, order: DigitOrder, symbol: u64) -> Result<Self, DfaoError> {
        Dfao::new(base, order, 0, vec![symbol], vec![0; base])
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn order(&self) -> DigitOrder {
        self.order
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[u64] {
        &self.outputs
    }

    pub fn output(&self, state: usize) -> u64 {
        self.outputs[state]
    }

    pub fn transitions(&self) -> &[usize] {
        &self.transitions
    }

    pub fn row(&self, state: usize) -> &[usize] {
        &self.transitions[state * self.base..(state + 1) * self.base]
    }

    #[inline]
    pub fn next(&self, state: usize, symbol: usize) -> usize {
        self.transitions[state * self.base + symbol]
    }

    /// Runs symbols (already in reading order) from `state`.
    pub fn run_from(&self, state: usize, symbols: impl IntoIterator<Item = usize>) -> usize {
        symbols.into_iter().fold(state, |q, s| self.next(q, s))
    }

    /// Final state on the canonical representation of `n`.
    pub fn final_state(&self, n: u64) -> usize {
        let lsd = lsd_digits(n, self.base as u64);
        match self.order {
            DigitOrder::MsdFirst => self.run_from(self.initial, lsd.iter().rev().map(|&d| d as usize)),
            DigitOrder::LsdFirst => self.run_from(self.initial, lsd.iter().map(|&d| d as usize)),
        }
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.outputs[self.final_state(n)]
    }

    pub fn final_state_big(&self, n: &BigUint) -> usize {
        let msd = big_to_digits(n, self.base as u64).expect("base ≥ 2");
        match self.order {
            DigitOrder::MsdFirst => self.run_from(self.initial, msd.iter().map(|&d| d as usize)),
            DigitOrder::LsdFirst => self.run_from(self.initial, msd.iter().rev().map(|&d| d as usize)),
        }
    }

    pub fn eval_big(&self, n: &BigUint) -> u64 {
        self.outputs[self.final_state_big(n)]
    }

    /// Applies the transition function to the raw word, then the output map.
    pub fn eval_word(&self, word: &Word) -> Result<u64, DfaoError> {
        if word.base() != self.base {
            return Err(DfaoError::BaseMismatch { left: self.base, right: word.base() });
        }
        Ok(self.outputs[self.run_from(self.initial, word.symbols().iter().copied())])
    }

    /// Structural zero-robustness. For MSD-first automata the initial state
    /// must loop on 0. For LSD-first automata, where zeros arrive last,
    /// every reachable state must keep its output across a 0 transition.
    pub fn is_zero_robust(&self) -> bool {
        match self.order {
            DigitOrder::MsdFirst => self.next(self.initial, 0) == self.initial,
            DigitOrder::LsdFirst => self
                .reachable()
                .into_iter()
                .all(|q| self.outputs[self.next(q, 0)] == self.outputs[q]),
        }
    }

    /// States reachable from the initial state, in breadth-first order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Same automaton with a different output map.
    pub(crate) fn with_outputs(&self, outputs: Vec<u64>) -> Dfao {
        debug_assert_eq!(outputs.len(), self.outputs.len());
        Dfao { outputs, ..self.clone() }
    }
}

/// A word over the alphabet `{0, …, k−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    base: usize,
    symbols: Vec<usize>,
}

impl Word {
    pub fn new(base: usize, symbols: Vec<usize>) -> Result<Self, DfaoError> {
        if base < 2 {
            return Err(DfaoError::InvalidBase(base));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= base) {
            return Err(DfaoError::InvalidSymbol { symbol: s as u64, base });
        }
        Ok(Word { base, symbols })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { base: self.base, symbols }
    }

    /// Value of the word read in the given order.
    pub fn value(&self, order: DigitOrder) -> BigUint {
        let msd: Vec<u64> = match order {
            DigitOrder::MsdFirst => self.symbols.iter().map(|&s| s as u64).collect(),
            DigitOrder::LsdFirst => self.symbols.iter().rev().map(|&s| s as u64).collect(),
        };
        crate::numkit::big_from_digits(&msd, self.base as u64)
    }
}

/// Breadth-first construction of an automaton whose states are values of
/// type `S`. Only states reachable from `start` are materialized; they are
/// numbered in discovery order.
pub(crate) fn explore<S, F, G>(
    base: usize,
    order: DigitOrder,
    start: S,
    mut step: F,
    mut output: G,
    limit: usize,
) -> Result<Dfao, DfaoError>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, usize) -> S,
    G: FnMut(&S) -> u64,
{
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    index.insert(start, 0);
    let mut transitions = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let current = states[head].clone();
        head += 1;
        for symbol in 0..base {
            let next = step(&current, symbol);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= limit {
                        return Err(DfaoError::StateLimit(limit));
                    }
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            transitions.push(id);
        }
    }
    let outputs = states.iter().map(&mut output).collect();
    Dfao::new(base, order, 0, outputs, transitions)
}

/// Default cap for intermediate constructions.
pub(crate) const STATE_LIMIT: usize = 4_000_000;
