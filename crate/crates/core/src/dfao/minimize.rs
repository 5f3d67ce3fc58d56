use std::collections::HashMap;

use super::{Dfao, DfaoError, Word};

/// Moore partition refinement over the reachable part.
///
/// The result is canonical: states are numbered in breadth-first order from
/// the initial state, so equivalent automata minimize to identical values.
pub fn minimize(d: &Dfao) -> Dfao {
    let k = d.base();
    let reach = d.reachable();
    let mut local = vec![usize::MAX; d.num_states()];
    for (i, &q) in reach.iter().enumerate() {
        local[q] = i;
    }
    let n = reach.len();
    let succ: Vec<usize> = reach
        .iter()
        .flat_map(|&q| d.row(q).iter().map(|&t| local[t]))
        .collect();

    let mut class = vec![0usize; n];
    let mut count = {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        for (i, &q) in reach.iter().enumerate() {
            let next_id = ids.len();
            class[i] = *ids.entry(d.output(q)).or_insert(next_id);
        }
        ids.len()
    };
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::with_capacity(count * 2);
        let mut refined = vec![0usize; n];
        let mut sig = Vec::with_capacity(k + 1);
        for i in 0..n {
            sig.clear();
            sig.push(class[i]);
            sig.extend(succ[i * k..(i + 1) * k].iter().map(|&t| class[t]));
            let next_id = ids.len();
            refined[i] = match ids.get(&sig) {
                Some(&id) => id,
                None => {
                    ids.insert(sig.clone(), next_id);
                    next_id
                }
            };
        }
        let new_count = ids.len();
        class = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Canonical breadth-first numbering of the quotient.
    let mut rep = vec![usize::MAX; count];
    for i in (0..n).rev() {
        rep[class[i]] = i;
    }
    let mut number = vec![usize::MAX; count];
    let mut order = vec![class[0]];
    number[class[0]] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        let i = rep[c];
        for &t in &succ[i * k..(i + 1) * k] {
            let tc = class[t];
            if number[tc] == usize::MAX {
                number[tc] = order.len();
                order.push(tc);
            }
        }
    }
    let mut outputs = Vec::with_capacity(count);
    let mut transitions = Vec::with_capacity(count * k);
    for &c in &order {
        let i = rep[c];
        outputs.push(d.output(reach[i]));
        transitions.extend(succ[i * k..(i + 1) * k].iter().map(|&t| number[class[t]]));
    }
    Dfao::new(k, d.order(), 0, outputs, transitions).expect("quotient is well formed")
}

/// Shortest word (breadth-first, smallest symbols first) on which the two
/// automata disagree, or `None` if they agree on every word.
///
/// Both automata read the same raw words, so for zero-robust automata this
/// is the same as comparing them on zero-padded canonical representations.
pub fn equivalent(d1: &Dfao, d2: &Dfao) -> Result<Option<Word>, DfaoError> {
    if d1.base() != d2.base() {
        return Err(DfaoError::BaseMismatch { left: d1.base(), right: d2.base() });
    }
    if d1.order() != d2.order() {
        return Err(DfaoError::OrderMismatch);
    }
    let k = d1.base();
    let start = (d1.initial(), d2.initial());
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        if d1.output(pair.0) != d2.output(pair.1) {
            let mut symbols = Vec::new();
            let mut cur = pair;
            while let Some(&Some((prev, s))) = parent.get(&cur) {
                symbols.push(s);
                cur = prev;
            }
            symbols.reverse();
            return Ok(Some(Word::new(k, symbols)?));
        }
        for s in 0..k {
            let next = (d1.next(pair.0, s), d2.next(pair.1, s));
            if !parent.contains_key(&next) {
                parent.insert(next, Some((pair, s)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}
