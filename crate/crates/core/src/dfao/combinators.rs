use super::{explore, minimize, Dfao, DfaoError, STATE_LIMIT};
use crate::numkit::DigitOrder;

/// Automaton computing `ω ↦ f(ω^R)`: states are the output maps `Q → Δ`
/// reachable from `τ`, with `ρ'(g, σ)(q) = g(ρ(q, σ))` and `τ'(g) = g(q₀)`.
/// The digit order flips; the result is minimized.
pub fn reverse(d: &Dfao) -> Dfao {
    let n = d.num_states();
    let start: Vec<u64> = d.outputs().to_vec();
    let rev = explore(
        d.base(),
        d.order().flipped(),
        start,
        |g, s| (0..n).map(|q| g[d.next(q, s)]).collect(),
        |g| g[d.initial()],
        usize::MAX,
    )
    .expect("unbounded exploration");
    minimize(&rev)
}

/// Pointwise combination `n ↦ combine(d1(n), d2(n))` over the reachable part
/// of `Q₁ × Q₂`.
pub fn product<F>(d1: &Dfao, d2: &Dfao, combine: F) -> Result<Dfao, DfaoError>
where
    F: Fn(u64, u64) -> u64,
{
    if d1.base() != d2.base() {
        return Err(DfaoError::BaseMismatch { left: d1.base(), right: d2.base() });
    }
    if d1.order() != d2.order() {
        return Err(DfaoError::OrderMismatch);
    }
    explore(
        d1.base(),
        d1.order(),
        (d1.initial(), d2.initial()),
        |&(a, b), s| (d1.next(a, s), d2.next(b, s)),
        |&(a, b)| combine(d1.output(a), d2.output(b)),
        STATE_LIMIT,
    )
}

/// Relabels outputs.
pub fn map_output<F>(d: &Dfao, f: F) -> Dfao
where
    F: Fn(u64) -> u64,
{
    d.with_outputs(d.outputs().iter().map(|&y| f(y)).collect())
}

/// Change of alphabet between `k` and `k^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rebase {
    /// Read `m` digits at once: alphabet `k → k^m`.
    Lift(u32),
    /// Split each digit into `m` base-`base` digits: alphabet `base^m → base`.
    Lower { base: usize, m: u32 },
}

impl Rebase {
    /// `Lower` towards `target`, with `m` inferred from the source alphabet.
    pub fn lower_to(source: usize, target: usize) -> Result<Rebase, DfaoError> {
        if target < 2 {
            return Err(DfaoError::InvalidBase(target));
        }
        let mut pow = target;
        let mut m = 1u32;
        while pow < source {
            pow = pow.checked_mul(target).ok_or(DfaoError::NotAPower { base: source, target })?;
            m += 1;
        }
        if pow != source {
            return Err(DfaoError::NotAPower { base: source, target });
        }
        Ok(Rebase::Lower { base: target, m })
    }
}

pub fn rebase(d: &Dfao, direction: Rebase) -> Result<Dfao, DfaoError> {
    match direction {
        Rebase::Lift(0) => Err(DfaoError::InvalidPrimitive("lift exponent must be at least 1")),
        Rebase::Lift(1) => Ok(d.clone()),
        Rebase::Lift(m) => lift(d, m),
        Rebase::Lower { base, m } => {
            if base < 2 {
                return Err(DfaoError::InvalidBase(base));
            }
            if m == 0 || base.checked_pow(m) != Some(d.base()) {
                return Err(DfaoError::NotAPower { base: d.base(), target: base });
            }
            if m == 1 {
                return Ok(d.clone());
            }
            let lowered = match d.order() {
                DigitOrder::MsdFirst => lower_msd(d, base, m as usize),
                DigitOrder::LsdFirst => lower_lsd(d, base, m),
            }?;
            Ok(minimize(&lowered))
        }
    }
}

/// `ρ'(q, D) = ρ(q, d_1 … d_m)` where `d_1 … d_m` are the `m` base-`k`
/// digits of `D` in the automaton's reading order.
fn lift(d: &Dfao, m: u32) -> Result<Dfao, DfaoError> {
    let k = d.base();
    let big = k.checked_pow(m).ok_or(DfaoError::StateLimit(usize::MAX))?;
    let mut digits = vec![0usize; m as usize];
    let mut transitions = Vec::with_capacity(d.num_states() * big);
    for q in 0..d.num_states() {
        for sym in 0..big {
            let mut rest = sym;
            for slot in digits.iter_mut().rev() {
                *slot = rest % k;
                rest /= k;
            }
            let target = match d.order() {
                DigitOrder::MsdFirst => d.run_from(q, digits.iter().copied()),
                DigitOrder::LsdFirst => d.run_from(q, digits.iter().rev().copied()),
            };
            transitions.push(target);
        }
    }
    Dfao::new(big, d.order(), d.initial(), d.outputs().to_vec(), transitions)
}

/// MSD-first lowering. Base-`k` digits are grouped into blocks of `m` aligned
/// at the *end* of the input, i.e. as if the input were padded with leading
/// zeros to a multiple of `m`. Since the padding amount is unknown while
/// reading, one accumulator `(q, r)` runs per possible phase; slot `s` holds
/// the run that has consumed `s` digits of its current block, with partial
/// block value `r`. The answer is the run sitting on a block boundary.
fn lower_msd(d: &Dfao, k: usize, m: usize) -> Result<Dfao, DfaoError> {
    let start: Vec<(usize, usize)> = vec![(d.initial(), 0); m];
    explore(
        k,
        DigitOrder::MsdFirst,
        start,
        |slots, sigma| {
            let mut next = Vec::with_capacity(m);
            let (q, r) = slots[m - 1];
            next.push((d.next(q, r * k + sigma), 0));
            next.extend(slots[..m - 1].iter().map(|&(q, r)| (q, r * k + sigma)));
            next
        },
        |slots| d.output(slots[0].0),
        STATE_LIMIT,
    )
}

/// LSD-first lowering over `Q × {0..k^{m−1}−1} × {0..m−1}`: collect `m`
/// digits, then apply the original transition. A partial final block stands
/// for a block whose missing high digits are zero.
fn lower_lsd(d: &Dfao, k: usize, m: u32) -> Result<Dfao, DfaoError> {
    explore(
        k,
        DigitOrder::LsdFirst,
        (d.initial(), 0usize, 0u32),
        |&(q, r, s), sigma| {
            let r = r + sigma * k.pow(s);
            if s + 1 == m {
                (d.next(q, r), 0, 0)
            } else {
                (q, r, s + 1)
            }
        },
        |&(q, r, s)| if s == 0 { d.output(q) } else { d.output(d.next(q, r)) },
        STATE_LIMIT,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfao::{build_primitive, equivalent, Primitive, Word};

    fn words(k: usize, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::new(k, vec![]).unwrap()];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..k {
                    let mut x: Vec<usize> = w.clone();
                    x.push(s);
                    out.push(Word::new(k, x.clone()).unwrap());
                    next.push(x);
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn reverse_of_constant() {
        let c = Dfao::constant(3, DigitOrder::MsdFirst, 4).unwrap();
        let r = reverse(&c);
        assert_eq!(r.order(), DigitOrder::LsdFirst);
        for w in words(3, 5) {
            assert_eq!(r.eval_word(&w).unwrap(), 4);
        }
    }

    #[test]
    fn reverse_reads_backwards() {
        let d = build_primitive(&Primitive::NMod(7), 3).unwrap();
        let r = reverse(&d);
        for w in words(3, 6) {
            assert_eq!(r.eval_word(&w).unwrap(), d.eval_word(&w.reversed()).unwrap());
        }
        // Canonical evaluation is order-independent.
        assert!((0..5000).all(|n| r.eval(n) == n % 7));
        assert!(r.is_zero_robust());
    }

    #[test]
    fn crt_product() {
        let two = build_primitive(&Primitive::NMod(2), 10).unwrap();
        let three = build_primitive(&Primitive::NMod(3), 10).unwrap();
        let six = product(&two, &three, |x, y| crate::numkit::arith::crt(&[(x, 2), (y, 3)])).unwrap();
        assert!((0..=10_000).all(|n| six.eval(n) == n % 6));
        let first = product(&two, &three, |x, _| x).unwrap();
        assert_eq!(equivalent(&first, &two).unwrap(), None);
        assert_eq!(equivalent(&map_output(&two, |y| y), &two).unwrap(), None);
    }

    #[test]
    fn product_rejects_mismatch() {
        let a = build_primitive(&Primitive::NMod(2), 10).unwrap();
        let b = build_primitive(&Primitive::NMod(2), 3).unwrap();
        assert!(matches!(product(&a, &b, |x, _| x), Err(DfaoError::BaseMismatch { .. })));
        let c = reverse(&build_primitive(&Primitive::NMod(2), 10).unwrap());
        assert_eq!(product(&a, &c, |x, _| x), Err(DfaoError::OrderMismatch));
    }

    #[test]
    fn lift_and_lower() {
        let d = build_primitive(&Primitive::NMod(3), 2).unwrap();
        let up = rebase(&d, Rebase::Lift(2)).unwrap();
        assert_eq!(up.base(), 4);
        assert!((0..=10_000).all(|n| up.eval(n) == n % 3));
        assert_eq!(rebase(&d, Rebase::Lift(1)).unwrap(), d);

        let four = build_primitive(&Primitive::DigitSumMod(5), 4).unwrap();
        let down = rebase(&four, Rebase::Lower { base: 2, m: 2 }).unwrap();
        assert!((0..=10_000).all(|n| down.eval(n) == four.eval(n)));
        assert!(down.is_zero_robust());
        let back = rebase(&down, Rebase::Lift(2)).unwrap();
        assert_eq!(equivalent(&back, &four).unwrap(), None);
    }

    #[test]
    fn lower_lsd_automaton() {
        let nine = reverse(&build_primitive(&Primitive::DigitSumMod(4), 9).unwrap());
        let down = rebase(&nine, Rebase::lower_to(9, 3).unwrap()).unwrap();
        assert_eq!(down.order(), DigitOrder::LsdFirst);
        assert!((0..5000).all(|n| down.eval(n) == nine.eval(n)));
    }

    #[test]
    fn lower_requires_exact_power() {
        let d = build_primitive(&Primitive::NMod(3), 6).unwrap();
        assert!(matches!(Rebase::lower_to(6, 4), Err(DfaoError::NotAPower { .. })));
        assert!(rebase(&d, Rebase::Lower { base: 2, m: 2 }).is_err());
        assert_eq!(Rebase::lower_to(8, 2), Ok(Rebase::Lower { base: 2, m: 3 }));
    }
}
