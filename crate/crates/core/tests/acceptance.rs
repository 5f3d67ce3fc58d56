//! End-to-end acceptance suite: one line per criterion, all must pass.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use lnzfact::dfao::io::{read, write};
use lnzfact::dfao::{
    build_primitive, equivalent, minimize, product, rebase, reverse, Dfao, Primitive, Rebase, Word,
};
use lnzfact::factbuild::{
    build_dominant, build_prime_power, build_tie_approximant, classify, verify, PrimePowerMode, Target,
};
use lnzfact::numkit::{legendre_valuation, lnz_factorial, lnz_range, DigitOrder, Verdict};
use lnzfact::witness::{
    divisibility_signal, find_power_with_prefix, fooling_report, Claim, FoolingReport, Signal, DEFAULT_C_MAX,
    DEFAULT_D_MAX,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

const PRIME_POWER_BASES: [(u64, u32); 12] =
    [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5), (7, 2)];
const DOMINANT_BASES: [u64; 8] = [6, 10, 15, 20, 24, 36, 48, 50];
const LITERAL_REPORT: &str = include_str!("../reports/literal_mode.txt");

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(format!("{:.1}s", t.as_secs_f64()))
}

/// Exact digit from a full big-integer factorial with base-`b` zeros stripped.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    for b in 2u64..=16 {
        let stream: Vec<u64> = lnz_range(b, 0, 2000).map_err(|e| e.to_string())?.map(|(_, v)| v).collect();
        let big_b = BigUint::from(b);
        let mut x = BigUint::one();
        for n in 0..=2000u64 {
            if n > 0 {
                x *= n;
            }
            while (&x % &big_b).is_zero() {
                x /= &big_b;
            }
            let digit = u64::try_from(&x % &big_b).unwrap();
            ensure(stream[n as usize] == digit, || format!("b={b} n={n}: oracle {} vs {digit}", stream[n as usize]))?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn criterion_2() -> Outcome {
    let got: Vec<u64> = (0..10).map(|n| lnz_factorial(n, 10).unwrap()).collect();
    ensure(got == [1, 1, 2, 6, 4, 2, 2, 4, 2, 8], || format!("{got:?}"))?;
    Ok("1,1,2,6,4,2,2,4,2,8".into())
}

fn sound_automata() -> Vec<(u64, Dfao)> {
    PRIME_POWER_BASES
        .iter()
        .map(|&(p, a)| (p.pow(a), build_prime_power(p, a, PrimePowerMode::Sound).unwrap()))
        .collect()
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for (b, d) in sound_automata() {
        let report = verify(&d, b, 0, 100_000, Target::FullValue, 4).map_err(|e| e.to_string())?;
        ensure(report.is_clean(), || format!("b={b}: {} mismatches", report.mismatches.len()))?;
    }
    within(start, Duration::from_secs(300))
}

fn criterion_4() -> Outcome {
    let mut fresh = String::new();
    let mut disagreeing = 0;
    for &(p, a) in &PRIME_POWER_BASES {
        let b = p.pow(a);
        let d = build_prime_power(p, a, PrimePowerMode::Literal).map_err(|e| e.to_string())?;
        let report = verify(&d, b, 0, 100_000, Target::FullValue, 4).map_err(|e| e.to_string())?;
        ensure(report.is_consistent(), || format!("b={b}: report not self-consistent"))?;
        // The reported smallest mismatch is genuine and nothing below it disagrees.
        let first = report.first_mismatch().map_or(100_001, |m| m.n);
        for (n, want) in lnz_range(b, 0, first.min(100_000)).unwrap() {
            let agrees = d.eval(n) == want;
            ensure(agrees == (n != first), || format!("b={b} n={n}: report disagrees with direct check"))?;
        }
        disagreeing += usize::from(!report.is_clean());
        fresh.push_str(&report.to_summary());
    }
    ensure(fresh == LITERAL_REPORT, || "committed report differs from a fresh run".into())?;
    Ok(format!("report reproduced; {disagreeing} of {} bases disagree with the oracle", PRIME_POWER_BASES.len()))
}

/// `min_i ⌊v_{p_i}(n!)/a_i⌋` over the given prime powers, by direct counting.
struct ValuationCounter {
    powers: Vec<(u64, u32)>,
    counts: Vec<u64>,
    n: u64,
}

impl ValuationCounter {
    fn new(powers: Vec<(u64, u32)>) -> Self {
        let counts = vec![0; powers.len()];
        ValuationCounter { powers, counts, n: 0 }
    }

    fn advance(&mut self) {
        self.n += 1;
        for (i, &(p, _)) in self.powers.iter().enumerate() {
            let mut m = self.n;
            while m % p == 0 {
                m /= p;
                self.counts[i] += 1;
            }
        }
    }

    fn min_quotient(&self) -> u64 {
        self.powers.iter().zip(&self.counts).map(|(&(_, a), &c)| c / a as u64).min().unwrap()
    }
}

fn prime_powers(mut b: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while b > 1 {
        let mut a = 0;
        while b % p == 0 {
            b /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    out
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for b in DOMINANT_BASES {
        let built = build_dominant(b).map_err(|e| e.to_string())?;
        let report = verify(&built.dfao, b, 0, 100_000, Target::FullValue, 4).map_err(|e| e.to_string())?;
        ensure(report.is_clean(), || format!("b={b}: {} mismatches", report.mismatches.len()))?;

        let lead = (built.scan.lead.p, built.scan.lead.a);
        let rest: Vec<(u64, u32)> = prime_powers(b).into_iter().filter(|&pp| pp != lead).collect();
        let mut lead_count = ValuationCounter::new(vec![lead]);
        let mut rest_count = ValuationCounter::new(rest);
        let mut failures = BTreeSet::new();
        for n in 0..=100_000u64 {
            if n > 0 {
                lead_count.advance();
                rest_count.advance();
            }
            if rest_count.min_quotient() <= lead_count.min_quotient() {
                failures.insert(n);
            }
        }
        let patched: BTreeSet<u64> = built.patch.keys().copied().collect();
        let scanned: BTreeSet<u64> = built.scan.exceptions.iter().copied().collect();
        ensure(patched == failures && scanned == failures, || {
            format!("b={b}: patch {patched:?}, scan {scanned:?}, direct {failures:?}")
        })?;
        notes.push(format!("{b}:{patched:?}"));
    }
    Ok(format!("patch sets {}", notes.join(" ")))
}

fn criterion_6() -> Outcome {
    for b in [8u64, 9, 27, 32, 121] {
        ensure(matches!(classify(b), Ok(Verdict::PrimePower { .. })), || format!("{b}: {:?}", classify(b)))?;
    }
    for b in [6u64, 10, 15, 20, 24, 36] {
        ensure(matches!(classify(b), Ok(Verdict::Automatic { .. })), || format!("{b}: {:?}", classify(b)))?;
    }
    for b in [12u64, 45, 80, 189] {
        ensure(classify(b) == Ok(Verdict::NotAutomatic), || format!("{b}: {:?}", classify(b)))?;
    }
    Ok("15 bases".into())
}

fn random_automaton(rng: &mut StdRng) -> Dfao {
    let k = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=6);
    let outputs = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let transitions = (0..n * k).map(|_| rng.gen_range(0..n)).collect();
    let order = if rng.gen() { DigitOrder::MsdFirst } else { DigitOrder::LsdFirst };
    Dfao::new(k, order, rng.gen_range(0..n), outputs, transitions).unwrap()
}

fn all_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new(k, vec![]).unwrap()];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
        out.extend(layer.iter().map(|w| Word::new(k, w.clone()).unwrap()));
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1f2e3d4c);
    let words: Vec<Vec<Word>> = (0..=4).map(|k| if k < 2 { vec![] } else { all_words(k, 8) }).collect();
    let mut checked = 0usize;
    for i in 0..100 {
        let d = random_automaton(&mut rng);
        let r = reverse(&d);
        for w in &words[d.base()] {
            let (g, f) = (r.eval_word(w).unwrap(), d.eval_word(&w.reversed()).unwrap());
            ensure(g == f, || format!("automaton {i}: reverse differs on {:?}", w.symbols()))?;
            checked += 1;
        }
        let m = minimize(&d);
        ensure(minimize(&m) == m, || format!("automaton {i}: minimize not idempotent"))?;
        ensure(equivalent(&d, &m).unwrap().is_none(), || format!("automaton {i}: minimize changed behavior"))?;
    }

    let two = build_primitive(&Primitive::NMod(2), 10).unwrap();
    let three = build_primitive(&Primitive::NMod(3), 10).unwrap();
    let six = product(&two, &three, |x, y| (3 * x + 4 * y) % 6).unwrap();
    for n in 0..=10_000 {
        ensure(six.eval(n) == n % 6, || format!("CRT product wrong at n={n}"))?;
    }

    let mut rebased = 0;
    for (b, d) in sound_automata().into_iter().filter(|(b, _)| *b <= 16) {
        for m in 2..=3u32 {
            let up = rebase(&d, Rebase::Lift(m)).unwrap();
            let down = rebase(&up, Rebase::Lower { base: b as usize, m }).unwrap();
            ensure(equivalent(&down, &d).unwrap().is_none(), || format!("b={b}: lift {m} then lower differs"))?;
            let rev = reverse(&d);
            let up = rebase(&rev, Rebase::Lift(m)).unwrap();
            let down = rebase(&up, Rebase::Lower { base: b as usize, m }).unwrap();
            ensure(equivalent(&down, &rev).unwrap().is_none(), || format!("b={b}: LSD lift {m} then lower differs"))?;
            rebased += 2;
        }
    }
    for (p, a) in [(2u64, 2u32), (2, 4), (3, 2), (5, 2), (3, 3)] {
        let d = build_prime_power(p, a, PrimePowerMode::Sound).unwrap();
        let down = rebase(&d, Rebase::Lower { base: p as usize, m: a }).unwrap();
        let back = rebase(&down, Rebase::Lift(a)).unwrap();
        ensure(equivalent(&back, &d).unwrap().is_none(), || format!("{p}^{a}: lower then lift differs"))?;
        rebased += 1;
    }
    Ok(format!("{checked} reverse checks, CRT to 10^4, {rebased} rebase round trips"))
}

fn criterion_8() -> Outcome {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut count = 0u64;
        for n in 0..=10_000u64 {
            if n > 0 {
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                    count += 1;
                }
            }
            for a in 1..=3u32 {
                let got = legendre_valuation(n, p, a).unwrap();
                ensure(got == count / a as u64, || format!("p={p} a={a} n={n}: {got} vs {}", count / a as u64))?;
            }
        }
    }
    Ok("18 (p, a) pairs to 10^4".into())
}

/// Independent check: `[a]_b` is a proper prefix of `[c^d]_b` and the rest
/// is `f` written in exactly `e` digits.
fn check_triple(c: u64, b: u64, a: u64, d: u64, e: u64, f: &BigUint) -> Result<(), String> {
    let power = BigUint::from(c).pow(d as u32);
    let digits = power.to_radix_be(b as u32);
    let head = BigUint::from(a).to_radix_be(b as u32);
    ensure(digits.len() == head.len() + e as usize && digits.starts_with(&head), || {
        format!("c={c} b={b} a={a}: prefix fails for d={d}")
    })?;
    let tail = BigUint::from_radix_be(&digits[head.len()..], b as u32).unwrap();
    ensure(tail == *f && !f.is_zero(), || format!("c={c} b={b} a={a}: remainder mismatch"))
}

fn criterion_9() -> Outcome {
    for (c, b, a, want) in [(2u64, 10u64, 12u64, (7u64, 1u64, 8u64)), (3, 10, 2, (3, 1, 7))] {
        let t = find_power_with_prefix(c, b, &BigUint::from(a), 100).map_err(|e| e.to_string())?;
        ensure((t.d, t.e, t.f.clone()) == (want.0, want.1, BigUint::from(want.2)), || format!("{t:?}"))?;
        ensure(t.verify(), || "triple fails its own check".into())?;
        check_triple(c, b, a, t.d, t.e, &t.f)?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut done = 0;
    while done < 20 {
        let (c, b) = (rng.gen_range(2..=30u64), rng.gen_range(2..=30u64));
        if lnzfact::numkit::multiplicatively_dependent(b, c).unwrap() {
            continue;
        }
        let a = rng.gen_range(1..=500u64);
        let t = find_power_with_prefix(c, b, &BigUint::from(a), 200_000).map_err(|e| format!("c={c} b={b} a={a}: {e}"))?;
        ensure(t.verify(), || format!("c={c} b={b} a={a}: triple fails its own check"))?;
        check_triple(c, b, a, t.d, t.e, &t.f)?;
        done += 1;
    }
    Ok("2 fixed + 20 random triples".into())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut decided = 0;
    for (n, v) in lnz_range(12, 0, 100_000).unwrap() {
        let divides = v % 3 == 0;
        match divisibility_signal(&BigUint::from(n), 12).unwrap() {
            Signal::Divides => ensure(divides, || format!("n={n}: DIVIDES but digit {v}"))?,
            Signal::NotDivides => ensure(!divides, || format!("n={n}: NOT_DIVIDES but digit {v}"))?,
            Signal::Unknown => continue,
        }
        decided += 1;
    }
    let time = within(start, Duration::from_secs(300))?;
    Ok(format!("{decided} decided signals, 0 contradictions, {time}"))
}

fn digit_sum(n: &BigUint, q: u32) -> u64 {
    n.to_radix_be(q).iter().map(|&d| d as u64).sum()
}

/// Checks a certificate from its own text: parse, re-derive, and confirm the
/// contradiction with independent digit sums.
fn check_certificate(text: &str, candidate: &Dfao) -> Result<(), String> {
    let report = FoolingReport::from_csv(text).map_err(|e| e.to_string())?;
    report.verify(candidate).map_err(|e| e.to_string())?;
    let (a2, a3) = (digit_sum(&report.n1, 2), digit_sum(&report.n1, 3));
    let (b2, b3) = (digit_sum(&report.n2, 2), digit_sum(&report.n2, 3));
    ensure(a3 >= a2 && b2 > b3 + 2, || "digit sums do not force the signals".into())?;
    let (o1, o2) = (candidate.eval_big(&report.n1), candidate.eval_big(&report.n2));
    ensure(o1 == o2, || "outputs differ".into())?;
    // 3 ∤ ℓ(n1!) and 3 | ℓ(n2!), so one shared answer is wrong on exactly one.
    let wrong_on = if report.claim.says_divides(o1, 3) { 1 } else { 2 };
    ensure(report.contradicted() == wrong_on, || "certificate names the wrong contradiction".into())?;
    ensure(text.contains(&format!("contradiction: on n{wrong_on} ")), || "contradiction line missing".into())
}

fn fool_cli(candidate: &Dfao, claim: &str) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("candidate.dfao");
    std::fs::write(&file, write(candidate)).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_lnzfact"))
        .args(["fool", "--dfao", file.to_str().unwrap(), "--base", "12", "--claim", claim])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(1), || format!("exit {:?}", out.status.code()))?;
    check_certificate(&String::from_utf8_lossy(&out.stdout), candidate)
}

fn criterion_11() -> Outcome {
    let mut defeated = 0;
    for value in 0..12u64 {
        let d = Dfao::constant(12, DigitOrder::MsdFirst, value).unwrap();
        fool_cli(&d, "value")?;
        defeated += 1;
    }
    for value in 0..2u64 {
        let d = Dfao::constant(12, DigitOrder::MsdFirst, value).unwrap();
        fool_cli(&d, "divisibility")?;
        defeated += 1;
    }

    let bits: Vec<u64> = lnz_range(12, 0, 9_999).unwrap().map(|(_, v)| u64::from(v % 3 == 0)).collect();
    for period in 1..=256usize {
        let pattern: Vec<u64> = (0..period)
            .map(|r| {
                let class: Vec<u64> = bits.iter().skip(r).step_by(period).copied().collect();
                u64::from(2 * class.iter().sum::<u64>() > class.len() as u64)
            })
            .collect();
        let d = build_primitive(&Primitive::Periodic(pattern), 12).unwrap();
        let report = fooling_report(&d, &format!("periodic-{period}"), 12, Claim::Divisibility, DEFAULT_C_MAX, DEFAULT_D_MAX)
            .map_err(|e| format!("period {period}: {e}"))?;
        check_certificate(&report.to_text(), &d).map_err(|e| format!("period {period}: {e}"))?;
        defeated += 1;
    }

    let approx = build_tie_approximant(12, 10_000).map_err(|e| e.to_string())?;
    ensure(approx.base() == 3, || format!("approximant alphabet {}", approx.base()))?;
    fool_cli(&approx, "value")?;
    defeated += 1;
    Ok(format!("{defeated} candidates defeated, every certificate re-verified"))
}

fn criterion_12() -> Outcome {
    let mut automata: Vec<Dfao> = sound_automata().into_iter().map(|(_, d)| d).collect();
    for &(p, a) in &PRIME_POWER_BASES {
        automata.push(build_prime_power(p, a, PrimePowerMode::Literal).unwrap());
    }
    for b in DOMINANT_BASES {
        automata.push(build_dominant(b).unwrap().dfao);
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, d) in automata.iter().enumerate() {
        let text = write(d);
        let path = dir.path().join(format!("{i}.dfao"));
        lnzfact::dfao::io::write_file(d, &path).map_err(|e| e.to_string())?;
        let back = lnzfact::dfao::io::read_file(&path).map_err(|e| e.to_string())?;
        ensure(back == *d && write(&back) == text, || format!("automaton {i}: round trip differs"))?;
        ensure(std::fs::read_to_string(&path).unwrap() == text, || format!("automaton {i}: file bytes differ"))?;
        ensure(read(&text).unwrap() == *d, || format!("automaton {i}: parse differs"))?;
    }
    Ok(format!("{} automata", automata.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("oracle cross-check b=2..16, n<=2000", criterion_1),
        ("decimal prefix n=0..9", criterion_2),
        ("prime-power automata (sound), n<=10^5", criterion_3),
        ("literal-mode report", criterion_4),
        ("dominant-prime automata, n<=10^5, exact patch", criterion_5),
        ("classifier table", criterion_6),
        ("combinator suites", criterion_7),
        ("Legendre vs direct counting", criterion_8),
        ("prefix-power witness triples", criterion_9),
        ("signal soundness b=12, n<=10^5", criterion_10),
        ("falsifier corpus b=12", criterion_11),
        ("file format round trip", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail})", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
