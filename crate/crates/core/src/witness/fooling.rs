//! Fooling pairs. A finite automaton reading `[p^c]_k` for `c = 1, 2, …`
//! must revisit a state, say on `c_i` and `c_j`. Extending `[p^{c_i}]_k` by
//! a suffix `(e, f)` gives `n₁ = p^{c_i}·k^e + f ∈ A₋`; the same suffix after
//! `[p^{c_j}]_k` gives `n₂ = p^{c_j}·k^e + f`, chosen in `A₊`. Both words end
//! in the same state, yet the divisibility signals differ, so the automaton
//! answers at least one of them wrongly.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::sets::TieInfo;
use super::{find_extension, set_membership, Extension, Membership, Signal, WitnessError};
use crate::dfao::{reverse, Dfao};
use crate::numkit::{big_digit_sum, big_from_digits, big_to_digits, render_digits, DigitOrder};

pub const DEFAULT_C_MAX: u64 = 2000;
pub const DEFAULT_D_MAX: u64 = 200_000;

/// How a candidate's output is read as a divisibility verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    /// The output is the digit itself; it claims `p₁^{a₁} | y`.
    Value,
    /// The output is `1` for "divides", anything else for "does not".
    Divisibility,
}

impl Claim {
    pub fn says_divides(self, output: u64, modulus: u64) -> bool {
        match self {
            Claim::Value => output % modulus == 0,
            Claim::Divisibility => output == 1,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Value => "value",
            Claim::Divisibility => "divisibility",
        })
    }
}

impl std::str::FromStr for Claim {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "value" => Ok(Claim::Value),
            "divisibility" => Ok(Claim::Divisibility),
            other => Err(WitnessError::Malformed(format!("unknown claim `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoolingReport {
    pub candidate: String,
    pub b: u64,
    /// Alphabet of the candidate.
    pub k: u64,
    pub claim: Claim,
    pub p: u64,
    pub a: u32,
    pub tier: Vec<u64>,
    /// `c` in the definition of `A₊`.
    pub threshold: u64,
    pub c_i: u64,
    pub c_j: u64,
    /// State shared after `[p^{c_i}]_k` and `[p^{c_j}]_k`, in the
    /// most-significant-first form of the candidate.
    pub state: usize,
    pub e: u64,
    pub f: BigUint,
    pub n1: BigUint,
    pub n2: BigUint,
    /// `(q, s_q(n₁), s_q(n₂))` for each tier prime `q`.
    pub digit_sums: Vec<(u64, u64, u64)>,
    pub signals: (Signal, Signal),
    pub outputs: (u64, u64),
}

/// The candidate read most significant digit first.
fn msd_form(d: &Dfao) -> Dfao {
    match d.order() {
        DigitOrder::MsdFirst => d.clone(),
        DigitOrder::LsdFirst => reverse(d),
    }
}

fn digit_sums(primes: &[u64], n1: &BigUint, n2: &BigUint) -> Result<Vec<(u64, u64, u64)>, WitnessError> {
    primes
        .iter()
        .map(|&q| Ok((q, big_digit_sum(n1, q)?, big_digit_sum(n2, q)?)))
        .collect()
}

/// Searches `c = 1..=c_max` for a fooling pair against `candidate`, which
/// claims to decide `p₁^{a₁} | ℓ_b(n!)` under `claim`. Extensions are
/// searched with exponents up to `d_max`.
pub fn fooling_report(
    candidate: &Dfao,
    candidate_id: &str,
    b: u64,
    claim: Claim,
    c_max: u64,
    d_max: u64,
) -> Result<FoolingReport, WitnessError> {
    let tie = TieInfo::new(b)?;
    let p = tie.lead.p;
    let k = candidate.base() as u64;
    let primes = tie.tier_primes();
    let work = msd_form(candidate);
    let scale_base = BigUint::from(k);

    let mut groups: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut extensions: HashMap<u64, Option<Extension>> = HashMap::new();
    let mut power = BigUint::one();
    for c in 1..=c_max {
        power *= p;
        let state = work.final_state_big(&power);
        let earlier = groups.entry(state).or_default().clone();
        for c_i in earlier {
            if !extensions.contains_key(&c_i) {
                let prefix = Pow::pow(&BigUint::from(p), c_i);
                let ext = match find_extension(&primes, k, &prefix, d_max) {
                    Ok(ext) if tie.signal(&ext.a_prime)? == Signal::NotDivides => Some(ext),
                    Ok(_) | Err(WitnessError::Exhausted { .. }) => None,
                    Err(err) => return Err(err),
                };
                extensions.insert(c_i, ext);
            }
            let Some(ext) = &extensions[&c_i] else { continue };
            let n2 = &power * Pow::pow(&scale_base, ext.e) + &ext.f;
            if tie.signal(&n2)? != Signal::Divides {
                continue;
            }
            let n1 = ext.a_prime.clone();
            let report = FoolingReport {
                candidate: candidate_id.to_string(),
                b,
                k,
                claim,
                p,
                a: tie.lead.a,
                tier: primes.clone(),
                threshold: tie.key + 1,
                c_i,
                c_j: c,
                state,
                e: ext.e,
                f: ext.f.clone(),
                digit_sums: digit_sums(&primes, &n1, &n2)?,
                outputs: (candidate.eval_big(&n1), candidate.eval_big(&n2)),
                signals: (Signal::NotDivides, Signal::Divides),
                n1,
                n2,
            };
            return Ok(report);
        }
        groups.get_mut(&state).unwrap().push(c);
    }
    Err(WitnessError::Exhausted { search: "fooling pair", limit: c_max })
}

fn render(x: &BigUint, k: u64) -> String {
    render_digits(&big_to_digits(x, k).expect("alphabet is at least 2"), k)
}

fn parse_digits(text: &str, k: u64) -> Result<BigUint, WitnessError> {
    let bad = || WitnessError::Malformed(format!("`{text}` is not a base-{k} digit string"));
    let digits: Vec<u64> = if k <= 10 {
        text.chars().map(|ch| ch.to_digit(10).map(u64::from).ok_or_else(bad)).collect::<Result<_, _>>()?
    } else {
        text.split('.').map(|tok| tok.parse::<u64>().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if digits.is_empty() || digits.iter().any(|&d| d >= k) {
        return Err(bad());
    }
    Ok(big_from_digits(&digits, k))
}

impl FoolingReport {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.a)
    }

    /// Which of `n₁`, `n₂` (1 or 2) the candidate answers against its signal.
    pub fn contradicted(&self) -> u8 {
        if self.claim.says_divides(self.outputs.0, self.modulus()) {
            1
        } else {
            2
        }
    }

    /// Re-derives every recorded quantity and checks the fooling invariants.
    pub fn verify(&self, candidate: &Dfao) -> Result<(), WitnessError> {
        let fail = |what: &str| Err(WitnessError::Rejected(what.to_string()));
        if candidate.base() as u64 != self.k {
            return Err(WitnessError::AlphabetMismatch { expected: self.k as usize, found: candidate.base() });
        }
        let tie = TieInfo::new(self.b)?;
        if tie.lead.p != self.p || tie.lead.a != self.a || tie.tier_primes() != self.tier {
            return fail("tie structure does not match the base");
        }
        if self.threshold != tie.key + 1 {
            return fail("threshold is not a(p-1)+1");
        }
        let scale = Pow::pow(&BigUint::from(self.k), self.e);
        if self.f >= scale {
            return fail("suffix value does not fit in e digits");
        }
        let p = BigUint::from(self.p);
        if self.n1 != Pow::pow(&p, self.c_i) * &scale + &self.f {
            return fail("n1 is not p^c_i * k^e + f");
        }
        if self.n2 != Pow::pow(&p, self.c_j) * &scale + &self.f {
            return fail("n2 is not p^c_j * k^e + f");
        }
        if self.c_i == self.c_j {
            return fail("colliding exponents coincide");
        }
        if digit_sums(&self.tier, &self.n1, &self.n2)? != self.digit_sums {
            return fail("digit sums do not match");
        }
        let spec = tie.set_spec();
        if set_membership(&self.n1, &spec)? != Membership::AMinus
            || set_membership(&self.n2, &spec)? != Membership::APlus
        {
            return fail("n1 must lie in A-minus and n2 in A-plus");
        }
        let signals = (tie.signal(&self.n1)?, tie.signal(&self.n2)?);
        if signals != self.signals || signals != (Signal::NotDivides, Signal::Divides) {
            return fail("signals do not match");
        }
        let work = msd_form(candidate);
        let s_i = work.final_state_big(&Pow::pow(&p, self.c_i));
        let s_j = work.final_state_big(&Pow::pow(&p, self.c_j));
        if s_i != self.state || s_j != self.state {
            return fail("prefixes do not share the recorded state");
        }
        if work.final_state_big(&self.n1) != work.final_state_big(&self.n2) {
            return fail("n1 and n2 end in different states");
        }
        let outputs = (candidate.eval_big(&self.n1), candidate.eval_big(&self.n2));
        if outputs != self.outputs || outputs.0 != outputs.1 {
            return fail("candidate outputs do not match");
        }
        Ok(())
    }

    /// Machine-readable `field,value` block. Integers that may be huge are
    /// written as base-`k` digit strings.
    pub fn to_csv(&self) -> String {
        let k = self.k;
        let tier: Vec<String> = self.tier.iter().map(u64::to_string).collect();
        let mut rows = vec![
            ("candidate".to_string(), self.candidate.replace([',', '\n', '\r'], "_")),
            ("base".into(), self.b.to_string()),
            ("alphabet".into(), k.to_string()),
            ("claim".into(), self.claim.to_string()),
            ("p".into(), self.p.to_string()),
            ("a".into(), self.a.to_string()),
            ("tier".into(), tier.join(" ")),
            ("threshold".into(), self.threshold.to_string()),
            ("c_i".into(), self.c_i.to_string()),
            ("c_j".into(), self.c_j.to_string()),
            ("state".into(), self.state.to_string()),
            ("e".into(), self.e.to_string()),
            ("f".into(), render(&self.f, k)),
            ("n1".into(), render(&self.n1, k)),
            ("n2".into(), render(&self.n2, k)),
        ];
        for &(q, s1, s2) in &self.digit_sums {
            rows.push((format!("s{q}_n1"), s1.to_string()));
            rows.push((format!("s{q}_n2"), s2.to_string()));
        }
        rows.push(("signal_n1".into(), self.signals.0.to_string()));
        rows.push(("signal_n2".into(), self.signals.1.to_string()));
        rows.push(("output_n1".into(), self.outputs.0.to_string()));
        rows.push(("output_n2".into(), self.outputs.1.to_string()));
        let mut out = String::from("field,value\n");
        for (key, value) in rows {
            writeln!(out, "{key},{value}").unwrap();
        }
        out
    }

    /// Human-readable certificate followed by the CSV block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let q = self.modulus();
        writeln!(out, "FOOLING CERTIFICATE").unwrap();
        writeln!(out, "candidate {} (alphabet {}, claim {})", self.candidate, self.k, self.claim).unwrap();
        writeln!(out, "base {}: tier primes {:?}, target {}^{}", self.b, self.tier, self.p, self.a).unwrap();
        writeln!(out, "shared state {} after [{}^{}] and [{}^{}]", self.state, self.p, self.c_i, self.p, self.c_j)
            .unwrap();
        writeln!(out, "suffix e={} f={}", self.e, render(&self.f, self.k)).unwrap();
        writeln!(out, "n1 = {}^{}*{}^{}+f = {}", self.p, self.c_i, self.k, self.e, render(&self.n1, self.k)).unwrap();
        writeln!(out, "n2 = {}^{}*{}^{}+f = {}", self.p, self.c_j, self.k, self.e, render(&self.n2, self.k)).unwrap();
        for &(prime, s1, s2) in &self.digit_sums {
            writeln!(out, "s_{prime}: n1={s1} n2={s2}").unwrap();
        }
        writeln!(out, "signal n1={} (A_MINUS) n2={} (A_PLUS, c={})", self.signals.0, self.signals.1, self.threshold)
            .unwrap();
        writeln!(out, "output n1={} n2={}", self.outputs.0, self.outputs.1).unwrap();
        let which = self.contradicted();
        let (said, truth) = if which == 1 { ("divides", self.signals.0) } else { ("does not divide", self.signals.1) };
        writeln!(out, "contradiction: on n{which} the candidate claims {q} {said}, signal is {truth}").unwrap();
        out.push('\n');
        out.push_str(&self.to_csv());
        out
    }

    /// Parses the CSV block, alone or embedded in a text certificate.
    pub fn from_csv(text: &str) -> Result<Self, WitnessError> {
        let body = text
            .split_once("field,value\n")
            .map(|(_, rest)| rest)
            .ok_or_else(|| WitnessError::Malformed("missing `field,value` header".into()))?;
        let mut fields: HashMap<&str, &str> = HashMap::new();
        let mut order = Vec::new();
        for line in body.lines().take_while(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once(',')
                .ok_or_else(|| WitnessError::Malformed(format!("line `{line}` has no value")))?;
            fields.insert(key, value);
            order.push(key);
        }
        let get = |key: &str| {
            fields.get(key).copied().ok_or_else(|| WitnessError::Malformed(format!("missing field `{key}`")))
        };
        let num = |key: &str| -> Result<u64, WitnessError> {
            get(key)?.parse().map_err(|_| WitnessError::Malformed(format!("field `{key}` is not an integer")))
        };
        let k = num("alphabet")?;
        let tier: Vec<u64> = get("tier")?
            .split(' ')
            .map(|t| t.parse().map_err(|_| WitnessError::Malformed("bad tier".into())))
            .collect::<Result<_, _>>()?;
        let mut digit_sums = Vec::new();
        for &q in &tier {
            digit_sums.push((q, num(&format!("s{q}_n1"))?, num(&format!("s{q}_n2"))?));
        }
        Ok(FoolingReport {
            candidate: get("candidate")?.to_string(),
            b: num("base")?,
            k,
            claim: get("claim")?.parse()?,
            p: num("p")?,
            a: num("a")? as u32,
            tier,
            threshold: num("threshold")?,
            c_i: num("c_i")?,
            c_j: num("c_j")?,
            state: num("state")? as usize,
            e: num("e")?,
            f: parse_digits(get("f")?, k)?,
            n1: parse_digits(get("n1")?, k)?,
            n2: parse_digits(get("n2")?, k)?,
            digit_sums,
            signals: (get("signal_n1")?.parse()?, get("signal_n2")?.parse()?),
            outputs: (num("output_n1")?, num("output_n2")?),
        })
    }
}
