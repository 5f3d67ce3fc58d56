use std::fmt::Write as _;
use std::time::{Duration, Instant};

use super::BuildError;
use crate::dfao::Dfao;
use crate::numkit::{lnz_range, NumError};

/// What the automaton under test claims to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `ℓ_b(n!)` itself.
    FullValue,
    /// `1` if `p^a | ℓ_b(n!)`, else `0`.
    Divisibility { p: u64, a: u32 },
}

impl Target {
    fn expected(&self, lnz: u64) -> u64 {
        match *self {
            Target::FullValue => lnz,
            Target::Divisibility { p, a } => (lnz % p.pow(a) == 0) as u64,
        }
    }

    fn label(&self) -> String {
        match self {
            Target::FullValue => "value".to_string(),
            Target::Divisibility { p, a } => format!("divisibility({p}^{a})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub got: u64,
    pub want: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub base: u64,
    pub from: u64,
    pub to: u64,
    pub target: Target,
    pub states: usize,
    /// Sorted by `n`.
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    /// Report invariants: mismatches strictly increasing in `n`, inside the
    /// range, and genuinely disagreeing.
    pub fn is_consistent(&self) -> bool {
        self.mismatches.windows(2).all(|w| w[0].n < w[1].n)
            && self
                .mismatches
                .iter()
                .all(|m| m.got != m.want && (self.from..=self.to).contains(&m.n))
    }

    fn header(&self) -> String {
        format!(
            "VERIFY base={} range={}..{} target={} states={}\n",
            self.base,
            self.from,
            self.to,
            self.target.label(),
            self.states
        )
    }

    /// Text report; the timing footer is omitted when `quiet`.
    pub fn to_text(&self, quiet: bool) -> String {
        let mut out = self.header();
        for m in &self.mismatches {
            writeln!(out, "MISMATCH n={} got={} want={}", m.n, m.got, m.want).unwrap();
        }
        writeln!(out, "{} mismatches", self.mismatches.len()).unwrap();
        if !quiet {
            writeln!(out, "elapsed_ms={}", self.elapsed.as_millis()).unwrap();
        }
        out
    }

    /// Header, the smallest mismatch if any, and the count footer.
    pub fn to_summary(&self) -> String {
        let mut out = self.header();
        if let Some(m) = self.first_mismatch() {
            writeln!(out, "FIRST MISMATCH n={} got={} want={}", m.n, m.got, m.want).unwrap();
        }
        writeln!(out, "{} mismatches", self.mismatches.len()).unwrap();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,got,want\n");
        for m in &self.mismatches {
            writeln!(out, "{},{},{}", m.n, m.got, m.want).unwrap();
        }
        out
    }
}

fn check_chunk(d: &Dfao, b: u64, from: u64, to: u64, target: Target) -> Result<Vec<Mismatch>, NumError> {
    let mut out = Vec::new();
    for (n, lnz) in lnz_range(b, from, to)? {
        let want = target.expected(lnz);
        let got = d.eval(n);
        if got != want {
            out.push(Mismatch { n, got, want });
        }
    }
    Ok(out)
}

/// Compares `d` with the oracle on every `n` in `[from, to]`. With
/// `jobs > 1` the range is split into contiguous chunks, each checked on its
/// own thread with its own oracle stream; results merge in order of `n`.
pub fn verify(d: &Dfao, b: u64, from: u64, to: u64, target: Target, jobs: usize) -> Result<VerifyReport, BuildError> {
    let start = Instant::now();
    let jobs = jobs.max(1) as u64;
    let mismatches = if jobs == 1 || to < from {
        check_chunk(d, b, from, to, target)?
    } else {
        let span = to - from + 1;
        let chunk = span.div_ceil(jobs);
        let bounds: Vec<(u64, u64)> = (0..jobs)
            .map(|j| (from + j * chunk, (from + (j + 1) * chunk).min(to + 1)))
            .filter(|(lo, hi)| lo < hi)
            .collect();
        let parts: Vec<Result<Vec<Mismatch>, NumError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|&(lo, hi)| scope.spawn(move || check_chunk(d, b, lo, hi - 1, target)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("verify worker panicked")).collect()
        });
        let mut merged = Vec::new();
        for part in parts {
            merged.extend(part?);
        }
        merged
    };
    Ok(VerifyReport {
        base: b,
        from,
        to,
        target,
        states: d.num_states(),
        mismatches,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factbuild::{build_prime_power, PrimePowerMode};

    #[test]
    fn clean_report() {
        let d = build_prime_power(3, 2, PrimePowerMode::Sound).unwrap();
        let r = verify(&d, 9, 0, 5000, Target::FullValue, 1).unwrap();
        assert!(r.is_clean());
        assert!(r.to_text(true).ends_with("0 mismatches\n"));
    }

    #[test]
    fn corrupted_output_is_found() {
        let d = build_prime_power(3, 2, PrimePowerMode::Sound).unwrap();
        let q = d.final_state(40);
        let mut outputs = d.outputs().to_vec();
        outputs[q] = (outputs[q] % 8) + 1;
        let bad = d.with_outputs(outputs);
        let r = verify(&bad, 9, 0, 5000, Target::FullValue, 1).unwrap();
        assert!(!r.is_clean());
        assert!(r.is_consistent());
        let first = r.first_mismatch().unwrap();
        assert!(first.n <= 40);
        assert_eq!(first.got, bad.eval(first.n));
    }

    #[test]
    fn parallel_matches_serial() {
        let d = build_prime_power(2, 2, PrimePowerMode::Literal).unwrap();
        let serial = verify(&d, 4, 3, 4000, Target::FullValue, 1).unwrap();
        let parallel = verify(&d, 4, 3, 4000, Target::FullValue, 4).unwrap();
        assert_eq!(serial.mismatches, parallel.mismatches);
        assert_eq!(serial.to_text(true), parallel.to_text(true));
    }

    #[test]
    fn divisibility_target() {
        let one = Dfao::constant(12, crate::numkit::DigitOrder::MsdFirst, 0).unwrap();
        let r = verify(&one, 12, 0, 200, Target::Divisibility { p: 3, a: 1 }, 1).unwrap();
        assert!(r.mismatches.iter().all(|m| m.want == 1));
    }
}
