//! Command-line front end.
//!
//! Exit codes: 0 success, 1 mismatch or counterexample found, 2 usage or
//! precondition error, 3 search exhausted or internal failure.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use thiserror::Error;

use crate::dfao::io::{read_file, write_file, FileError};
use crate::dfao::{equivalent, minimize, rebase, reverse, Dfao, DfaoError, Rebase};
use crate::factbuild::{
    build_dominant, build_prime_power, classify, infer_dfao, m_table, verify, BuildError, InferConfig,
    PrimePowerMode, Target,
};
use crate::numkit::{factorize, lnz_factorial, lnz_range, NumError, Verdict};
use crate::witness::{
    divisibility_signal, find_extension, find_power_with_prefix, fooling_report, set_membership, Claim, SetSpec,
    WitnessError, DEFAULT_C_MAX, DEFAULT_D_MAX,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lnzfact", version, about = "Last nonzero digit of n! in base b: oracle, automata and witnesses")]
pub struct Cli {
    /// Suppress timing footers and progress notes.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sound,
    Literal,
    Dominant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClaimArg {
    Value,
    Divisibility,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Last nonzero base-b digit of n!, for one n or a range.
    Lnz {
        #[arg(long)]
        base: u64,
        #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present = "to")]
        n: Option<u64>,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The digits ℓ_b(i!) for 0 ≤ i < b.
    Table {
        #[arg(long)]
        base: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// PRIME_POWER p a | AUTOMATIC p | NOT_AUTOMATIC.
    Classify {
        #[arg(long)]
        base: u64,
    },
    /// Digit-sum divisibility signal for a tie base.
    Signal {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        n: BigUint,
    },
    /// A_MINUS | A_PLUS | NEITHER for the given prime set and threshold.
    Membership {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: BigUint,
    },
    /// Build an automaton and write it to a file.
    Build {
        #[arg(long)]
        base: u64,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare an automaton with the oracle on a range.
    Verify(VerifyArgs),
    /// Minimize an automaton (unreachable states dropped, equivalent states merged).
    Minimize {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide equivalence; prints EQUIVALENT or a shortest distinguishing word.
    Equiv {
        #[arg(long = "a")]
        left: PathBuf,
        #[arg(long = "b")]
        right: PathBuf,
    },
    /// Flip the digit order.
    Reverse {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Change the input alphabet: k → k^m (--lift m) or k → r with k = r^m (--lower-to r).
    Rebase {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, conflicts_with = "lower_to", required_unless_present = "lower_to")]
        lift: Option<u32>,
        #[arg(long)]
        lower_to: Option<usize>,
    },
    /// Learn a conjectural automaton from oracle data.
    Infer {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        alphabet: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prefix and extension witnesses.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Find a fooling pair against a candidate automaton for a tie base.
    Fool {
        #[arg(long)]
        dfao: PathBuf,
        #[arg(long)]
        base: u64,
        #[arg(long, value_enum, default_value_t = ClaimArg::Value)]
        claim: ClaimArg,
        #[arg(long, default_value_t = DEFAULT_C_MAX)]
        c_max: u64,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        d_max: u64,
        /// Print only the CSV block.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    dfao: PathBuf,
    #[arg(long)]
    base: u64,
    #[arg(long, default_value_t = 0)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Check `p^a | ℓ_b(n!)` (0/1 outputs) instead of the digit, given as `p` or `p^a`.
    #[arg(long)]
    divides: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print only the header, the smallest mismatch and the count.
    #[arg(long, conflicts_with = "format")]
    summary: bool,
}

#[derive(Debug, Subcommand)]
pub enum WitnessCommand {
    /// Smallest d with [a]_b a proper prefix of [c^d]_b.
    PrefixPower {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        base: u64,
        #[arg(long)]
        prefix: BigUint,
        #[arg(long, default_value_t = 10_000)]
        d_max: u64,
    },
    /// Extension of [a]_k on which the largest prime's digit sum dominates.
    Extension {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        base: u64,
        #[arg(long)]
        prefix: BigUint,
        #[arg(long, default_value_t = DEFAULT_D_MAX)]
        d_max: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Dfao(#[from] DfaoError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    File(#[from] FileError),
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Build(BuildError::Budget(_) | BuildError::Unresolved(_))
            | CliError::Witness(WitnessError::Exhausted { .. })
            | CliError::Io(_) => EXIT_EXHAUSTED,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = execute(&cli, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            let _ = out.flush();
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn load(path: &PathBuf) -> Result<Dfao, CliError> {
    Ok(read_file(path)?)
}

fn parse_divisor(text: &str) -> Result<Target, CliError> {
    let bad = || CliError::Usage(format!("--divides expects `p` or `p^a`, got `{text}`"));
    let (p, a) = match text.split_once('^') {
        Some((p, a)) => (p.parse().map_err(|_| bad())?, a.parse().map_err(|_| bad())?),
        None => (text.parse().map_err(|_| bad())?, 1u32),
    };
    if !crate::numkit::arith::is_prime(p) || a == 0 {
        return Err(bad());
    }
    Ok(Target::Divisibility { p, a })
}

fn prime_power_of(b: u64) -> Result<(u64, u32), CliError> {
    match factorize(b)?.verdict() {
        Verdict::PrimePower { p, a } => Ok((p, a)),
        _ => Err(BuildError::NotPrimePower { b }.into()),
    }
}

pub fn execute(cli: &Cli, out: &mut impl Write) -> Result<i32, CliError> {
    let quiet = cli.quiet;
    match &cli.command {
        Command::Lnz { base, n, from, to, format } => {
            if let Some(n) = n {
                writeln!(out, "{}", lnz_factorial(*n, *base)?)?;
                return Ok(EXIT_OK);
            }
            let to = to.expect("clap requires --n or --to");
            if *format == Format::Csv {
                writeln!(out, "n,value")?;
            }
            for (n, v) in lnz_range(*base, *from, to)? {
                match format {
                    Format::Csv => writeln!(out, "{n},{v}")?,
                    Format::Text => writeln!(out, "{n} {v}")?,
                }
            }
        }
        Command::Table { base, format } => {
            let table = m_table(*base)?;
            if *format == Format::Csv {
                writeln!(out, "i,value")?;
            }
            for (i, v) in table.values().iter().enumerate() {
                match format {
                    Format::Csv => writeln!(out, "{i},{v}")?,
                    Format::Text => writeln!(out, "{i} {v}")?,
                }
            }
        }
        Command::Classify { base } => writeln!(out, "{}", classify(*base)?)?,
        Command::Signal { base, n } => writeln!(out, "{}", divisibility_signal(n, *base)?)?,
        Command::Membership { primes, c, n } => {
            let spec = SetSpec::new(primes.clone(), *c)?;
            writeln!(out, "{}", set_membership(n, &spec)?)?;
        }
        Command::Build { base, mode, out: path } => {
            let dfao = match mode {
                Mode::Sound | Mode::Literal => {
                    let (p, a) = prime_power_of(*base)?;
                    let mode = if *mode == Mode::Sound { PrimePowerMode::Sound } else { PrimePowerMode::Literal };
                    build_prime_power(p, a, mode)?
                }
                Mode::Dominant => {
                    let built = build_dominant(*base)?;
                    let patched: Vec<String> = built.patch.keys().map(u64::to_string).collect();
                    writeln!(out, "patched {}", patched.join(" "))?;
                    built.dfao
                }
            };
            write_file(&dfao, path)?;
            writeln!(out, "states {} alphabet {}", dfao.num_states(), dfao.base())?;
        }
        Command::Verify(args) => {
            let dfao = load(&args.dfao)?;
            let target = match &args.divides {
                Some(text) => parse_divisor(text)?,
                None => Target::FullValue,
            };
            let report = verify(&dfao, args.base, args.from, args.to, target, args.jobs)?;
            match args.format {
                _ if args.summary => write!(out, "{}", report.to_summary())?,
                Format::Text => write!(out, "{}", report.to_text(quiet))?,
                Format::Csv => write!(out, "{}", report.to_csv())?,
            }
            return Ok(if report.is_clean() { EXIT_OK } else { EXIT_FOUND });
        }
        Command::Minimize { dfao, out: path } => {
            let m = minimize(&load(dfao)?);
            write_file(&m, path)?;
            writeln!(out, "states {}", m.num_states())?;
        }
        Command::Equiv { left, right } => {
            let (d1, d2) = (load(left)?, load(right)?);
            return match equivalent(&d1, &d2)? {
                None => {
                    writeln!(out, "EQUIVALENT")?;
                    Ok(EXIT_OK)
                }
                Some(word) => {
                    let symbols: Vec<String> = word.symbols().iter().map(usize::to_string).collect();
                    let shown = if symbols.is_empty() { "(empty)".to_string() } else { symbols.join(" ") };
                    writeln!(out, "COUNTEREXAMPLE {shown}")?;
                    writeln!(out, "outputs {} {}", d1.eval_word(&word)?, d2.eval_word(&word)?)?;
                    Ok(EXIT_FOUND)
                }
            };
        }
        Command::Reverse { dfao, out: path } => {
            let r = reverse(&load(dfao)?);
            write_file(&r, path)?;
            writeln!(out, "states {}", r.num_states())?;
        }
        Command::Rebase { dfao, out: path, lift, lower_to } => {
            let d = load(dfao)?;
            let direction = match (lift, lower_to) {
                (Some(m), _) => Rebase::Lift(*m),
                (None, Some(r)) => Rebase::lower_to(d.base(), *r)?,
                (None, None) => unreachable!("clap requires one of --lift, --lower-to"),
            };
            let r = rebase(&d, direction)?;
            write_file(&r, path)?;
            writeln!(out, "states {} alphabet {}", r.num_states(), r.base())?;
        }
        Command::Infer { base, alphabet, to, depth, budget, out: path } => {
            let config = InferConfig { base: *base, alphabet: *alphabet, train_to: *to, depth: *depth, budget: *budget };
            let learned = infer_dfao(&config)?;
            write_file(&learned.dfao, path)?;
            writeln!(out, "CONJECTURAL states {} agrees with the oracle for n <= {}", learned.dfao.num_states(), to)?;
        }
        Command::Witness(WitnessCommand::PrefixPower { c, base, prefix, d_max }) => {
            let t = find_power_with_prefix(*c, *base, prefix, *d_max)?;
            writeln!(out, "d={} e={} f={}", t.d, t.e, t.f)?;
        }
        Command::Witness(WitnessCommand::Extension { primes, base, prefix, d_max }) => {
            let ext = find_extension(primes, *base, prefix, *d_max)?;
            writeln!(out, "a'={} d={} e={} f={}", ext.a_prime, ext.d, ext.e, ext.f)?;
        }
        Command::Fool { dfao, base, claim, c_max, d_max, csv } => {
            let d = load(dfao)?;
            let claim = match claim {
                ClaimArg::Value => Claim::Value,
                ClaimArg::Divisibility => Claim::Divisibility,
            };
            let id = dfao.display().to_string();
            let report = fooling_report(&d, &id, *base, claim, *c_max, *d_max)?;
            report.verify(&d)?;
            if *csv {
                write!(out, "{}", report.to_csv())?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            return Ok(EXIT_FOUND);
        }
    }
    Ok(EXIT_OK)
}
