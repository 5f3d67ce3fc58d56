//! Line-oriented automaton file format.
//!
//! ```text
//! LNZDFAO 1
//! base <k>
//! order msd|lsd
//! states <N>
//! initial <q0>
//! outputs <N symbols>
//! transitions
//! <k state indices>      (N rows, state 0 first)
//! end
//! ```
//!
//! UTF-8, LF line endings, decimal integers separated by single spaces.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{Dfao, DfaoError};
use crate::numkit::DigitOrder;

pub const MAGIC: &str = "LNZDFAO";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `{expected}`")]
    MalformedHeader { line: usize, expected: &'static str },
    #[error("line {line}: unsupported format version `{version}`")]
    UnsupportedVersion { line: usize, version: String },
    #[error("line {line}: `{token}` is not a decimal integer")]
    BadInteger { line: usize, token: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    WrongArity { line: usize, expected: usize, found: usize },
    #[error("line {line}: value {value} out of range (must be below {limit})")]
    OutOfRange { line: usize, value: u64, limit: u64 },
    #[error("line {line}: file ends before the transition table is complete")]
    Truncated { line: usize },
    #[error("line {line}: unexpected content after `end`")]
    TrailingGarbage { line: usize },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: DfaoError },
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

/// Serializes an automaton. Output is a pure function of the value.
pub fn write(d: &Dfao) -> String {
    let mut out = String::new();
    let order = match d.order() {
        DigitOrder::MsdFirst => "msd",
        DigitOrder::LsdFirst => "lsd",
    };
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "base {}", d.base()).unwrap();
    writeln!(out, "order {order}").unwrap();
    writeln!(out, "states {}", d.num_states()).unwrap();
    writeln!(out, "initial {}", d.initial()).unwrap();
    out.push_str("outputs");
    for y in d.outputs() {
        write!(out, " {y}").unwrap();
    }
    out.push('\n');
    out.push_str("transitions\n");
    for q in 0..d.num_states() {
        let row: Vec<String> = d.row(q).iter().map(|t| t.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let body = text.strip_suffix('\n').unwrap_or(text);
        Lines { inner: body.split('\n').enumerate(), last: 0 }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let (i, l) = self.inner.next()?;
        self.last = i + 1;
        Some((i + 1, l))
    }

    fn expect(&mut self) -> Result<(usize, &'a str), ParseError> {
        let line = self.last + 1;
        self.next_line().ok_or(ParseError::Truncated { line })
    }
}

fn parse_int(line: usize, token: &str) -> Result<u64, ParseError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::BadInteger { line, token: token.to_string() });
    }
    token.parse().map_err(|_| ParseError::BadInteger { line, token: token.to_string() })
}

fn keyed<'a>(line: usize, text: &'a str, key: &'static str, expected: &'static str) -> Result<&'a str, ParseError> {
    text.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or(ParseError::MalformedHeader { line, expected })
}

fn keyed_int(lines: &mut Lines, key: &'static str, expected: &'static str) -> Result<(usize, u64), ParseError> {
    let (line, text) = lines.expect()?;
    let value = keyed(line, text, key, expected)?;
    Ok((line, parse_int(line, value)?))
}

fn as_usize(line: usize, v: u64) -> Result<usize, ParseError> {
    usize::try_from(v).map_err(|_| ParseError::OutOfRange { line, value: v, limit: usize::MAX as u64 })
}

pub fn read(text: &str) -> Result<Dfao, ParseError> {
    let mut lines = Lines::new(text);

    let (line, magic) = lines.expect()?;
    let version = keyed(line, magic, MAGIC, "LNZDFAO 1")?;
    if version != VERSION.to_string() {
        return Err(ParseError::UnsupportedVersion { line, version: version.to_string() });
    }

    let (base_line, base) = keyed_int(&mut lines, "base", "base <k>")?;
    if base < 2 {
        return Err(ParseError::Invalid { line: base_line, source: DfaoError::InvalidBase(base as usize) });
    }
    let base = as_usize(base_line, base)?;

    let (line, order) = lines.expect()?;
    let order = match keyed(line, order, "order", "order msd|lsd")? {
        "msd" => DigitOrder::MsdFirst,
        "lsd" => DigitOrder::LsdFirst,
        _ => return Err(ParseError::MalformedHeader { line, expected: "order msd|lsd" }),
    };

    let (states_line, states) = keyed_int(&mut lines, "states", "states <N>")?;
    if states == 0 {
        return Err(ParseError::Invalid { line: states_line, source: DfaoError::NoStates });
    }
    let states = as_usize(states_line, states)?;

    let (line, initial) = keyed_int(&mut lines, "initial", "initial <q0>")?;
    if initial >= states as u64 {
        return Err(ParseError::OutOfRange { line, value: initial, limit: states as u64 });
    }

    let (line, text) = lines.expect()?;
    let outputs: Vec<u64> = if text == "outputs" {
        Vec::new()
    } else {
        keyed(line, text, "outputs", "outputs <N symbols>")?
            .split(' ')
            .map(|tok| parse_int(line, tok))
            .collect::<Result<_, _>>()?
    };
    if outputs.len() != states {
        return Err(ParseError::WrongArity { line, expected: states, found: outputs.len() });
    }

    let (line, text) = lines.expect()?;
    if text != "transitions" {
        return Err(ParseError::MalformedHeader { line, expected: "transitions" });
    }

    let mut transitions = Vec::with_capacity(states * base);
    for _ in 0..states {
        let (line, text) = lines.expect()?;
        if text == "end" {
            return Err(ParseError::Truncated { line });
        }
        let row: Vec<&str> = text.split(' ').collect();
        if row.len() != base {
            return Err(ParseError::WrongArity { line, expected: base, found: row.len() });
        }
        for tok in row {
            let t = parse_int(line, tok)?;
            if t >= states as u64 {
                return Err(ParseError::OutOfRange { line, value: t, limit: states as u64 });
            }
            transitions.push(t as usize);
        }
    }

    let (line, text) = lines.expect()?;
    if text != "end" {
        return Err(ParseError::MalformedHeader { line, expected: "end" });
    }
    if let Some((line, _)) = lines.next_line() {
        return Err(ParseError::TrailingGarbage { line });
    }

    Dfao::new(base, order, initial as usize, outputs, transitions)
        .map_err(|source| ParseError::Invalid { line, source })
}

pub fn write_file(d: &Dfao, path: impl AsRef<Path>) -> Result<(), FileError> {
    let path = path.as_ref();
    std::fs::write(path, write(d)).map_err(|source| FileError::Io { path: path.to_path_buf(), source })
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Dfao, FileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| FileError::Io { path: path.to_path_buf(), source })?;
    read(&text).map_err(|source| FileError::Parse { path: path.to_path_buf(), source })
}
