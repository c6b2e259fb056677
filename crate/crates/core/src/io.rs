//! Text formats for instances and solutions.
//!
//! Instance file (whitespace separated, lines starting with `#` are comments):
//!
//! ```text
//! BBQP 1
//! m n
//! c_1 .. c_m
//! d_1 .. d_n
//! q_11 .. q_1n
//! ..
//! q_m1 .. q_mn
//! ```
//!
//! A comment of the form `# name: <label>` sets the instance name.
//!
//! Solution file: `m n`, then the `x` bits as one `0`/`1` string, then the `y` bits.
//!
//! BQP file (input of `reduce-bqp`): `BQP 1`, `n`, the `n` linear terms, then
//! `n` rows of `n` integers.

use crate::error::{Error, Result};
use crate::model::{bits_to_string, Instance, Solution};
use std::fmt::Write as _;
use std::path::Path;

const INSTANCE_MAGIC: &str = "BBQP";
const BQP_MAGIC: &str = "BQP";
const FORMAT_VERSION: &str = "1";
const NAME_PREFIX: &str = "name:";

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn error(&self, column: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            msg: msg.into(),
        }
    }

    fn integers(&self, expected: usize, what: &str) -> Result<Vec<i64>> {
        if self.tokens.len() != expected {
            let column = self
                .tokens
                .get(expected)
                .or(self.tokens.last())
                .map_or(1, |t| t.column);
            return Err(self.error(
                column,
                format!("{what}: expected {expected} integers, found {}", self.tokens.len()),
            ));
        }
        self.tokens
            .iter()
            .map(|t| {
                t.text.parse::<i64>().map_err(|_| {
                    self.error(t.column, format!("{what}: `{}` is not an integer", t.text))
                })
            })
            .collect()
    }
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &line[s..pos],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(pos),
            _ => {}
        }
    }
    tokens
}

/// Splits text into non-empty, non-comment lines and collects the `name:` comment.
fn content_lines(text: &str) -> (Vec<Line<'_>>, Option<String>) {
    let mut name = None;
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if name.is_none() {
                if let Some(label) = comment.trim().strip_prefix(NAME_PREFIX) {
                    name = Some(label.trim().to_string());
                }
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        lines.push(Line {
            number: idx + 1,
            tokens: tokenize(raw),
        });
    }
    (lines, name)
}

fn end_of_input(text: &str, what: &str) -> Error {
    Error::Parse {
        line: text.lines().count() + 1,
        column: 1,
        msg: format!("unexpected end of input, expected {what}"),
    }
}

fn check_header(line: &Line<'_>, magic: &str) -> Result<()> {
    let ok = line.tokens.len() == 2
        && line.tokens[0].text == magic
        && line.tokens[1].text == FORMAT_VERSION;
    if !ok {
        return Err(line.error(1, format!("malformed header, expected `{magic} {FORMAT_VERSION}`")));
    }
    Ok(())
}

fn dimension(line: &Line<'_>, token: usize, what: &str) -> Result<usize> {
    let t = &line.tokens[token];
    match t.text.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(line.error(t.column, format!("{what} must be a positive integer, got `{}`", t.text))),
    }
}

fn trailing(lines: &[Line<'_>], used: usize) -> Result<()> {
    match lines.get(used) {
        Some(extra) => Err(extra.error(1, "unexpected trailing content")),
        None => Ok(()),
    }
}

/// Parses the canonical instance format.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let (lines, name) = content_lines(text);
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| end_of_input(text, "header"))?;
    check_header(header, INSTANCE_MAGIC)?;

    let dims = it.next().ok_or_else(|| end_of_input(text, "dimensions line"))?;
    if dims.tokens.len() != 2 {
        return Err(dims.error(1, "dimensions line must hold exactly `m n`"));
    }
    let m = dimension(dims, 0, "m")?;
    let n = dimension(dims, 1, "n")?;

    let c = it
        .next()
        .ok_or_else(|| end_of_input(text, "c vector"))?
        .integers(m, "c vector")?;
    let d = it
        .next()
        .ok_or_else(|| end_of_input(text, "d vector"))?
        .integers(n, "d vector")?;
    let mut q = Vec::with_capacity(m * n);
    for i in 0..m {
        let row = it
            .next()
            .ok_or_else(|| end_of_input(text, &format!("row {} of Q", i + 1)))?;
        q.extend(row.integers(n, &format!("row {} of Q", i + 1))?);
    }
    trailing(&lines, 4 + m)?;

    let inst = Instance::new(m, n, q, c, d).map_err(|e| match e {
        Error::Overflow(_) => Error::Parse {
            line: header.number,
            column: 1,
            msg: e.to_string(),
        },
        other => other,
    })?;
    Ok(match name {
        Some(label) => inst.with_name(label),
        None => inst,
    })
}

fn join(values: &[i64]) -> String {
    let mut out = String::new();
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{v}").unwrap();
    }
    out
}

/// Canonical text of an instance; [`parse_instance`] inverts it exactly.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    if let Some(name) = &inst.name {
        writeln!(out, "# {NAME_PREFIX} {name}").unwrap();
    }
    writeln!(out, "{INSTANCE_MAGIC} {FORMAT_VERSION}").unwrap();
    writeln!(out, "{} {}", inst.m(), inst.n()).unwrap();
    writeln!(out, "{}", join(inst.c())).unwrap();
    writeln!(out, "{}", join(inst.d())).unwrap();
    for i in 0..inst.m() {
        writeln!(out, "{}", join(inst.row(i))).unwrap();
    }
    out
}

fn parse_bits(line: &Line<'_>, len: usize, what: &str) -> Result<Vec<bool>> {
    if line.tokens.len() != 1 {
        return Err(line.error(1, format!("{what}: expected one contiguous 0/1 string")));
    }
    let tok = &line.tokens[0];
    let mut bits = Vec::with_capacity(len);
    for (k, ch) in tok.text.chars().enumerate() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => {
                return Err(line.error(tok.column + k, format!("{what}: `{other}` is not a bit")));
            }
        }
    }
    if bits.len() != len {
        return Err(line.error(
            tok.column,
            format!("{what}: expected {len} bits, found {}", bits.len()),
        ));
    }
    Ok(bits)
}

pub fn parse_solution(text: &str) -> Result<Solution> {
    let (lines, _) = content_lines(text);
    let mut it = lines.iter();
    let dims = it.next().ok_or_else(|| end_of_input(text, "dimensions line"))?;
    if dims.tokens.len() != 2 {
        return Err(dims.error(1, "dimensions line must hold exactly `m n`"));
    }
    let m = dimension(dims, 0, "m")?;
    let n = dimension(dims, 1, "n")?;
    let x = parse_bits(it.next().ok_or_else(|| end_of_input(text, "x bits"))?, m, "x")?;
    let y = parse_bits(it.next().ok_or_else(|| end_of_input(text, "y bits"))?, n, "y")?;
    trailing(&lines, 3)?;
    Ok(Solution::new(x, y))
}

pub fn serialize_solution(sol: &Solution) -> String {
    format!(
        "{} {}\n{}\n{}\n",
        sol.m(),
        sol.n(),
        bits_to_string(&sol.x),
        bits_to_string(&sol.y)
    )
}

/// A plain BQP `max x^T Q' x + c' x`, row-major `n x n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BqpProblem {
    pub n: usize,
    pub q: Vec<i64>,
    pub c: Vec<i64>,
}

pub fn parse_bqp(text: &str) -> Result<BqpProblem> {
    let (lines, _) = content_lines(text);
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| end_of_input(text, "header"))?;
    check_header(header, BQP_MAGIC)?;
    let dims = it.next().ok_or_else(|| end_of_input(text, "dimension line"))?;
    if dims.tokens.len() != 1 {
        return Err(dims.error(1, "dimension line must hold exactly `n`"));
    }
    let n = dimension(dims, 0, "n")?;
    let c = it
        .next()
        .ok_or_else(|| end_of_input(text, "c' vector"))?
        .integers(n, "c' vector")?;
    let mut q = Vec::with_capacity(n * n);
    for i in 0..n {
        let row = it
            .next()
            .ok_or_else(|| end_of_input(text, &format!("row {} of Q'", i + 1)))?;
        q.extend(row.integers(n, &format!("row {} of Q'", i + 1))?);
    }
    trailing(&lines, 3 + n)?;
    Ok(BqpProblem { n, q, c })
}

pub fn serialize_bqp(bqp: &BqpProblem) -> String {
    let mut out = String::new();
    writeln!(out, "{BQP_MAGIC} {FORMAT_VERSION}").unwrap();
    writeln!(out, "{}", bqp.n).unwrap();
    writeln!(out, "{}", join(&bqp.c)).unwrap();
    for row in bqp.q.chunks(bqp.n) {
        writeln!(out, "{}", join(row)).unwrap();
    }
    out
}

/// Reads an instance file; an unnamed instance takes the file stem as its name.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let inst = parse_instance(&std::fs::read_to_string(path)?)?;
    if inst.name.is_some() {
        return Ok(inst);
    }
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => inst.with_name(stem),
        None => inst,
    })
}

pub fn load_solution(path: &Path) -> Result<Solution> {
    parse_solution(&std::fs::read_to_string(path)?)
}
