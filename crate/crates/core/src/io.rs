//! Text formats: integer-scaled tensor files, vertex archives and report
//! tables.
//!
//! A tensor file starts with the header `d n Δ` and then lists the `n^d`
//! entries multiplied by `Δ`, row-major, `n` per line. Everything after a
//! `#` is a comment. The inline form packs the same data on one line as
//! `d n Δ: e1 e2 ...`.
//!
//! An archive holds one vertex class per line with tab-separated columns
//! `N`, `Δ`, `per`, `sym`, `aut`, `tensor`, where `tensor` is the inline
//! form of the canonical representative. Lines starting with `#` are
//! comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::enumerate::{distribution, ClassifiedVertex, Key};
use crate::scalar::{approx, Rational};
use crate::stochastic::denominator_lcm;
use crate::tensor::{cell_count, coords_of, Tensor};

/// Largest tensor a file may describe.
pub const MAX_CELLS: usize = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArchiveError {
    #[error("archive line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("archive line {line}: {source}")]
    Tensor {
        line: usize,
        #[source]
        source: ParseError,
    },
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut rest = body;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            out.push(Token {
                text: &tail[..len],
                line: i + 1,
                column: offset + start + 1,
            });
            offset += start + len;
            rest = &tail[len..];
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_usize(tok: &Token<'_>, what: &str) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| err(tok.line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn build(toks: &[Token<'_>], end: (usize, usize)) -> Result<Tensor<Rational>, ParseError> {
    let at_end = |what: &str| err(end.0, end.1, format!("unexpected end of input, expected {what}"));
    let dim_tok = toks.first().ok_or_else(|| at_end("dimension"))?;
    let dim = parse_usize(dim_tok, "dimension")?;
    let order_tok = toks.get(1).ok_or_else(|| at_end("order"))?;
    let order = parse_usize(order_tok, "order")?;
    let delta_tok = toks.get(2).ok_or_else(|| at_end("denominator"))?;
    let delta: BigInt = delta_tok
        .text
        .parse()
        .map_err(|_| err(delta_tok.line, delta_tok.column, format!("expected denominator, found `{}`", delta_tok.text)))?;
    if dim == 0 {
        return Err(err(dim_tok.line, dim_tok.column, "dimension must be positive"));
    }
    if order == 0 {
        return Err(err(order_tok.line, order_tok.column, "order must be positive"));
    }
    if !delta.is_positive() {
        return Err(err(delta_tok.line, delta_tok.column, "denominator must be positive"));
    }
    let cells = match cell_count(dim, order) {
        Some(c) if c <= MAX_CELLS => c,
        _ => return Err(err(dim_tok.line, dim_tok.column, "tensor too large")),
    };
    let body = &toks[3..];
    if body.len() < cells {
        return Err(at_end(&format!("{cells} entries, found {}", body.len())));
    }
    if let Some(extra) = body.get(cells) {
        return Err(err(extra.line, extra.column, format!("more than {cells} entries")));
    }
    let entries = body
        .iter()
        .map(|tok| {
            tok.text
                .parse::<BigInt>()
                .map(|v| Rational::new(v, delta.clone()))
                .map_err(|_| err(tok.line, tok.column, format!("expected integer, found `{}`", tok.text)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::new(dim, order, entries).expect("length checked"))
}

fn end_of(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, str::len) + 1;
    (line, column)
}

/// Parses a tensor file.
pub fn parse_tensor(text: &str) -> Result<Tensor<Rational>, ParseError> {
    build(&tokens(text), end_of(text))
}

/// Parses the one-line form `d n Δ: entries`.
pub fn parse_inline(text: &str) -> Result<Tensor<Rational>, ParseError> {
    let (head, body) = text
        .split_once(':')
        .ok_or_else(|| err(1, 1, "expected `d n Δ:` before the entries"))?;
    if text.contains('\n') {
        return Err(err(1, text.find('\n').unwrap_or(0) + 1, "inline tensor spans several lines"));
    }
    let mut toks = tokens(head);
    if toks.len() != 3 {
        return Err(err(1, head.len() + 1, "header must be `d n Δ`"));
    }
    let shift = head.len() + 1;
    toks.extend(tokens(body).into_iter().map(|t| Token {
        column: t.column + shift,
        ..t
    }));
    build(&toks, (1, text.len() + 1))
}

fn scaled(t: &Tensor<Rational>) -> (BigInt, Vec<BigInt>) {
    let delta = denominator_lcm(t);
    let values = t
        .entries()
        .iter()
        .map(|v| (v * Rational::from_integer(delta.clone())).to_integer())
        .collect();
    (delta, values)
}

/// Writes `t` as a tensor file with `Δ` the least common denominator.
/// Dimensions of three or more get a comment before each `n x n` plane.
pub fn emit_tensor(t: &Tensor<Rational>) -> String {
    let (delta, values) = scaled(t);
    let (d, n) = (t.dim(), t.order());
    let mut out = format!("{d} {n} {delta}\n");
    for (row, chunk) in values.chunks(n).enumerate() {
        if d >= 3 && row % n == 0 {
            let head = coords_of(row * n, d, n);
            let fixed: Vec<String> = head[..d - 2].iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "# plane ({},*,*)", fixed.join(","));
        }
        let line: Vec<String> = chunk.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn emit_inline(t: &Tensor<Rational>) -> String {
    let (delta, values) = scaled(t);
    let body: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("{} {} {delta}: {}", t.dim(), t.order(), body.join(" "))
}

/// `256/27 (9.48)`; integers print without the approximation.
pub fn format_permanent(p: &Rational) -> String {
    if p.is_integer() {
        p.to_string()
    } else {
        format!("{p} ({:.2})", approx(p))
    }
}

pub const ARCHIVE_HEADER: &str = "# N\tdelta\tper\tsym\taut\ttensor";

pub fn emit_record(v: &ClassifiedVertex) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        v.support_size,
        v.delta,
        v.permanent,
        u8::from(v.symmetric),
        v.automorphisms,
        emit_inline(&v.tensor)
    )
}

/// Writes classes in archive order: by support size, then canonical entries.
pub fn emit_archive<'a>(classes: impl IntoIterator<Item = &'a ClassifiedVertex>) -> String {
    let mut sorted: Vec<&ClassifiedVertex> = classes.into_iter().collect();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let mut out = String::from(ARCHIVE_HEADER);
    out.push('\n');
    for v in sorted {
        out.push_str(&emit_record(v));
        out.push('\n');
    }
    out
}

/// Parses one record. The support size and `Δ` are checked against the
/// tensor; the permanent, symmetry flag and automorphism order are taken
/// as written (see [`ClassifiedVertex::verify`]).
pub fn parse_record(text: &str, line: usize) -> Result<ClassifiedVertex, ArchiveError> {
    let bad = |message: String| ArchiveError::Record { line, message };
    let fields: Vec<&str> = text.split('\t').collect();
    if fields.len() != 6 {
        return Err(bad(format!("expected 6 tab-separated fields, found {}", fields.len())));
    }
    let support_size: usize = fields[0].parse().map_err(|_| bad(format!("bad support size `{}`", fields[0])))?;
    let delta: BigInt = fields[1].parse().map_err(|_| bad(format!("bad denominator `{}`", fields[1])))?;
    let permanent: Rational = fields[2].parse().map_err(|_| bad(format!("bad permanent `{}`", fields[2])))?;
    let symmetric = match fields[3] {
        "0" => false,
        "1" => true,
        other => return Err(bad(format!("bad symmetry flag `{other}`"))),
    };
    let automorphisms: usize = fields[4].parse().map_err(|_| bad(format!("bad automorphism order `{}`", fields[4])))?;
    let tensor = parse_inline(fields[5]).map_err(|source| ArchiveError::Tensor { line, source })?;
    let actual = tensor.entries().iter().filter(|v| !v.is_zero()).count();
    if actual != support_size {
        return Err(bad(format!("support size {support_size} but tensor has {actual}")));
    }
    if denominator_lcm(&tensor) != delta {
        return Err(bad(format!("denominator {delta} does not match tensor")));
    }
    let v = ClassifiedVertex {
        tensor,
        support_size,
        permanent,
        delta,
        symmetric,
        automorphisms,
    };
    if emit_record(&v) != text {
        return Err(bad("record is not in normal form".into()));
    }
    Ok(v)
}

pub fn parse_archive(text: &str) -> Result<Vec<ClassifiedVertex>, ArchiveError> {
    let mut out: Vec<ClassifiedVertex> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let v = parse_record(line, i + 1)?;
        if let Some(prev) = out.last() {
            if prev.sort_key() >= v.sort_key() {
                return Err(ArchiveError::Record {
                    line: i + 1,
                    message: "records out of order".into(),
                });
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn table(label: &str, h: &BTreeMap<u64, usize>) -> String {
    let keys: Vec<String> = h.keys().map(ToString::to_string).collect();
    let counts: Vec<String> = h.values().map(ToString::to_string).collect();
    let widths: Vec<usize> = keys.iter().zip(&counts).map(|(a, b)| a.len().max(b.len())).collect();
    let pad = label.len().max("# of A".len());
    let mut top = format!("{label:<pad$} |");
    let mut bottom = format!("{:<pad$} |", "# of A");
    for ((k, c), w) in keys.iter().zip(&counts).zip(widths) {
        let _ = write!(top, " {k:>w$}");
        let _ = write!(bottom, " {c:>w$}");
    }
    format!("{top}\n{bottom}\n")
}

/// Class count, symmetric count, and the support-size and denominator
/// distributions in a fixed layout.
pub fn render_report(classes: &[ClassifiedVertex]) -> String {
    let symmetric = classes.iter().filter(|c| c.symmetric).count();
    let mut out = format!("classes {}\nsymmetric {}\n\n", classes.len(), symmetric);
    out.push_str(&table("N(A)", &distribution(classes, Key::SupportSize)));
    out.push('\n');
    out.push_str(&table("Delta", &distribution(classes, Key::DenominatorLcm)));
    out
}
