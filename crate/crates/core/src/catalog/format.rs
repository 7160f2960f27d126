//! Text formats for functions.
//!
//! ```text
//! # lookup table: fixed-width hex entries, any whitespace layout
//! lut id=small n=3 m=3: 00 01 03 02 07 06 04 05
//!
//! # univariate polynomial over F_2^n with the given modulus; coefficients
//! # are g^k (g = 0x02), b^k for another base b, or a raw element
//! uni id=cube n=5 mod=0x25: (0x01,3)
//! uni n=7 mod=0x83: (0x02^92,96) (g^50,80) (0x01,66)
//! ```
//!
//! A file without any `lut`/`uni` header is read as one bare hex table
//! (commas and brackets allowed) with `n = m = log2(length)`.

use crate::catalog::{Coefficient, FunctionRecord, Source, Term};
use crate::error::ParseError;
use crate::field::{is_irreducible, FieldSpec};
use crate::gf2::MAX_DIM;
use crate::vbf::Vbf;

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { line, column: col, message: message.into() })
}

/// Lines with comments removed, tagged with 1-based line numbers.
fn clean_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_once('#').map_or(l, |(a, _)| a)))
        .collect()
}

/// Splits `s` on characters matching `sep`; `offset` is the byte column of
/// `s` inside its line.
fn split_tokens<'a>(s: &'a str, line: usize, offset: usize, sep: impl Fn(char) -> bool) -> Vec<Tok<'a>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if sep(c) {
            if let Some(st) = start.take() {
                out.push(Tok { text: &s[st..i], line, col: offset + st + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push(Tok { text: &s[st..], line, col: offset + st + 1 });
    }
    out
}

fn is_header(line: &str) -> bool {
    let t = line.trim_start();
    ["lut", "uni"].iter().any(|k| {
        t.strip_prefix(k).is_some_and(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
    })
}

fn parse_hex(tok: &Tok) -> PResult<u64> {
    let digits = tok.text.strip_prefix("0x").unwrap_or(tok.text);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return err(tok.line, tok.col, format!("'{}' is not a hexadecimal value", tok.text));
    }
    u64::from_str_radix(digits, 16)
        .or_else(|_| err(tok.line, tok.col, format!("'{}' is too large", tok.text)))
}

fn parse_dim(tok: &Tok, value: &str) -> PResult<usize> {
    match value.parse::<usize>() {
        Ok(d) if (1..=MAX_DIM).contains(&d) => Ok(d),
        Ok(d) => err(tok.line, tok.col, format!("dimension {d} is outside 1..={MAX_DIM}")),
        Err(_) => err(tok.line, tok.col, format!("'{value}' is not a dimension")),
    }
}

fn check_table(entries: &[(u64, Tok)], n: usize, m: usize, end: (usize, usize)) -> PResult<Vec<u32>> {
    let want = 1usize << n;
    if entries.len() != want {
        let (line, col) = entries.get(want).map_or(end, |(_, t)| (t.line, t.col));
        return err(line, col, format!("expected {want} table entries, found {}", entries.len()));
    }
    let mut table = Vec::with_capacity(want);
    for (v, t) in entries {
        if *v >> m != 0 {
            return err(t.line, t.col, format!("entry {v:#x} does not fit in {m} bits"));
        }
        table.push(*v as u32);
    }
    Ok(table)
}

fn table_sep(c: char) -> bool {
    c.is_whitespace() || matches!(c, ',' | '[' | ']' | '{' | '}' | '(' | ')' | ';')
}

struct Header<'a> {
    kind: Tok<'a>,
    id: String,
    n: Option<(usize, Tok<'a>)>,
    m: Option<usize>,
    modulus: Option<(u32, Tok<'a>)>,
}

fn parse_header<'a>(line: usize, text: &'a str) -> PResult<(Header<'a>, &'a str, usize)> {
    let Some(colon) = text.find(':') else {
        return err(line, text.len() + 1, "header must end with ':'");
    };
    let toks = split_tokens(&text[..colon], line, 0, char::is_whitespace);
    let mut h = Header { kind: toks[0], id: String::new(), n: None, m: None, modulus: None };
    for tok in &toks[1..] {
        let Some((key, value)) = tok.text.split_once('=') else {
            return err(tok.line, tok.col, format!("expected key=value, found '{}'", tok.text));
        };
        match key {
            "id" => {
                if value.is_empty()
                    || !value.chars().all(|c| c.is_ascii_alphanumeric() || "_.-@".contains(c))
                {
                    return err(tok.line, tok.col, format!("invalid id '{value}'"));
                }
                h.id = value.to_string();
            }
            "n" => h.n = Some((parse_dim(tok, value)?, *tok)),
            "m" => h.m = Some(parse_dim(tok, value)?),
            "mod" => {
                let v = parse_hex(&Tok { text: value, ..*tok })?;
                if v >> 17 != 0 {
                    return err(tok.line, tok.col, format!("modulus {v:#x} is too large"));
                }
                h.modulus = Some((v as u32, *tok));
            }
            _ => return err(tok.line, tok.col, format!("unknown header key '{key}'")),
        }
    }
    Ok((h, &text[colon + 1..], colon + 1))
}

fn parse_coefficient(text: &str, n: usize, line: usize, col: usize) -> PResult<Coefficient> {
    let limit = 1u64 << n;
    let (base_text, exp_text) = match text.split_once('^') {
        Some((b, e)) => (b.trim(), Some(e.trim())),
        None => (text.trim(), None),
    };
    let base = if base_text == "g" {
        2
    } else {
        parse_hex(&Tok { text: base_text, line, col })?
    };
    if base >= limit {
        return err(line, col, format!("coefficient {base:#x} is not an element of F_2^{n}"));
    }
    match exp_text {
        Some(e) => match e.parse::<u64>() {
            Ok(exp) => Ok(Coefficient::Power { base: base as u32, exp }),
            Err(_) => err(line, col, format!("'{e}' is not a power")),
        },
        None if base_text == "g" => Ok(Coefficient::Power { base: 2, exp: 1 }),
        None => Ok(Coefficient::Element(base as u32)),
    }
}

fn parse_terms(lines: &[(usize, usize, &str)], n: usize) -> PResult<Vec<Term>> {
    let chars: Vec<(char, usize, usize)> = lines
        .iter()
        .flat_map(|&(line, off, s)| s.char_indices().map(move |(i, c)| (c, line, off + i + 1)))
        .collect();
    let mut terms = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (c, line, col) = chars[k];
        if c.is_whitespace() || c == '+' {
            k += 1;
            continue;
        }
        if c != '(' {
            return err(line, col, format!("expected '(' to start a term, found '{c}'"));
        }
        let Some(close) = chars[k..].iter().position(|&(c, _, _)| c == ')') else {
            return err(line, col, "unterminated term");
        };
        let body: String = chars[k + 1..k + close].iter().map(|&(c, _, _)| c).collect();
        let Some((coef, exp)) = body.split_once(',') else {
            return err(line, col, "a term is written (coefficient,exponent)");
        };
        let coefficient = parse_coefficient(coef, n, line, col + 1)?;
        let exponent = match exp.trim().parse::<u64>() {
            Ok(e) if e < 1 << n => e,
            Ok(e) => return err(line, col, format!("exponent {e} exceeds 2^{n}-1")),
            Err(_) => return err(line, col, format!("'{}' is not an exponent", exp.trim())),
        };
        terms.push(Term { coefficient, exponent });
        k += close + 1;
    }
    Ok(terms)
}

fn parse_record(header_line: usize, header: &str, body: &[(usize, &str)]) -> PResult<FunctionRecord> {
    let (h, rest, rest_off) = parse_header(header_line, header)?;
    let mut payload: Vec<(usize, usize, &str)> = vec![(header_line, rest_off, rest)];
    payload.extend(body.iter().map(|&(l, s)| (l, 0, s)));
    let Some((n, n_tok)) = h.n else {
        return err(h.kind.line, h.kind.col, "header is missing n=");
    };
    let end = payload.last().map_or((header_line, 1), |&(l, off, s)| (l, off + s.len() + 1));
    match h.kind.text {
        "lut" => {
            let m = h.m.unwrap_or(n);
            let mut entries = Vec::new();
            for &(line, off, s) in &payload {
                for tok in split_tokens(s, line, off, table_sep) {
                    entries.push((parse_hex(&tok)?, tok));
                }
            }
            let table = check_table(&entries, n, m, end)?;
            Ok(FunctionRecord { id: h.id, n, m, source: Source::Lut(table) })
        }
        _ => {
            let Some((modulus, mod_tok)) = h.modulus else {
                return err(h.kind.line, h.kind.col, "univariate header is missing mod=");
            };
            if let Some(m) = h.m {
                if m != n {
                    return err(n_tok.line, n_tok.col, "univariate functions have m = n");
                }
            }
            if 31 - modulus.leading_zeros() != n as u32 || !is_irreducible(modulus) {
                return err(
                    mod_tok.line,
                    mod_tok.col,
                    format!("modulus {modulus:#x} is not an irreducible polynomial of degree {n}"),
                );
            }
            let terms = parse_terms(&payload, n)?;
            Ok(FunctionRecord { id: h.id, n, m: n, source: Source::Univariate { modulus, terms } })
        }
    }
}

fn parse_bare(lines: &[(usize, &str)]) -> PResult<FunctionRecord> {
    let mut entries = Vec::new();
    for &(line, s) in lines {
        for tok in split_tokens(s, line, 0, table_sep) {
            entries.push((parse_hex(&tok)?, tok));
        }
    }
    let len = entries.len();
    if len < 2 || !len.is_power_of_two() {
        let (line, col) = entries.last().map_or((1, 1), |(_, t)| (t.line, t.col));
        return err(line, col, format!("a bare table needs a power-of-two length, found {len}"));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_DIM {
        return err(1, 1, format!("dimension {n} is outside 1..={MAX_DIM}"));
    }
    let table = check_table(&entries, n, n, (1, 1))?;
    Ok(FunctionRecord { id: String::new(), n, m: n, source: Source::Lut(table) })
}

/// Every record in `text`.
pub fn parse_functions(text: &str) -> PResult<Vec<FunctionRecord>> {
    let lines = clean_lines(text);
    let headers: Vec<usize> = (0..lines.len()).filter(|&i| is_header(lines[i].1)).collect();
    if headers.is_empty() {
        return Ok(vec![parse_bare(&lines)?]);
    }
    if let Some(&(line, s)) = lines[..headers[0]].iter().find(|(_, s)| !s.trim().is_empty()) {
        let col = s.len() - s.trim_start().len() + 1;
        return err(line, col, "content before the first lut/uni header");
    }
    let mut out = Vec::with_capacity(headers.len());
    for (k, &h) in headers.iter().enumerate() {
        let end = headers.get(k + 1).copied().unwrap_or(lines.len());
        out.push(parse_record(lines[h].0, lines[h].1, &lines[h + 1..end])?);
    }
    Ok(out)
}

/// Exactly one record.
pub fn parse_function(text: &str) -> PResult<FunctionRecord> {
    let mut all = parse_functions(text)?;
    if all.len() != 1 {
        return err(1, 1, format!("expected one function, found {}", all.len()));
    }
    Ok(all.remove(0))
}

fn hex_width(bits: usize) -> usize {
    bits.div_ceil(4).max(1)
}

fn table_rows(table: &[u32], m: usize) -> String {
    let w = hex_width(m);
    let mut out = String::new();
    for row in table.chunks(16) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:0w$x}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn element(v: u32, n: usize) -> String {
    format!("0x{v:0w$x}", w = hex_width(n).max(2))
}

/// Canonical text of a record.
pub fn write_record(rec: &FunctionRecord) -> String {
    let id = if rec.id.is_empty() { String::new() } else { format!(" id={}", rec.id) };
    match &rec.source {
        Source::Lut(table) => {
            format!("lut{id} n={} m={}:\n{}", rec.n, rec.m, table_rows(table, rec.m))
        }
        Source::Univariate { modulus, terms } => {
            let mut out = format!("uni{id} n={} mod={modulus:#x}:\n", rec.n);
            for chunk in terms.chunks(8) {
                let items: Vec<String> = chunk
                    .iter()
                    .map(|t| match t.coefficient {
                        Coefficient::Power { base, exp } => {
                            format!("({}^{exp},{})", element(base, rec.n), t.exponent)
                        }
                        Coefficient::Element(e) => format!("({},{})", element(e, rec.n), t.exponent),
                    })
                    .collect();
                out.push_str(&items.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

/// `lut` text of a function.
pub fn write_lut(id: &str, f: &Vbf) -> String {
    write_record(&FunctionRecord::from_vbf(id, f))
}

/// Header-less hex table.
pub fn write_bare(f: &Vbf) -> String {
    table_rows(f.table(), f.m())
}

/// Univariate text of a square function, via interpolation over `field`.
pub fn write_univariate(id: &str, f: &Vbf, field: &FieldSpec) -> crate::error::Result<String> {
    let coeffs = f.univariate_coefficients(field)?;
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| Term { coefficient: Coefficient::Element(c), exponent: k as u64 })
        .collect();
    Ok(write_record(&FunctionRecord {
        id: id.to_string(),
        n: f.n(),
        m: f.n(),
        source: Source::Univariate { modulus: field.modulus(), terms },
    }))
}
