//! Plain-text form of a Delaney symbol:
//!
//! ```text
//! d=3 size=1
//! r0: 0
//! r1: 0
//! r2: 0
//! r3: 0
//! m01: [4]
//! m12: [3]
//! m23: [4]
//! ```
//!
//! Generator lines list images in one-line notation. The parser also accepts
//! everything on one line, `|S|=` for `size=`, parenthesised image lists,
//! commas between values and `#` comments.

use std::fmt;
use std::str::FromStr;

use super::{DelaneySymbol, SymbolError};

impl fmt::Display for DelaneySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={} size={}", self.dim, self.size())?;
        for (i, r) in self.ops.iter().enumerate() {
            write!(f, "r{i}:")?;
            for x in r {
                write!(f, " {x}")?;
            }
            writeln!(f)?;
        }
        for (i, m) in self.labels.iter().enumerate() {
            let vals: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            writeln!(f, "m{}{}: [{}]", i, i + 1, vals.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Open(char),
    Close(char),
}

#[derive(Debug, Clone)]
struct Token<'a> {
    tok: Tok<'a>,
    line: usize,
    column: usize,
}

fn lex<'a>(input: &'a str) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    for (ln, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut start: Option<usize> = None;
        let flush = |start: &mut Option<usize>, end: usize, out: &mut Vec<Token<'a>>| {
            if let Some(s) = start.take() {
                out.push(Token { tok: Tok::Word(&line[s..end]), line: ln + 1, column: s + 1 });
            }
        };
        for (i, c) in line.char_indices() {
            match c {
                '(' | '[' | ')' | ']' | ',' => {
                    flush(&mut start, i, &mut out);
                    let tok = match c {
                        '(' | '[' => Tok::Open(c),
                        ')' | ']' => Tok::Close(c),
                        _ => continue,
                    };
                    out.push(Token { tok, line: ln + 1, column: i + 1 });
                }
                c if c.is_whitespace() => flush(&mut start, i, &mut out),
                _ => {
                    if start.is_none() {
                        start = Some(i);
                    }
                }
            }
        }
        flush(&mut start, line.len(), &mut out);
    }
    out
}

fn syntax(t: Option<&Token<'_>>, end: (usize, usize), message: impl Into<String>) -> SymbolError {
    let (line, column) = t.map(|t| (t.line, t.column)).unwrap_or(end);
    SymbolError::Syntax { line, column, message: message.into() }
}

enum Key {
    Op(usize),
    Label(usize),
}

fn parse_key(w: &str) -> Option<Key> {
    let body = w.strip_suffix(':')?;
    if let Some(i) = body.strip_prefix('r') {
        return i.parse().ok().map(Key::Op);
    }
    let digits = body.strip_prefix('m')?.as_bytes();
    if digits.len() != 2 || !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let (i, j) = ((digits[0] - b'0') as usize, (digits[1] - b'0') as usize);
    (j == i + 1).then_some(Key::Label(i))
}

fn header_value<'a>(w: &'a str, keys: &[&str]) -> Option<&'a str> {
    keys.iter().find_map(|k| w.strip_prefix(k))
}

impl FromStr for DelaneySymbol {
    type Err = SymbolError;

    fn from_str(input: &str) -> Result<Self, SymbolError> {
        let toks = lex(input);
        let end = (input.lines().count().max(1), input.lines().last().map_or(1, |l| l.len() + 1));
        let mut pos = 0;

        let mut header = |keys: &[&str], what: &str| -> Result<usize, SymbolError> {
            let t = toks.get(pos);
            let value = match t.map(|t| &t.tok) {
                Some(Tok::Word(w)) => header_value(w, keys),
                _ => None,
            };
            let value = value.ok_or_else(|| syntax(t, end, format!("expected {}<n>", keys[0])))?;
            pos += 1;
            value
                .parse()
                .map_err(|_| syntax(t, end, format!("{what} must be a non-negative integer")))
        };
        let dim = header(&["d="], "dimension")?;
        let size = header(&["size=", "|S|="], "size")?;
        if dim != 2 && dim != 3 {
            return Err(syntax(toks.first(), end, format!("dimension must be 2 or 3, got {dim}")));
        }
        if size == 0 {
            return Err(syntax(toks.get(1), end, "size must be positive"));
        }

        let mut ops: Vec<Option<Vec<usize>>> = vec![None; dim + 1];
        let mut labels: Vec<Option<Vec<u32>>> = vec![None; dim];
        while pos < toks.len() {
            let key_tok = &toks[pos];
            let key = match &key_tok.tok {
                Tok::Word(w) => parse_key(w),
                _ => None,
            };
            let Some(key) = key else {
                return Err(syntax(Some(key_tok), end, "expected r<i>: or m<i><i+1>:"));
            };
            pos += 1;

            let mut values: Vec<(u64, &Token<'_>)> = Vec::new();
            let mut open: Option<char> = None;
            while let Some(t) = toks.get(pos) {
                match &t.tok {
                    Tok::Open(c) if open.is_none() && values.is_empty() => open = Some(*c),
                    Tok::Close(c) if open.is_some_and(|o| matches!((o, *c), ('(', ')') | ('[', ']'))) => {
                        open = None;
                        pos += 1;
                        break;
                    }
                    Tok::Word(w) if parse_key(w).is_some() && open.is_none() => break,
                    Tok::Word(w) => {
                        let v = w
                            .parse()
                            .map_err(|_| syntax(Some(t), end, format!("expected a number, found '{w}'")))?;
                        values.push((v, t));
                    }
                    _ => return Err(syntax(Some(t), end, "unexpected bracket")),
                }
                pos += 1;
            }
            if open.is_some() {
                return Err(syntax(None, end, "unclosed bracket"));
            }
            if values.len() != size {
                return Err(syntax(
                    Some(key_tok),
                    end,
                    format!("expected {size} values, found {}", values.len()),
                ));
            }

            match key {
                Key::Op(i) => {
                    if i > dim {
                        return Err(syntax(Some(key_tok), end, format!("no generator r{i} when d = {dim}")));
                    }
                    if ops[i].is_some() {
                        return Err(syntax(Some(key_tok), end, format!("r{i} given twice")));
                    }
                    let mut r = Vec::with_capacity(size);
                    for (v, t) in values {
                        if v as usize >= size {
                            return Err(syntax(Some(t), end, format!("image {v} outside 0..{size}")));
                        }
                        r.push(v as usize);
                    }
                    ops[i] = Some(r);
                }
                Key::Label(i) => {
                    if i >= dim {
                        return Err(syntax(Some(key_tok), end, format!("no label m{}{} when d = {dim}", i, i + 1)));
                    }
                    if labels[i].is_some() {
                        return Err(syntax(Some(key_tok), end, format!("m{}{} given twice", i, i + 1)));
                    }
                    let mut m = Vec::with_capacity(size);
                    for (v, t) in values {
                        let v = u32::try_from(v).map_err(|_| syntax(Some(t), end, "label too large"))?;
                        m.push(v);
                    }
                    labels[i] = Some(m);
                }
            }
        }

        let ops = ops
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| syntax(None, end, format!("missing r{i}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| syntax(None, end, format!("missing m{}{}", i, i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        let sym = DelaneySymbol::new(dim, ops, labels)?;
        sym.check_involutions()?;
        Ok(sym)
    }
}
