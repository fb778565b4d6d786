//! Text format for measures.
//!
//! ```text
//! # comments run to the end of the line
//! atoms: (0.5, 1.0) (0.9, 0.25)
//! beta: c=1 s=2
//! logbeta: c=1 s=2 g=1
//! ```
//!
//! A document holds exactly one measure. `c` defaults to 1. Errors carry the
//! 1-based line and column of the offending token.

use crate::error::{Error, Result};
use crate::measures::{Atom, Measure};

const MAX_GAMMA: u32 = 32;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err_at(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.column(), message)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(format!("expected `{c}`, found `{x}`"))),
            None => Err(self.err(format!("expected `{c}`, found end of line"))),
        }
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok((start + 1, self.chars[start..self.pos].iter().collect()))
    }

    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-'))
        {
            self.pos += 1;
        }
        let tok: String = self.chars[start..self.pos].iter().collect();
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((start + 1, v)),
            _ if tok.is_empty() => Err(self.err_at(start + 1, "expected a number")),
            _ => Err(self.err_at(start + 1, format!("invalid number `{tok}`"))),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

/// Parses one measure from the text format.
pub fn parse_measure(text: &str) -> Result<Measure> {
    let mut found: Option<(usize, Measure)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        if let Some((first, _)) = &found {
            return Err(Error::Parse {
                line: lineno,
                column: line.chars().take_while(|c| c.is_whitespace()).count() + 1,
                message: format!("a second measure follows the one on line {first}"),
            });
        }
        found = Some((lineno, parse_line(line, lineno)?));
    }
    found
        .map(|(_, m)| m)
        .ok_or_else(|| Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: "no measure found".into(),
        })
}

fn parse_line(line: &str, lineno: usize) -> Result<Measure> {
    let mut cur = Cursor::new(line, lineno);
    let (kind_col, kind) = cur.ident()?;
    cur.expect(':')?;
    match kind.as_str() {
        "atoms" => parse_atoms(&mut cur),
        "beta" | "logbeta" => {
            let keys: &[&str] = if kind == "beta" { &["c", "s"] } else { &["c", "s", "g"] };
            let vals = parse_keyed(&mut cur, keys)?;
            let c = vals[0].map_or(1.0, |v| v.1);
            let (s_col, s) = vals[1].ok_or_else(|| cur.err("missing parameter `s`"))?;
            if !(c > 0.0) {
                let col = vals[0].map_or(kind_col, |v| v.0);
                return Err(cur.err_at(col, format!("c = {c} must be positive")));
            }
            if !(s > 0.0) {
                return Err(cur.err_at(s_col, format!("s = {s} must be positive")));
            }
            if kind == "beta" {
                return Measure::beta(c, s).map_err(|e| cur.err_at(kind_col, e.to_string()));
            }
            let (g_col, g) = vals[2].ok_or_else(|| cur.err("missing parameter `g`"))?;
            if g < 0.0 || g.fract() != 0.0 || g > MAX_GAMMA as f64 {
                return Err(cur.err_at(
                    g_col,
                    format!("g = {g} must be an integer in [0, {MAX_GAMMA}]"),
                ));
            }
            Measure::log_beta(c, s, g as u32).map_err(|e| cur.err_at(kind_col, e.to_string()))
        }
        other => Err(cur.err_at(
            kind_col,
            format!("unknown measure `{other}` (expected atoms, beta or logbeta)"),
        )),
    }
}

fn parse_atoms(cur: &mut Cursor) -> Result<Measure> {
    let mut atoms = Vec::new();
    while !cur.at_end() {
        if !atoms.is_empty() && cur.peek() == Some(',') {
            cur.pos += 1;
            cur.skip_ws();
        }
        cur.expect('(')?;
        let (t_col, t) = cur.number()?;
        cur.expect(',')?;
        let (w_col, w) = cur.number()?;
        cur.expect(')')?;
        if !(0.0..1.0).contains(&t) {
            return Err(cur.err_at(t_col, format!("atom position {t} is outside [0, 1)")));
        }
        if !(w > 0.0) {
            return Err(cur.err_at(w_col, format!("atom weight {w} must be positive")));
        }
        atoms.push(Atom { t, w });
    }
    if atoms.is_empty() {
        return Err(cur.err("expected at least one `(t, w)` pair"));
    }
    Measure::atoms(atoms).map_err(|e| cur.err_at(1, e.to_string()))
}

fn parse_keyed(cur: &mut Cursor, keys: &[&str]) -> Result<Vec<Option<(usize, f64)>>> {
    let mut vals = vec![None; keys.len()];
    while !cur.at_end() {
        let (col, key) = cur.ident()?;
        let slot = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| cur.err_at(col, format!("unknown parameter `{key}`")))?;
        if vals[slot].is_some() {
            return Err(cur.err_at(col, format!("parameter `{key}` given twice")));
        }
        cur.expect('=')?;
        vals[slot] = Some(cur.number()?);
    }
    Ok(vals)
}
