//! Shared helpers for the line-oriented input formats.

use fpgroups::ParseError;

/// `#` opens a comment at the start of a line or after whitespace, so names
/// such as `beta#` survive.
pub(crate) fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, ch) in line.char_indices() {
        if ch == '#' && prev_space {
            return &line[..i];
        }
        prev_space = ch.is_whitespace();
    }
    line
}

/// Whitespace tokens with their 1-based column.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    line.split_whitespace()
        .map(|t| {
            let off = t.as_ptr() as usize - line.as_ptr() as usize;
            (line[..off].chars().count() + 1, t)
        })
        .collect()
}

/// Non-blank lines with comments removed: `(line number, tokens)`.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(strip_comment(l))))
        .filter(|(_, t)| !t.is_empty())
}

pub(crate) struct Cursor<'a> {
    pub line: usize,
    toks: &'a [(usize, &'a str)],
    next: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(line: usize, toks: &'a [(usize, &'a str)]) -> Self {
        Cursor { line, toks, next: 1 }
    }

    pub fn err(&self, column: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, column, msg)
    }

    fn end_column(&self) -> usize {
        self.toks.last().map(|(c, t)| c + t.chars().count()).unwrap_or(1)
    }

    pub fn take(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let t = self.toks.get(self.next).copied().ok_or_else(|| self.err(self.end_column(), format!("expected {what}")))?;
        self.next += 1;
        Ok(t)
    }

    pub fn expect(&mut self, literal: &str) -> Result<(), ParseError> {
        let (c, t) = self.take(&format!("`{literal}`"))?;
        if t != literal {
            return Err(self.err(c, format!("expected `{literal}`, found `{t}`")));
        }
        Ok(())
    }

    pub fn usize(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let (c, t) = self.take(what)?;
        let v = t.parse().map_err(|_| self.err(c, format!("expected {what}, found `{t}`")))?;
        Ok((c, v))
    }

    pub fn i64(&mut self, what: &str) -> Result<(usize, i64), ParseError> {
        let (c, t) = self.take(what)?;
        let v = t.parse().map_err(|_| self.err(c, format!("expected {what}, found `{t}`")))?;
        Ok((c, v))
    }

    /// `+` or `-`.
    pub fn sign(&mut self) -> Result<(usize, bool), ParseError> {
        let (c, t) = self.take("`+` or `-`")?;
        match t {
            "+" => Ok((c, true)),
            "-" => Ok((c, false)),
            _ => Err(self.err(c, format!("expected `+` or `-`, found `{t}`"))),
        }
    }

    /// `name:index`.
    pub fn located(&mut self, what: &str) -> Result<(usize, &'a str, usize), ParseError> {
        let (c, t) = self.take(what)?;
        let (name, idx) = t.split_once(':').ok_or_else(|| self.err(c, format!("expected {what} as `name:index`, found `{t}`")))?;
        let idx = idx.parse().map_err(|_| self.err(c, format!("bad index in `{t}`")))?;
        Ok((c, name, idx))
    }

    pub fn rest(&mut self) -> &'a [(usize, &'a str)] {
        let r = &self.toks[self.next.min(self.toks.len())..];
        self.next = self.toks.len();
        r
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.next) {
            Some(&(c, t)) => Err(self.err(c, format!("unexpected token `{t}`"))),
            None => Ok(()),
        }
    }
}

pub(crate) fn valid_id(s: &str) -> bool {
    !s.is_empty() && !s.contains([':', '#'])
}
