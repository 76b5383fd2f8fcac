//! Finite presentations and their line-oriented text format.
//!
//! ```text
//! # comment
//! group s3
//! gen g1 g2 g3
//! rel g3 g2^-1 g1
//! ```
//!
//! Words are whitespace-separated tokens `g` or `g^-1` (any non-zero integer
//! exponent `g^k` is accepted on input and expanded). An empty relator is
//! written `rel 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::word::{Letter, Word};
use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, generators: Vec<String>, relators: Vec<Word>) -> Self {
        let p = Presentation { name: name.into(), generators, relators };
        debug_assert!(p.check().is_ok(), "relator uses an undeclared generator");
        p
    }

    /// Generators named `prefix1 .. prefixN`.
    pub fn with_numbered_gens(name: impl Into<String>, prefix: &str, n: usize, relators: Vec<Word>) -> Self {
        let gens = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Presentation::new(name, gens, relators)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Every relator letter refers to a declared generator.
    pub fn check(&self) -> Result<(), String> {
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(g) = r.max_gen() {
                if g >= self.generators.len() {
                    return Err(format!("relator {} uses generator #{} of {}", i + 1, g, self.generators.len()));
                }
            }
        }
        Ok(())
    }

    /// Canonical relator set: cyclically reduced, rotation/inversion normalized,
    /// deduplicated, trivial relators dropped.
    pub fn relator_set(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self
            .relators
            .iter()
            .map(Word::cyclic_canonical)
            .filter(|w| !w.is_empty())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        w.display_with(&self.generators).to_string()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Presentation, ParseError> {
        let mut name: Option<String> = None;
        let mut generators: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut relators = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = strip_comment(raw);
            let mut toks = tokens(line);
            let Some((col, kw)) = toks.next() else { continue };
            match kw {
                "group" => {
                    let (c, n) = toks.next().ok_or_else(|| ParseError::new(line_no, col, "missing group name"))?;
                    if name.is_some() {
                        return Err(ParseError::new(line_no, c, "duplicate group header"));
                    }
                    name = Some(n.to_string());
                    if let Some((c, _)) = toks.next() {
                        return Err(ParseError::new(line_no, c, "trailing tokens after group name"));
                    }
                }
                "gen" => {
                    for (c, g) in toks {
                        if !valid_name(g) {
                            return Err(ParseError::new(line_no, c, format!("invalid generator name `{g}`")));
                        }
                        if index.insert(g.to_string(), generators.len()).is_some() {
                            return Err(ParseError::new(line_no, c, format!("duplicate generator `{g}`")));
                        }
                        generators.push(g.to_string());
                    }
                }
                "rel" => {
                    let rest: Vec<(usize, &str)> = toks.collect();
                    if rest.is_empty() {
                        return Err(ParseError::new(line_no, col, "empty relator; write `rel 1`"));
                    }
                    let w = parse_word(&rest, |g| index.get(g).copied()).map_err(|(c, m)| ParseError::new(line_no, c, m))?;
                    relators.push(w);
                }
                other => return Err(ParseError::new(line_no, col, format!("unknown keyword `{other}`"))),
            }
        }
        let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `group <name>` header"))?;
        Ok(Presentation { name, generators, relators })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.name)?;
        if self.generators.is_empty() {
            writeln!(f, "gen")?;
        } else {
            writeln!(f, "gen {}", self.generators.join(" "))?;
        }
        for r in &self.relators {
            writeln!(f, "rel {}", r.display_with(&self.generators))?;
        }
        Ok(())
    }
}

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
pub(crate) fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| {
        let off = t.as_ptr() as usize - line.as_ptr() as usize;
        (line[..off].chars().count() + 1, t)
    })
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s != "1" && !s.contains('^') && !s.starts_with('#')
}

/// Parses word tokens (`g`, `g^-1`, `g^k`, or the lone token `1`).
/// On failure returns the offending column and a message.
pub fn parse_word<F>(toks: &[(usize, &str)], lookup: F) -> Result<Word, (usize, String)>
where
    F: Fn(&str) -> Option<usize>,
{
    let mut w = Word::new();
    if toks.len() == 1 && toks[0].1 == "1" {
        return Ok(w);
    }
    for &(col, tok) in toks {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| (col, format!("bad exponent in `{tok}`")))?;
                if e == 0 {
                    return Err((col, format!("zero exponent in `{tok}`")));
                }
                (n, e)
            }
            None => (tok, 1),
        };
        let g = lookup(name).ok_or_else(|| (col, format!("unknown generator `{name}`")))?;
        for _ in 0..exp.unsigned_abs() {
            w.push(Letter::new(g, exp < 0));
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "# trefoil\ngroup trefoil\ngen m c\nrel m c m c^-1 m c^-1\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.generators, vec!["m", "c"]);
        assert_eq!(p.relators[0], Word::from_signed(&[1, 2, 1, -2, 1, -2]));
        assert_eq!(p.to_text(), text.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
    }

    #[test]
    fn exponents_expand() {
        let p = Presentation::parse("group g\ngen a b\nrel a^3 b^-2\nrel 1\n").unwrap();
        assert_eq!(p.relators[0], Word::from_signed(&[1, 1, 1, -2, -2]));
        assert!(p.relators[1].is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        let e = Presentation::parse("group g\ngen a\nrel a b\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        let e = Presentation::parse("gen a\n").unwrap_err();
        assert!(e.message.contains("header"));
        let e = Presentation::parse("group g\ngen a a\n").unwrap_err();
        assert_eq!(e.column, 7);
    }
}
