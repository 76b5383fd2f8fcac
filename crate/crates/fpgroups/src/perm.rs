//! Permutations of `{1..n}`, acting on the right.
//!
//! Points are stored 0-based; the text form is 1-based disjoint-cycle notation.
//! Products follow the right action: `p.then(q)` sends `i` to `q(p(i))`, so
//! the word `u v` acts as "first u, then v".

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("cannot parse permutation at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("entry {entry} out of range for degree {degree}")]
    OutOfRange { entry: usize, degree: usize },
    #[error("entry {0} repeated")]
    RepeatedEntry(usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// From 0-based images. Panics if `images` is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            assert!((i as usize) < n && !seen[i as usize], "not a bijection: {images:?}");
            seen[i as usize] = true;
        }
        Permutation { images }
    }

    /// From 1-based cycles, e.g. `&[&[1, 2, 3], &[4, 5]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(PermError::OutOfRange { entry: x, degree: n });
                }
                if used[x - 1] {
                    return Err(PermError::RepeatedEntry(x));
                }
                used[x - 1] = true;
                let y = cyc[(k + 1) % cyc.len()];
                images[x - 1] = (y - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Disjoint-cycle notation, 1-based: `"(1 2 3)(4 5)"`, `"()"` for the identity.
    /// Commas between entries are accepted.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        let cycles = parse_cycles(text)?;
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(n, &refs)
    }

    /// Largest point mentioned in a cycle string; used to infer the degree.
    pub fn max_entry(text: &str) -> Result<usize, PermError> {
        Ok(parse_cycles(text)?.iter().flatten().copied().max().unwrap_or(0))
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    /// `σ⁻¹ p σ`, i.e. the relabeling of points by `σ`.
    pub fn conjugate_by(&self, sigma: &Permutation) -> Permutation {
        sigma.inverse().then(self).then(sigma)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i as u32 == x).count()
    }

    /// All cycles (including fixed points) as 0-based point lists, each starting
    /// at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// A single cycle through all `n` points.
    pub fn is_full_cycle(&self) -> bool {
        self.degree() > 0 && self.cycles().len() == 1
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// All permutations of degree `n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u32> = (0..n as u32).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let err = |column: usize, message: &str| PermError::Parse { column, message: message.to_string() };
    let mut cycles = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut number = String::new();
    let mut number_col = 0;
    let chars: Vec<char> = text.chars().collect();
    let flush = |number: &mut String, current: &mut Option<Vec<usize>>, col: usize| -> Result<(), PermError> {
        if number.is_empty() {
            return Ok(());
        }
        let v: usize = number.parse().map_err(|_| err(col, "bad number"))?;
        number.clear();
        match current {
            Some(c) => {
                c.push(v);
                Ok(())
            }
            None => Err(err(col, "number outside parentheses")),
        }
    };
    for (i, &ch) in chars.iter().enumerate() {
        let col = i + 1;
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(err(col, "nested parenthesis"));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut number, &mut current, number_col)?;
                match current.take() {
                    Some(c) => {
                        if !c.is_empty() {
                            cycles.push(c);
                        }
                    }
                    None => return Err(err(col, "unmatched `)`")),
                }
            }
            '0'..='9' => {
                if number.is_empty() {
                    number_col = col;
                }
                number.push(ch);
            }
            ',' | ' ' | '\t' => flush(&mut number, &mut current, number_col)?,
            _ => return Err(err(col, &format!("unexpected character `{ch}`"))),
        }
    }
    if current.is_some() {
        return Err(err(chars.len() + 1, "unclosed `(`"));
    }
    if cycles.is_empty() && !text.contains('(') {
        return Err(err(1, "expected disjoint-cycle notation such as `(1 2)` or `()`"));
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}
