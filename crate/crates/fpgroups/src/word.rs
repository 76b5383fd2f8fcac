//! Words in free groups over indexed generators.

use std::fmt;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// +1 or -1.
    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Dense column index when letters are used as coset-table columns.
    pub fn column(self) -> usize {
        2 * self.gen + usize::from(self.inverse)
    }
}

/// A word, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// Builds a word from signed 1-based generator indices: `3` is g3, `-3` is g3⁻¹.
    pub fn from_signed(signed: &[i64]) -> Self {
        Word(
            signed
                .iter()
                .map(|&s| {
                    assert!(s != 0, "generator index 0 in signed word");
                    Letter::new(s.unsigned_abs() as usize - 1, s < 0)
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cancels adjacent `x x⁻¹` pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free reduction followed by cancellation across the ends.
    pub fn cyclic_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Least representative among all cyclic rotations of the word and of its inverse.
    /// Two cyclically reduced relators define the same normal closure element set
    /// up to conjugation and inversion iff their canonical forms agree.
    pub fn cyclic_canonical(&self) -> Word {
        let w = self.cyclic_reduce();
        if w.is_empty() {
            return w;
        }
        let inv = w.inverse();
        (0..w.len())
            .flat_map(|k| [w.rotate(k), inv.rotate(k)])
            .min()
            .expect("non-empty word")
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.exponent()).sum()
    }

    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replaces every occurrence of generator `gen` by `image` (inverted for `gen⁻¹`).
    pub fn substitute(&self, gen: usize, image: &Word) -> Word {
        let image_inv = image.inverse();
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if l.gen == gen {
                out.extend_from_slice(if l.inverse { &image_inv.0 } else { &image.0 });
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn map_gens(&self, f: impl Fn(usize) -> usize) -> Word {
        Word(self.0.iter().map(|l| Letter::new(f(l.gen), l.inverse)).collect())
    }

    /// Renders the word with the given generator names, `g` and `g^-1` tokens separated by spaces.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.names[l.gen])?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_cyclic_reduction() {
        let w = Word::from_signed(&[1, 2, -2, -1, 3]);
        assert_eq!(w.free_reduce(), Word::from_signed(&[3]));
        let c = Word::from_signed(&[-1, 2, 3, 1]);
        assert_eq!(c.cyclic_reduce(), Word::from_signed(&[2, 3]));
        assert!(Word::from_signed(&[1, -1]).cyclic_reduce().is_empty());
    }

    #[test]
    fn canonical_identifies_rotations_and_inverses() {
        let w = Word::from_signed(&[1, 2, -3]);
        let rot = Word::from_signed(&[-3, 1, 2]);
        let inv = Word::from_signed(&[3, -2, -1]);
        assert_eq!(w.cyclic_canonical(), rot.cyclic_canonical());
        assert_eq!(w.cyclic_canonical(), inv.cyclic_canonical());
        assert_ne!(w.cyclic_canonical(), Word::from_signed(&[1, 3, -2]).cyclic_canonical());
    }

    #[test]
    fn substitution_inverts_for_inverse_letters() {
        let w = Word::from_signed(&[1, -2]);
        let img = Word::from_signed(&[3, 3]);
        assert_eq!(w.substitute(1, &img), Word::from_signed(&[1, -3, -3]));
    }
}
