//! Todd–Coxeter coset enumeration over the trivial subgroup, HLT strategy
//! (relator scanning from every live coset in order, no lookahead).

use std::fmt;

use crate::presentation::Presentation;
use crate::word::Word;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetResult {
    /// The table closed; the group has exactly this order.
    Finite(u64),
    /// More than `bound` cosets would have been defined.
    Exceeded(usize),
}

impl CosetResult {
    pub fn order(self) -> Option<u64> {
        match self {
            CosetResult::Finite(k) => Some(k),
            CosetResult::Exceeded(_) => None,
        }
    }
}

impl fmt::Display for CosetResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetResult::Finite(k) => write!(f, "Finite({k})"),
            CosetResult::Exceeded(b) => write!(f, "Exceeded({b})"),
        }
    }
}

struct Table {
    cols: usize,
    data: Vec<u32>,
    parent: Vec<u32>,
    defined: usize,
    max: usize,
}

struct Overflow;

impl Table {
    fn new(cols: usize, max: usize) -> Self {
        Table { cols, data: vec![UNDEF; cols], parent: vec![0], defined: 1, max }
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.data[c as usize * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.data[c as usize * self.cols + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Overflow> {
        if self.defined >= self.max {
            return Err(Overflow);
        }
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.data.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.defined += 1;
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        Ok(n)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop as usize] = keep;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex, &mut queue);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != UNDEF {
                        self.merge(e1, fx, &mut queue);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, start: u32, w: &[usize]) -> Result<(), Overflow> {
        let mut f = start;
        let mut b = start;
        let mut i = 0usize;
        let mut j = w.len();
        loop {
            while i < j {
                let t = self.get(f, w[i]);
                if t == UNDEF {
                    break;
                }
                f = t;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let t = self.get(b, w[j - 1] ^ 1);
                if t == UNDEF {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.iter().map(|l| l.column()).collect()
}

/// Enumerates the cosets of the trivial subgroup, defining at most `max_cosets` cosets in total.
pub fn todd_coxeter(p: &Presentation, max_cosets: usize) -> CosetResult {
    assert!(max_cosets >= 1, "max_cosets must be at least 1");
    let ng = p.num_generators();
    if ng == 0 {
        return CosetResult::Finite(1);
    }
    let rels: Vec<Vec<usize>> = p
        .relators
        .iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_empty())
        .map(|r| columns(&r))
        .collect();
    let mut t = Table::new(2 * ng, max_cosets);
    let mut c: u32 = 0;
    while (c as usize) < t.parent.len() {
        if t.live(c) {
            for r in &rels {
                if t.scan_and_fill(c, r).is_err() {
                    return CosetResult::Exceeded(max_cosets);
                }
                if !t.live(c) {
                    break;
                }
            }
            // close the row: every generator column must be defined
            if t.live(c) {
                for x in 0..2 * ng {
                    if t.get(c, x) == UNDEF && t.define(c, x).is_err() {
                        return CosetResult::Exceeded(max_cosets);
                    }
                }
            }
        }
        c += 1;
    }
    let live = (0..t.parent.len() as u32).filter(|&c| t.live(c)).count();
    CosetResult::Finite(live as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(ng: usize, rels: &[&[i64]]) -> Presentation {
        Presentation::with_numbered_gens("t", "x", ng, rels.iter().map(|r| Word::from_signed(r)).collect())
    }

    #[test]
    fn cyclic_groups() {
        assert_eq!(todd_coxeter(&pres(1, &[&[1]]), 10), CosetResult::Finite(1));
        assert_eq!(todd_coxeter(&pres(1, &[&[1, 1, 1, 1, 1]]), 10), CosetResult::Finite(5));
    }

    #[test]
    fn symmetric_group_s3() {
        // <a, b | a^2, b^3, (ab)^2>
        let p = pres(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]);
        assert_eq!(todd_coxeter(&p, 100), CosetResult::Finite(6));
    }

    #[test]
    fn quaternion_group() {
        // <i, j | i^4, i^2 j^-2, j^-1 i j i>
        let p = pres(2, &[&[1, 1, 1, 1], &[1, 1, -2, -2], &[-2, 1, 2, 1]]);
        assert_eq!(todd_coxeter(&p, 1000), CosetResult::Finite(8));
    }

    #[test]
    fn free_group_exceeds() {
        assert_eq!(todd_coxeter(&pres(1, &[]), 50), CosetResult::Exceeded(50));
    }

    #[test]
    fn no_generators() {
        assert_eq!(todd_coxeter(&pres(0, &[]), 1), CosetResult::Finite(1));
    }
}
