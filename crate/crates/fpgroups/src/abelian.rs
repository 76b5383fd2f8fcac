//! Abelianization via Smith normal form over arbitrary-precision integers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentation::Presentation;

/// Invariant factors of a finitely generated abelian group, `0` standing for
/// a free `Z` summand. Finite factors come first, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub factors: Vec<BigUint>,
}

impl AbelianInvariants {
    pub fn from_u64(factors: &[u64]) -> Self {
        AbelianInvariants { factors: factors.iter().map(|&f| BigUint::from(f)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Order of the torsion part times nothing else; `None` if the group is infinite.
    pub fn order(&self) -> Option<BigUint> {
        if self.rank() > 0 {
            return None;
        }
        Some(self.factors.iter().fold(BigUint::one(), |a, f| a * f))
    }

    fn from_diagonal(diag: &[BigInt], num_generators: usize) -> Self {
        let mut finite: Vec<BigUint> = Vec::new();
        let mut free = num_generators.saturating_sub(diag.len());
        for d in diag {
            let d = d.abs().to_biguint().expect("non-negative");
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                finite.push(d);
            }
        }
        finite.sort();
        finite.extend(std::iter::repeat_n(BigUint::zero(), free));
        AbelianInvariants { factors: finite }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Relator-by-generator exponent-sum matrix.
pub fn exponent_matrix(p: &Presentation) -> Vec<Vec<BigInt>> {
    p.relators
        .iter()
        .map(|r| (0..p.num_generators()).map(|g| BigInt::from(r.exponent_sum(g))).collect())
        .collect()
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let m = exponent_matrix(p);
    let diag = smith_diagonal(m, p.num_generators());
    AbelianInvariants::from_diagonal(&diag, p.num_generators())
}

/// Diagonal of the Smith normal form of a `rows × cols` matrix (length `min(rows, cols)`),
/// entries non-negative and each dividing the next (zeros last).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    for r in &a {
        assert_eq!(r.len(), cols, "ragged matrix");
    }
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // least non-zero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, k);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into row t and go again
            let p = a[t][t].clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match offending {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish(a, k)
}

fn finish(a: Vec<Vec<BigInt>>, k: usize) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = (0..k).map(|i| a[i][i].abs()).collect();
    // zeros to the end; the non-zero prefix already satisfies divisibility
    d.sort_by_key(|x| x.is_zero());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_snf() {
        let d = smith_diagonal(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn free_group_rank_one() {
        let p = Presentation::new("free", vec!["a".into()], vec![]);
        assert_eq!(abelianization(&p), AbelianInvariants::from_u64(&[0]));
    }

    #[test]
    fn zero_generators_is_trivial() {
        let p = Presentation::new("triv", vec![], vec![Word::new()]);
        assert!(abelianization(&p).is_trivial());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianInvariants::from_u64(&[2, 2]).to_string(), "[2, 2]");
        assert_eq!(AbelianInvariants::from_u64(&[]).to_string(), "[]");
    }
}
