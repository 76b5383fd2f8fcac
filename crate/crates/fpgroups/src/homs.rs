//! Counting homomorphisms into small symmetric groups.

use rayon::prelude::*;

use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::tietze::tietze_simplify;
use crate::GroupError;

pub const MAX_HOM_DEGREE: usize = 5;
pub const MAX_HOM_GENERATORS: usize = 4;

/// Multiplication table of `S_k`, elements indexed in lexicographic order.
struct SymTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: u16,
    /// For each element, the least element of its conjugacy class.
    class_rep: Vec<u16>,
}

impl SymTable {
    fn new(k: usize) -> Self {
        let all = Permutation::all(k);
        let order = all.len();
        let index = |p: &Permutation| all.binary_search(p).expect("present") as u16;
        let mut mul = vec![0u16; order * order];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                mul[i * order + j] = index(&a.then(b));
            }
        }
        let inv = all.iter().map(|p| index(&p.inverse())).collect();
        let class_rep = all
            .iter()
            .map(|p| all.iter().map(|s| index(&p.conjugate_by(s))).min().expect("non-empty"))
            .collect();
        SymTable { order, mul, inv, identity: 0, class_rep }
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }
}

/// Number of homomorphisms from the presented group into `S_k`.
///
/// Presentations with more than four generators are simplified first; if they
/// still exceed the bound, or `k > 5`, a capacity error is returned.
pub fn hom_count(p: &Presentation, k: usize) -> Result<u64, GroupError> {
    if k > MAX_HOM_DEGREE {
        return Err(GroupError::Capacity(format!("hom count degree {k} exceeds {MAX_HOM_DEGREE}")));
    }
    let simplified;
    let p = if p.num_generators() > MAX_HOM_GENERATORS {
        simplified = tietze_simplify(p);
        &simplified
    } else {
        p
    };
    if p.num_generators() > MAX_HOM_GENERATORS {
        return Err(GroupError::Capacity(format!(
            "{} generators after simplification (limit {MAX_HOM_GENERATORS})",
            p.num_generators()
        )));
    }
    if k == 0 {
        return Ok(1);
    }
    let table = SymTable::new(k);
    let ng = p.num_generators();
    let rels: Vec<Vec<(usize, bool)>> = p
        .relators
        .iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_empty())
        .map(|r| r.iter().map(|l| (l.gen, l.inverse)).collect())
        .collect();
    if ng == 0 {
        return Ok(1);
    }
    // Relators become checkable once their highest generator is assigned.
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); ng];
    for (i, r) in rels.iter().enumerate() {
        let top = r.iter().map(|&(g, _)| g).max().expect("non-empty");
        checks[top].push(i);
    }
    // Homomorphisms are permuted by conjugation; fix the image of the first
    // generator to a class representative and weight by the class size.
    let mut class_size = vec![0u64; table.order];
    for &r in &table.class_rep {
        class_size[r as usize] += 1;
    }
    let reps: Vec<u16> = (0..table.order as u16).filter(|&i| table.class_rep[i as usize] == i).collect();
    let total: u64 = reps
        .par_iter()
        .map(|&r| {
            let mut assign = vec![table.identity; ng];
            assign[0] = r;
            if !relators_hold(&table, &rels, &checks[0], &assign) {
                return 0;
            }
            class_size[r as usize] * extend(&table, &rels, &checks, &mut assign, 1)
        })
        .sum();
    Ok(total)
}

fn extend(t: &SymTable, rels: &[Vec<(usize, bool)>], checks: &[Vec<usize>], assign: &mut [u16], g: usize) -> u64 {
    if g == assign.len() {
        return 1;
    }
    let mut count = 0;
    for x in 0..t.order as u16 {
        assign[g] = x;
        if relators_hold(t, rels, &checks[g], assign) {
            count += extend(t, rels, checks, assign, g + 1);
        }
    }
    count
}

fn relators_hold(t: &SymTable, rels: &[Vec<(usize, bool)>], which: &[usize], assign: &[u16]) -> bool {
    which.iter().all(|&i| {
        let v = rels[i].iter().fold(t.identity, |acc, &(g, inv)| {
            let x = assign[g];
            t.mul(acc, if inv { t.inv[x as usize] } else { x })
        });
        v == t.identity
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    #[test]
    fn free_group_counts() {
        let p = Presentation::with_numbered_gens("f2", "x", 2, vec![]);
        assert_eq!(hom_count(&p, 3).unwrap(), 36);
    }

    #[test]
    fn trivial_group_has_one_hom() {
        let p = Presentation::with_numbered_gens("t", "x", 1, vec![Word::from_signed(&[1])]);
        for k in 1..=5 {
            assert_eq!(hom_count(&p, k).unwrap(), 1);
        }
    }

    #[test]
    fn cyclic_three_into_s3() {
        // identity plus the two 3-cycles
        let p = Presentation::with_numbered_gens("z3", "x", 1, vec![Word::from_signed(&[1, 1, 1])]);
        assert_eq!(hom_count(&p, 3).unwrap(), 3);
    }

    #[test]
    fn capacity() {
        let p = Presentation::with_numbered_gens("f5", "x", 5, vec![]);
        assert!(matches!(hom_count(&p, 2), Err(GroupError::Capacity(_))));
        let q = Presentation::with_numbered_gens("f1", "x", 1, vec![]);
        assert!(matches!(hom_count(&q, 6), Err(GroupError::Capacity(_))));
    }
}
