//! Permutation representations of the knot group.
//!
//! Words act on points from the right: the image of `i` under `u v` is the
//! image under `v` of the image under `u`.

use std::collections::BTreeSet;

use fpgroups::{PermError, Permutation, Word};
use rayon::prelude::*;
use thiserror::Error;

use crate::fan::Fan;

pub const DEFAULT_MAX_DEGREE: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonodromyRep {
    pub n: usize,
    /// `(generator, image)` pairs.
    pub images: Vec<(String, Permutation)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("no image given for generator `{0}`")]
    MissingGenerator(String),
    #[error("image of `{name}` has degree {found}, expected {expected}")]
    DegreeMismatch { name: String, expected: usize, found: usize },
    #[error("degree {n} exceeds the enumeration bound {bound}")]
    DegreeTooLarge { n: usize, bound: usize },
    #[error("generator `{name}`: {source}")]
    Perm { name: String, source: PermError },
    #[error("representation rejected: {0}")]
    Rejected(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RepReport {
    pub relations_ok: bool,
    pub transitive: bool,
    /// Abelian image.
    pub cyclic: bool,
    /// The meridian acts as an n-cycle.
    pub locally_cyclic: bool,
    /// Every non-identity element of the image acts without fixed points.
    pub regular: bool,
}

impl RepReport {
    pub fn accepted(&self) -> bool {
        self.relations_ok && self.transitive
    }

    pub fn rejection(&self) -> Option<String> {
        match (self.relations_ok, self.transitive) {
            (true, true) => None,
            (false, true) => Some("relation words do not map to the identity".into()),
            (true, false) => Some("image is not transitive".into()),
            (false, false) => Some("relations fail and image is not transitive".into()),
        }
    }
}

impl MonodromyRep {
    pub fn new(n: usize, images: Vec<(String, Permutation)>) -> Self {
        MonodromyRep { n, images }
    }

    /// Parses cycle notation for each generator at degree `n`.
    pub fn parse(n: usize, images: &[(&str, &str)]) -> Result<Self, MonodromyError> {
        let images = images
            .iter()
            .map(|&(g, t)| {
                Permutation::parse(t, n)
                    .map(|p| (g.to_string(), p))
                    .map_err(|source| MonodromyError::Perm { name: g.to_string(), source })
            })
            .collect::<Result<_, _>>()?;
        Ok(MonodromyRep { n, images })
    }

    pub fn trivial(fan: &Fan) -> Self {
        MonodromyRep { n: 1, images: fan.generators().into_iter().map(|g| (g, Permutation::identity(1))).collect() }
    }

    pub fn get(&self, name: &str) -> Option<&Permutation> {
        self.images.iter().find(|(g, _)| g == name).map(|(_, p)| p)
    }

    /// Images in the fan's generator order.
    pub fn for_fan(&self, fan: &Fan) -> Result<Vec<Permutation>, MonodromyError> {
        fan.generators()
            .into_iter()
            .map(|g| {
                let p = self.get(&g).ok_or_else(|| MonodromyError::MissingGenerator(g.clone()))?;
                if p.degree() != self.n {
                    return Err(MonodromyError::DegreeMismatch { name: g, expected: self.n, found: p.degree() });
                }
                Ok(p.clone())
            })
            .collect()
    }

    pub fn conjugate_by(&self, sigma: &Permutation) -> Self {
        MonodromyRep { n: self.n, images: self.images.iter().map(|(g, p)| (g.clone(), p.conjugate_by(sigma))).collect() }
    }

    pub fn describe(&self) -> String {
        self.images.iter().map(|(g, p)| format!("{g}={p}")).collect::<Vec<_>>().join(" ")
    }
}

pub fn eval_word(w: &Word, images: &[Permutation], n: usize) -> Permutation {
    w.iter().fold(Permutation::identity(n), |acc, l| {
        let p = &images[l.gen];
        if l.inverse {
            acc.then(&p.inverse())
        } else {
            acc.then(p)
        }
    })
}

fn is_transitive(images: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for p in images {
            let j = p.apply(i);
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Elements of the generated group, or `None` once more than `cap` are found.
fn closure(images: &[Permutation], n: usize, cap: usize) -> Option<Vec<Permutation>> {
    let mut elems = vec![Permutation::identity(n)];
    let mut seen: BTreeSet<Permutation> = elems.iter().cloned().collect();
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i].clone();
        i += 1;
        for g in images {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                elems.push(y);
            }
        }
    }
    Some(elems)
}

fn classify(relations: &[Word], images: &[Permutation], n: usize) -> RepReport {
    let id = Permutation::identity(n);
    let relations_ok = relations.iter().all(|w| eval_word(w, images, n) == id);
    let transitive = is_transitive(images, n);
    let cyclic = images.iter().enumerate().all(|(i, a)| images[i + 1..].iter().all(|b| a.then(b) == b.then(a)));
    let locally_cyclic = images.first().is_some_and(|m| m.is_full_cycle());
    // a group acting freely has at most n elements
    let regular = match closure(images, n, n) {
        Some(g) => g.iter().all(|p| p.is_identity() || p.fixed_points() == 0),
        None => false,
    };
    RepReport { relations_ok, transitive, cyclic, locally_cyclic, regular }
}

pub fn validate_rep(fan: &Fan, rep: &MonodromyRep) -> Result<RepReport, MonodromyError> {
    let images = rep.for_fan(fan)?;
    Ok(classify(&fan.relations, &images, rep.n))
}

/// Lexicographically least image tuple under simultaneous conjugation.
pub fn canonical_conjugate(images: &[Permutation], n: usize) -> Vec<Permutation> {
    Permutation::all(n)
        .iter()
        .map(|s| images.iter().map(|p| p.conjugate_by(s)).collect::<Vec<_>>())
        .min()
        .unwrap_or_else(|| images.to_vec())
}

pub fn enumerate_reps(fan: &Fan, n: usize, up_to_conjugacy: bool) -> Result<Vec<(MonodromyRep, RepReport)>, MonodromyError> {
    enumerate_reps_bounded(fan, n, up_to_conjugacy, DEFAULT_MAX_DEGREE)
}

/// All transitive representations satisfying the fan relations, sorted by image tuple.
pub fn enumerate_reps_bounded(
    fan: &Fan,
    n: usize,
    up_to_conjugacy: bool,
    max_degree: usize,
) -> Result<Vec<(MonodromyRep, RepReport)>, MonodromyError> {
    if n > max_degree {
        return Err(MonodromyError::DegreeTooLarge { n, bound: max_degree });
    }
    let gens = fan.generators();
    let all = Permutation::all(n);
    let g = gens.len();
    let id = Permutation::identity(n);
    let found: BTreeSet<Vec<Permutation>> = all
        .par_iter()
        .map(|first| {
            let mut out = BTreeSet::new();
            let mut idx = vec![0usize; g - 1];
            loop {
                let mut images = Vec::with_capacity(g);
                images.push(first.clone());
                images.extend(idx.iter().map(|&i| all[i].clone()));
                if fan.relations.iter().all(|w| eval_word(w, &images, n) == id) && is_transitive(&images, n) {
                    out.insert(if up_to_conjugacy { canonical_conjugate(&images, n) } else { images });
                }
                // odometer over the remaining generators
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < all.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            out
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found
        .into_iter()
        .map(|images| {
            let report = classify(&fan.relations, &images, n);
            (MonodromyRep::new(n, gens.iter().cloned().zip(images).collect()), report)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::banchoff_fan;

    fn rep(n: usize, m: &str, c: &str) -> MonodromyRep {
        MonodromyRep::parse(n, &[("m", m), ("c", c)]).unwrap()
    }

    #[test]
    fn two_sheeted() {
        let r = validate_rep(&banchoff_fan(), &rep(2, "(1 2)", "(1 2)")).unwrap();
        assert_eq!(
            r,
            RepReport { relations_ok: true, transitive: true, cyclic: true, locally_cyclic: true, regular: true }
        );
    }

    #[test]
    fn locally_cyclic_four() {
        let r = validate_rep(&banchoff_fan(), &rep(4, "(1 2 3 4)", "(1 2)")).unwrap();
        assert!(r.relations_ok && r.transitive && r.locally_cyclic && !r.cyclic);
    }

    #[test]
    fn irregular_three() {
        let r = validate_rep(&banchoff_fan(), &rep(3, "(1 2)", "(2 3)")).unwrap();
        assert!(r.relations_ok && r.transitive && !r.locally_cyclic && !r.regular);
    }

    #[test]
    fn missing_generator() {
        let r = MonodromyRep::parse(2, &[("m", "(1 2)")]).unwrap();
        assert_eq!(validate_rep(&banchoff_fan(), &r), Err(MonodromyError::MissingGenerator("c".into())));
    }

    #[test]
    fn out_of_range_entry() {
        assert!(matches!(
            MonodromyRep::parse(4, &[("m", "(1 5)")]),
            Err(MonodromyError::Perm { source: PermError::OutOfRange { entry: 5, degree: 4 }, .. })
        ));
    }

    #[test]
    fn degree_bound() {
        assert_eq!(
            enumerate_reps_bounded(&banchoff_fan(), 8, true, 7),
            Err(MonodromyError::DegreeTooLarge { n: 8, bound: 7 })
        );
    }
}
